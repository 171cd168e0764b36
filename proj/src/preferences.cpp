#include "capgen/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

namespace capgen {

void PreferenceSystem::validate() const {
    check_ground_size(n);
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    for (const auto& a : alternatives) {
        if (a.n() != n) throw std::invalid_argument("alternative has wrong number of criteria");
    }
    const int count = static_cast<int>(alternatives.size());
    auto check = [&](const std::pair<int, int>& p) {
        if (p.first < 0 || p.first >= count || p.second < 0 || p.second >= count) {
            throw std::invalid_argument("preference refers to a missing alternative");
        }
    };
    std::set<std::pair<int, int>> strict_set;
    for (const auto& p : strict) {
        check(p);
        strict_set.insert(p);
    }
    for (const auto& p : indifferent) {
        check(p);
        if (strict_set.count(p) || strict_set.count({p.second, p.first})) {
            throw std::invalid_argument("pair is both strict and indifferent");
        }
    }
}

PreferenceSystem PreferenceSystem::binary(int n, const std::vector<std::pair<Mask, Mask>>& better_worse,
                                          double epsilon) {
    PreferenceSystem p;
    p.n = n;
    p.epsilon = epsilon;
    auto index_of = [&](Mask b) {
        auto alt = Alternative::binary(n, b);
        for (std::size_t i = 0; i < p.alternatives.size(); ++i) {
            if (std::equal(p.alternatives[i].scores().begin(), p.alternatives[i].scores().end(), alt.scores().begin())) {
                return static_cast<int>(i);
            }
        }
        p.alternatives.push_back(alt);
        return static_cast<int>(p.alternatives.size() - 1);
    };
    for (const auto& [better, worse] : better_worse) {
        int a = index_of(better);
        int b = index_of(worse);
        p.strict.emplace_back(a, b);
    }
    p.validate();
    return p;
}

bool satisfies_SR(const Capacity& mu, const PreferenceSystem& prefs) {
    if (mu.n() != prefs.n) throw std::invalid_argument("satisfies_SR: dimension mismatch");
    std::vector<double> value(prefs.alternatives.size());
    for (std::size_t i = 0; i < value.size(); ++i) value[i] = choquet(mu, prefs.alternatives[i]);
    for (const auto& [a, b] : prefs.strict) {
        if (!(value[a] >= value[b] + prefs.epsilon)) return false;
    }
    for (const auto& [a, b] : prefs.indifferent) {
        if (std::abs(value[a] - value[b]) > kIndifferenceTol) return false;
    }
    return true;
}

ConstraintSystem::ConstraintSystem(int n)
    : n_(n), order_(n), single_(lattice_size(n), Interval{0.0, 1.0}),
      pair_(lattice_size(n) * lattice_size(n), Interval{-1.0, 1.0}) {}

void ConstraintSystem::set_single(Mask s, Interval v) {
    if (s == 0 || s >= full_mask(n_)) throw std::invalid_argument("constraint on a non-free subset");
    single_[s] = v;
}

Interval ConstraintSystem::pair(Mask a, Mask b) const {
    if (order_.ord(a) < order_.ord(b)) return pair_[key(a, b)];
    Interval v = pair_[key(b, a)];
    return {-v.hi, -v.lo};
}

void ConstraintSystem::set_pair(Mask a, Mask b, Interval v) {
    if (a == b || a == 0 || b == 0 || a >= full_mask(n_) || b >= full_mask(n_)) {
        throw std::invalid_argument("pair constraint needs two distinct free subsets");
    }
    if (order_.ord(a) < order_.ord(b)) pair_[key(a, b)] = v;
    else pair_[key(b, a)] = {-v.hi, -v.lo};
}

void ConstraintSystem::tighten_pair(Mask a, Mask b, Interval v) {
    Interval cur = pair(a, b);
    set_pair(a, b, {std::max(cur.lo, v.lo), std::min(cur.hi, v.hi)});
}

std::vector<Mask> ConstraintSystem::fixed() const {
    std::vector<Mask> out;
    for (Mask s : order_.free_subsets()) {
        if (single_[s].lo == single_[s].hi) out.push_back(s);
    }
    return out;
}

bool ConstraintSystem::vacuous() const {
    auto subsets = order_.free_subsets();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        Interval s = single_[subsets[i]];
        if (s.lo > 0.0 || s.hi < 1.0) return false;
        for (std::size_t j = i + 1; j < subsets.size(); ++j) {
            Interval p = pair_[key(subsets[i], subsets[j])];
            if (p.lo > -1.0 || p.hi < 1.0) return false;
        }
    }
    return true;
}

namespace {

// Absorbs the rounding of mu(a) - mu(b) against bounds computed as b's
// value shifted by a constant.
constexpr double kBoundSlack = 1e-12;

}  // namespace

bool satisfies_SC(const Capacity& mu, const ConstraintSystem& sc) {
    if (mu.n() != sc.n()) throw std::invalid_argument("satisfies_SC: dimension mismatch");
    auto subsets = sc.order().free_subsets();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        Mask a = subsets[i];
        Interval s = sc.single(a);
        if (mu[a] < s.lo || mu[a] > s.hi) return false;
        for (std::size_t j = i + 1; j < subsets.size(); ++j) {
            Mask b = subsets[j];
            Interval p = sc.pair(a, b);
            double d = mu[a] - mu[b];
            if (d < p.lo - kBoundSlack || d > p.hi + kBoundSlack) return false;
        }
    }
    return true;
}

lp::LinearProgram preference_lp(const PreferenceSystem& prefs) {
    prefs.validate();
    const int n = prefs.n;
    CardLexOrder order(n);
    auto subsets = order.free_subsets();
    const std::size_t m = subsets.size();
    auto var = [&](Mask s) { return static_cast<std::size_t>(order.ord(s) - 1); };

    lp::LinearProgram prog(m);
    prog.upper.assign(m, 1.0);

    std::vector<ChoquetForm> forms;
    forms.reserve(prefs.alternatives.size());
    for (const auto& a : prefs.alternatives) forms.push_back(choquet_form(a));
    auto difference_row = [&](int a, int b) {
        std::vector<double> coef(m, 0.0);
        for (Mask s : subsets) coef[var(s)] = forms[a].coef[s] - forms[b].coef[s];
        return std::make_pair(coef, forms[a].constant - forms[b].constant);
    };
    for (const auto& [a, b] : prefs.strict) {
        auto [coef, shift] = difference_row(a, b);
        prog.constraints.push_back({std::move(coef), lp::Relation::GreaterEqual, prefs.epsilon - shift});
    }
    for (const auto& [a, b] : prefs.indifferent) {
        auto [coef, shift] = difference_row(a, b);
        prog.constraints.push_back({std::move(coef), lp::Relation::Equal, -shift});
    }
    for (Mask s : subsets) {
        for (int i = 0; i < n; ++i) {
            Mask t = s | (Mask{1} << i);
            if (t == s || t == full_mask(n)) continue;
            std::vector<double> coef(m, 0.0);
            coef[var(t)] = 1.0;
            coef[var(s)] = -1.0;
            prog.constraints.push_back({std::move(coef), lp::Relation::GreaterEqual, 0.0});
        }
    }
    return prog;
}

namespace {

// LP optima within this distance of zero are reported as zero so that
// sign-based order relations read exact ties correctly.
constexpr double kSnap = 1e-10;

double snap(double v) { return std::abs(v) < kSnap ? 0.0 : v; }

}  // namespace

ConstraintSystem derive_SC(const PreferenceSystem& prefs, DeriveReport* report) {
    auto base = preference_lp(prefs);
    const int n = prefs.n;
    ConstraintSystem sc(n);
    auto subsets = sc.order().free_subsets();
    const std::size_t m = subsets.size();
    DeriveReport local;

    auto optimize = [&](const std::vector<double>& objective, lp::Sense sense) {
        auto prog = base;
        prog.objective = objective;
        prog.sense = sense;
        auto sol = lp::solve(prog);
        ++local.lps_solved;
        if (sol.status == lp::Status::Infeasible) {
            throw InfeasiblePreferences("preference system admits no capacity");
        }
        if (sol.status != lp::Status::Optimal) throw std::logic_error("bounded LP reported unbounded");
        local.worst_residual = std::max(local.worst_residual, sol.max_residual);
        local.worst_duality_gap = std::max(local.worst_duality_gap, sol.duality_gap);
        return snap(sol.value);
    };

    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> obj(m, 0.0);
        obj[i] = 1.0;
        double lo = optimize(obj, lp::Sense::Minimize);
        double hi = optimize(obj, lp::Sense::Maximize);
        sc.set_single(subsets[i], {lo, hi});
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            std::vector<double> obj(m, 0.0);
            obj[i] = 1.0;
            obj[j] = -1.0;
            double lo = optimize(obj, lp::Sense::Minimize);
            double hi = optimize(obj, lp::Sense::Maximize);
            sc.set_pair(subsets[i], subsets[j], {lo, hi});
        }
    }
    if (report) *report = local;
    return sc;
}

void write_preferences_json(std::ostream& out, const PreferenceSystem& prefs) {
    nlohmann::ordered_json j;
    j["n"] = prefs.n;
    nlohmann::ordered_json alts = nlohmann::ordered_json::array();
    for (const auto& a : prefs.alternatives) alts.push_back(std::vector<double>(a.scores().begin(), a.scores().end()));
    j["alternatives"] = alts;
    auto pairs = [](const std::vector<std::pair<int, int>>& v) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [a, b] : v) arr.push_back({a, b});
        return arr;
    };
    j["strict"] = pairs(prefs.strict);
    j["indifferent"] = pairs(prefs.indifferent);
    j["epsilon"] = prefs.epsilon;
    out << j.dump(2) << '\n';
}

PreferenceSystem read_preferences_json(std::istream& in) {
    PreferenceSystem p;
    try {
        auto j = nlohmann::json::parse(in);
        p.n = j.at("n").get<int>();
        for (const auto& a : j.at("alternatives")) p.alternatives.emplace_back(a.get<std::vector<double>>());
        auto pairs = [&](const char* key) {
            std::vector<std::pair<int, int>> v;
            if (!j.contains(key)) return v;
            for (const auto& e : j.at(key)) v.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            return v;
        };
        p.strict = pairs("strict");
        p.indifferent = pairs("indifferent");
        p.epsilon = j.value("epsilon", kDefaultEpsilon);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("preference file: ") + e.what());
    }
    p.validate();
    return p;
}

void write_constraints_json(std::ostream& out, const ConstraintSystem& sc) {
    nlohmann::ordered_json j;
    j["n"] = sc.n();
    nlohmann::ordered_json single = nlohmann::ordered_json::object();
    nlohmann::ordered_json pair = nlohmann::ordered_json::object();
    auto subsets = sc.order().free_subsets();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        Interval s = sc.single(subsets[i]);
        single[std::to_string(subsets[i])] = {s.lo, s.hi};
        for (std::size_t k = i + 1; k < subsets.size(); ++k) {
            Interval p = sc.pair(subsets[i], subsets[k]);
            pair[std::to_string(subsets[i]) + "," + std::to_string(subsets[k])] = {p.lo, p.hi};
        }
    }
    j["single"] = single;
    j["pair"] = pair;
    j["fixed"] = sc.fixed();
    out << j.dump(2) << '\n';
}

ConstraintSystem read_constraints_json(std::istream& in) {
    try {
        auto j = nlohmann::json::parse(in);
        ConstraintSystem sc(j.at("n").get<int>());
        const Mask full = full_mask(sc.n());
        auto parse_mask = [&](const std::string& s) {
            std::size_t used = 0;
            unsigned long v = std::stoul(s, &used);
            if (used != s.size() || v == 0 || v >= full) throw std::runtime_error("bad subset mask '" + s + "'");
            return static_cast<Mask>(v);
        };
        auto interval = [](const nlohmann::json& v) {
            Interval iv{v.at(0).get<double>(), v.at(1).get<double>()};
            if (iv.lo > iv.hi) throw std::runtime_error("interval with lo > hi");
            return iv;
        };
        if (j.contains("single")) {
            for (const auto& [k, v] : j.at("single").items()) sc.set_single(parse_mask(k), interval(v));
        }
        if (j.contains("pair")) {
            for (const auto& [k, v] : j.at("pair").items()) {
                auto comma = k.find(',');
                if (comma == std::string::npos) throw std::runtime_error("bad pair key '" + k + "'");
                sc.set_pair(parse_mask(k.substr(0, comma)), parse_mask(k.substr(comma + 1)), interval(v));
            }
        }
        return sc;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("constraint file: ") + e.what());
    }
}

}  // namespace capgen
