// capgen: command-line front end for the capacity generators.
//
// Exit status: 0 success, 1 usage error, 2 infeasible or empty result,
// 3 I/O error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "capgen/capacity.hpp"
#include "capgen/constrained.hpp"
#include "capgen/eval.hpp"
#include "capgen/linear_extensions.hpp"
#include "capgen/markov.hpp"
#include "capgen/node_generators.hpp"
#include "capgen/parallel.hpp"
#include "capgen/preferences.hpp"

using namespace capgen;

namespace {

enum Exit { kOk = 0, kUsage = 1, kEmpty = 2, kIo = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyResult : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    int n = 4;
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out, table, constraints, prefs, ref, in, method = "ecg";
    bool filter = false;
    int bins = kDefaultBins;
    std::uint64_t samples = 1000000;
    std::uint64_t burn_in = 0, thinning = 0;
    std::optional<double> epsilon;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return f;
}

// Parse failures inside an input file are I/O errors.
template <class F>
auto read_file(const std::string& path, F reader) {
    auto f = open_in(path);
    try {
        return reader(f);
    } catch (const std::runtime_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

void emit(const Options& o, const std::function<void(std::ostream&)>& write) {
    if (o.out.empty() || o.out == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + o.out + "' for writing");
    write(f);
    if (!f) throw IoError("write to '" + o.out + "' failed");
}

void emit_caps(const Options& o, int n, const std::vector<Capacity>& caps) {
    emit(o, [&](std::ostream& s) { write_capacity_csv(s, n, caps); });
}

RankProbabilityTable load_table(const Options& o) {
    if (o.table.empty()) {
        if (o.n > kMaxEnumerationSize) throw UsageError("--table is required for n > 4");
        return exact_rank_table(o.n);
    }
    auto t = read_file(o.table, [](std::istream& s) { return read_rank_table_json(s); });
    if (t.n() != o.n) throw UsageError("table was built for n = " + std::to_string(t.n()));
    return t;
}

std::optional<ConstraintSystem> load_constraints(const Options& o) {
    if (o.constraints.empty()) return std::nullopt;
    auto sc = read_file(o.constraints, [](std::istream& s) { return read_constraints_json(s); });
    if (sc.n() != o.n) throw UsageError("constraint file is for n = " + std::to_string(sc.n()));
    return sc;
}

std::optional<PreferenceSystem> load_prefs(const Options& o) {
    if (o.prefs.empty()) return std::nullopt;
    auto p = read_file(o.prefs, [](std::istream& s) { return read_preferences_json(s); });
    if (o.epsilon) p.epsilon = *o.epsilon;
    p.validate();
    return p;
}

ChainParams chain_params(const Options& o) { return {o.burn_in, o.thinning}; }

// Builds the per-worker job for `method`, with constraint handling folded in.
BatchJob make_job(const Options& o, const std::optional<ConstraintSystem>& sc) {
    const int n = o.n;
    if (o.method == "ecg") {
        if (n > kMaxEnumerationSize) throw UsageError("ecg needs n <= 4 (extensions are enumerated)");
        std::vector<DominancePair> pairs;
        if (sc) pairs = dominance_pairs(*sc);
        auto exts = std::make_shared<std::vector<LinearExtension>>(revised_enumerate(n, pairs));
        if (exts->empty()) throw EmptyResult("the order constraints admit no linear extension");
        return [n, exts](std::size_t k, Rng& rng) { return revised_ecg_sample(n, *exts, k, rng); };
    }
    if (o.method == "rng") return [n](std::size_t k, Rng& rng) { return rng_generate(n, k, rng); };
    if (o.method == "markov") {
        ChainParams p = chain_params(o);
        return [n, p](std::size_t k, Rng& rng) { return markov_generate(n, k, p, rng); };
    }
    if (o.method == "irng") {
        auto table = std::make_shared<RankProbabilityTable>(load_table(o));
        if (sc) {
            auto c = std::make_shared<ConstraintSystem>(*sc);
            return [n, table, c](std::size_t k, Rng& rng) { return revised_irng_generate(n, k, *table, *c, rng); };
        }
        return [n, table](std::size_t k, Rng& rng) { return irng_generate(n, k, *table, rng); };
    }
    throw UsageError("unknown method '" + o.method + "' (ecg, irng, rng, markov)");
}

struct Collected {
    std::vector<Capacity> caps;
    std::uint64_t drawn = 0;
};

// Draws rounds of generate_batch until `count` capacities pass the checks.
// Round r uses master seed derive_seed(seed, r), so the output depends only
// on (seed, threads).
Collected collect(const Options& o, const BatchJob& job, const std::optional<ConstraintSystem>& sc,
                  const std::optional<PreferenceSystem>& prefs) {
    Collected out;
    bool check_sc = sc && (o.method == "rng" || o.method == "markov" || o.method == "ecg");
    bool check_sr = prefs && o.filter;
    if (!check_sc && !check_sr) {
        out.caps = generate_batch(o.count, o.threads, o.seed, job);
        out.drawn = out.caps.size();
        return out;
    }
    const std::uint64_t limit = std::max<std::uint64_t>(1000000, 1000 * o.count);
    for (std::uint64_t round = 0; out.caps.size() < o.count; ++round) {
        if (out.drawn >= limit) {
            throw EmptyResult("only " + std::to_string(out.caps.size()) + " of " + std::to_string(o.count) +
                              " capacities passed after " + std::to_string(out.drawn) + " draws");
        }
        std::size_t batch = std::max<std::size_t>(o.count, 256);
        auto caps = generate_batch(batch, o.threads, derive_seed(o.seed, round), job);
        out.drawn += caps.size();
        for (auto& c : caps) {
            if (out.caps.size() == o.count) break;
            if (check_sc && !satisfies_SC(c, *sc)) continue;
            if (check_sr && !satisfies_SR(c, *prefs)) continue;
            out.caps.push_back(std::move(c));
        }
    }
    return out;
}

int cmd_enum(const Options& o) {
    if (o.n > kMaxEnumerationSize) throw UsageError("enumeration is capped at n <= 4 (n = 5 has too many extensions)");
    check_ground_size(o.n);
    if (o.out.empty()) {
        std::cout << count_linear_extensions(o.n) << '\n';
        return kOk;
    }
    auto exts = enumerate_linear_extensions(o.n);
    emit(o, [&](std::ostream& s) { write_extensions_jsonl(s, exts); });
    std::cerr << exts.size() << " linear extensions\n";
    return kOk;
}

int cmd_generate(Options o, const std::string& method) {
    check_ground_size(o.n);
    o.method = method;
    auto job = make_job(o, std::nullopt);
    emit_caps(o, o.n, generate_batch(o.count, o.threads, o.seed, job));
    return kOk;
}

int cmd_rank_table(const Options& o) {
    check_ground_size(o.n);
    if (o.samples == 0) throw UsageError("--samples must be positive");
    Rng rng(o.seed);
    auto t = estimate_rank_table(o.n, chain_params(o), o.samples, rng);
    emit(o, [&](std::ostream& s) { write_rank_table_json(s, t); });
    return kOk;
}

int cmd_exact_table(const Options& o) {
    auto t = exact_rank_table(o.n);
    emit(o, [&](std::ostream& s) { write_rank_table_json(s, t); });
    return kOk;
}

int cmd_derive(const Options& o) {
    auto prefs = load_prefs(o);
    if (!prefs) throw UsageError("--prefs is required");
    DeriveReport rep;
    auto sc = derive_SC(*prefs, &rep);
    emit(o, [&](std::ostream& s) { write_constraints_json(s, sc); });
    std::cerr << rep.lps_solved << " linear programs, worst residual " << rep.worst_residual << ", worst duality gap "
              << rep.worst_duality_gap << '\n';
    return kOk;
}

int cmd_gen(const Options& o) {
    check_ground_size(o.n);
    if (o.filter && o.prefs.empty()) throw UsageError("--filter needs --prefs");
    auto sc = load_constraints(o);
    auto prefs = load_prefs(o);
    if (prefs && prefs->n != o.n) throw UsageError("preference file is for a different n");
    auto job = make_job(o, sc);
    auto got = collect(o, job, sc, prefs);
    emit_caps(o, o.n, got.caps);
    if (got.drawn != got.caps.size()) {
        std::fprintf(stderr, "accepted %zu of %llu drawn (rate %.4f)\n", got.caps.size(),
                     static_cast<unsigned long long>(got.drawn),
                     static_cast<double>(got.caps.size()) / static_cast<double>(got.drawn));
    }
    return kOk;
}

int cmd_kl(const Options& o) {
    if (o.ref.empty() || o.in.empty()) throw UsageError("--ref and --in are required");
    auto reader = [](std::istream& s) { return read_capacity_csv(s); };
    auto ref = read_file(o.ref, reader);
    auto in = read_file(o.in, reader);
    if (ref.empty() || in.empty()) throw EmptyResult("a capacity file has no rows");
    auto rep = kl_report(in, ref, o.bins);
    emit(o, [&](std::ostream& s) { write_kl_report_json(s, rep); });
    return kOk;
}

int cmd_bench(Options o) {
    check_ground_size(o.n);
    auto sc = load_constraints(o);
    auto job = make_job(o, sc);
    auto r = bench([&] { generate_batch(o.count, o.threads, o.seed, job); }, o.count);
    nlohmann::ordered_json j;
    j["method"] = o.method + (sc ? "+constraints" : "");
    j["n"] = o.n;
    j["count"] = o.count;
    j["threads"] = o.threads;
    j["median_seconds"] = r.median_seconds;
    j["per_capacity_seconds"] = r.per_item_seconds;
    j["runs"] = r.runs;
    emit(o, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
    return kOk;
}

int cmd_accept_rate(Options o) {
    auto prefs = load_prefs(o);
    if (!prefs) throw UsageError("--prefs is required");
    o.n = prefs->n;
    auto sc = load_constraints(o);
    std::vector<Capacity> caps;
    if (!o.in.empty()) {
        caps = read_file(o.in, [](std::istream& s) { return read_capacity_csv(s); });
    } else {
        auto job = make_job(o, std::nullopt);
        caps = generate_batch(o.count, o.threads, o.seed, job);
    }
    if (caps.empty()) throw EmptyResult("no capacities to test");
    std::size_t sr = 0, in_sc = 0, both = 0;
    for (const auto& c : caps) {
        if (c.n() != prefs->n) throw UsageError("capacities and preferences disagree on n");
        bool r = satisfies_SR(c, *prefs);
        bool s = sc && satisfies_SC(c, *sc);
        sr += r;
        in_sc += s;
        both += r && s;
    }
    nlohmann::ordered_json j;
    j["total"] = caps.size();
    j["rate_SR"] = static_cast<double>(sr) / caps.size();
    if (sc) {
        j["rate_SC"] = static_cast<double>(in_sc) / caps.size();
        j["rate_SR_given_SC"] = in_sc ? static_cast<double>(both) / in_sc : 0.0;
    }
    emit(o, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random capacity generation: exact, random-node, Markov-chain and constrained generators."};
    app.require_subcommand(1);
    Options o;

    auto add_n = [&](CLI::App* c) { c->add_option("--n", o.n, "number of criteria")->check(CLI::Range(2, 8)); };
    auto add_gen = [&](CLI::App* c) {
        add_n(c);
        c->add_option("--count", o.count, "number of capacities");
        c->add_option("--seed", o.seed, "master seed");
        c->add_option("--threads", o.threads, "worker threads; output depends on seed and thread count")
            ->check(CLI::Range(1u, 256u));
        c->add_option("--out", o.out, "output CSV (stdout if omitted)");
    };
    auto add_chain = [&](CLI::App* c) {
        c->add_option("--burn-in", o.burn_in, "chain burn-in steps (0 = 50 m^2)");
        c->add_option("--thinning", o.thinning, "chain steps between samples (0 = m^2)");
    };

    auto* en = app.add_subcommand("enum", "enumerate linear extensions (n <= 4) as JSON lines; count only without --out");
    add_n(en);
    en->add_option("--out", o.out, "output JSONL");

    auto* ex = app.add_subcommand("exact", "exact uniform generator (n <= 4)");
    add_gen(ex);

    auto* rt = app.add_subcommand("rank-table", "estimate the rank-probability table with the Markov chain");
    add_n(rt);
    rt->add_option("--samples", o.samples, "retained chain states");
    rt->add_option("--seed", o.seed, "seed");
    rt->add_option("--out", o.out, "output JSON");
    add_chain(rt);

    auto* et = app.add_subcommand("exact-table", "rank-probability table from the full enumeration (n <= 4)");
    add_n(et);
    et->add_option("--out", o.out, "output JSON");

    auto* rg = app.add_subcommand("rng", "classical random-node generator");
    add_gen(rg);

    auto* ir = app.add_subcommand("irng", "improved random-node generator");
    add_gen(ir);
    ir->add_option("--table", o.table, "rank-probability table JSON (exact table if omitted and n <= 4)");

    auto* mk = app.add_subcommand("markov", "Markov-chain generator");
    add_gen(mk);
    add_chain(mk);

    auto* dv = app.add_subcommand("derive", "derive bound and difference constraints from preferences");
    dv->add_option("--prefs", o.prefs, "preference JSON")->required();
    dv->add_option("--epsilon", o.epsilon, "override the preference margin");
    dv->add_option("--out", o.out, "output constraint JSON");

    auto* gn = app.add_subcommand("gen", "generate with a chosen method, constraints and preference filter");
    add_gen(gn);
    add_chain(gn);
    gn->add_option("--method", o.method, "ecg, irng, rng or markov")
        ->check(CLI::IsMember({"ecg", "irng", "rng", "markov"}));
    gn->add_option("--table", o.table, "rank-probability table JSON for irng");
    gn->add_option("--constraints", o.constraints, "constraint JSON; every output satisfies it");
    gn->add_option("--prefs", o.prefs, "preference JSON");
    gn->add_flag("--filter", o.filter, "keep only capacities compatible with --prefs");
    gn->add_option("--epsilon", o.epsilon, "override the preference margin");

    auto* kl = app.add_subcommand("kl", "per-coefficient KL divergence of a capacity file against a reference");
    kl->add_option("--ref", o.ref, "reference capacity CSV")->required();
    kl->add_option("--in", o.in, "capacity CSV to evaluate")->required();
    kl->add_option("--bins", o.bins, "histogram bins")->check(CLI::Range(1, 10000));
    kl->add_option("--out", o.out, "output JSON");

    auto* bn = app.add_subcommand("bench", "time a generator (median of 3 runs after a warm-up)");
    add_gen(bn);
    add_chain(bn);
    bn->add_option("--method", o.method, "ecg, irng, rng or markov")
        ->check(CLI::IsMember({"ecg", "irng", "rng", "markov"}));
    bn->add_option("--table", o.table, "rank-probability table JSON for irng");
    bn->add_option("--constraints", o.constraints, "constraint JSON");

    auto* ar = app.add_subcommand("accept-rate", "fraction of capacities satisfying preferences (and constraints)");
    ar->add_option("--prefs", o.prefs, "preference JSON")->required();
    ar->add_option("--constraints", o.constraints, "constraint JSON");
    ar->add_option("--in", o.in, "capacity CSV (otherwise generated with --method)");
    ar->add_option("--method", o.method, "generator when --in is absent")
        ->check(CLI::IsMember({"ecg", "irng", "rng", "markov"}));
    ar->add_option("--count", o.count, "capacities to generate");
    ar->add_option("--seed", o.seed, "seed");
    ar->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    ar->add_option("--table", o.table, "rank-probability table JSON for irng");
    ar->add_option("--epsilon", o.epsilon, "override the preference margin");
    ar->add_option("--out", o.out, "output JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*en) return cmd_enum(o);
        if (*ex) return cmd_generate(o, "ecg");
        if (*rt) return cmd_rank_table(o);
        if (*et) return cmd_exact_table(o);
        if (*rg) return cmd_generate(o, "rng");
        if (*ir) return cmd_generate(o, "irng");
        if (*mk) return cmd_generate(o, "markov");
        if (*dv) return cmd_derive(o);
        if (*gn) return cmd_gen(o);
        if (*kl) return cmd_kl(o);
        if (*bn) return cmd_bench(o);
        if (*ar) return cmd_accept_rate(o);
    } catch (const IoError& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kIo;
    } catch (const EmptyResult& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kEmpty;
    } catch (const InfeasiblePreferences& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kEmpty;
    } catch (const GenerationDeadEnd& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kEmpty;
    } catch (const std::invalid_argument& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "capgen: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}
