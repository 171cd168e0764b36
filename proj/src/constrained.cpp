#include "capgen/constrained.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace capgen {

std::vector<DominancePair> dominance_pairs(const ConstraintSystem& sc) {
    std::vector<DominancePair> out;
    auto subsets = sc.order().free_subsets();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (std::size_t j = i + 1; j < subsets.size(); ++j) {
            Mask a = subsets[i], b = subsets[j];
            Interval d = sc.pair(a, b);
            if (d.hi <= 0.0 && !is_subset(a, b)) out.push_back({a, b});
            if (d.lo >= 0.0 && !is_subset(b, a)) out.push_back({b, a});
        }
    }
    return out;
}

std::vector<LinearExtension> revised_enumerate(int n, std::span<const DominancePair> pairs) {
    std::vector<LinearExtension> out;
    for_each_linear_extension(n, pairs, [&](const LinearExtension& e) { out.push_back(e); });
    return out;
}

std::vector<Capacity> revised_ecg_sample(int n, std::span<const LinearExtension> extensions, std::size_t count,
                                         Rng& rng) {
    if (count > 0 && extensions.empty()) {
        throw std::invalid_argument("revised ECG: the dominance constraints admit no linear extension");
    }
    return ecg_sample(n, extensions, count, rng);
}

ValueBounds revised_value_bounds(const GenerationState& state, Mask s, const ConstraintSystem& sc) {
    ValueBounds b = value_bounds(state, s);
    Interval single = sc.single(s);
    b.lo = std::max(b.lo, single.lo);
    b.hi = std::min(b.hi, single.hi);
    for (Mask t : state.order()) {
        Interval d = sc.pair(s, t);
        double a = state.value(t);
        b.lo = std::max(b.lo, d.lo + a);
        b.hi = std::min(b.hi, d.hi + a);
    }
    return b;
}

RankBounds revised_sieve_bounds(const GenerationState& state, Mask s, const ConstraintSystem& sc) {
    return sieve_rank_bounds(
        state, s, [&](Mask t) { return is_subset(t, s) || sc.order_gap(t, s) <= 0.0; },
        [&](Mask t) { return is_subset(s, t) || sc.order_gap(s, t) <= 0.0; });
}

namespace {

std::string describe_dead_end(int n, Mask s, ValueBounds b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s has empty range [%.6g, %.6g]", subset_label(n, s).c_str(), b.lo, b.hi);
    return buf;
}

}  // namespace

std::vector<Capacity> revised_irng_generate(int n, std::size_t count, const RankProbabilityTable& table,
                                            const ConstraintSystem& sc, Rng& rng, RevisedStats* stats) {
    if (table.n() != n || sc.n() != n) throw std::invalid_argument("revised IRNG: table/constraints built for a different n");
    std::vector<Capacity> out;
    out.reserve(count);
    GenerationState state(n);
    NodeStats* node_stats = stats ? &stats->nodes : nullptr;
    for (std::size_t k = 0; k < count; ++k) {
        int restarts = 0;
        double worst_gap = -1.0;
        std::string worst;
        for (;;) {
            state.clear();
            bool dead = false;
            for (Mask s : random_visit_order(n, rng)) {
                ValueBounds vb = revised_value_bounds(state, s, sc);
                if (vb.lo > vb.hi) {
                    if (vb.lo - vb.hi > worst_gap) {
                        worst_gap = vb.lo - vb.hi;
                        worst = describe_dead_end(n, s, vb);
                    }
                    dead = true;
                    break;
                }
                RankBounds rb = revised_sieve_bounds(state, s, sc);
                state.assign(s, draw_node_value(table, s, vb, rb, rng, node_stats).value);
            }
            if (!dead) break;
            if (stats) ++stats->restarts;
            if (++restarts > kMaxRestarts) {
                throw GenerationDeadEnd("revised IRNG: " + std::to_string(kMaxRestarts) +
                                        " restarts without completing a capacity; tightest dead end: " + worst);
            }
        }
        out.push_back(state.to_capacity());
    }
    return out;
}

FilterResult filter_SR(std::span<const Capacity> capacities, const PreferenceSystem& prefs) {
    FilterResult r;
    for (const auto& c : capacities) {
        if (satisfies_SR(c, prefs)) r.accepted.push_back(c);
    }
    r.acceptance_rate = capacities.empty() ? 1.0
                                           : static_cast<double>(r.accepted.size()) / static_cast<double>(capacities.size());
    return r;
}

std::vector<Capacity> collect_compatible(const std::function<std::vector<Capacity>(std::size_t)>& generate,
                                         const PreferenceSystem& prefs, std::size_t target, std::uint64_t* drawn) {
    std::vector<Capacity> accepted;
    std::uint64_t total = 0;
    const std::size_t batch = std::max<std::size_t>(target / 4, 64);
    while (accepted.size() < target) {
        auto caps = generate(batch);
        if (caps.empty()) throw std::logic_error("collect_compatible: generator produced nothing");
        total += caps.size();
        for (auto& c : caps) {
            if (accepted.size() < target && satisfies_SR(c, prefs)) accepted.push_back(std::move(c));
        }
    }
    if (drawn) *drawn = total;
    return accepted;
}

}  // namespace capgen
