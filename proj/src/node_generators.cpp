#include "capgen/node_generators.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace capgen {

GenerationState::GenerationState(int n)
    : n_(n), assigned_(lattice_size(n), 0), values_(lattice_size(n), 0.0) {
    check_ground_size(n);
    order_.reserve(free_count(n));
}

void GenerationState::assign(Mask s, double value) {
    if (s == 0 || s >= full_mask(n_)) throw std::invalid_argument("only free subsets are assigned");
    if (assigned_[s]) throw std::invalid_argument("subset " + subset_label(n_, s) + " assigned twice");
    if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("assigned value outside [0,1]");
    assigned_[s] = 1;
    values_[s] = value;
    order_.push_back(s);
}

void GenerationState::clear() {
    for (Mask s : order_) assigned_[s] = 0;
    order_.clear();
}

Capacity GenerationState::to_capacity() const {
    if (order_.size() != free_count(n_)) throw std::logic_error("capacity requested from a partial assignment");
    std::vector<double> v = values_;
    v[0] = 0.0;
    v[full_mask(n_)] = 1.0;
    return Capacity::trusted(n_, std::move(v));
}

ValueBounds value_bounds(const GenerationState& state, Mask s) {
    ValueBounds b;
    for (Mask t : state.order()) {
        double a = state.value(t);
        if (is_subset(t, s)) b.lo = std::max(b.lo, a);
        if (is_subset(s, t)) b.hi = std::min(b.hi, a);
    }
    return b;
}

namespace {

// Beyond this many inclusion-maximal members the 2^q sieve is replaced by a
// direct count of the union (same value).
constexpr std::size_t kMaxSieveMembers = 20;

// Alternating sum over nonempty index sets K drawn from members[from..]:
// sum (-1)^{|K|-1} (2^{|inter & AND(K)|} - 1).
std::int64_t sieve_terms(std::span<const Mask> members, std::size_t from, Mask inter) {
    std::int64_t total = 0;
    for (std::size_t j = from; j < members.size(); ++j) {
        Mask common = inter & members[j];
        // Empty intersections contribute 2^0 - 1 = 0, and so do all their refinements.
        if (common == 0) continue;
        total += ((std::int64_t{1} << popcount(common)) - 1) - sieve_terms(members, j + 1, common);
    }
    return total;
}

}  // namespace

std::uint64_t downset_union_size(int n, std::span<const Mask> members) {
    // At most 2^n distinct members, so a fixed buffer holds the maximal ones.
    std::array<Mask, 256> maximal;
    std::size_t q = 0;
    for (Mask m : members) {
        if (m == 0) continue;
        bool dominated = false;
        for (Mask other : members) {
            if (other != m && is_subset(m, other)) {
                dominated = true;
                break;
            }
        }
        if (!dominated && std::find(maximal.begin(), maximal.begin() + q, m) == maximal.begin() + q) maximal[q++] = m;
    }
    std::span<const Mask> kept(maximal.data(), q);
    if (q > kMaxSieveMembers) {
        std::uint64_t count = 0;
        for (Mask t = 1; t <= full_mask(n); ++t) {
            if (std::any_of(kept.begin(), kept.end(), [&](Mask m) { return is_subset(t, m); })) ++count;
        }
        return count;
    }
    return static_cast<std::uint64_t>(sieve_terms(kept, 0, full_mask(n)));
}

namespace {

template <class Below, class Above>
RankBounds sieve_bounds_impl(const GenerationState& state, Mask s, Below&& below, Above&& above) {
    const int n = state.n();
    const Mask full = full_mask(n);
    // Pivots: the largest value known to sit below S and the smallest known
    // above it. Every assigned subset on the far side of a pivot is forced.
    bool has_low = false, has_high = false;
    double low_pivot = 0.0, high_pivot = 1.0;
    for (Mask t : state.order()) {
        double a = state.value(t);
        if (below(t)) {
            low_pivot = has_low ? std::max(low_pivot, a) : a;
            has_low = true;
        }
        if (above(t)) {
            high_pivot = has_high ? std::min(high_pivot, a) : a;
            has_high = true;
        }
    }
    // Up-sets are handled as down-sets of complements.
    std::array<Mask, 256> before, after;
    std::size_t nb = 0, na = 0;
    before[nb++] = s;
    after[na++] = full & ~s;
    for (Mask t : state.order()) {
        double a = state.value(t);
        if (has_low && a <= low_pivot) before[nb++] = t;
        if (has_high && a >= high_pivot) after[na++] = full & ~t;
    }
    int lo = static_cast<int>(downset_union_size(n, std::span<const Mask>(before.data(), nb)));
    int hi = (1 << n) - 1 - static_cast<int>(downset_union_size(n, std::span<const Mask>(after.data(), na)));
    return {lo, hi};
}

}  // namespace

RankBounds sieve_rank_bounds(const GenerationState& state, Mask s) {
    return sieve_bounds_impl(
        state, s, [s](Mask t) { return is_subset(t, s); }, [s](Mask t) { return is_subset(s, t); });
}

RankBounds sieve_rank_bounds(const GenerationState& state, Mask s, const std::function<bool(Mask)>& below,
                             const std::function<bool(Mask)>& above) {
    return sieve_bounds_impl(state, s, below, above);
}

int sieve_min_rank(const GenerationState& state, Mask s) { return sieve_rank_bounds(state, s).lo; }
int sieve_max_rank(const GenerationState& state, Mask s) { return sieve_rank_bounds(state, s).hi; }

double sample_beta(double alpha, double beta, Rng& rng) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("sample_beta: parameters must be positive");
    double x = rng.gamma(alpha);
    double y = rng.gamma(beta);
    return x / (x + y);
}

NodeDraw draw_node_value(const RankProbabilityTable& table, Mask s, ValueBounds values, RankBounds ranks, Rng& rng,
                         NodeStats* stats) {
    if (stats) ++stats->nodes;
    if (!(values.hi > values.lo)) return {values.lo, 0};
    const int m = static_cast<int>(free_count(table.n()));
    const int lo_rank = std::max(ranks.lo, 1);
    const int hi_rank = std::min(ranks.hi, m);
    auto row = table.row(s);

    double pr_min = 0.0, pr_max = 0.0, inside = 0.0;
    for (int j = 1; j < lo_rank; ++j) pr_min += row[j];
    for (int j = hi_rank + 1; j <= m; ++j) pr_max += row[j];
    for (int j = lo_rank; j <= hi_rank; ++j) inside += row[j];
    if (!(inside > 0.0)) {
        if (stats) ++stats->empty_support;
        return {rng.uniform(values.lo, values.hi), 0};
    }

    for (int attempt = 0; attempt < kMaxBetaRetries; ++attempt) {
        double r = pr_min + (1.0 - pr_max - pr_min) * rng.uniform01();
        int rank = 0;
        double acc = pr_min;
        for (int j = lo_rank; j <= hi_rank; ++j) {
            if (row[j] <= 0.0) continue;
            acc += row[j];
            rank = j;
            if (r <= acc) break;
        }
        double beta = sample_beta(rank, (1 << table.n()) - 1 - rank, rng);
        if (beta > values.lo && beta < values.hi) return {beta, rank};
        if (stats) ++stats->rejections;
    }
    if (stats) ++stats->retry_fallbacks;
    return {rng.uniform(values.lo, values.hi), 0};
}

std::vector<Mask> random_visit_order(int n, Rng& rng) {
    std::vector<Mask> order;
    order.reserve(free_count(n));
    for (Mask m = 1; m < full_mask(n); ++m) order.push_back(m);
    rng.shuffle(std::span<Mask>(order));
    return order;
}

Capacity rng_generate_one(int n, Rng& rng, GenerationState& scratch) {
    scratch.clear();
    for (Mask s : random_visit_order(n, rng)) {
        auto b = value_bounds(scratch, s);
        scratch.assign(s, rng.uniform(b.lo, b.hi));
    }
    return scratch.to_capacity();
}

std::vector<Capacity> rng_generate(int n, std::size_t count, Rng& rng) {
    std::vector<Capacity> out;
    out.reserve(count);
    GenerationState state(n);
    for (std::size_t k = 0; k < count; ++k) out.push_back(rng_generate_one(n, rng, state));
    return out;
}

Capacity irng_generate_one(const RankProbabilityTable& table, Rng& rng, GenerationState& scratch, NodeStats* stats) {
    const int n = table.n();
    scratch.clear();
    for (Mask s : random_visit_order(n, rng)) {
        auto vb = value_bounds(scratch, s);
        auto rb = sieve_rank_bounds(scratch, s);
        scratch.assign(s, draw_node_value(table, s, vb, rb, rng, stats).value);
    }
    return scratch.to_capacity();
}

std::vector<Capacity> irng_generate(int n, std::size_t count, const RankProbabilityTable& table, Rng& rng,
                                    NodeStats* stats) {
    if (table.n() != n) throw std::invalid_argument("irng_generate: rank table built for a different n");
    std::vector<Capacity> out;
    out.reserve(count);
    GenerationState state(n);
    for (std::size_t k = 0; k < count; ++k) out.push_back(irng_generate_one(table, rng, state, stats));
    return out;
}

}  // namespace capgen
