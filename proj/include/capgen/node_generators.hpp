#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/markov.hpp"
#include "capgen/random.hpp"

namespace capgen {

/// Partial assignment built up while a node generator visits subsets.
class GenerationState {
public:
    explicit GenerationState(int n);

    int n() const { return n_; }
    std::size_t size() const { return order_.size(); }
    bool assigned(Mask s) const { return assigned_[s]; }
    double value(Mask s) const { return values_[s]; }
    /// Assigned subsets in assignment order.
    std::span<const Mask> order() const { return order_; }

    /// Throws std::invalid_argument if `s` is not free, already assigned, or
    /// `value` lies outside [0,1].
    void assign(Mask s, double value);
    void clear();

    /// Capacity from a complete assignment.
    Capacity to_capacity() const;

private:
    int n_;
    std::vector<char> assigned_;
    std::vector<double> values_;
    std::vector<Mask> order_;
};

struct ValueBounds {
    double lo = 0.0;
    double hi = 1.0;
};

/// Conditional rank range [lo, hi] of an unassigned subset.
struct RankBounds {
    int lo;
    int hi;
    friend bool operator==(const RankBounds&, const RankBounds&) = default;
};

/// Monotonicity bounds: lo = max value over assigned subsets of S (0 if
/// none), hi = min value over assigned supersets (1 if none).
ValueBounds value_bounds(const GenerationState& state, Mask s);

/// Number of nonempty subsets of N contained in at least one member,
/// computed by inclusion-exclusion over the inclusion-maximal members.
std::uint64_t downset_union_size(int n, std::span<const Mask> members);

/// Smallest rank of S given the state: size of the union of the down-sets
/// of every assigned subset forced below S (plus S itself).
int sieve_min_rank(const GenerationState& state, Mask s);
/// Largest rank of S: 2^n - 1 minus the size of the union of the proper
/// up-sets of every assigned subset forced above S (plus S itself).
int sieve_max_rank(const GenerationState& state, Mask s);
RankBounds sieve_rank_bounds(const GenerationState& state, Mask s);

/// Sieve bounds with a widened order relation. `below(t)` says assigned
/// subset t is known to satisfy mu(t) <= mu(S); `above(t)` the reverse.
RankBounds sieve_rank_bounds(const GenerationState& state, Mask s, const std::function<bool(Mask)>& below,
                             const std::function<bool(Mask)>& above);

/// Beta(alpha, beta) as a ratio of Gamma draws.
double sample_beta(double alpha, double beta, Rng& rng);

/// Rejected draws allowed before a node falls back to Uniform(lo, hi).
constexpr int kMaxBetaRetries = 1000;

struct NodeStats {
    std::uint64_t nodes = 0;
    std::uint64_t rejections = 0;      ///< beta draws outside (lo, hi)
    std::uint64_t retry_fallbacks = 0; ///< nodes that hit kMaxBetaRetries
    std::uint64_t empty_support = 0;   ///< table rows with no mass in [loRk, hiRk]
};

struct NodeDraw {
    double value;
    int rank;  ///< rank whose Beta law produced the value; 0 on fallback
};

/// One node of the improved generator: pick a rank from the table row
/// truncated to `ranks`, draw Beta(rank, 2^n-1-rank), accept inside the
/// open interval `values`, otherwise redraw both.
NodeDraw draw_node_value(const RankProbabilityTable& table, Mask s, ValueBounds values, RankBounds ranks, Rng& rng,
                         NodeStats* stats = nullptr);

/// Classical random-node generator: random visit order, Uniform(lo, hi).
std::vector<Capacity> rng_generate(int n, std::size_t count, Rng& rng);
Capacity rng_generate_one(int n, Rng& rng, GenerationState& scratch);

/// Improved random-node generator driven by a rank-probability table.
std::vector<Capacity> irng_generate(int n, std::size_t count, const RankProbabilityTable& table, Rng& rng,
                                    NodeStats* stats = nullptr);
Capacity irng_generate_one(const RankProbabilityTable& table, Rng& rng, GenerationState& scratch,
                           NodeStats* stats = nullptr);

/// Fresh uniform random permutation of the free subsets.
std::vector<Mask> random_visit_order(int n, Rng& rng);

}  // namespace capgen
