#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/linear_extensions.hpp"
#include "capgen/markov.hpp"
#include "capgen/node_generators.hpp"
#include "capgen/preferences.hpp"

namespace capgen {

/// Order relations mu(dominated) <= mu(dominant) read off the difference
/// bounds of a constraint system (upper bound <= 0 or lower bound >= 0).
/// Pairs already implied by inclusion are skipped.
std::vector<DominancePair> dominance_pairs(const ConstraintSystem& sc);

/// Linear extensions in which every dominated subset ranks below its
/// dominant. An empty result means the pairs are contradictory.
std::vector<LinearExtension> revised_enumerate(int n, std::span<const DominancePair> pairs);

/// ECG over a filtered extension set. Throws std::invalid_argument when the
/// set is empty and count > 0.
std::vector<Capacity> revised_ecg_sample(int n, std::span<const LinearExtension> extensions, std::size_t count,
                                         Rng& rng);

/// Monotonicity bounds tightened by single-coefficient bounds and by the
/// difference bounds against every assigned subset. lo > hi marks a dead end.
ValueBounds revised_value_bounds(const GenerationState& state, Mask s, const ConstraintSystem& sc);

/// Sieve rank bounds where an assigned subset t also counts as below S when
/// R(t, S) <= 0 and as above S when R(S, t) <= 0.
RankBounds revised_sieve_bounds(const GenerationState& state, Mask s, const ConstraintSystem& sc);

/// Restarts allowed per capacity before revised_irng_generate gives up.
constexpr int kMaxRestarts = 1000;

class GenerationDeadEnd : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RevisedStats {
    NodeStats nodes;
    std::uint64_t restarts = 0;
};

/// Improved random-node generator with constraint-tightened value and rank
/// bounds. A dead end restarts the whole capacity; more than kMaxRestarts
/// consecutive restarts throws GenerationDeadEnd.
std::vector<Capacity> revised_irng_generate(int n, std::size_t count, const RankProbabilityTable& table,
                                            const ConstraintSystem& sc, Rng& rng, RevisedStats* stats = nullptr);

struct FilterResult {
    std::vector<Capacity> accepted;
    double acceptance_rate = 1.0;
};

/// Acceptance-rejection against the preference system.
FilterResult filter_SR(std::span<const Capacity> capacities, const PreferenceSystem& prefs);

/// Draws batches from `generate(batch)` until `target` capacities satisfy the
/// preferences. Returns the accepted capacities (exactly `target`) and the
/// total number drawn through `drawn`.
std::vector<Capacity> collect_compatible(const std::function<std::vector<Capacity>(std::size_t)>& generate,
                                         const PreferenceSystem& prefs, std::size_t target,
                                         std::uint64_t* drawn = nullptr);

}  // namespace capgen
