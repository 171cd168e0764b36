#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/linear_extensions.hpp"
#include "capgen/random.hpp"

namespace capgen {

/// Estimated P(Rk(S) = i) for every free subset S and rank i in 1..2^n-2.
class RankProbabilityTable {
public:
    RankProbabilityTable(int n, std::uint64_t samples, std::uint64_t burn_in, std::uint64_t thinning,
                         std::vector<std::vector<double>> prob);

    /// Normalizes raw position counts (counts[mask][rank], rank 0 unused).
    static RankProbabilityTable from_counts(int n, const std::vector<std::vector<std::uint64_t>>& counts,
                                            std::uint64_t burn_in = 0, std::uint64_t thinning = 0);

    int n() const { return n_; }
    std::uint64_t samples() const { return samples_; }
    std::uint64_t burn_in() const { return burn_in_; }
    std::uint64_t thinning() const { return thinning_; }
    /// Probability that `s` sits at `rank` (1-based); 0 outside 1..2^n-2.
    double prob(Mask s, int rank) const;
    /// Row for `s`, indexed by rank (entry 0 is always 0).
    std::span<const double> row(Mask s) const { return prob_[s]; }

private:
    int n_;
    std::uint64_t samples_, burn_in_, thinning_;
    std::vector<std::vector<double>> prob_;
};

/// Exact table from the full enumeration (n <= 4).
RankProbabilityTable exact_rank_table(int n);

/// Table JSON: {"n", "samples", "burn_in", "thinning", "prob": {"<mask>": [p_1..p_m]}}.
void write_rank_table_json(std::ostream& out, const RankProbabilityTable& table);
/// Throws std::runtime_error on malformed input.
RankProbabilityTable read_rank_table_json(std::istream& in);

/// Lazy adjacent-transposition step: pick j uniformly in 1..m-1 and swap
/// positions j, j+1 when the two subsets are incomparable. Returns whether a
/// swap happened.
bool chain_step(LinearExtension& ext, Rng& rng);

struct ChainParams {
    std::uint64_t burn_in = 0;   ///< 0 selects 50 m^2
    std::uint64_t thinning = 0;  ///< 0 selects m^2
};

/// A single Markov chain over linear extensions, started from the
/// cardinal-lex order.
class ExtensionChain {
public:
    ExtensionChain(int n, ChainParams params, Rng& rng);

    int n() const { return n_; }
    std::uint64_t burn_in() const { return burn_in_; }
    std::uint64_t thinning() const { return thinning_; }
    const LinearExtension& state() const { return state_; }

    /// Runs burn-in on first use, then `thinning` steps per call.
    const LinearExtension& next();

private:
    int n_;
    std::uint64_t burn_in_, thinning_;
    bool warmed_ = false;
    Rng& rng_;
    LinearExtension state_;
};

RankProbabilityTable estimate_rank_table(int n, ChainParams params, std::uint64_t samples, Rng& rng);

/// One retained chain state per capacity, then sorted uniforms along it.
std::vector<Capacity> markov_generate(int n, std::size_t count, ChainParams params, Rng& rng);

}  // namespace capgen
