#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/markov.hpp"

namespace capgen {

constexpr int kDefaultBins = 20;

/// Equal-width histogram of one coefficient on [0,1].
struct CoefficientHistogram {
    Mask subset = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    CoefficientHistogram(Mask s, int bins) : subset(s), counts(bins, 0) {}

    int bins() const { return static_cast<int>(counts.size()); }
    /// Bin of a value; 1.0 falls into the last bin.
    int bin_of(double v) const;
    void add(double v);
    /// Bin masses after adding 1/(10 total) pseudo-mass to every bin.
    std::vector<double> smoothed() const;
};

/// Histograms of every free coefficient, in cardinal-lex order.
std::vector<CoefficientHistogram> coefficient_histograms(std::span<const Capacity> caps, int bins);

/// sum p log(p/q), natural log, over bins with p > 0. Throws on length mismatch
/// or when q vanishes where p does not.
double kl_divergence(std::span<const double> p, std::span<const double> q);
/// Divergence of smoothed bin masses. Throws on mismatched binning.
double kl_divergence(const CoefficientHistogram& p, const CoefficientHistogram& q);

struct KLReport {
    int n = 0;
    std::vector<std::pair<Mask, double>> per_subset;  ///< cardinal-lex order
    double sum = 0.0;
};

/// Per-coefficient divergence of `sample` from `reference`.
KLReport kl_report(std::span<const Capacity> sample, std::span<const Capacity> reference, int bins);

/// One report per named stream against a common reference.
std::map<std::string, KLReport> kl_table(const std::map<std::string, std::vector<Capacity>>& streams,
                                         std::span<const Capacity> reference, int bins);

/// {"<label>": divergence, ..., "sum": total}, labels in cardinal-lex order.
void write_kl_report_json(std::ostream& out, const KLReport& report);

/// CDF of Beta(a, b) for positive integers a, b.
double beta_cdf(int a, int b, double x);

/// Bin masses of the marginal law of mu(S) under the uniform capacity:
/// sum_i P(Rk(S)=i) Beta(i, 2^n-1-i).
std::vector<double> beta_mixture_bins(const RankProbabilityTable& table, Mask s, int bins);

struct BenchResult {
    double median_seconds = 0.0;
    double per_item_seconds = 0.0;
    std::vector<double> runs;
};

/// Runs `job` once untimed, then `repeats` timed runs; reports the median.
BenchResult bench(const std::function<void()>& job, std::size_t items, int repeats = 3);

}  // namespace capgen
