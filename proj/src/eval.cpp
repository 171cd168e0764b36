#include "capgen/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace capgen {

int CoefficientHistogram::bin_of(double v) const {
    int b = static_cast<int>(v * bins());
    return std::clamp(b, 0, bins() - 1);
}

void CoefficientHistogram::add(double v) {
    ++counts[bin_of(v)];
    ++total;
}

std::vector<double> CoefficientHistogram::smoothed() const {
    const double t = static_cast<double>(std::max<std::uint64_t>(total, 1));
    const double pseudo = 1.0 / (10.0 * t);
    const double norm = 1.0 + bins() * pseudo;
    std::vector<double> mass(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) mass[i] = (static_cast<double>(counts[i]) / t + pseudo) / norm;
    return mass;
}

std::vector<CoefficientHistogram> coefficient_histograms(std::span<const Capacity> caps, int bins) {
    if (bins < 1) throw std::invalid_argument("histograms need at least one bin");
    if (caps.empty()) throw std::invalid_argument("histograms of an empty capacity stream");
    const int n = caps.front().n();
    CardLexOrder order(n);
    std::vector<CoefficientHistogram> hists;
    for (Mask s : order.free_subsets()) hists.emplace_back(s, bins);
    for (const auto& c : caps) {
        if (c.n() != n) throw std::invalid_argument("mixed capacity dimensions in one stream");
        for (auto& h : hists) h.add(c[h.subset]);
    }
    return hists;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("KL divergence of mismatched binnings");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) throw std::domain_error("KL divergence is infinite: reference bin has no mass");
        d += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(d, 0.0);
}

double kl_divergence(const CoefficientHistogram& p, const CoefficientHistogram& q) {
    if (p.bins() != q.bins()) throw std::invalid_argument("KL divergence of mismatched binnings");
    auto ps = p.smoothed();
    auto qs = q.smoothed();
    return kl_divergence(ps, qs);
}

KLReport kl_report(std::span<const Capacity> sample, std::span<const Capacity> reference, int bins) {
    auto hp = coefficient_histograms(sample, bins);
    auto hq = coefficient_histograms(reference, bins);
    if (hp.size() != hq.size()) throw std::invalid_argument("KL report: streams have different n");
    KLReport r;
    r.n = sample.front().n();
    for (std::size_t i = 0; i < hp.size(); ++i) {
        double d = kl_divergence(hp[i], hq[i]);
        r.per_subset.emplace_back(hp[i].subset, d);
        r.sum += d;
    }
    return r;
}

std::map<std::string, KLReport> kl_table(const std::map<std::string, std::vector<Capacity>>& streams,
                                         std::span<const Capacity> reference, int bins) {
    std::map<std::string, KLReport> out;
    for (const auto& [name, caps] : streams) out.emplace(name, kl_report(caps, reference, bins));
    return out;
}

void write_kl_report_json(std::ostream& out, const KLReport& report) {
    nlohmann::ordered_json j;
    for (const auto& [s, d] : report.per_subset) j[subset_label(report.n, s)] = d;
    j["sum"] = report.sum;
    out << j.dump(2) << '\n';
}

double beta_cdf(int a, int b, double x) {
    if (a < 1 || b < 1) throw std::invalid_argument("beta_cdf: integer parameters must be >= 1");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // P(Beta(a,b) <= x) = P(Binomial(a+b-1, x) >= a).
    const int trials = a + b - 1;
    double sum = 0.0;
    for (int k = a; k <= trials; ++k) {
        double log_term = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0) +
                          k * std::log(x) + (trials - k) * std::log1p(-x);
        sum += std::exp(log_term);
    }
    return std::min(sum, 1.0);
}

std::vector<double> beta_mixture_bins(const RankProbabilityTable& table, Mask s, int bins) {
    const int n = table.n();
    const int m = static_cast<int>(free_count(n));
    std::vector<double> mass(bins, 0.0);
    for (int i = 1; i <= m; ++i) {
        double w = table.prob(s, i);
        if (w == 0.0) continue;
        double prev = 0.0;
        for (int k = 0; k < bins; ++k) {
            double cur = beta_cdf(i, (1 << n) - 1 - i, static_cast<double>(k + 1) / bins);
            mass[k] += w * (cur - prev);
            prev = cur;
        }
    }
    return mass;
}

BenchResult bench(const std::function<void()>& job, std::size_t items, int repeats) {
    using clock = std::chrono::steady_clock;
    job();
    BenchResult r;
    for (int i = 0; i < std::max(repeats, 1); ++i) {
        auto t0 = clock::now();
        job();
        r.runs.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    auto sorted = r.runs;
    std::sort(sorted.begin(), sorted.end());
    r.median_seconds = sorted[sorted.size() / 2];
    r.per_item_seconds = items ? r.median_seconds / static_cast<double>(items) : 0.0;
    return r;
}

}  // namespace capgen
