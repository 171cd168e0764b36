#include "capgen/markov.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace capgen {

RankProbabilityTable::RankProbabilityTable(int n, std::uint64_t samples, std::uint64_t burn_in,
                                           std::uint64_t thinning, std::vector<std::vector<double>> prob)
    : n_(n), samples_(samples), burn_in_(burn_in), thinning_(thinning), prob_(std::move(prob)) {
    check_ground_size(n);
    const std::size_t m = free_count(n);
    if (prob_.size() != lattice_size(n)) throw std::invalid_argument("rank table needs one row per subset");
    for (Mask s = 0; s < prob_.size(); ++s) {
        auto& row = prob_[s];
        if (row.size() != m + 1) throw std::invalid_argument("rank table row has wrong length");
        if (s == 0 || s == full_mask(n)) continue;
        double total = 0.0;
        for (std::size_t i = 1; i <= m; ++i) {
            if (!(row[i] >= 0.0)) throw std::invalid_argument("rank table entries must be non-negative");
            total += row[i];
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("rank table row for " + subset_label(n, s) + " does not sum to 1");
        }
    }
}

RankProbabilityTable RankProbabilityTable::from_counts(int n, const std::vector<std::vector<std::uint64_t>>& counts,
                                                       std::uint64_t burn_in, std::uint64_t thinning) {
    const std::size_t m = free_count(n);
    std::vector<std::vector<double>> prob(lattice_size(n), std::vector<double>(m + 1, 0.0));
    std::uint64_t samples = 0;
    for (Mask s = 1; s < full_mask(n); ++s) {
        std::uint64_t total = 0;
        for (std::size_t i = 1; i <= m; ++i) total += counts[s][i];
        if (total == 0) throw std::invalid_argument("rank table built from zero samples");
        samples = total;
        for (std::size_t i = 1; i <= m; ++i) prob[s][i] = static_cast<double>(counts[s][i]) / static_cast<double>(total);
    }
    return RankProbabilityTable(n, samples, burn_in, thinning, std::move(prob));
}

double RankProbabilityTable::prob(Mask s, int rank) const {
    if (rank < 1 || rank > static_cast<int>(free_count(n_))) return 0.0;
    return prob_[s][rank];
}

RankProbabilityTable exact_rank_table(int n) {
    const std::size_t m = free_count(n);
    std::vector<std::vector<std::uint64_t>> counts(lattice_size(n), std::vector<std::uint64_t>(m + 1, 0));
    for_each_linear_extension(n, {}, [&](const LinearExtension& e) {
        for (std::size_t i = 0; i < e.size(); ++i) ++counts[e[i]][i + 1];
    });
    return RankProbabilityTable::from_counts(n, counts);
}

void write_rank_table_json(std::ostream& out, const RankProbabilityTable& table) {
    nlohmann::ordered_json j;
    j["n"] = table.n();
    j["samples"] = table.samples();
    j["burn_in"] = table.burn_in();
    j["thinning"] = table.thinning();
    nlohmann::ordered_json prob = nlohmann::ordered_json::object();
    for (Mask s = 1; s < full_mask(table.n()); ++s) {
        auto row = table.row(s);
        prob[std::to_string(s)] = std::vector<double>(row.begin() + 1, row.end());
    }
    j["prob"] = std::move(prob);
    out << j.dump() << '\n';
}

RankProbabilityTable read_rank_table_json(std::istream& in) {
    try {
        auto j = nlohmann::json::parse(in);
        int n = j.at("n").get<int>();
        check_ground_size(n);
        const std::size_t m = free_count(n);
        std::vector<std::vector<double>> prob(lattice_size(n), std::vector<double>(m + 1, 0.0));
        const auto& rows = j.at("prob");
        for (Mask s = 1; s < full_mask(n); ++s) {
            auto row = rows.at(std::to_string(s)).get<std::vector<double>>();
            if (row.size() != m) throw std::runtime_error("row " + std::to_string(s) + " has wrong length");
            std::copy(row.begin(), row.end(), prob[s].begin() + 1);
        }
        return RankProbabilityTable(n, j.value("samples", std::uint64_t{0}), j.value("burn_in", std::uint64_t{0}),
                                    j.value("thinning", std::uint64_t{0}), std::move(prob));
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("rank table: ") + e.what());
    }
}

bool chain_step(LinearExtension& ext, Rng& rng) {
    if (ext.size() < 2) return false;
    std::size_t j = rng.below(ext.size() - 1);
    Mask a = ext[j], b = ext[j + 1];
    if (is_subset(a, b) || is_subset(b, a)) return false;
    std::swap(ext[j], ext[j + 1]);
    return true;
}

ExtensionChain::ExtensionChain(int n, ChainParams params, Rng& rng) : n_(n), rng_(rng) {
    check_ground_size(n);
    const std::uint64_t m = free_count(n);
    burn_in_ = params.burn_in ? params.burn_in : 50 * m * m;
    thinning_ = params.thinning ? params.thinning : m * m;
    CardLexOrder order(n);
    state_.assign(order.free_subsets().begin(), order.free_subsets().end());
}

const LinearExtension& ExtensionChain::next() {
    if (!warmed_) {
        for (std::uint64_t i = 0; i < burn_in_; ++i) chain_step(state_, rng_);
        warmed_ = true;
    }
    for (std::uint64_t i = 0; i < thinning_; ++i) chain_step(state_, rng_);
    return state_;
}

RankProbabilityTable estimate_rank_table(int n, ChainParams params, std::uint64_t samples, Rng& rng) {
    if (samples == 0) throw std::invalid_argument("estimate_rank_table: samples must be >= 1");
    ExtensionChain chain(n, params, rng);
    const std::size_t m = free_count(n);
    std::vector<std::vector<std::uint64_t>> counts(lattice_size(n), std::vector<std::uint64_t>(m + 1, 0));
    for (std::uint64_t k = 0; k < samples; ++k) {
        const auto& e = chain.next();
        for (std::size_t i = 0; i < m; ++i) ++counts[e[i]][i + 1];
    }
    return RankProbabilityTable::from_counts(n, counts, chain.burn_in(), chain.thinning());
}

std::vector<Capacity> markov_generate(int n, std::size_t count, ChainParams params, Rng& rng) {
    std::vector<Capacity> out;
    if (count == 0) return out;
    out.reserve(count);
    ExtensionChain chain(n, params, rng);
    for (std::size_t k = 0; k < count; ++k) {
        const auto& e = chain.next();
        out.push_back(capacity_from_extension(n, e, rng));
    }
    return out;
}

}  // namespace capgen
