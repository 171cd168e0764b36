#include "capgen/linear_extensions.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace capgen {

namespace {

void check_enumeration_size(int n) {
    check_ground_size(n);
    if (n > kMaxEnumerationSize) {
        throw std::invalid_argument("linear extensions are only enumerated for n <= 4 (got n=" +
                                    std::to_string(n) + "); use the Markov chain sampler beyond");
    }
}

}  // namespace

bool is_linear_extension(int n, std::span<const Mask> ext) {
    if (ext.size() != free_count(n)) return false;
    std::vector<int> pos(lattice_size(n), -1);
    for (std::size_t i = 0; i < ext.size(); ++i) {
        Mask m = ext[i];
        if (m == 0 || m >= full_mask(n) || pos[m] != -1) return false;
        pos[m] = static_cast<int>(i);
    }
    // Covering pairs suffice by transitivity.
    for (Mask m = 1; m < full_mask(n); ++m) {
        for (int b = 0; b < n; ++b) {
            Mask up = m | (Mask{1} << b);
            if (up != m && up != full_mask(n) && pos[m] > pos[up]) return false;
        }
    }
    return true;
}

FreePoset::FreePoset(int n) : n_(n), size_(free_count(n)), present_(lattice_size(n), 1) {
    check_ground_size(n);
    present_[0] = 0;
    present_[full_mask(n)] = 0;
}

void FreePoset::remove(Mask m) {
    if (!present_[m]) throw std::logic_error("FreePoset::remove: element not present");
    present_[m] = 0;
    --size_;
}

void FreePoset::reinsert(Mask m) {
    if (present_[m] || m == 0 || m == full_mask(n_)) throw std::logic_error("FreePoset::reinsert: invalid element");
    present_[m] = 1;
    ++size_;
}

std::vector<Mask> FreePoset::maximal_elements() const {
    if (empty()) throw std::logic_error("maximal_elements of an empty poset");
    std::vector<Mask> out;
    const Mask full = full_mask(n_);
    for (Mask m = 1; m < full; ++m) {
        if (!present_[m]) continue;
        // All strict supersets, not just covers: the present set need not be a down-set.
        Mask rest = full & ~m;
        bool maximal = true;
        for (Mask extra = rest; extra != 0; extra = (extra - 1) & rest) {
            if (present_[m | extra]) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(m);
    }
    return out;
}

namespace {

class ExtensionWalker {
public:
    ExtensionWalker(int n, std::span<const DominancePair> pairs,
                    const std::function<void(const LinearExtension&)>& visit)
        : poset_(n), pairs_(pairs), visit_(visit), ext_(free_count(n)) {}

    std::uint64_t run() {
        descend();
        return count_;
    }

private:
    void descend() {
        if (poset_.empty()) {
            visit_(ext_);
            ++count_;
            return;
        }
        const auto maximal = poset_.maximal_elements();
        auto candidates = maximal;
        // Hold back a dominated element while some maximal element contains
        // its dominant, i.e. while the dominant itself is still present.
        for (const auto& p : pairs_) {
            auto it = std::find(candidates.begin(), candidates.end(), p.dominated);
            if (it == candidates.end()) continue;
            bool blocked = std::any_of(maximal.begin(), maximal.end(),
                                       [&](Mask s) { return is_subset(p.dominant, s); });
            if (blocked) candidates.erase(it);
        }
        const std::size_t slot = poset_.size() - 1;
        for (Mask s : candidates) {
            poset_.remove(s);
            ext_[slot] = s;
            descend();
            poset_.reinsert(s);
        }
    }

    FreePoset poset_;
    std::span<const DominancePair> pairs_;
    const std::function<void(const LinearExtension&)>& visit_;
    LinearExtension ext_;
    std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t for_each_linear_extension(int n, std::span<const DominancePair> pairs,
                                        const std::function<void(const LinearExtension&)>& visit) {
    check_enumeration_size(n);
    return ExtensionWalker(n, pairs, visit).run();
}

std::vector<LinearExtension> enumerate_linear_extensions(int n) {
    std::vector<LinearExtension> out;
    for_each_linear_extension(n, {}, [&](const LinearExtension& e) { out.push_back(e); });
    return out;
}

std::uint64_t count_linear_extensions(int n) {
    return for_each_linear_extension(n, {}, [](const LinearExtension&) {});
}

Capacity capacity_from_extension(int n, std::span<const Mask> ext, Rng& rng) {
    std::vector<double> draws(ext.size());
    for (double& u : draws) u = rng.uniform01();
    std::sort(draws.begin(), draws.end());
    std::vector<double> values(lattice_size(n), 0.0);
    for (std::size_t i = 0; i < ext.size(); ++i) values[ext[i]] = draws[i];
    values[full_mask(n)] = 1.0;
    return Capacity::trusted(n, std::move(values));
}

std::vector<Capacity> ecg_sample(int n, std::span<const LinearExtension> extensions, std::size_t count,
                                 Rng& rng) {
    std::vector<Capacity> out;
    if (count == 0) return out;
    if (extensions.empty()) throw std::invalid_argument("ecg_sample: no linear extensions to sample from");
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto& ext = extensions[rng.below(extensions.size())];
        out.push_back(capacity_from_extension(n, ext, rng));
    }
    return out;
}

std::vector<std::vector<std::uint64_t>> rank_frequencies(int n, std::span<const LinearExtension> extensions) {
    std::vector<std::vector<std::uint64_t>> counts(lattice_size(n), std::vector<std::uint64_t>(free_count(n) + 1, 0));
    for (const auto& e : extensions) {
        for (std::size_t i = 0; i < e.size(); ++i) ++counts[e[i]][i + 1];
    }
    return counts;
}

void write_extensions_jsonl(std::ostream& out, std::span<const LinearExtension> extensions) {
    for (const auto& e : extensions) {
        out << '[';
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i) out << ',';
            out << e[i];
        }
        out << "]\n";
    }
}

}  // namespace capgen
