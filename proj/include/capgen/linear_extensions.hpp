#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/random.hpp"

namespace capgen {

/// Largest ground set for which linear extensions are enumerated.
constexpr int kMaxEnumerationSize = 4;

/// A total order of the 2^n-2 free subsets compatible with inclusion,
/// listed from lowest to highest rank.
using LinearExtension = std::vector<Mask>;

/// True iff `ext` is a permutation of the free subsets of N in which every
/// subset precedes its strict supersets.
bool is_linear_extension(int n, std::span<const Mask> ext);

/// The free poset (2^N \ {empty, N}, inclusion) with removable elements.
class FreePoset {
public:
    explicit FreePoset(int n);

    int n() const { return n_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool present(Mask m) const { return present_[m]; }
    void remove(Mask m);
    void reinsert(Mask m);

    /// Present elements without a present strict superset, ascending by mask.
    /// Throws std::logic_error on an empty poset.
    std::vector<Mask> maximal_elements() const;

private:
    int n_;
    std::size_t size_;
    std::vector<char> present_;
};

/// Element that must be ranked below another: mu(dominated) <= mu(dominant).
struct DominancePair {
    Mask dominated;
    Mask dominant;
    friend bool operator==(const DominancePair&, const DominancePair&) = default;
};

/// Depth-first enumeration over maximal elements (top of the extension
/// first). Each complete extension is passed to `visit`. Dominance pairs
/// hold a dominated subset out of the maximal set while its dominant is
/// still present. Returns the number of extensions visited.
std::uint64_t for_each_linear_extension(int n, std::span<const DominancePair> pairs,
                                        const std::function<void(const LinearExtension&)>& visit);

/// All linear extensions of the free poset. Refuses n > 4.
std::vector<LinearExtension> enumerate_linear_extensions(int n);

/// Counts extensions without storing them.
std::uint64_t count_linear_extensions(int n);

/// Assigns sorted i.i.d. uniforms along `ext`: the value at position i is the
/// i-th smallest draw.
Capacity capacity_from_extension(int n, std::span<const Mask> ext, Rng& rng);

/// Exact uniform capacity generator: uniform extension + sorted uniforms.
std::vector<Capacity> ecg_sample(int n, std::span<const LinearExtension> extensions, std::size_t count,
                                 Rng& rng);

/// Position-frequency counts over a set of extensions:
/// counts[mask][rank] for rank in 1..2^n-2 (index 0 unused).
std::vector<std::vector<std::uint64_t>> rank_frequencies(int n, std::span<const LinearExtension> extensions);

/// One extension per line as a JSON list of masks.
void write_extensions_jsonl(std::ostream& out, std::span<const LinearExtension> extensions);

}  // namespace capgen
