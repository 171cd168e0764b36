#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace capgen {

constexpr int kMinCriteria = 2;
constexpr int kMaxCriteria = 8;

/// Throws std::invalid_argument unless 2 <= n <= 8.
void check_ground_size(int n);

/// Subset of N = {1..n} as a bitmask: bit i set iff criterion i+1 belongs to it.
using Mask = std::uint32_t;

class SubsetId {
public:
    SubsetId(int n, Mask mask);

    int n() const { return n_; }
    Mask mask() const { return mask_; }
    int cardinality() const { return std::popcount(mask_); }
    Mask full() const { return (Mask{1} << n_) - 1; }
    SubsetId complement() const { return SubsetId(n_, full() & ~mask_); }
    bool is_free() const { return mask_ != 0 && mask_ != full(); }
    bool subset_of(const SubsetId& other) const { return (mask_ & ~other.mask_) == 0; }

    /// "{1,3}" style label; the empty set is "{}" and the ground set "N".
    std::string label() const;

    friend bool operator==(const SubsetId&, const SubsetId&) = default;

private:
    int n_;
    Mask mask_;
};

inline Mask full_mask(int n) { return (Mask{1} << n) - 1; }
inline std::size_t lattice_size(int n) { return std::size_t{1} << n; }
/// Number of free subsets (all but the empty and the ground set).
inline std::size_t free_count(int n) { return lattice_size(n) - 2; }
inline bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }
inline int popcount(Mask m) { return std::popcount(m); }

std::string subset_label(int n, Mask mask);
/// Inverse of subset_label. Throws std::invalid_argument on malformed text.
Mask parse_subset_label(int n, const std::string& text);

/// Cardinal-lexicographic order of the free subsets: by cardinality, then
/// lexicographically on the sorted element lists. Positions run 1..2^n-2.
class CardLexOrder {
public:
    explicit CardLexOrder(int n);

    int n() const { return n_; }
    /// Position of a free subset, 1-based.
    int ord(Mask mask) const { return rank_[mask]; }
    /// Free subset at 1-based position.
    Mask at(int position) const { return order_[position - 1]; }
    /// Free subsets in order.
    std::span<const Mask> free_subsets() const { return order_; }
    /// All 2^n subsets: empty set first, then the free subsets, then N.
    std::vector<Mask> all_subsets() const;

private:
    int n_;
    std::vector<int> rank_;
    std::vector<Mask> order_;
};

/// Score vector x in [0,1]^n.
class Alternative {
public:
    explicit Alternative(std::vector<double> scores);

    int n() const { return static_cast<int>(scores_.size()); }
    std::span<const double> scores() const { return scores_; }
    double operator[](int i) const { return scores_[i]; }

    /// Indicator vector of B (1 on B, 0 elsewhere).
    static Alternative binary(int n, Mask b);

private:
    std::vector<double> scores_;
};

/// Monotone set function with mu(empty)=0 and mu(N)=1, stored densely by mask.
class Capacity {
public:
    /// Validates normalization and monotonicity; throws std::invalid_argument.
    Capacity(int n, std::vector<double> values);

    /// Additive capacity mu(S) = |S|/n.
    static Capacity uniform_additive(int n);

    /// Skips validation. Only for generators that build monotone values by
    /// construction.
    static Capacity trusted(int n, std::vector<double> values);

    int n() const { return n_; }
    double operator[](Mask s) const { return values_[s]; }
    double at(const SubsetId& s) const { return values_[s.mask()]; }
    std::span<const double> values() const { return values_; }

    /// Dual capacity nu(S) = 1 - mu(N \ S).
    Capacity dual() const;

    friend bool operator==(const Capacity&, const Capacity&) = default;

private:
    Capacity(int n, std::vector<double> values, bool);

    int n_;
    std::vector<double> values_;
};

/// Choquet integral of x with respect to mu. Throws std::invalid_argument
/// on dimension mismatch.
double choquet(const Capacity& mu, const Alternative& x);

/// Linear form of the Choquet integral in the capacity coefficients:
/// choquet(mu, x) = constant + sum coef[S] * mu(S) over free S. The
/// coefficient of N is folded into the constant (mu(N) = 1).
struct ChoquetForm {
    std::vector<double> coef;  ///< indexed by mask, zero at empty set and N
    double constant = 0.0;
};
ChoquetForm choquet_form(const Alternative& x);

/// Exact normalization plus covering-pair monotonicity check.
bool is_monotone(std::span<const double> values);

struct RankRange {
    int lo;
    int hi;
    friend bool operator==(const RankRange&, const RankRange&) = default;
};

/// Smallest and largest rank of a free subset over all linear extensions:
/// (2^|S| - 1, 2^n - 1 - 2^|N\S|). Throws for S in {empty, N}.
RankRange unconditional_rank_bounds(const SubsetId& s);

/// Capacity CSV: header of subset labels in cardinal-lex order with "{}"
/// first and "N" last, one capacity per row, 17 significant digits.
void write_capacity_csv(std::ostream& out, int n, std::span<const Capacity> caps);
/// Throws std::runtime_error on malformed input.
std::vector<Capacity> read_capacity_csv(std::istream& in);

}  // namespace capgen
