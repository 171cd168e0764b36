#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/lp.hpp"

namespace capgen {

constexpr double kDefaultEpsilon = 0.001;
constexpr double kIndifferenceTol = 1e-9;

/// Preference statements on alternatives: strict (a, b) means a is
/// preferred to b by at least epsilon; indifferent pairs have equal
/// Choquet values.
struct PreferenceSystem {
    int n = 0;
    std::vector<Alternative> alternatives;
    std::vector<std::pair<int, int>> strict;
    std::vector<std::pair<int, int>> indifferent;
    double epsilon = kDefaultEpsilon;

    /// Throws std::invalid_argument on bad indices, epsilon <= 0, dimension
    /// mismatches, or a pair that is both strict and indifferent.
    void validate() const;

    /// Binary-alternative system: each (better, worse) pair of subsets
    /// becomes a strict preference a_better > a_worse.
    static PreferenceSystem binary(int n, const std::vector<std::pair<Mask, Mask>>& better_worse,
                                   double epsilon = kDefaultEpsilon);
};

bool satisfies_SR(const Capacity& mu, const PreferenceSystem& prefs);

struct Interval {
    double lo;
    double hi;
};

/// Bounds on single coefficients and on pairwise differences
/// mu(S) - mu(S') keyed with Ord(S) < Ord(S').
class ConstraintSystem {
public:
    /// Vacuous system: [0,1] on every coefficient and [-1,1] on every difference.
    explicit ConstraintSystem(int n);

    int n() const { return n_; }
    const CardLexOrder& order() const { return order_; }

    Interval single(Mask s) const { return single_[s]; }
    void set_single(Mask s, Interval v);

    /// Bounds on mu(a) - mu(b); either argument order is accepted and the
    /// stored canonical interval is mirrored when Ord(a) > Ord(b).
    Interval pair(Mask a, Mask b) const;
    void set_pair(Mask a, Mask b, Interval v);
    /// Narrows the stored interval to its intersection with v.
    void tighten_pair(Mask a, Mask b, Interval v);

    /// R(a, b): an upper bound on mu(a) - mu(b). R <= 0 forces mu(a) <= mu(b).
    double order_gap(Mask a, Mask b) const { return pair(a, b).hi; }

    /// Coefficients pinned to a constant (single lo == hi).
    std::vector<Mask> fixed() const;

    /// Whether no bound is tighter than the vacuous one.
    bool vacuous() const;

private:
    std::size_t key(Mask a, Mask b) const { return (static_cast<std::size_t>(a) << n_) | b; }

    int n_;
    CardLexOrder order_;
    std::vector<Interval> single_;
    std::vector<Interval> pair_;
};

/// Exact check of every stored bound.
bool satisfies_SC(const Capacity& mu, const ConstraintSystem& sc);

class InfeasiblePreferences : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DeriveReport {
    std::size_t lps_solved = 0;
    double worst_residual = 0.0;
    double worst_duality_gap = 0.0;
};

/// LP over the free coefficients: preferences (strict with epsilon,
/// indifferences as equalities), monotonicity on covering pairs and
/// 0 <= mu(S) <= 1. The objective is left at zero.
lp::LinearProgram preference_lp(const PreferenceSystem& prefs);

/// Minimizes and maximizes every coefficient and every pairwise difference.
/// Throws InfeasiblePreferences if the preferences admit no capacity.
ConstraintSystem derive_SC(const PreferenceSystem& prefs, DeriveReport* report = nullptr);

/// Preference file: {"n", "alternatives", "strict", "indifferent", "epsilon"}.
void write_preferences_json(std::ostream& out, const PreferenceSystem& prefs);
PreferenceSystem read_preferences_json(std::istream& in);

/// Constraint file: {"n", "single": {"<mask>": [lo, hi]}, "pair": {"<mask>,<mask>": [lo, hi]}, "fixed": [...]}.
void write_constraints_json(std::ostream& out, const ConstraintSystem& sc);
ConstraintSystem read_constraints_json(std::istream& in);

}  // namespace capgen
