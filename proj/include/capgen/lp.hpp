#pragma once

#include <string>
#include <vector>

namespace capgen::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Minimize, Maximize };

struct Constraint {
    std::vector<double> coef;
    Relation rel;
    double rhs;
};

/// Dense LP over non-negative variables. `upper` (if non-empty) adds
/// x_j <= upper[j] for every variable.
struct LinearProgram {
    std::size_t num_vars = 0;
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<double> upper;

    explicit LinearProgram(std::size_t vars = 0) : num_vars(vars), objective(vars, 0.0) {}

    /// Throws std::invalid_argument on inconsistent dimensions.
    void validate() const;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> dual;     ///< one multiplier per constraint row (then per upper bound)
    double duality_gap = 0.0;     ///< |primal - dual objective|
    double max_residual = 0.0;    ///< largest constraint violation of x
};

/// Two-phase dense tableau simplex with Bland's rule.
Solution solve(const LinearProgram& lp);

std::string to_string(Status s);

/// Largest violation of lp's constraints (including x >= 0 and upper bounds) by x.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace capgen::lp
