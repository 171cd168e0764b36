#include "capgen/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capgen::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr double kZero = 1e-13;

struct Row {
    std::vector<double> coef;
    Relation rel;
    double rhs;
    double flip;  // -1 when the row was negated to make rhs >= 0
};

class Tableau {
public:
    Tableau(std::size_t vars, const std::vector<Row>& rows) : vars_(vars), rows_(rows.size()) {
        std::size_t slacks = 0, artificials = 0;
        for (const auto& r : rows) {
            if (r.rel != Relation::Equal) ++slacks;
            if (r.rel != Relation::LessEqual) ++artificials;
        }
        slack_begin_ = vars;
        art_begin_ = vars + slacks;
        cols_ = art_begin_ + artificials;
        t_.assign(rows_ + 1, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(rows_, 0);
        identity_.assign(rows_, 0);
        std::size_t s = slack_begin_, a = art_begin_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto& r = rows[i];
            std::copy(r.coef.begin(), r.coef.end(), t_[i].begin());
            t_[i][cols_] = r.rhs;
            switch (r.rel) {
                case Relation::LessEqual:
                    t_[i][s] = 1.0;
                    basis_[i] = identity_[i] = s++;
                    break;
                case Relation::GreaterEqual:
                    t_[i][s++] = -1.0;
                    t_[i][a] = 1.0;
                    basis_[i] = identity_[i] = a++;
                    break;
                case Relation::Equal:
                    t_[i][a] = 1.0;
                    basis_[i] = identity_[i] = a++;
                    break;
            }
        }
    }

    bool is_artificial(std::size_t j) const { return j >= art_begin_ && j < cols_; }

    /// Loads costs (size cols_) into the objective row as reduced costs.
    void set_costs(const std::vector<double>& c) {
        cost_ = c;
        auto& z = t_[rows_];
        for (std::size_t j = 0; j <= cols_; ++j) z[j] = j < cols_ ? c[j] : 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) z[j] -= cb * t_[i][j];
        }
    }

    /// Minimizes the loaded costs. Returns false when unbounded.
    bool optimize(bool allow_artificial) {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!allow_artificial && is_artificial(j)) continue;
                if (t_[rows_][j] < -kPivotTol) {
                    enter = j;  // Bland: lowest index
                    break;
                }
            }
            if (enter == cols_) return true;
            std::size_t leave = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                double a = t_[i][enter];
                if (a <= kPivotTol) continue;
                double ratio = t_[i][cols_] / a;
                if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        double p = t_[r][c];
        for (double& v : t_[r]) v /= p;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            double f = t_[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                t_[i][j] -= f * t_[r][j];
                if (std::abs(t_[i][j]) < kZero) t_[i][j] = 0.0;
            }
        }
        basis_[r] = c;
    }

    /// Pivots zero-level artificials out of the basis where possible.
    void expel_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) continue;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (std::abs(t_[i][j]) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    double objective() const { return -t_[rows_][cols_]; }

    std::vector<double> primal() const {
        std::vector<double> x(vars_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < vars_) x[basis_[i]] = t_[i][cols_];
        }
        return x;
    }

    /// y = c_B B^{-1}; column identity_[i] of the final tableau holds B^{-1} e_i.
    std::vector<double> duals() const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k < rows_; ++k) sum += cost_[basis_[k]] * t_[k][identity_[i]];
            y[i] = sum;
        }
        return y;
    }

    std::size_t cols() const { return cols_; }

private:
    std::size_t vars_, rows_, cols_ = 0, slack_begin_ = 0, art_begin_ = 0;
    std::vector<std::vector<double>> t_;
    std::vector<std::size_t> basis_, identity_;
    std::vector<double> cost_;
};

}  // namespace

void LinearProgram::validate() const {
    if (objective.size() != num_vars) throw std::invalid_argument("LP objective has wrong length");
    if (!upper.empty() && upper.size() != num_vars) throw std::invalid_argument("LP upper bounds have wrong length");
    for (const auto& c : constraints) {
        if (c.coef.size() != num_vars) throw std::invalid_argument("LP constraint has wrong length");
    }
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        worst = std::max(worst, -x[j]);
        if (!lp.upper.empty()) worst = std::max(worst, x[j] - lp.upper[j]);
    }
    for (const auto& c : lp.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < lp.num_vars; ++j) lhs += c.coef[j] * x[j];
        switch (c.rel) {
            case Relation::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
            case Relation::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
            case Relation::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
        }
    }
    return worst;
}

Solution solve(const LinearProgram& lp) {
    lp.validate();
    std::vector<Row> rows;
    for (const auto& c : lp.constraints) rows.push_back({c.coef, c.rel, c.rhs, 1.0});
    for (std::size_t j = 0; j < lp.upper.size(); ++j) {
        std::vector<double> e(lp.num_vars, 0.0);
        e[j] = 1.0;
        rows.push_back({std::move(e), Relation::LessEqual, lp.upper[j], 1.0});
    }
    for (auto& r : rows) {
        if (r.rhs < 0.0) {
            for (double& v : r.coef) v = -v;
            r.rhs = -r.rhs;
            r.flip = -1.0;
            if (r.rel == Relation::LessEqual) r.rel = Relation::GreaterEqual;
            else if (r.rel == Relation::GreaterEqual) r.rel = Relation::LessEqual;
        }
    }

    Tableau tab(lp.num_vars, rows);
    Solution sol;

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(tab.cols(), 0.0);
    for (std::size_t j = 0; j < tab.cols(); ++j) {
        if (tab.is_artificial(j)) phase1[j] = 1.0;
    }
    tab.set_costs(phase1);
    tab.optimize(true);
    if (tab.objective() > kFeasTol) {
        sol.status = Status::Infeasible;
        return sol;
    }
    tab.expel_artificials();

    // Phase 2 minimizes; a maximization is run on negated costs.
    const double sign = lp.sense == Sense::Maximize ? -1.0 : 1.0;
    std::vector<double> costs(tab.cols(), 0.0);
    for (std::size_t j = 0; j < lp.num_vars; ++j) costs[j] = sign * lp.objective[j];
    tab.set_costs(costs);
    if (!tab.optimize(false)) {
        sol.status = Status::Unbounded;
        return sol;
    }

    sol.status = Status::Optimal;
    sol.x = tab.primal();
    sol.value = sign * tab.objective();
    auto y = tab.duals();
    double dual_obj = 0.0;
    sol.dual.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        dual_obj += y[i] * rows[i].rhs;
        sol.dual[i] = sign * y[i] * rows[i].flip;
    }
    sol.duality_gap = std::abs(sign * dual_obj - sol.value);
    sol.max_residual = max_violation(lp, sol.x);
    return sol;
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

}  // namespace capgen::lp
