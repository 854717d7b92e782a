#pragma once

#include "sporc/conformal.hpp"
#include "sporc/conic.hpp"

namespace sporc {

/// Decision problem families sharing the schema "costs on d items,
/// uncertain constraint rows":
///  - FractionalKnapsack: max c'w, a'w <= b for all a in U, sum w = 1,
///    0 <= w <= 1. An L2 ball turns the capacity into a second-order cone
///    constraint; an L1 ball adds Q * max|w_i| via an epigraph variable.
///  - AlloyCovering: min c'w, a_j'w >= h_j for all a_j in U_j, w >= 0.
///  - CapacitySimplex: max c'w on the simplex with per-item caps w_i <= a_i
///    for all a in U, which robustly tightens each cap by the radius.
enum class Family { FractionalKnapsack, AlloyCovering, CapacitySimplex };

struct RobustProblem {
    Family family = Family::FractionalKnapsack;
    int d = 0;
    double b = 20.0;     ///< knapsack capacity
    Eigen::VectorXd h;   ///< alloy requirements, length = constraint rows

    int rows() const {
        return family == Family::AlloyCovering ? static_cast<int>(h.size()) : 1;
    }
    bool maximize() const { return family != Family::AlloyCovering; }
};

/// -1 when the native problem maximizes (so internal solves negate costs).
double to_min_sign(const RobustProblem& prob);

struct Solution {
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXd w;
    double objective = 0.0;  ///< native-orientation c'w
};

/// Robust counterpart solve with native-orientation costs.
Solution solve_robust(const RobustProblem& prob, const Eigen::VectorXd& c,
                      const BallUncertainty& U);

/// Same feasible set, but minimizing an arbitrary internal-orientation
/// objective v. objective holds v'w. Used by the surrogate-loss plumbing.
Solution solve_min(const RobustProblem& prob, const Eigen::VectorXd& v,
                   const BallUncertainty& U);

/// Solve against a point estimate of the constraint rows (radius zero).
Solution solve_singleton(const RobustProblem& prob, const Eigen::VectorXd& c,
                         const Eigen::MatrixXd& a_rows);

/// Singleton uncertainty at the given rows.
BallUncertainty singleton_at(const Eigen::MatrixXd& a_rows, Norm norm = Norm::L2);
BallUncertainty singleton_at(const std::vector<Eigen::VectorXd>& a_rows,
                             Norm norm = Norm::L2);

/// Does w satisfy the fixed constraints and the realized uncertain ones?
bool check_feasible(const RobustProblem& prob, const Eigen::VectorXd& w,
                    const std::vector<Eigen::VectorXd>& a_rows,
                    double tol = 1e-8);

}  // namespace sporc
