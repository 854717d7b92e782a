#pragma once

#include "sporc/robust.hpp"

namespace sporc {

/// Componentwise interval bounds on plausible cost vectors, fitted from
/// observed costs with a relative margin. Used only to bound the
/// worst-case regret spread for the fallback loss branch.
struct CostBox {
    Eigen::VectorXd lo, hi;

    double max_abs() const;
    static CostBox fit(const Dataset& data, double margin = 0.10);
};

/// Upper bound on the decision-value spread sup_{c in box, w, w' feasible}
/// c'(w - w') via Holder: 2 * max|c|_inf * max ||w||_1. The simplex
/// families have ||w||_1 = 1 exactly; the covering family's feasible set
/// is unbounded, so the bound degenerates to +inf there.
double delta_bound(const RobustProblem& prob, const CostBox& box);

/// All scalar losses below are reported in the internal minimization
/// orientation: maximization families enter with costs negated, so
/// "smaller is better" and the surrogate dominance cost <= cost-plus holds
/// uniformly. The native realized value is to_min_sign(prob) * value.

/// Realized decision value c'w*(c_hat, U) under the internal orientation.
double cost_metric(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                   const Eigen::VectorXd& c, const BallUncertainty& U);

/// Convex surrogate max_w {(c - 2 c_hat)'w} + 2 c_hat'w*(c, U), internal
/// orientation. Upper-bounds cost_metric and is tight at c_hat = c.
double cost_plus(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                 const Eigen::VectorXd& c, const BallUncertainty& U);

/// Subgradient of cost_plus in the internal predicted-cost coordinates:
/// 2 (w*(c, U) - w*(2 c_hat - c, U)).
Eigen::VectorXd subgrad_cost_plus(const RobustProblem& prob,
                                  const Eigen::VectorXd& c_hat,
                                  const Eigen::VectorXd& c,
                                  const BallUncertainty& U);

/// Hindsight optimum value c'w*(c, singleton at a), internal orientation.
double hindsight_value(const RobustProblem& prob, const Eigen::VectorXd& c,
                       const std::vector<Eigen::VectorXd>& a_rows);

/// Excess decision value over hindsight when the realized rows are covered
/// by U; the worst-case spread `delta` otherwise.
double spo_rc_loss(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                   const Eigen::VectorXd& c,
                   const std::vector<Eigen::VectorXd>& a_rows,
                   const BallUncertainty& U, double delta);

/// Surrogate counterpart: cost_plus minus the hindsight value.
double spo_rc_plus_loss(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                        const Eigen::VectorXd& c,
                        const std::vector<Eigen::VectorXd>& a_rows,
                        const BallUncertainty& U);

}  // namespace sporc
