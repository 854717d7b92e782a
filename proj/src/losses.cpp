#include "sporc/losses.hpp"

#include <cmath>
#include <limits>

#include "sporc/errors.hpp"

namespace sporc {

namespace {

const Eigen::VectorXd& require_optimal(const Solution& sol, const char* what) {
    if (sol.status != SolveStatus::Optimal)
        throw InfeasibleError(std::string(what) + ": subproblem not solved to optimality");
    return sol.w;
}

}  // namespace

double CostBox::max_abs() const {
    return std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff());
}

CostBox CostBox::fit(const Dataset& data, double margin) {
    if (data.samples.empty()) throw EmptyPart("CostBox::fit: no samples");
    const int d = static_cast<int>(data.samples.front().c.size());
    CostBox box;
    box.lo = data.samples.front().c;
    box.hi = data.samples.front().c;
    for (const auto& s : data.samples) {
        box.lo = box.lo.cwiseMin(s.c);
        box.hi = box.hi.cwiseMax(s.c);
    }
    for (int j = 0; j < d; ++j) {
        double span = box.hi[j] - box.lo[j];
        double pad = margin * (span > 0 ? span : std::max(1.0, std::abs(box.hi[j])));
        box.lo[j] -= pad;
        box.hi[j] += pad;
    }
    return box;
}

double delta_bound(const RobustProblem& prob, const CostBox& box) {
    // rho1 = max ||w||_1 over the fixed feasible set: exactly 1 for the
    // simplex-constrained families, unbounded for the covering family.
    if (prob.family == Family::AlloyCovering)
        return std::numeric_limits<double>::infinity();
    return 2.0 * box.max_abs();
}

double cost_metric(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                   const Eigen::VectorXd& c, const BallUncertainty& U) {
    const double sg = to_min_sign(prob);
    Solution sol = solve_min(prob, sg * c_hat, U);
    return (sg * c).dot(require_optimal(sol, "cost_metric"));
}

double cost_plus(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                 const Eigen::VectorXd& c, const BallUncertainty& U) {
    const double sg = to_min_sign(prob);
    const Eigen::VectorXd ct = sg * c, cht = sg * c_hat;
    Solution flipped = solve_min(prob, 2.0 * cht - ct, U);
    require_optimal(flipped, "cost_plus");
    Solution anchor = solve_min(prob, ct, U);
    require_optimal(anchor, "cost_plus");
    return -flipped.objective + 2.0 * cht.dot(anchor.w);
}

Eigen::VectorXd subgrad_cost_plus(const RobustProblem& prob,
                                  const Eigen::VectorXd& c_hat,
                                  const Eigen::VectorXd& c,
                                  const BallUncertainty& U) {
    const double sg = to_min_sign(prob);
    const Eigen::VectorXd ct = sg * c, cht = sg * c_hat;
    Solution anchor = solve_min(prob, ct, U);
    Solution flipped = solve_min(prob, 2.0 * cht - ct, U);
    return 2.0 * (require_optimal(anchor, "subgrad_cost_plus") -
                  require_optimal(flipped, "subgrad_cost_plus"));
}

double hindsight_value(const RobustProblem& prob, const Eigen::VectorXd& c,
                       const std::vector<Eigen::VectorXd>& a_rows) {
    const double sg = to_min_sign(prob);
    Solution sol = solve_min(prob, sg * c, singleton_at(a_rows));
    require_optimal(sol, "hindsight_value");
    return sol.objective;
}

double spo_rc_loss(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                   const Eigen::VectorXd& c,
                   const std::vector<Eigen::VectorXd>& a_rows,
                   const BallUncertainty& U, double delta) {
    if (!U.contains(a_rows)) return delta;
    return cost_metric(prob, c_hat, c, U) - hindsight_value(prob, c, a_rows);
}

double spo_rc_plus_loss(const RobustProblem& prob, const Eigen::VectorXd& c_hat,
                        const Eigen::VectorXd& c,
                        const std::vector<Eigen::VectorXd>& a_rows,
                        const BallUncertainty& U) {
    return cost_plus(prob, c_hat, c, U) - hindsight_value(prob, c, a_rows);
}

}  // namespace sporc
