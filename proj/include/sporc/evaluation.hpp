#pragma once

#include <array>
#include <limits>
#include <string>

#include "sporc/losses.hpp"

namespace sporc {

/// One metric row: a method ("mse", "spo-rc-plus", "pto") evaluated on one
/// dataset variant ("O" original, "T" truncated, "IR" reweighted).
struct ExperimentReport {
    std::string method;
    std::string variant;
    double norm_test_pct = 0.0;
    double infeasible_pct = 0.0;
    int n_test = 0;
    int n_skipped = 0;      ///< test samples with no hindsight optimum
    int n_no_decision = 0;  ///< robust subproblem infeasible; loss penalized
    double train_s = 0.0;
    double eval_s = 0.0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

/// Scoring of a test sample whose induced decision cannot be scored as
/// plain excess value: when the robust subproblem is infeasible or the
/// decision violates the realized constraints, charge |hindsight|
/// (PenaltyAbsHindsight); when the realized rows escape the uncertainty
/// set, optionally charge a fixed worst-case spread instead (DeltaBound).
enum class FallbackRule { PenaltyAbsHindsight, DeltaBound };

struct EvalOptions {
    /// false replaces the calibrated set with a singleton at the predicted
    /// rows: the predict-then-optimize baseline.
    bool use_uncertainty = true;
    FallbackRule fallback = FallbackRule::PenaltyAbsHindsight;
    double delta = std::numeric_limits<double>::infinity();
};

/// Per-sample scoring detail, aligned with the test set by index.
/// infeasible_pct counts only emitted decisions that violate the realized
/// rows; samples where the robust subproblem has no solution at all are
/// charged the loss penalty but tracked separately as no_decision.
struct EvalBreakdown {
    std::vector<double> loss;       ///< internal-orientation excess value
    std::vector<double> hind_abs;   ///< |hindsight value|
    std::vector<char> infeasible;   ///< decision violates realized rows
    std::vector<char> no_decision;  ///< subproblem infeasible, nothing emitted
    std::vector<char> skipped;      ///< hindsight itself unsolvable; excluded
    int n_eval = 0;
    int n_skipped = 0;
    int n_no_decision = 0;
    double norm_pct = 0.0;
    double infeasible_pct = 0.0;
};

/// Scores every test sample: hindsight solve at the realized rows, induced
/// decision from the model (robust or singleton per options), realized
/// excess value with the fallback rule above. The headline metric is
/// 100 * sum(loss) / sum(|hindsight|).
EvalBreakdown evaluate_model(const LinearCostModel& model, const Dataset& test,
                             const ConformalCalibrator& cal,
                             const RobustProblem& prob,
                             const EvalOptions& opt = {});

double norm_spo_rc_test(const LinearCostModel& model, const Dataset& test,
                        const ConformalCalibrator& cal,
                        const RobustProblem& prob, const EvalOptions& opt = {});

double infeasibility_pct(const LinearCostModel& model, const Dataset& test,
                         const ConformalCalibrator& cal,
                         const RobustProblem& prob, bool use_uncertainty);

/// The normalized metric restricted to the three context regions cut at
/// the given boundaries: x <= b1, b1 < x <= b2, x > b2 (scalar contexts).
std::array<double, 3> region_regret(const LinearCostModel& model,
                                    const Dataset& test,
                                    const ConformalCalibrator& cal,
                                    const RobustProblem& prob,
                                    std::pair<double, double> boundaries,
                                    const EvalOptions& opt = {});

/// What a model would give up by deciding wrong throughout one region: the
/// weighted |c_1 - c_2| gap summed over that region's samples, as a
/// percentage of the weighted hindsight total over the whole dataset. The
/// region with the smallest value is the cheapest for a single-boundary
/// policy to sacrifice, so it marks where a capacity-limited model errs.
/// weights may be null (all ones). Two-item scalar-context datasets only.
std::array<double, 3> region_sacrifice(const Dataset& data,
                                       const Eigen::VectorXd* weights,
                                       std::pair<double, double> boundaries);

}  // namespace sporc
