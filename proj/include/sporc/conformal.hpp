#pragma once

#include <vector>

#include "sporc/dataset.hpp"
#include "sporc/predictor.hpp"

namespace sporc {

enum class Norm { L1, L2 };

double norm_of(const Eigen::VectorXd& v, Norm norm);

/// Per-row norm balls around predicted constraint rows. A radius may be
/// +inf, meaning the whole space (small-sample fallback of the quantile).
struct BallUncertainty {
    Eigen::MatrixXd center;   // m x d
    Eigen::VectorXd radius;   // length m
    Norm norm = Norm::L2;

    /// True when every constraint row lies inside its ball (with slack tol).
    bool contains(const std::vector<Eigen::VectorXd>& rows,
                  double tol = 1e-9) const;
};

/// Split-conformal calibration: residual norms on a held-out part give one
/// quantile per constraint row; the uncertainty set at a context is the
/// ball of that radius around the predictor output.
struct ConformalCalibrator {
    MLPPredictor predictor;
    double alpha = 0.2;
    Norm norm = Norm::L2;
    Eigen::VectorXd quantiles;  // length m

    BallUncertainty uncertainty_set(const Eigen::VectorXd& x) const;
};

/// Residual norms |a_row - prediction_row| over the calibration part.
std::vector<double> nonconformity_scores(const MLPPredictor& model,
                                         const Dataset& calib, Norm norm,
                                         int row);

/// k-th smallest score with k = ceil((n+1)(1-alpha)); +inf when k > n.
double conformal_quantile(std::vector<double> scores, double alpha);

ConformalCalibrator calibrate(const MLPPredictor& model, const Dataset& calib,
                              double alpha, Norm norm);

/// Fraction of samples whose rows are jointly covered by their balls.
double empirical_coverage(const ConformalCalibrator& cal, const Dataset& test);

}  // namespace sporc
