#include "sporc/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sporc {

double norm_of(const Eigen::VectorXd& v, Norm norm) {
    return norm == Norm::L2 ? v.norm() : v.lpNorm<1>();
}

bool BallUncertainty::contains(const std::vector<Eigen::VectorXd>& rows,
                               double tol) const {
    if (static_cast<Eigen::Index>(rows.size()) != center.rows()) return false;
    for (Eigen::Index j = 0; j < center.rows(); ++j) {
        if (std::isinf(radius[j])) continue;
        const Eigen::VectorXd diff = rows[static_cast<std::size_t>(j)] -
                                     center.row(j).transpose();
        if (norm_of(diff, norm) > radius[j] + tol) return false;
    }
    return true;
}

BallUncertainty ConformalCalibrator::uncertainty_set(
    const Eigen::VectorXd& x) const {
    BallUncertainty u;
    u.center = predictor.predict(x);
    u.radius = quantiles;
    u.norm = norm;
    return u;
}

std::vector<double> nonconformity_scores(const MLPPredictor& model,
                                         const Dataset& calib, Norm norm,
                                         int row) {
    if (row < 0 || row >= calib.dims.m)
        throw DimMismatch("nonconformity_scores: row " + std::to_string(row) +
                          " out of range for m=" + std::to_string(calib.dims.m));
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(calib.size()));
    for (const auto& s : calib.samples) {
        const Eigen::MatrixXd pred = model.predict(s.x);
        const Eigen::VectorXd diff =
            s.a[static_cast<std::size_t>(row)] - pred.row(row).transpose();
        scores.push_back(norm_of(diff, norm));
    }
    return scores;
}

double conformal_quantile(std::vector<double> scores, double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw ConfigError("conformal_quantile: alpha must lie in (0,1)");
    const auto n = static_cast<long>(scores.size());
    const long k = static_cast<long>(
        std::ceil((static_cast<double>(n) + 1.0) * (1.0 - alpha)));
    if (k > n) return std::numeric_limits<double>::infinity();
    std::nth_element(scores.begin(), scores.begin() + (k - 1), scores.end());
    return scores[static_cast<std::size_t>(k - 1)];
}

ConformalCalibrator calibrate(const MLPPredictor& model, const Dataset& calib,
                              double alpha, Norm norm) {
    calib.validate();
    ConformalCalibrator cal;
    cal.predictor = model;
    cal.alpha = alpha;
    cal.norm = norm;
    cal.quantiles.resize(calib.dims.m);
    for (int j = 0; j < calib.dims.m; ++j)
        cal.quantiles[j] =
            conformal_quantile(nonconformity_scores(model, calib, norm, j), alpha);
    return cal;
}

double empirical_coverage(const ConformalCalibrator& cal, const Dataset& test) {
    if (test.size() == 0) return 0.0;
    int covered = 0;
    for (const auto& s : test.samples)
        if (cal.uncertainty_set(s.x).contains(s.a)) ++covered;
    return static_cast<double>(covered) / test.size();
}

}  // namespace sporc
