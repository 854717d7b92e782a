#pragma once

#include "sporc/conformal.hpp"

namespace sporc {

struct TruncationResult {
    Dataset kept;
    std::vector<int> kept_indices;  ///< positions in the input dataset
    int removed = 0;
};

/// Drop every sample whose realized constraint rows fall outside its
/// conformal ball. Models selective observation: records incompatible with
/// the nominal uncertainty set never reach the training table. Throws
/// AllTruncated when nothing survives.
TruncationResult truncate_outside_set(const ConformalCalibrator& cal,
                                      const Dataset& data, double tol = 1e-9);

/// Drop a random fraction of the samples whose first feature lies in
/// [lo, hi]. Used by the unconstrained toy problem, where truncation is a
/// pure covariate-shift device rather than set membership.
TruncationResult truncate_interval_random(const Dataset& data, double lo,
                                          double hi, double frac,
                                          std::uint64_t seed);

struct KmmConfig {
    double upper = 1000.0;  ///< per-sample weight cap
    double eps = -1.0;      ///< sum-band half-width; <0 means (sqrt(n)-1)/sqrt(n)
    double bandwidth = 1.0; ///< Gaussian kernel scale on standardized features
    double ridge_rel = 1e-8;
};

struct ImportanceWeights {
    Eigen::VectorXd beta;  ///< one weight per source sample
    double eps = 0.0;
    int iters = 0;
};

/// K(i, j) = exp(-||r_i - c_j||^2 / bandwidth^2) for rows of R and C.
Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& R,
                                const Eigen::MatrixXd& C, double bandwidth);

/// Kernel mean matching: weights beta on the source features so the
/// weighted source mean embedding matches the target's. Solves
///   min 0.5 b'Kb - k'b,  0 <= b <= upper,  |sum(b) - n_s| <= n_s * eps
/// with K the source kernel matrix and k_i = (n_s/n_t) sum_j K(s_i, t_j).
/// Features are standardized with moments of source and target combined.
ImportanceWeights kmm_weights(const std::vector<Eigen::VectorXd>& source_x,
                              const std::vector<Eigen::VectorXd>& target_x,
                              const KmmConfig& cfg = {});

/// Convenience overload over dataset feature columns.
ImportanceWeights kmm_weights(const Dataset& source, const Dataset& target,
                              const KmmConfig& cfg = {});

}  // namespace sporc
