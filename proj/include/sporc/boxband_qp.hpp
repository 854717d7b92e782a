#pragma once

#include <Eigen/Dense>

namespace sporc {

/// Convex QP with box bounds and one coupled sum constraint:
///   min 0.5 x'P x + q'x,   lower <= x <= upper,   band_lo <= sum(x) <= band_hi.
/// band_lo == band_hi is treated as an equality. P must be positive
/// semidefinite.
struct BoxBandQp {
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    double band_lo = 0.0;
    double band_hi = 0.0;
};

struct QpResult {
    bool ok = false;
    Eigen::VectorXd x;
    int iters = 0;
    double kkt_resid = 0.0;  ///< max stationarity/feasibility residual at exit
};

/// Dense primal-dual interior-point solve (Mehrotra corrector). The Newton
/// matrix is P plus a positive diagonal and a rank-one band term, factored
/// with a Cholesky per iteration, so cost is one n^3/3 factor per step.
QpResult solve_boxband_qp(const BoxBandQp& qp);

}  // namespace sporc
