#include "sporc/reweight.hpp"

#include <cmath>

#include "sporc/boxband_qp.hpp"
#include "sporc/rng.hpp"

namespace sporc {

TruncationResult truncate_outside_set(const ConformalCalibrator& cal,
                                      const Dataset& data, double tol) {
    TruncationResult out;
    out.kept.dims = data.dims;
    for (int i = 0; i < data.size(); ++i) {
        const auto& s = data.samples[i];
        if (cal.uncertainty_set(s.x).contains(s.a, tol)) {
            out.kept.samples.push_back(s);
            out.kept_indices.push_back(i);
        } else {
            ++out.removed;
        }
    }
    out.kept.dims.n = out.kept.size();
    if (out.kept.samples.empty())
        throw AllTruncated("truncate_outside_set: every sample removed");
    return out;
}

TruncationResult truncate_interval_random(const Dataset& data, double lo,
                                          double hi, double frac,
                                          std::uint64_t seed) {
    if (frac < 0.0 || frac > 1.0)
        throw ConfigError("truncate_interval_random: frac outside [0, 1]");
    Rng rng(seed);
    TruncationResult out;
    out.kept.dims = data.dims;
    for (int i = 0; i < data.size(); ++i) {
        const auto& s = data.samples[i];
        bool in_window = s.x.size() > 0 && s.x[0] >= lo && s.x[0] <= hi;
        if (in_window && rng.uniform01() < frac) {
            ++out.removed;
            continue;
        }
        out.kept.samples.push_back(s);
        out.kept_indices.push_back(i);
    }
    out.kept.dims.n = out.kept.size();
    if (out.kept.samples.empty())
        throw AllTruncated("truncate_interval_random: every sample removed");
    return out;
}

Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& R,
                                const Eigen::MatrixXd& C, double bandwidth) {
    const double inv = 1.0 / (bandwidth * bandwidth);
    Eigen::VectorXd rn = R.rowwise().squaredNorm();
    Eigen::VectorXd cn = C.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = rn.replicate(1, C.rows()) +
                         cn.transpose().replicate(R.rows(), 1) -
                         2.0 * R * C.transpose();
    return (-inv * d2.cwiseMax(0.0)).array().exp();
}

namespace {

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& xs) {
    Eigen::MatrixXd X(xs.size(), xs.empty() ? 0 : xs[0].size());
    for (int i = 0; i < X.rows(); ++i) X.row(i) = xs[i];
    return X;
}

}  // namespace

ImportanceWeights kmm_weights(const std::vector<Eigen::VectorXd>& source_x,
                              const std::vector<Eigen::VectorXd>& target_x,
                              const KmmConfig& cfg) {
    const int ns = static_cast<int>(source_x.size());
    const int nt = static_cast<int>(target_x.size());
    if (ns == 0 || nt == 0)
        throw EmptyPart("kmm_weights: source and target must be non-empty");

    Eigen::MatrixXd S = stack_rows(source_x), T = stack_rows(target_x);
    if (S.cols() != T.cols())
        throw DimMismatch("kmm_weights: feature dimensions differ");

    // Standardize jointly so the fixed bandwidth is meaningful per feature.
    Eigen::MatrixXd all(ns + nt, S.cols());
    all << S, T;
    Eigen::RowVectorXd mean = all.colwise().mean();
    Eigen::RowVectorXd sd =
        ((all.rowwise() - mean).array().square().colwise().mean())
            .sqrt()
            .matrix()
            .cwiseMax(1e-8);
    auto standardize = [&](Eigen::MatrixXd& X) {
        X = (X.rowwise() - mean).array().rowwise() / sd.array();
    };
    standardize(S);
    standardize(T);

    Eigen::MatrixXd K = gaussian_kernel(S, S, cfg.bandwidth);
    K += (cfg.ridge_rel * K.trace() / ns) *
         Eigen::MatrixXd::Identity(ns, ns);
    Eigen::VectorXd kappa =
        (static_cast<double>(ns) / nt) *
        (gaussian_kernel(S, T, cfg.bandwidth) * Eigen::VectorXd::Ones(nt));

    const double eps =
        cfg.eps >= 0.0 ? cfg.eps : (std::sqrt((double)ns) - 1.0) / std::sqrt((double)ns);

    BoxBandQp qp;
    qp.P = K;
    qp.q = -kappa;
    qp.lower = Eigen::VectorXd::Zero(ns);
    qp.upper = Eigen::VectorXd::Constant(ns, cfg.upper);
    qp.band_lo = ns * (1.0 - eps);
    qp.band_hi = ns * (1.0 + eps);
    QpResult res = solve_boxband_qp(qp);
    if (!res.ok)
        throw Divergence("kmm_weights: weight QP did not converge");

    ImportanceWeights w;
    w.beta = res.x.cwiseMax(0.0);
    w.eps = eps;
    w.iters = res.iters;
    return w;
}

ImportanceWeights kmm_weights(const Dataset& source, const Dataset& target,
                              const KmmConfig& cfg) {
    std::vector<Eigen::VectorXd> sx, tx;
    sx.reserve(source.size());
    tx.reserve(target.size());
    for (const auto& s : source.samples) sx.push_back(s.x);
    for (const auto& s : target.samples) tx.push_back(s.x);
    return kmm_weights(sx, tx, cfg);
}

}  // namespace sporc
