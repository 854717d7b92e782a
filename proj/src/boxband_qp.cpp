#include "sporc/boxband_qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sporc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Inequality block g_i(x) >= 0 with slack s_i and dual z_i. The box rows
// come first (2n of them), then the two band rows when the band is a strict
// interval. Constraint gradients are +-e_i for the box and +-1 for the band,
// so the Newton matrix stays "P + diagonal + scalar * ones ones'".
struct Work {
    VectorXd s, z;
};

double max_step(const VectorXd& v, const VectorXd& dv) {
    double a = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
    return a;
}

}  // namespace

QpResult solve_boxband_qp(const BoxBandQp& qp) {
    const int n = static_cast<int>(qp.q.size());
    const bool equality = std::abs(qp.band_hi - qp.band_lo) <
                          1e-12 * std::max(1.0, std::abs(qp.band_hi));
    const int mi = equality ? 2 * n : 2 * n + 2;

    QpResult out;
    out.x = VectorXd::Zero(n);

    // g(x) stacked as (x - lower, upper - x [, sum - lo, hi - sum]).
    auto eval_g = [&](const VectorXd& x) {
        VectorXd g(mi);
        g.head(n) = x - qp.lower;
        g.segment(n, n) = qp.upper - x;
        if (!equality) {
            const double sx = x.sum();
            g[2 * n] = sx - qp.band_lo;
            g[2 * n + 1] = qp.band_hi - sx;
        }
        return g;
    };
    // Accumulate A' v for the stacked constraint matrix.
    auto at_mul = [&](const VectorXd& v) {
        VectorXd r = v.head(n) - v.segment(n, n);
        if (!equality) r.array() += v[2 * n] - v[2 * n + 1];
        return r;
    };
    auto a_mul = [&](const VectorXd& w) {  // A w, per-constraint directional terms
        VectorXd r(mi);
        r.head(n) = w;
        r.segment(n, n) = -w;
        if (!equality) {
            const double sw = w.sum();
            r[2 * n] = sw;
            r[2 * n + 1] = -sw;
        }
        return r;
    };

    // Interior start: center of the band spread over the box interior.
    VectorXd x(n);
    const double target = 0.5 * (qp.band_lo + qp.band_hi) / n;
    for (int i = 0; i < n; ++i) {
        const double lo = qp.lower[i], hi = qp.upper[i];
        const double margin = 1e-3 * (hi - lo);
        x[i] = std::min(std::max(target, lo + margin), hi - margin);
    }
    if (equality) x.array() += (qp.band_lo - x.sum()) / n;
    for (int i = 0; i < n; ++i)
        x[i] = std::min(std::max(x[i], qp.lower[i] + 1e-9),
                        qp.upper[i] - 1e-9);

    Work w;
    w.s = eval_g(x).cwiseMax(1e-3);
    w.z = VectorXd::Ones(mi);
    double y = 0.0;  // equality multiplier

    const double qscale = std::max(1.0, qp.q.lpNorm<Eigen::Infinity>());
    const VectorXd ones = VectorXd::Ones(n);

    for (int iter = 0; iter < 100; ++iter) {
        const VectorXd g = eval_g(x);
        const VectorXd rp = g - w.s;                       // primal residual
        VectorXd rd = qp.P * x + qp.q - at_mul(w.z);       // stationarity
        double re = 0.0;
        if (equality) {
            rd.array() += y;
            re = x.sum() - qp.band_lo;
        }
        const double mu = w.s.dot(w.z) / mi;
        const double resid = std::max({rd.lpNorm<Eigen::Infinity>(),
                                       rp.lpNorm<Eigen::Infinity>(),
                                       std::abs(re)});
        out.kkt_resid = std::max(resid, mu);
        out.iters = iter;
        if (resid <= 1e-9 * qscale && mu <= 1e-10 * qscale) {
            out.ok = true;
            out.x = x;
            return out;
        }

        const VectorXd zs = w.z.cwiseQuotient(w.s);
        MatrixXd M = qp.P;
        M.diagonal() += (zs.head(n) + zs.segment(n, n));
        if (!equality) M += (zs[2 * n] + zs[2 * n + 1]) * ones * ones.transpose();

        Eigen::LLT<MatrixXd> llt(M);
        if (llt.info() != Eigen::Success) {
            M.diagonal().array() += 1e-10 * M.diagonal().maxCoeff();
            llt.compute(M);
            if (llt.info() != Eigen::Success) break;
        }

        // One Newton solve for a given complementarity target d.
        auto newton = [&](const VectorXd& d, VectorXd& dx, VectorXd& ds,
                          VectorXd& dz, double& dy) {
            const VectorXd t = (d - w.z.cwiseProduct(rp)).cwiseQuotient(w.s);
            const VectorXd rhs = -rd + at_mul(t);
            if (equality) {
                const VectorXd Mi_rhs = llt.solve(rhs);
                const VectorXd Mi_one = llt.solve(ones);
                dy = (ones.dot(Mi_rhs) + re) / ones.dot(Mi_one);
                dx = Mi_rhs - dy * Mi_one;
            } else {
                dy = 0.0;
                dx = llt.solve(rhs);
            }
            ds = a_mul(dx) + rp;
            dz = (d - w.z.cwiseProduct(ds)).cwiseQuotient(w.s);
        };

        VectorXd dxa, dsa, dza;
        double dya;
        newton(-w.s.cwiseProduct(w.z), dxa, dsa, dza, dya);
        const double ap = max_step(w.s, dsa);
        const double ad = max_step(w.z, dza);
        const double mu_aff =
            (w.s + ap * dsa).dot(w.z + ad * dza) / mi;
        const double sigma = std::pow(mu_aff / mu, 3);

        VectorXd d = -w.s.cwiseProduct(w.z) - dsa.cwiseProduct(dza);
        d.array() += sigma * mu;
        VectorXd dx, ds, dz;
        double dy;
        newton(d, dx, ds, dz, dy);

        const double alpha_p = std::min(1.0, 0.99 * max_step(w.s, ds));
        const double alpha_d = std::min(1.0, 0.99 * max_step(w.z, dz));
        x += alpha_p * dx;
        w.s += alpha_p * ds;
        w.z += alpha_d * dz;
        if (equality) y += alpha_d * dy;
        if (std::min(alpha_p, alpha_d) < 1e-10) break;
    }

    out.x = x;  // best effort; caller checks ok
    return out;
}

}  // namespace sporc
