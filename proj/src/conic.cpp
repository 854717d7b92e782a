#include "sporc/conic.hpp"

#include <cmath>
#include <limits>

namespace sporc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nesterov-Todd scaling, stored per cone block. For the nonnegative part
// W is diagonal; for a second-order block W = beta * (2 v v' - J) with a
// unit-hyperbolic v, so W, its inverse, and W^2 all have closed forms.
struct SocScaling {
    double beta = 1.0;
    VectorXd wbar;  // NT point, wbar' J wbar = 1
    VectorXd v;     // square root of wbar in the Jordan algebra
};

struct Scaling {
    VectorXd lp_beta;         // sqrt(s_i / z_i)
    std::vector<SocScaling> soc;
    VectorXd lambda;          // W z = W^{-1} s
};

VectorXd jmul(const VectorXd& u) {  // J u = (u0, -u_rest)
    VectorXd r = -u;
    r[0] = u[0];
    return r;
}

class Cone {
  public:
    explicit Cone(const ConeSpec& spec) : spec_(spec) {}

    int dim() const { return spec_.dim(); }
    int degree() const { return spec_.degree(); }
    int nlp() const { return spec_.l; }

    template <typename F>
    void for_each_soc(F&& f) const {
        int off = spec_.l;
        for (std::size_t k = 0; k < spec_.soc.size(); ++k) {
            f(static_cast<int>(k), off, spec_.soc[k]);
            off += spec_.soc[k];
        }
    }

    VectorXd identity() const {
        VectorXd e = VectorXd::Zero(dim());
        e.head(spec_.l).setOnes();
        for_each_soc([&](int, int off, int) { e[off] = 1.0; });
        return e;
    }

    // inf{t : u + t e interior}; negative means u is already interior.
    double shift_to_interior(const VectorXd& u) const {
        double t = -kInf;
        for (int i = 0; i < spec_.l; ++i) t = std::max(t, -u[i]);
        for_each_soc([&](int, int off, int q) {
            t = std::max(t, u.segment(off + 1, q - 1).norm() - u[off]);
        });
        return t;
    }

    // sup{alpha >= 0 : u + alpha du stays in the cone}, u strictly interior.
    double step_to_boundary(const VectorXd& u, const VectorXd& du) const {
        double alpha = kInf;
        for (int i = 0; i < spec_.l; ++i)
            if (du[i] < 0.0) alpha = std::min(alpha, -u[i] / du[i]);
        for_each_soc([&](int, int off, int q) {
            const double u0 = u[off], d0 = du[off];
            auto ub = u.segment(off + 1, q - 1);
            auto db = du.segment(off + 1, q - 1);
            // roots of (u0+a d0)^2 - |ub+a db|^2 = 0
            const double qa = d0 * d0 - db.squaredNorm();
            const double qb = 2.0 * (u0 * d0 - ub.dot(db));
            const double qc = u0 * u0 - ub.squaredNorm();
            double best = kInf;
            if (std::abs(qa) < 1e-300) {
                if (qb < 0.0) best = -qc / qb;
            } else {
                const double disc = qb * qb - 4.0 * qa * qc;
                if (disc >= 0.0) {
                    const double sq = std::sqrt(disc);
                    for (double r : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
                        if (r > 0.0) best = std::min(best, r);
                    if (qa < 0.0 && best == kInf) best = 0.0;  // leaves immediately
                }
            }
            alpha = std::min(alpha, best);
        });
        return alpha;
    }

    VectorXd jordan(const VectorXd& u, const VectorXd& v) const {
        VectorXd r(dim());
        r.head(spec_.l) = u.head(spec_.l).cwiseProduct(v.head(spec_.l));
        for_each_soc([&](int, int off, int q) {
            auto ub = u.segment(off, q);
            auto vb = v.segment(off, q);
            r[off] = ub.dot(vb);
            r.segment(off + 1, q - 1) =
                ub[0] * vb.segment(1, q - 1) + vb[0] * ub.segment(1, q - 1);
        });
        return r;
    }

    // Solve lambda o u = d for u (arrow-matrix inverse per block).
    VectorXd jordan_solve(const VectorXd& lambda, const VectorXd& d) const {
        VectorXd u(dim());
        u.head(spec_.l) = d.head(spec_.l).cwiseQuotient(lambda.head(spec_.l));
        for_each_soc([&](int, int off, int q) {
            const double l0 = lambda[off];
            auto lb = lambda.segment(off + 1, q - 1);
            const double d0 = d[off];
            auto db = d.segment(off + 1, q - 1);
            const double det = l0 * l0 - lb.squaredNorm();
            const double ldb = lb.dot(db);
            u[off] = (l0 * d0 - ldb) / det;
            u.segment(off + 1, q - 1) =
                (-d0 * lb + (det / l0) * db + (ldb / l0) * lb) / det;
        });
        return u;
    }

    bool compute_scaling(const VectorXd& s, const VectorXd& z, Scaling& W) const {
        W.lp_beta.resize(spec_.l);
        for (int i = 0; i < spec_.l; ++i) {
            if (s[i] <= 0.0 || z[i] <= 0.0) return false;
            W.lp_beta[i] = std::sqrt(s[i] / z[i]);
        }
        W.soc.assign(spec_.soc.size(), {});
        bool ok = true;
        for_each_soc([&](int k, int off, int q) {
            auto sb = s.segment(off, q);
            auto zb = z.segment(off, q);
            const double sres = sb[0] * sb[0] - sb.segment(1, q - 1).squaredNorm();
            const double zres = zb[0] * zb[0] - zb.segment(1, q - 1).squaredNorm();
            if (sres <= 0.0 || zres <= 0.0 || sb[0] <= 0.0 || zb[0] <= 0.0) {
                ok = false;
                return;
            }
            const double sa = std::sqrt(sres), za = std::sqrt(zres);
            VectorXd st = sb / sa, zt = zb / za;
            const double gamma = std::sqrt((1.0 + st.dot(zt)) / 2.0);
            SocScaling& sc = W.soc[static_cast<std::size_t>(k)];
            sc.beta = std::sqrt(sa / za);
            sc.wbar = (st + jmul(zt)) / (2.0 * gamma);
            sc.v = sc.wbar;
            sc.v[0] += 1.0;
            sc.v /= std::sqrt(2.0 * (sc.wbar[0] + 1.0));
        });
        if (!ok) return false;
        W.lambda = apply_W(W, z);
        return true;
    }

    VectorXd apply_W(const Scaling& W, const VectorXd& u) const {
        VectorXd r(dim());
        r.head(spec_.l) = W.lp_beta.cwiseProduct(u.head(spec_.l));
        for_each_soc([&](int k, int off, int q) {
            const SocScaling& sc = W.soc[static_cast<std::size_t>(k)];
            auto ub = u.segment(off, q);
            r.segment(off, q) =
                sc.beta * (2.0 * sc.v * sc.v.dot(ub) - jmul(ub));
        });
        return r;
    }

    VectorXd apply_Winv(const Scaling& W, const VectorXd& u) const {
        VectorXd r(dim());
        r.head(spec_.l) = u.head(spec_.l).cwiseQuotient(W.lp_beta);
        for_each_soc([&](int k, int off, int q) {
            const SocScaling& sc = W.soc[static_cast<std::size_t>(k)];
            auto ub = u.segment(off, q);
            VectorXd jv = jmul(sc.v);
            r.segment(off, q) = (2.0 * jv * jv.dot(ub) - jmul(ub)) / sc.beta;
        });
        return r;
    }

    // Dense W^2 = beta^2 (2 wbar wbar' - J) per second-order block.
    MatrixXd W2_dense(const Scaling& W) const {
        MatrixXd M = MatrixXd::Zero(dim(), dim());
        for (int i = 0; i < spec_.l; ++i) M(i, i) = W.lp_beta[i] * W.lp_beta[i];
        for_each_soc([&](int k, int off, int q) {
            const SocScaling& sc = W.soc[static_cast<std::size_t>(k)];
            MatrixXd blk = 2.0 * sc.wbar * sc.wbar.transpose();
            blk(0, 0) -= 1.0;
            for (int i = 1; i < q; ++i) blk(i, i) += 1.0;
            M.block(off, off, q, q) = (sc.beta * sc.beta) * blk;
        });
        return M;
    }

    Scaling identity_scaling() const {
        Scaling W;
        W.lp_beta = VectorXd::Ones(spec_.l);
        W.soc.assign(spec_.soc.size(), {});
        for_each_soc([&](int k, int off, int q) {
            (void)off;
            SocScaling& sc = W.soc[static_cast<std::size_t>(k)];
            sc.beta = 1.0;
            sc.wbar = VectorXd::Zero(q);
            sc.wbar[0] = 1.0;
            sc.v = sc.wbar;
        });
        return W;
    }

  private:
    ConeSpec spec_;
};

// One factorization of the KKT matrix
//   [ 0   A'  G'  ]
//   [ A   0   0   ]
//   [ G   0  -W^2 ]
// with iterative refinement on each solve.
class KktSolver {
  public:
    KktSolver(const ConicProblem& P, const Cone& cone, const Scaling& W) {
        const int n = static_cast<int>(P.c.size());
        const int p = static_cast<int>(P.A.rows());
        const int m = cone.dim();
        dim_ = n + p + m;
        n_ = n;
        p_ = p;
        K_ = MatrixXd::Zero(dim_, dim_);
        K_.block(0, n, n, p) = P.A.transpose();
        K_.block(0, n + p, n, m) = P.G.transpose();
        K_.block(n, 0, p, n) = P.A;
        K_.block(n + p, 0, m, n) = P.G;
        K_.block(n + p, n + p, m, m) = -cone.W2_dense(W);
        lu_.compute(K_);
    }

    bool solve(const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
               VectorXd& x, VectorXd& y, VectorXd& z) const {
        VectorXd rhs(dim_);
        rhs << bx, by, bz;
        VectorXd sol = lu_.solve(rhs);
        for (int pass = 0; pass < 2; ++pass) {
            VectorXd resid = rhs - K_ * sol;
            if (resid.lpNorm<Eigen::Infinity>() <
                1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()))
                break;
            sol += lu_.solve(resid);
        }
        if (!sol.allFinite()) return false;
        x = sol.head(n_);
        y = sol.segment(n_, p_);
        z = sol.tail(dim_ - n_ - p_);
        return true;
    }

  private:
    MatrixXd K_;
    Eigen::PartialPivLU<MatrixXd> lu_;
    int dim_ = 0, n_ = 0, p_ = 0;
};

struct Candidate {
    double score = kInf;
    VectorXd x, s, z, y;
    double pres = kInf, dres = kInf, gap = kInf;
};

}  // namespace

ConicSolution solve_conic(const ConicProblem& P, const ConicSettings& cfg) {
    const Cone cone(P.cone);
    const int n = static_cast<int>(P.c.size());
    const int p = static_cast<int>(P.A.rows());
    const int m = cone.dim();

    ConicSolution out;
    out.x = VectorXd::Zero(n);
    out.y = VectorXd::Zero(p);
    if (m != P.G.rows() || m != P.h.size())
        return out;  // malformed; NumericalFailure

    const VectorXd e = cone.identity();
    const double degree = static_cast<double>(cone.degree());

    // Initial point from two least-squares-style solves with W = I.
    VectorXd x, y, z, s;
    {
        KktSolver kkt(P, cone, cone.identity_scaling());
        VectorXd u, junk_y, junk;
        if (!kkt.solve(VectorXd::Zero(n), P.b, P.h, x, y, u)) return out;
        s = -(P.G * x - P.h);
        double shift = cone.shift_to_interior(s);
        if (shift >= 0.0) s += (1.0 + shift) * e;

        VectorXd xd;
        if (!kkt.solve(-P.c, VectorXd::Zero(p), VectorXd::Zero(m), xd, y, z))
            return out;
        shift = cone.shift_to_interior(z);
        if (shift >= 0.0) z += (1.0 + shift) * e;
    }
    double tau = 1.0, kappa = 1.0;

    const double cnorm = std::max(1.0, P.c.norm());
    const double bnorm = std::max(1.0, P.b.norm());
    const double hnorm = std::max(1.0, P.h.norm());

    Candidate best;
    Scaling W;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        const VectorXd r_x = P.A.transpose() * y + P.G.transpose() * z + P.c * tau;
        const VectorXd r_y = P.A * x - P.b * tau;
        const VectorXd r_z = P.G * x + s - P.h * tau;
        const double r_tau = kappa + P.c.dot(x) + P.b.dot(y) + P.h.dot(z);
        const double mu = (s.dot(z) + tau * kappa) / (degree + 1.0);

        const double pres =
            std::max(r_y.norm() / bnorm, r_z.norm() / hnorm) / tau;
        const double dres = (r_x.norm() / cnorm) / tau;
        const double pcost = P.c.dot(x) / tau;
        const double gap_abs = s.dot(z) / (tau * tau);
        const double relgap = gap_abs / std::max(1.0, std::abs(pcost));

        const double score = std::max({pres, dres, std::min(gap_abs, relgap)});
        if (score < best.score) {
            best = {score, x / tau, s / tau, z / tau, y / tau, pres, dres, gap_abs};
        }

        auto fill = [&](SolveStatus st, const VectorXd& bx, const VectorXd& bs,
                        const VectorXd& bz2, const VectorXd& by2, double bpres,
                        double bdres, double bgap) {
            out.status = st;
            out.x = bx;
            out.s = bs;
            out.z = bz2;
            out.y = by2;
            out.obj = P.c.dot(bx);
            out.iters = iter;
            out.pres = bpres;
            out.dres = bdres;
            out.gap = bgap;
        };

        if (pres <= cfg.feastol && dres <= cfg.feastol &&
            (gap_abs <= cfg.abstol || relgap <= cfg.reltol)) {
            fill(SolveStatus::Optimal, x / tau, s / tau, z / tau, y / tau, pres,
                 dres, gap_abs);
            return out;
        }

        // Certificate checks use the raw (unnormalized) iterate as a ray.
        const double ihz = -(P.h.dot(z) + P.b.dot(y));
        if (ihz > 0.0) {
            const double q = (P.A.transpose() * y + P.G.transpose() * z).norm() /
                             cnorm / ihz;
            if (q <= cfg.feastol) {
                fill(SolveStatus::Infeasible, x / tau, s / tau, z / ihz, y / ihz,
                     pres, dres, gap_abs);
                return out;
            }
        }
        const double ctx = -P.c.dot(x);
        if (ctx > 0.0) {
            const double q = std::max((P.A * x).norm() / bnorm,
                                      (P.G * x + s).norm() / hnorm) /
                             ctx;
            if (q <= cfg.feastol) {
                fill(SolveStatus::Unbounded, x / ctx, s / ctx, z / tau, y / tau,
                     pres, dres, gap_abs);
                return out;
            }
        }

        if (!cone.compute_scaling(s, z, W)) break;
        KktSolver kkt(P, cone, W);

        VectorXd x2, y2, z2;
        if (!kkt.solve(-P.c, P.b, P.h, x2, y2, z2)) break;
        const double S2 = P.c.dot(x2) + P.b.dot(y2) + P.h.dot(z2);
        const double denom = S2 - kappa / tau;
        if (!(denom < 0.0) || !std::isfinite(denom)) break;

        const VectorXd lam_lam = cone.jordan(W.lambda, W.lambda);

        auto direction = [&](double sigma, const VectorXd& corr_s, double corr_k,
                             VectorXd& dx, VectorXd& dy, VectorXd& dz,
                             VectorXd& ds, double& dtau, double& dkappa) -> bool {
            VectorXd d_s = -lam_lam - corr_s;
            d_s += (sigma * mu) * e;
            const double d_k = -tau * kappa + sigma * mu - corr_k;
            const VectorXd bar_ds = cone.jordan_solve(W.lambda, d_s);
            const VectorXd bz = -(1.0 - sigma) * r_z - cone.apply_W(W, bar_ds);
            VectorXd x1, y1, z1;
            if (!kkt.solve(-(1.0 - sigma) * r_x, -(1.0 - sigma) * r_y, bz, x1, y1,
                           z1))
                return false;
            const double S1 = P.c.dot(x1) + P.b.dot(y1) + P.h.dot(z1);
            dtau = (-(1.0 - sigma) * r_tau - S1 - d_k / tau) / denom;
            dx = x1 + dtau * x2;
            dy = y1 + dtau * y2;
            dz = z1 + dtau * z2;
            ds = cone.apply_W(W, bar_ds - cone.apply_W(W, dz));
            dkappa = (d_k - kappa * dtau) / tau;
            return true;
        };

        VectorXd dxa, dya, dza, dsa;
        double dta, dka;
        if (!direction(0.0, VectorXd::Zero(m), 0.0, dxa, dya, dza, dsa, dta, dka))
            break;

        auto max_alpha = [&](const VectorXd& ds_, const VectorXd& dz_, double dt_,
                             double dk_) {
            double a = std::min(cone.step_to_boundary(s, ds_),
                                cone.step_to_boundary(z, dz_));
            if (dt_ < 0.0) a = std::min(a, -tau / dt_);
            if (dk_ < 0.0) a = std::min(a, -kappa / dk_);
            return a;
        };

        const double a_aff = std::min(1.0, max_alpha(dsa, dza, dta, dka));
        const double sigma = std::pow(1.0 - a_aff, 3);

        const VectorXd corr_s = cone.jordan(cone.apply_Winv(W, dsa),
                                            cone.apply_W(W, dza));
        const double corr_k = dta * dka;

        VectorXd dx, dy, dz, ds;
        double dt, dk;
        if (!direction(sigma, corr_s, corr_k, dx, dy, dz, ds, dt, dk)) break;

        double alpha = std::min(1.0, 0.99 * max_alpha(ds, dz, dt, dk));
        if (alpha < 1e-10) break;

        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * ds;
        tau += alpha * dt;
        kappa += alpha * dk;
        out.iters = iter + 1;
    }

    // Target tolerances stalled; accept the best iterate if it is close.
    if (best.pres <= cfg.feastol_accept && best.dres <= cfg.feastol_accept &&
        best.gap <= cfg.abstol_accept * std::max(1.0, std::abs(P.c.dot(best.x)))) {
        out.status = SolveStatus::Optimal;
        out.x = best.x;
        out.s = best.s;
        out.z = best.z;
        out.y = best.y;
        out.obj = P.c.dot(best.x);
        out.pres = best.pres;
        out.dres = best.dres;
        out.gap = best.gap;
        return out;
    }
    out.status = SolveStatus::NumericalFailure;
    return out;
}

}  // namespace sporc
