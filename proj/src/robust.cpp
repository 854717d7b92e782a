#include "sporc/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sporc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double to_min_sign(const RobustProblem& prob) {
    return prob.maximize() ? -1.0 : 1.0;
}

BallUncertainty singleton_at(const Eigen::MatrixXd& a_rows, Norm norm) {
    BallUncertainty u;
    u.center = a_rows;
    u.radius = VectorXd::Zero(a_rows.rows());
    u.norm = norm;
    return u;
}

BallUncertainty singleton_at(const std::vector<VectorXd>& a_rows, Norm norm) {
    Eigen::MatrixXd rows(a_rows.size(), a_rows.empty() ? 0 : a_rows[0].size());
    for (int j = 0; j < rows.rows(); ++j) rows.row(j) = a_rows[j];
    return singleton_at(rows, norm);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Incremental builder for the conic form: rows are appended as either
// nonnegative-orthant entries or whole second-order blocks, then reordered
// so the orthant block comes first.
struct Builder {
    int nvar;
    std::vector<VectorXd> lin_g;
    std::vector<double> lin_h;
    std::vector<MatrixXd> soc_g;
    std::vector<VectorXd> soc_h;

    explicit Builder(int n) : nvar(n) {}

    void linear(const VectorXd& g, double rhs) {  // g'x <= rhs
        lin_g.push_back(g);
        lin_h.push_back(rhs);
    }
    void soc(const MatrixXd& G, const VectorXd& h) {  // h - Gx in SOC
        soc_g.push_back(G);
        soc_h.push_back(h);
    }

    ConicProblem finish(const VectorXd& c, const MatrixXd& A,
                        const VectorXd& b) const {
        ConicProblem P;
        P.c = c;
        P.A = A;
        P.b = b;
        P.cone.l = static_cast<int>(lin_g.size());
        int mrows = P.cone.l;
        for (const auto& blk : soc_g) {
            P.cone.soc.push_back(static_cast<int>(blk.rows()));
            mrows += static_cast<int>(blk.rows());
        }
        P.G = MatrixXd::Zero(mrows, nvar);
        P.h = VectorXd::Zero(mrows);
        for (int i = 0; i < P.cone.l; ++i) {
            P.G.row(i) = lin_g[static_cast<std::size_t>(i)];
            P.h[i] = lin_h[static_cast<std::size_t>(i)];
        }
        int off = P.cone.l;
        for (std::size_t k = 0; k < soc_g.size(); ++k) {
            P.G.block(off, 0, soc_g[k].rows(), nvar) = soc_g[k];
            P.h.segment(off, soc_h[k].size()) = soc_h[k];
            off += static_cast<int>(soc_g[k].rows());
        }
        return P;
    }
};

VectorXd unit(int n, int i, double v = 1.0) {
    VectorXd e = VectorXd::Zero(n);
    e[i] = v;
    return e;
}

void check_uncertainty(const RobustProblem& prob, const BallUncertainty& U) {
    if (U.center.rows() != prob.rows() || U.center.cols() != prob.d)
        throw DimMismatch("solve_robust: uncertainty centers are " +
                          std::to_string(U.center.rows()) + "x" +
                          std::to_string(U.center.cols()) + ", expected " +
                          std::to_string(prob.rows()) + "x" +
                          std::to_string(prob.d));
    if (U.radius.size() != prob.rows())
        throw DimMismatch("solve_robust: radius count mismatch");
}

// Adds rows enforcing t >= |w_i| for an epigraph variable at column tcol.
void linf_epigraph(Builder& bld, int d, int tcol) {
    for (int i = 0; i < d; ++i) {
        VectorXd g = unit(bld.nvar, i);
        g[tcol] = -1.0;
        bld.linear(g, 0.0);  // w_i - t <= 0
        g = unit(bld.nvar, i, -1.0);
        g[tcol] = -1.0;
        bld.linear(g, 0.0);  // -w_i - t <= 0
    }
}

}  // namespace

Solution solve_min(const RobustProblem& prob, const VectorXd& v,
                   const BallUncertainty& U) {
    check_uncertainty(prob, U);
    const int d = prob.d;
    Solution sol;
    sol.w = VectorXd::Zero(d);

    for (Eigen::Index j = 0; j < U.radius.size(); ++j)
        if (std::isinf(U.radius[j])) {
            // Whole-space uncertainty admits no nonzero decision.
            sol.status = SolveStatus::Infeasible;
            return sol;
        }

    if (prob.family == Family::CapacitySimplex) {
        // Per-item caps tightened by the radius leave a box-constrained
        // simplex, whose LP optimum fills the cheapest items to their caps.
        // A cap driven below zero closes that item rather than the problem.
        const VectorXd ahat = U.center.row(0).transpose();
        const double Q = U.radius[0];
        std::vector<int> order(d);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int i, int j) { return v[i] < v[j]; });
        double left = 1.0;
        for (int i : order) {
            const double cap = std::min(1.0, ahat[i] - Q);
            if (cap <= 0.0) continue;
            sol.w[i] = std::min(cap, left);
            left -= sol.w[i];
            if (left <= 0.0) break;
        }
        if (left > 1e-12) {
            sol.status = SolveStatus::Infeasible;
            return sol;
        }
        sol.status = SolveStatus::Optimal;
        sol.objective = v.dot(sol.w);
        return sol;
    }

    const bool linf_needed =
        U.norm == Norm::L1 &&
        (prob.family == Family::FractionalKnapsack ||
         prob.family == Family::AlloyCovering) &&
        (U.radius.array() > 0.0).any();
    const int nvar = d + (linf_needed ? 1 : 0);
    Builder bld(nvar);

    VectorXd cost = VectorXd::Zero(nvar);
    cost.head(d) = v;

    MatrixXd A(0, nvar);
    VectorXd b(0);

    if (prob.family == Family::FractionalKnapsack) {
        A = MatrixXd::Ones(1, nvar);
        if (linf_needed) A(0, d) = 0.0;
        b = VectorXd::Ones(1);
        for (int i = 0; i < d; ++i) {
            bld.linear(unit(nvar, i, -1.0), 0.0);  // w_i >= 0
            bld.linear(unit(nvar, i), 1.0);        // w_i <= 1
        }
    } else {
        for (int i = 0; i < d; ++i) bld.linear(unit(nvar, i, -1.0), 0.0);
    }

    if (prob.family == Family::FractionalKnapsack) {
        const VectorXd ahat = U.center.row(0).transpose();
        const double Q = U.radius[0];
        if (Q == 0.0) {
            VectorXd g = VectorXd::Zero(nvar);
            g.head(d) = ahat;
            bld.linear(g, prob.b);
        } else if (U.norm == Norm::L2) {
            MatrixXd G = MatrixXd::Zero(d + 1, nvar);
            G.row(0).head(d) = ahat;
            G.block(1, 0, d, d) = -Q * MatrixXd::Identity(d, d);
            VectorXd h = VectorXd::Zero(d + 1);
            h[0] = prob.b;
            bld.soc(G, h);
        } else {
            linf_epigraph(bld, d, d);
            VectorXd g = VectorXd::Zero(nvar);
            g.head(d) = ahat;
            g[d] = Q;
            bld.linear(g, prob.b);  // ahat'w + Q t <= b
        }
    } else {
        if (linf_needed) linf_epigraph(bld, d, d);
        for (int j = 0; j < prob.rows(); ++j) {
            const VectorXd ahat = U.center.row(j).transpose();
            const double Q = U.radius[j];
            if (Q == 0.0) {
                VectorXd g = VectorXd::Zero(nvar);
                g.head(d) = -ahat;
                bld.linear(g, -prob.h[j]);
            } else if (U.norm == Norm::L2) {
                MatrixXd G = MatrixXd::Zero(d + 1, nvar);
                G.row(0).head(d) = -ahat;
                G.block(1, 0, d, d) = -Q * MatrixXd::Identity(d, d);
                VectorXd h = VectorXd::Zero(d + 1);
                h[0] = -prob.h[j];
                bld.soc(G, h);
            } else {
                VectorXd g = VectorXd::Zero(nvar);
                g.head(d) = -ahat;
                g[d] = Q;
                bld.linear(g, -prob.h[j]);  // ahat'w - Q t >= h_j
            }
        }
    }

    const ConicProblem P = bld.finish(cost, A, b);
    const ConicSolution cs = solve_conic(P);
    sol.status = cs.status;
    if (cs.status == SolveStatus::Optimal) {
        sol.w = cs.x.head(d);
        sol.objective = v.dot(sol.w);
    }
    return sol;
}

Solution solve_robust(const RobustProblem& prob, const VectorXd& c,
                      const BallUncertainty& U) {
    const double sign = to_min_sign(prob);
    Solution sol = solve_min(prob, sign * c, U);
    if (sol.status == SolveStatus::Optimal) sol.objective = c.dot(sol.w);
    return sol;
}

Solution solve_singleton(const RobustProblem& prob, const VectorXd& c,
                         const MatrixXd& a_rows) {
    return solve_robust(prob, c, singleton_at(a_rows));
}

bool check_feasible(const RobustProblem& prob, const VectorXd& w,
                    const std::vector<VectorXd>& a_rows, double tol) {
    if (w.size() != prob.d) return false;
    if (static_cast<int>(a_rows.size()) != prob.rows()) return false;
    switch (prob.family) {
        case Family::FractionalKnapsack:
            if (std::abs(w.sum() - 1.0) > tol) return false;
            if ((w.array() < -tol).any() || (w.array() > 1.0 + tol).any())
                return false;
            return a_rows[0].dot(w) <= prob.b + tol;
        case Family::AlloyCovering:
            if ((w.array() < -tol).any()) return false;
            for (int j = 0; j < prob.rows(); ++j)
                if (a_rows[static_cast<std::size_t>(j)].dot(w) < prob.h[j] - tol)
                    return false;
            return true;
        case Family::CapacitySimplex:
            if (std::abs(w.sum() - 1.0) > tol) return false;
            if ((w.array() < -tol).any() || (w.array() > 1.0 + tol).any())
                return false;
            return (w.array() <= a_rows[0].array() + tol).all();
    }
    return false;
}

}  // namespace sporc
