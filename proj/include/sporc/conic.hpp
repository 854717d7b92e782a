#pragma once

#include <vector>

#include <Eigen/Dense>

namespace sporc {

/// Cone layout for the inequality slack: first `l` nonnegative coordinates,
/// then one second-order block per entry of `soc` (dimension includes the
/// leading scalar).
struct ConeSpec {
    int l = 0;
    std::vector<int> soc;

    int dim() const {
        int d = l;
        for (int q : soc) d += q;
        return d;
    }
    int degree() const { return l + static_cast<int>(soc.size()); }
};

/// min c'x  s.t.  A x = b,  G x + s = h,  s in cone.
/// A may have zero rows when there are no equality constraints.
struct ConicProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    ConeSpec cone;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus s);

struct ConicSettings {
    double feastol = 1e-9;
    double abstol = 1e-9;
    double reltol = 1e-9;
    /// Looser thresholds applied to the best iterate when the target
    /// tolerances stall; within these the result still counts as Optimal.
    double feastol_accept = 1e-6;
    double abstol_accept = 1e-6;
    int max_iter = 100;
};

struct ConicSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXd x;
    Eigen::VectorXd s;
    Eigen::VectorXd z;
    Eigen::VectorXd y;
    double obj = 0.0;  ///< c'x at the returned x
    int iters = 0;
    double pres = 0.0, dres = 0.0, gap = 0.0;
};

/// Homogeneous self-dual interior-point solve with Nesterov-Todd scaling
/// and a Mehrotra predictor-corrector step. Dense linear algebra; intended
/// for small problems (tens of variables).
ConicSolution solve_conic(const ConicProblem& prob, const ConicSettings& cfg = {});

}  // namespace sporc
