#include "sporc/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace sporc {

EvalBreakdown evaluate_model(const LinearCostModel& model, const Dataset& test,
                             const ConformalCalibrator& cal,
                             const RobustProblem& prob,
                             const EvalOptions& opt) {
    const int n = test.size();
    if (n == 0) throw EmptyPart("evaluate_model: empty test set");
    const double sg = to_min_sign(prob);

    EvalBreakdown out;
    out.loss.assign(n, 0.0);
    out.hind_abs.assign(n, 0.0);
    out.infeasible.assign(n, 0);
    out.no_decision.assign(n, 0);
    out.skipped.assign(n, 0);

    double loss_sum = 0.0, hind_sum = 0.0;
    int infeasible_count = 0;
    for (int i = 0; i < n; ++i) {
        const auto& s = test.samples[i];
        Solution hind = solve_min(prob, sg * s.c, singleton_at(s.a));
        if (hind.status != SolveStatus::Optimal) {
            // No hindsight benchmark exists for this draw; leaving it out is
            // the only scoring that does not invent a denominator.
            out.skipped[i] = 1;
            ++out.n_skipped;
            continue;
        }
        const double habs = std::abs(hind.objective);

        BallUncertainty U = opt.use_uncertainty
                                ? cal.uncertainty_set(s.x)
                                : singleton_at(cal.predictor.predict(s.x),
                                               cal.norm);
        Solution induced = solve_min(prob, sg * model.predict(s.x), U);

        double li;
        bool bad = false;
        if (induced.status != SolveStatus::Optimal) {
            // No decision exists; only emitted decisions can violate, so
            // this counts toward the loss penalty but not infeasible_pct.
            bad = true;
            out.no_decision[i] = 1;
            ++out.n_no_decision;
        } else if (!check_feasible(prob, induced.w, s.a)) {
            bad = true;
            ++infeasible_count;
            out.infeasible[i] = 1;
        }
        if (bad) {
            li = habs;
            if (opt.fallback == FallbackRule::DeltaBound &&
                opt.use_uncertainty && !U.contains(s.a))
                li = opt.delta;
        } else {
            li = (sg * s.c).dot(induced.w) - hind.objective;
        }
        out.loss[i] = li;
        out.hind_abs[i] = habs;
        loss_sum += li;
        hind_sum += habs;
        ++out.n_eval;
    }
    if (out.n_eval == 0)
        throw InfeasibleError("evaluate_model: no test sample has a hindsight optimum");
    out.norm_pct = hind_sum > 0 ? 100.0 * loss_sum / hind_sum : 0.0;
    out.infeasible_pct = 100.0 * infeasible_count / out.n_eval;
    return out;
}

double norm_spo_rc_test(const LinearCostModel& model, const Dataset& test,
                        const ConformalCalibrator& cal,
                        const RobustProblem& prob, const EvalOptions& opt) {
    return evaluate_model(model, test, cal, prob, opt).norm_pct;
}

double infeasibility_pct(const LinearCostModel& model, const Dataset& test,
                         const ConformalCalibrator& cal,
                         const RobustProblem& prob, bool use_uncertainty) {
    EvalOptions opt;
    opt.use_uncertainty = use_uncertainty;
    return evaluate_model(model, test, cal, prob, opt).infeasible_pct;
}

std::array<double, 3> region_regret(const LinearCostModel& model,
                                    const Dataset& test,
                                    const ConformalCalibrator& cal,
                                    const RobustProblem& prob,
                                    std::pair<double, double> boundaries,
                                    const EvalOptions& opt) {
    EvalBreakdown bd = evaluate_model(model, test, cal, prob, opt);
    std::array<double, 3> loss_sum{}, hind_sum{};
    for (int i = 0; i < test.size(); ++i) {
        if (bd.skipped[i]) continue;
        double x = test.samples[i].x[0];
        int r = x <= boundaries.first ? 0 : (x <= boundaries.second ? 1 : 2);
        loss_sum[r] += bd.loss[i];
        hind_sum[r] += bd.hind_abs[i];
    }
    std::array<double, 3> out{};
    for (int r = 0; r < 3; ++r)
        out[r] = hind_sum[r] > 0 ? 100.0 * loss_sum[r] / hind_sum[r] : 0.0;
    return out;
}

std::array<double, 3> region_sacrifice(const Dataset& data,
                                       const Eigen::VectorXd* weights,
                                       std::pair<double, double> boundaries) {
    if (data.dims.d != 2 || data.dims.p != 1)
        throw DimMismatch("region_sacrifice: needs two items, scalar context");
    std::array<double, 3> gap{};
    double hind = 0.0;
    for (int i = 0; i < data.size(); ++i) {
        const auto& s = data.samples[i];
        const double wi = weights ? (*weights)[i] : 1.0;
        const double x = s.x[0];
        int r = x <= boundaries.first ? 0 : (x <= boundaries.second ? 1 : 2);
        gap[r] += wi * std::abs(s.c[0] - s.c[1]);
        hind += wi * std::max(s.c[0], s.c[1]);
    }
    std::array<double, 3> out{};
    for (int r = 0; r < 3; ++r) out[r] = hind > 0 ? 100.0 * gap[r] / hind : 0.0;
    return out;
}

}  // namespace sporc
