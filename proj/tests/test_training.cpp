#include <doctest.h>

#include <cmath>
#include <vector>

#include "sporc/datagen.hpp"
#include "sporc/errors.hpp"
#include "sporc/training.hpp"

using namespace sporc;

namespace {

RobustProblem small_knapsack(double b = 20.0) {
    RobustProblem prob;
    prob.family = Family::FractionalKnapsack;
    prob.d = 5;
    prob.b = b;
    return prob;
}

BallUncertainty tiny_ball(int d, double center, double radius) {
    BallUncertainty U;
    U.center = Eigen::MatrixXd::Constant(1, d, center);
    U.radius = Eigen::VectorXd::Constant(1, radius);
    U.norm = Norm::L2;
    return U;
}

/// Knapsack data plus a calibrator fitted on the same draw, sized for fast
/// training runs.
struct TrainFixture {
    Dataset data;
    ConformalCalibrator cal;
    RobustProblem prob = small_knapsack();
};

TrainFixture make_fixture(int n, std::uint64_t seed) {
    TrainFixture fx;
    KnapsackGenSpec spec;
    spec.n = n;
    fx.data = gen_knapsack(spec, seed);
    PredictorFitConfig pc;
    pc.hidden = 0;
    pc.epochs = 20;
    fx.cal = calibrate(fit_constraint_predictor(fx.data, pc), fx.data, 0.2,
                       Norm::L2);
    return fx;
}

}  // namespace

TEST_SUITE("training") {

TEST_CASE("solution cache returns the value-minimizing entry") {
    SolutionCache cache(2);
    Eigen::VectorXd w1(2), w2(2), w3(2), v(2);
    w1 << 1, 0;
    w2 << 0, 1;
    w3 << 0.5, 0.5;
    cache.add(0, w1);
    cache.add(0, w2);
    cache.add(0, w3);
    v << 1, 2;
    CHECK(cache.best(0, v) == 0);
    v << 3, 1;
    CHECK(cache.best(0, v) == 1);
    v << 1, 1;  // tie between 1.0, 1.0, 1.0 resolves to the first entry
    CHECK(cache.best(0, v) == 0);
    CHECK(cache.best(1, v) == -1);
}

TEST_CASE("cached solve trades fresh solves for lookups") {
    const auto prob = small_knapsack(1.2);
    const auto U = tiny_ball(prob.d, 0.8, 0.1);
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(prob.d, -1.0, 1.0);
    SolutionCache cache(3);
    SolveCounters counters;
    Rng rng(5);

    const auto s1 = cached_solve(cache, 0, prob, v, U, 1.0, rng, &counters);
    REQUIRE(s1.status == SolveStatus::Optimal);
    CHECK(counters.solves == 1);
    CHECK(counters.cache_hits == 0);
    CHECK(cache.entries[0].size() == 1);

    // Forced reuse returns the cached decision without a solve.
    const auto s2 = cached_solve(cache, 0, prob, v, U, 0.0, rng, &counters);
    CHECK(counters.solves == 1);
    CHECK(counters.cache_hits == 1);
    CHECK(cache.entries[0].size() == 1);
    CHECK((s2.w - s1.w).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(s2.objective == doctest::Approx(v.dot(s1.w)));

    // Reuse on an empty entry falls back to a fresh solve.
    const auto s3 = cached_solve(cache, 1, prob, v, U, 0.0, rng, &counters);
    REQUIRE(s3.status == SolveStatus::Optimal);
    CHECK(counters.solves == 2);
    CHECK(cache.entries[1].size() == 1);
}

TEST_CASE("training is deterministic and invariant to weight scaling") {
    const auto fx = make_fixture(120, 3);
    TrainConfig tc;
    tc.epochs = 3;
    tc.seed = 11;
    const auto m1 = train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, tc);
    const auto m2 = train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, tc);
    CHECK((m1.B - m2.B).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((m1.b0 - m2.b0).lpNorm<Eigen::Infinity>() == 0.0);

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(fx.data.size());
    const auto m3 = train_spo_rc_plus(fx.data, ones, fx.cal, fx.prob, tc);
    CHECK((m1.B - m3.B).lpNorm<Eigen::Infinity>() == 0.0);

    // Doubling every weight cannot change the normalized objective.
    const auto m4 = train_spo_rc_plus(fx.data, 2.0 * ones, fx.cal, fx.prob, tc);
    CHECK((m1.B - m4.B).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((m1.b0 - m4.b0).lpNorm<Eigen::Infinity>() == 0.0);

    TrainConfig other = tc;
    other.seed = 12;
    const auto m5 = train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, other);
    CHECK((m1.B - m5.B).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("cache reuse cuts robust solves without derailing the run") {
    const auto fx = make_fixture(120, 4);
    TrainConfig tc;
    tc.epochs = 4;
    tc.seed = 7;
    TrainStats fresh, reused;
    tc.resolve_prob = 1.0;
    train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, tc, &fresh);
    tc.resolve_prob = 0.0;
    train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, tc, &reused);

    CHECK(fresh.cache_hits == 0);
    CHECK(reused.cache_hits > 0);
    CHECK(reused.solves < fresh.solves);
    // Epoch rows: baseline row 0 plus one per epoch; patience > epochs here,
    // so no early stop.
    REQUIRE(fresh.log.size() == 5);
    CHECK(fresh.log.front().epoch == 0);
    CHECK(fresh.epochs_run == 4);
    for (const auto& row : fresh.log) {
        CHECK(std::isfinite(row.train_loss));
        CHECK(std::isfinite(row.val_loss));
    }
    CHECK(fresh.best_val <= fresh.log.front().val_loss);
    CHECK(reused.best_val <= reused.log.front().val_loss * 1.5 + 0.5);
}

TEST_CASE("bad configs and degenerate inputs are rejected") {
    const auto fx = make_fixture(40, 6);
    TrainConfig tc;
    tc.epochs = 1;
    TrainConfig bad = tc;
    bad.lr = 0.0;
    CHECK_THROWS_AS(train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, bad),
                    ConfigError);
    bad = tc;
    bad.resolve_prob = 1.2;
    CHECK_THROWS_AS(train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, bad),
                    ConfigError);
    bad = tc;
    bad.val_frac = 1.0;
    CHECK_THROWS_AS(train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, bad),
                    ConfigError);

    Dataset empty;
    empty.dims = fx.data.dims;
    empty.dims.n = 0;
    CHECK_THROWS_AS(train_spo_rc_plus(empty, {}, fx.cal, fx.prob, tc),
                    EmptyPart);

    Eigen::VectorXd short_beta = Eigen::VectorXd::Ones(3);
    CHECK_THROWS_AS(train_spo_rc_plus(fx.data, short_beta, fx.cal, fx.prob, tc),
                    DimMismatch);
    Eigen::VectorXd negative = Eigen::VectorXd::Constant(fx.data.size(), -1.0);
    CHECK_THROWS_AS(train_spo_rc_plus(fx.data, negative, fx.cal, fx.prob, tc),
                    ConfigError);

    // Zero epochs returns the warm start with only the baseline row.
    TrainStats st;
    TrainConfig none = tc;
    none.epochs = 0;
    const auto warm = train_spo_rc_plus(fx.data, {}, fx.cal, fx.prob, none, &st);
    CHECK(st.epochs_run == 0);
    REQUIRE(st.log.size() == 1);
    CHECK(warm.B.allFinite());
    CHECK(warm.b0.allFinite());
}

TEST_CASE("samples without solvable subproblems are skipped") {
    // Two clean samples and one whose realized constraint row makes every
    // simplex point infeasible in hindsight. The calibrator is fitted on
    // clean rows so the predicted sets themselves stay solvable.
    TrainFixture fx;
    fx.prob = small_knapsack(1.0);
    fx.prob.d = 2;
    auto sample_with_row = [](double row_value, double cost) {
        ContextSample s;
        s.x = Eigen::VectorXd::Constant(1, 0.2);
        s.c = Eigen::VectorXd::Constant(2, cost);
        s.a.push_back(Eigen::VectorXd::Constant(2, row_value));
        return s;
    };
    Dataset clean;
    clean.dims = {3, 1, 2, 1};
    for (int i = 0; i < 3; ++i)
        clean.samples.push_back(sample_with_row(0.4, 1.0 + i));
    Dataset data = clean;
    data.samples[2] = sample_with_row(5.0, 3.0);

    PredictorFitConfig pc;
    pc.hidden = 0;
    pc.epochs = 200;
    auto cal = calibrate(fit_constraint_predictor(clean, pc), clean, 0.4,
                         Norm::L2);
    cal.quantiles.setConstant(0.05);

    TrainConfig tc;
    tc.epochs = 1;
    tc.val_frac = 0.0;
    TrainStats st;
    train_spo_rc_plus(data, {}, cal, fx.prob, tc, &st);
    CHECK(st.skipped_infeasible == 1);

    // An impossible capacity starves every sample.
    auto impossible = fx.prob;
    impossible.b = -1.0;
    CHECK_THROWS_AS(train_spo_rc_plus(data, {}, cal, impossible, tc),
                    InfeasibleError);
}

TEST_CASE("pipeline trains one model per method and variant") {
    KnapsackGenSpec spec;
    spec.n = 400;
    const auto full = gen_knapsack(spec, 17);
    const auto test = gen_knapsack(spec, 18);

    PipelineConfig cfg;
    cfg.problem = small_knapsack();
    cfg.predictor.hidden = 0;
    cfg.predictor.epochs = 10;
    cfg.train.epochs = 2;
    cfg.mse_epochs = 200;
    cfg.methods = {"mse", "spo-rc-plus", "pto"};
    cfg.variants = {"O", "T"};
    cfg.seed = 1;

    const auto res = run_pipeline(full, cfg, &test);
    REQUIRE(res.models.size() == 5);
    CHECK(res.models[0].method == "mse");
    CHECK(res.models[0].variant == "O");
    CHECK(res.models[1].method == "mse");
    CHECK(res.models[1].variant == "T");
    CHECK(res.models[2].method == "spo-rc-plus");
    CHECK(res.models[2].variant == "O");
    CHECK(res.models[3].method == "spo-rc-plus");
    CHECK(res.models[3].variant == "T");
    CHECK(res.models[4].method == "pto");
    CHECK(res.models[4].variant == "O");
    // The point-estimate baseline reuses the least-squares fit on originals.
    CHECK((res.models[4].model.B - res.models[0].model.B)
              .lpNorm<Eigen::Infinity>() == 0.0);

    REQUIRE(res.reports.size() == 5);
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
        CHECK(res.reports[i].method == res.models[i].method);
        CHECK(res.reports[i].variant == res.models[i].variant);
        CHECK(res.reports[i].n_test + res.reports[i].n_skipped == test.size());
        CHECK(std::isfinite(res.reports[i].norm_test_pct));
    }

    // Split parts and truncation bookkeeping hang together.
    CHECK(res.split.parts[0].size() + res.split.parts[1].size() +
              res.split.parts[2].size() + res.split.parts[3].size() ==
          full.size());
    CHECK(res.trunc.kept.size() + res.trunc.removed ==
          res.split.parts[2].size());
    CHECK(res.weights.beta.size() == 0);  // no IR variant requested

    // Determinism across a rerun.
    const auto res2 = run_pipeline(full, cfg, &test);
    for (std::size_t i = 0; i < res.models.size(); ++i)
        CHECK((res.models[i].model.B - res2.models[i].model.B)
                  .lpNorm<Eigen::Infinity>() == 0.0);

    CHECK_THROWS_AS(
        [&] {
            PipelineConfig badm = cfg;
            badm.methods = {"ridge"};
            run_pipeline(full, badm);
        }(),
        ConfigError);
    CHECK_THROWS_AS(
        [&] {
            PipelineConfig badv = cfg;
            badv.variants = {"Z"};
            run_pipeline(full, badv);
        }(),
        ConfigError);
}

TEST_CASE("pipeline wires importance weights into the IR variant") {
    KnapsackGenSpec spec;
    spec.n = 400;
    const auto full = gen_knapsack(spec, 19);

    PipelineConfig cfg;
    cfg.problem = small_knapsack();
    cfg.predictor.hidden = 0;
    cfg.predictor.epochs = 10;
    cfg.train.epochs = 1;
    cfg.mse_epochs = 100;
    cfg.methods = {"mse"};
    cfg.variants = {"IR"};
    cfg.seed = 2;

    const auto res = run_pipeline(full, cfg);
    REQUIRE(res.models.size() == 1);
    CHECK(res.weights.beta.size() == res.trunc.kept.size());
    CHECK(res.weights.beta.minCoeff() >= 0.0);

    // Retargeting the weights at the calibration part changes them.
    PipelineConfig other = cfg;
    other.kmm_target_calibration_part = true;
    const auto res2 = run_pipeline(full, other);
    CHECK((res.weights.beta - res2.weights.beta).lpNorm<Eigen::Infinity>() >
          1e-12);
}

}  // TEST_SUITE
