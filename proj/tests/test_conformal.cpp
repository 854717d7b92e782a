#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sporc/conformal.hpp"
#include "sporc/datagen.hpp"
#include "sporc/rng.hpp"

using namespace sporc;

TEST_SUITE("conformal") {

TEST_CASE("norm_of computes both vector norms") {
    Eigen::VectorXd v(3);
    v << 3.0, -4.0, 0.0;
    CHECK(norm_of(v, Norm::L2) == doctest::Approx(5.0));
    CHECK(norm_of(v, Norm::L1) == doctest::Approx(7.0));
}

TEST_CASE("quantile picks the k-th smallest with the finite-sample bump") {
    std::vector<double> scores{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    // n = 10: k = ceil(11 * 0.75) = 9.
    CHECK(conformal_quantile(scores, 0.25) == doctest::Approx(9.0));
    // k = ceil(11 * 0.95) = 11 > n: no finite guarantee.
    CHECK(conformal_quantile(scores, 0.05) ==
          std::numeric_limits<double>::infinity());
    // Order must not matter.
    std::vector<double> shuffled{7, 1, 10, 3, 9, 2, 8, 5, 4, 6};
    CHECK(conformal_quantile(shuffled, 0.25) == doctest::Approx(9.0));
    // Direct sort cross-check on random draws at several alphas.
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 17 + static_cast<int>(rng.below(40));
        std::vector<double> s(n);
        for (auto& v : s) v = rng.uniform(0.0, 5.0);
        for (double alpha : {0.1, 0.2, 0.25, 0.5}) {
            auto sorted = s;
            std::sort(sorted.begin(), sorted.end());
            const int k = static_cast<int>(std::ceil((n + 1) * (1 - alpha)));
            const double want = k > n ? std::numeric_limits<double>::infinity()
                                      : sorted[k - 1];
            CHECK(conformal_quantile(s, alpha) == doctest::Approx(want));
        }
    }
}

TEST_CASE("scores are the residual norms of the held-out rows") {
    KnapsackGenSpec spec;
    spec.n = 80;
    const auto data = gen_knapsack(spec, 7);
    PredictorFitConfig cfg;
    cfg.hidden = 0;
    cfg.epochs = 10;
    const auto model = fit_constraint_predictor(data, cfg);
    const auto scores = nonconformity_scores(model, data, Norm::L2, 0);
    REQUIRE(scores.size() == static_cast<std::size_t>(data.size()));
    for (int i = 0; i < data.size(); ++i) {
        const Eigen::MatrixXd pred = model.predict(data.samples[i].x);
        const double want =
            (data.samples[i].a[0] - pred.row(0).transpose()).norm();
        CHECK(scores[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("calibrate fills per-row quantiles and centers the balls") {
    AlloyGenSpec spec;
    spec.n = 300;
    const auto data = gen_alloy(spec, 9);
    PredictorFitConfig cfg;
    cfg.hidden = 0;
    cfg.epochs = 20;
    const auto model = fit_constraint_predictor(data, cfg);
    const auto cal = calibrate(model, data, 0.2, Norm::L1);
    CHECK(cal.alpha == 0.2);
    CHECK(cal.norm == Norm::L1);
    REQUIRE(cal.quantiles.size() == 2);
    for (int row = 0; row < 2; ++row) {
        const auto scores = nonconformity_scores(model, data, Norm::L1, row);
        CHECK(cal.quantiles[row] ==
              doctest::Approx(conformal_quantile(scores, 0.2)));
    }
    const auto& x = data.samples[5].x;
    const auto U = cal.uncertainty_set(x);
    CHECK(U.norm == Norm::L1);
    REQUIRE(U.radius.size() == cal.quantiles.size());
    for (int row = 0; row < U.radius.size(); ++row)
        CHECK(U.radius[row] == cal.quantiles[row]);
    CHECK((U.center - model.predict(x)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("ball membership respects the chosen norm") {
    BallUncertainty U;
    U.center = Eigen::MatrixXd::Zero(1, 2);
    U.radius = Eigen::VectorXd::Constant(1, 1.0);
    U.norm = Norm::L2;
    std::vector<Eigen::VectorXd> at{(Eigen::VectorXd(2) << 0.8, 0.7).finished()};
    CHECK_FALSE(U.contains(at));  // l2 length ~1.06
    U.norm = Norm::L1;
    CHECK_FALSE(U.contains(at));  // l1 length 1.5
    at[0] << 0.5, 0.4;
    U.norm = Norm::L2;
    CHECK(U.contains(at));
    U.norm = Norm::L1;
    CHECK(U.contains(at));
    // An infinite radius accepts anything.
    U.radius[0] = std::numeric_limits<double>::infinity();
    at[0] << 1e12, -1e12;
    CHECK(U.contains(at));
}

TEST_CASE("a perfect predictor covers at the nominal rate") {
    // With exact centers, scores are pure noise norms and coverage on
    // fresh data concentrates near 1 - alpha.
    Rng rng(31);
    auto draw = [&](int n) {
        Dataset data;
        data.dims = {n, 1, 2, 1};
        for (int i = 0; i < n; ++i) {
            ContextSample s;
            s.x = Eigen::VectorXd::Constant(1, rng.uniform(-1.0, 1.0));
            s.c = Eigen::VectorXd::Zero(2);
            Eigen::VectorXd row(2);
            row << 2.0 + s.x[0] + rng.normal(0.0, 0.3),
                   1.0 - s.x[0] + rng.normal(0.0, 0.3);
            s.a.push_back(row);
            data.samples.push_back(std::move(s));
        }
        return data;
    };
    const auto fitset = draw(2000);
    PredictorFitConfig cfg;
    cfg.hidden = 0;
    cfg.epochs = 400;
    cfg.lr = 5e-3;
    const auto model = fit_constraint_predictor(fitset, cfg);
    const auto cal = calibrate(model, draw(1000), 0.2, Norm::L2);
    const double cov = empirical_coverage(cal, draw(4000));
    // Binomial sd at n=4000 is ~0.006; allow calibration-sample drift too.
    CHECK(cov > 0.76);
    CHECK(cov < 0.86);
}

TEST_CASE("tiny calibration sets force infinite radii") {
    Rng rng(41);
    Dataset data;
    data.dims = {3, 1, 1, 1};
    for (int i = 0; i < 3; ++i) {
        ContextSample s;
        s.x = Eigen::VectorXd::Constant(1, rng.normal());
        s.c = Eigen::VectorXd::Zero(1);
        s.a.push_back(Eigen::VectorXd::Constant(1, rng.normal()));
        data.samples.push_back(std::move(s));
    }
    PredictorFitConfig cfg;
    cfg.hidden = 0;
    cfg.epochs = 5;
    const auto model = fit_constraint_predictor(data, cfg);
    // n = 3, alpha = 0.2: k = ceil(4 * 0.8) = 4 > n.
    const auto cal = calibrate(model, data, 0.2, Norm::L2);
    CHECK(cal.quantiles[0] == std::numeric_limits<double>::infinity());
}

}  // TEST_SUITE
