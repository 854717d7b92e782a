#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sporc/datagen.hpp"
#include "sporc/errors.hpp"
#include "sporc/reweight.hpp"
#include "sporc/rng.hpp"

using namespace sporc;

namespace {

Dataset features_only(const std::vector<double>& xs) {
    Dataset data;
    data.dims = {static_cast<int>(xs.size()), 1, 1, 1};
    for (double v : xs) {
        ContextSample s;
        s.x = Eigen::VectorXd::Constant(1, v);
        s.c = Eigen::VectorXd::Zero(1);
        s.a.push_back(Eigen::VectorXd::Zero(1));
        data.samples.push_back(std::move(s));
    }
    return data;
}

}  // namespace

TEST_SUITE("reweight") {

TEST_CASE("gaussian kernel values match the formula") {
    Eigen::MatrixXd R(2, 1), C(3, 1);
    R << 0.0, 2.0;
    C << 0.0, 1.0, 3.0;
    const Eigen::MatrixXd K = gaussian_kernel(R, C, 2.0);
    REQUIRE(K.rows() == 2);
    REQUIRE(K.cols() == 3);
    CHECK(K(0, 0) == doctest::Approx(1.0));
    CHECK(K(0, 1) == doctest::Approx(std::exp(-0.25)));
    CHECK(K(0, 2) == doctest::Approx(std::exp(-2.25)));
    CHECK(K(1, 0) == doctest::Approx(std::exp(-1.0)));
    CHECK(K(1, 1) == doctest::Approx(std::exp(-0.25)));
    CHECK(K(1, 2) == doctest::Approx(std::exp(-0.25)));

    Eigen::MatrixXd A(1, 2), B(1, 2);
    A << 1.0, 2.0;
    B << 3.0, -1.0;
    CHECK(gaussian_kernel(A, B, 1.0)(0, 0) == doctest::Approx(std::exp(-13.0)));

    // Self-kernel is symmetric with a unit diagonal.
    const Eigen::MatrixXd S = gaussian_kernel(C, C, 0.7);
    CHECK((S - S.transpose()).lpNorm<Eigen::Infinity>() < 1e-14);
    for (int i = 0; i < 3; ++i) CHECK(S(i, i) == doctest::Approx(1.0));
}

TEST_CASE("set truncation keeps exactly the covered samples") {
    KnapsackGenSpec spec;
    spec.n = 150;
    const auto data = gen_knapsack(spec, 13);
    PredictorFitConfig cfg;
    cfg.hidden = 0;
    cfg.epochs = 5;
    auto cal = calibrate(fit_constraint_predictor(data, cfg), data, 0.2, Norm::L2);

    const auto res = truncate_outside_set(cal, data);
    std::vector<int> want;
    for (int i = 0; i < data.size(); ++i)
        if (cal.uncertainty_set(data.samples[i].x).contains(data.samples[i].a))
            want.push_back(i);
    CHECK(res.kept_indices == want);
    CHECK(res.removed == data.size() - static_cast<int>(want.size()));
    CHECK(res.kept.size() == static_cast<int>(want.size()));
    CHECK(res.kept.dims.n == res.kept.size());
    // At alpha = 0.2 on the calibration part itself, roughly 80% survive.
    CHECK(res.removed > 0);
    CHECK(res.removed < data.size() / 2);
    // Content rides along unchanged.
    const auto& first = res.kept.samples[0];
    const auto& orig = data.samples[res.kept_indices[0]];
    CHECK((first.x - orig.x).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((first.c - orig.c).lpNorm<Eigen::Infinity>() == 0.0);

    auto strict = cal;
    strict.quantiles.setConstant(1e-12);
    CHECK_THROWS_AS(truncate_outside_set(strict, data), AllTruncated);

    auto loose = cal;
    loose.quantiles.setConstant(1e9);
    CHECK(truncate_outside_set(loose, data).removed == 0);
}

TEST_CASE("interval truncation drops inside the window at the given rate") {
    Rng rng(21);
    std::vector<double> xs(3000);
    for (auto& v : xs) v = rng.uniform(-1.0, 1.0);
    const auto data = features_only(xs);
    const double lo = -0.5, hi = 0.3, frac = 0.6;
    int in_window = 0;
    for (double v : xs) in_window += (v >= lo && v <= hi);

    const auto res = truncate_interval_random(data, lo, hi, frac, 5);
    CHECK(res.removed + res.kept.size() == data.size());
    // Every dropped sample sat inside the window.
    std::vector<bool> kept(data.size(), false);
    for (int i : res.kept_indices) kept[i] = true;
    for (int i = 0; i < data.size(); ++i)
        if (!kept[i]) {
            CHECK(data.samples[i].x[0] >= lo);
            CHECK(data.samples[i].x[0] <= hi);
        }
    // Bernoulli(frac) thinning inside the window: four sigmas of slack.
    const double sd = std::sqrt(in_window * frac * (1 - frac));
    CHECK(std::abs(res.removed - frac * in_window) < 4 * sd);
    // Order is preserved.
    for (std::size_t k = 1; k < res.kept_indices.size(); ++k)
        CHECK(res.kept_indices[k] > res.kept_indices[k - 1]);

    const auto again = truncate_interval_random(data, lo, hi, frac, 5);
    CHECK(again.kept_indices == res.kept_indices);
    const auto other = truncate_interval_random(data, lo, hi, frac, 6);
    CHECK(other.kept_indices != res.kept_indices);

    CHECK(truncate_interval_random(data, lo, hi, 0.0, 5).removed == 0);
    CHECK(truncate_interval_random(data, lo, hi, 1.0, 5).removed == in_window);
    CHECK_THROWS_AS(truncate_interval_random(data, lo, hi, 1.2, 5), ConfigError);
    CHECK_THROWS_AS(truncate_interval_random(data, -2.0, 2.0, 1.0, 5),
                    AllTruncated);
}

TEST_CASE("kmm weights invert a known acceptance probability") {
    // Rejection-sampling oracle: thin uniform draws with probability pi(x),
    // then ask KMM to map the kept points back to a fresh full sample. The
    // right importance weight is 1 / pi(x). Individual weights are spiky
    // (many QP solutions share the same mean embedding), but bin averages
    // must recover the shape.
    auto pi = [](double x) { return 0.15 + 0.7 / (1.0 + std::exp(2.0 * x)); };
    Rng rng(99);
    std::vector<Eigen::VectorXd> source, target;
    std::vector<double> sx;
    for (int i = 0; i < 1200; ++i) {
        const double v = rng.uniform(-2.0, 2.0);
        if (rng.uniform01() < pi(v)) {
            source.push_back(Eigen::VectorXd::Constant(1, v));
            sx.push_back(v);
        }
    }
    for (int i = 0; i < 1200; ++i)
        target.push_back(Eigen::VectorXd::Constant(1, rng.uniform(-2.0, 2.0)));

    const auto w = kmm_weights(source, target);
    const int ns = static_cast<int>(source.size());
    REQUIRE(w.beta.size() == ns);
    CHECK(w.eps == doctest::Approx((std::sqrt(ns) - 1.0) / std::sqrt(ns)));
    // Box and band constraints of the weight program.
    for (int i = 0; i < ns; ++i) {
        CHECK(w.beta[i] >= 0.0);
        CHECK(w.beta[i] <= 1000.0 + 1e-6);
    }
    const double sum = w.beta.sum();
    CHECK(sum >= ns * (1 - w.eps) - 1e-6);
    CHECK(sum <= ns * (1 + w.eps) + 1e-6);

    const int bins = 8;
    std::vector<double> mean_beta, inv_pi;
    for (int b = 0; b < bins; ++b) {
        const double lo = -2.0 + 4.0 * b / bins, hi = lo + 4.0 / bins;
        double acc = 0;
        int cnt = 0;
        for (int i = 0; i < ns; ++i)
            if (sx[i] >= lo && sx[i] < hi) {
                acc += w.beta[i];
                ++cnt;
            }
        REQUIRE(cnt > 0);
        mean_beta.push_back(acc / cnt);
        inv_pi.push_back(1.0 / pi(0.5 * (lo + hi)));
    }
    CHECK(testref::spearman(mean_beta, inv_pi) > 0.85);

    // Same inputs give the same weights; the dataset overload agrees.
    const auto w2 = kmm_weights(source, target);
    CHECK((w2.beta - w.beta).lpNorm<Eigen::Infinity>() < 1e-12);
    std::vector<double> tx;
    for (const auto& t : target) tx.push_back(t[0]);
    const auto w3 = kmm_weights(features_only(sx), features_only(tx));
    CHECK((w3.beta - w.beta).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("kmm rejects empty or mismatched inputs") {
    std::vector<Eigen::VectorXd> one{Eigen::VectorXd::Constant(1, 0.5)};
    std::vector<Eigen::VectorXd> none;
    CHECK_THROWS_AS(kmm_weights(one, none), EmptyPart);
    CHECK_THROWS_AS(kmm_weights(none, one), EmptyPart);
    std::vector<Eigen::VectorXd> wide{Eigen::VectorXd::Zero(2)};
    CHECK_THROWS_AS(kmm_weights(one, wide), DimMismatch);
}

}  // TEST_SUITE
