#include <doctest.h>

#include <cmath>

#include "sporc/datagen.hpp"

using namespace sporc;

TEST_SUITE("datagen") {

TEST_CASE("toy mean curves match their closed forms") {
    CHECK(toy_mean_costs(0.0)[0] == doctest::Approx(4.0));
    CHECK(toy_mean_costs(0.0)[1] == doctest::Approx(2.875));
    CHECK(toy_mean_costs(1.0)[0] == doctest::Approx(0.0));
    CHECK(toy_mean_costs(1.0)[1] == doctest::Approx(3.25));
    CHECK(toy_mean_costs(-1.0)[0] == doctest::Approx(0.0));
    CHECK(toy_mean_costs(-1.0)[1] == doctest::Approx(2.75));
}

TEST_CASE("toy crossings agree with bisection on the curve gap") {
    auto gap = [](double x) {
        const auto c = toy_mean_costs(x);
        return c[0] - c[1];
    };
    auto bisect = [&](double lo, double hi) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((gap(lo) > 0) == (gap(mid) > 0)) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    const auto cr = toy_crossings();
    CHECK(cr[0] < cr[1]);
    // The gap changes sign once in each half of the feature range.
    CHECK(bisect(-1.0, 0.0) == doctest::Approx(cr[0]).epsilon(1e-12));
    CHECK(bisect(0.0, 1.0) == doctest::Approx(cr[1]).epsilon(1e-12));
    CHECK(std::abs(gap(cr[0])) < 1e-12);
    CHECK(std::abs(gap(cr[1])) < 1e-12);
}

TEST_CASE("noise-free toy samples sit exactly on the mean curves") {
    ToyGenSpec spec;
    spec.n = 200;
    spec.noise_sd = 0.0;
    const auto data = gen_toy(spec, 5);
    CHECK(data.dims == Dims{200, 1, 2, 1});
    for (const auto& s : data.samples) {
        const double x = s.x[0];
        CHECK(x > -1.0);
        CHECK(x < 1.0);
        const auto mean = toy_mean_costs(x);
        CHECK(s.c[0] == doctest::Approx(mean[0]).epsilon(1e-14));
        CHECK(s.c[1] == doctest::Approx(mean[1]).epsilon(1e-14));
    }
}

TEST_CASE("toy cost noise has the configured spread") {
    ToyGenSpec spec;
    spec.n = 5000;
    const auto data = gen_toy(spec, 6);
    double s2 = 0.0;
    for (const auto& s : data.samples) {
        const auto mean = toy_mean_costs(s.x[0]);
        s2 += std::pow(s.c[0] - mean[0], 2) + std::pow(s.c[1] - mean[1], 2);
    }
    CHECK(std::sqrt(s2 / (2 * spec.n)) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("toy capacity rows depend on the variant") {
    ToyGenSpec spec;
    spec.n = 500;
    spec.variant = 2;
    const auto v2 = gen_toy(spec, 7);
    bool saw_capped = false, saw_open = false;
    for (const auto& s : v2.samples) {
        CHECK(s.a[0][0] == 100.0);
        CHECK(s.a[0][1] == toy2_capacity(s.x[0]));
        (s.x[0] < 0.8 ? saw_open : saw_capped) = true;
    }
    CHECK(saw_capped);
    CHECK(saw_open);

    spec.variant = 1;
    const auto v1 = gen_toy(spec, 7);
    for (const auto& s : v1.samples) {
        CHECK(s.a[0][0] == 100.0);
        CHECK(s.a[0][1] == 100.0);
    }

    spec.variant = 3;
    CHECK_THROWS_AS(gen_toy(spec, 7), ConfigError);
}

TEST_CASE("knapsack samples deviate from the exposed means like unit noise") {
    KnapsackGenSpec spec;
    spec.n = 4000;
    const auto full = gen_knapsack_full(spec, 11);
    CHECK(full.data.dims == Dims{4000, 10, 5, 1});
    CHECK(full.B_c.rows() == 5);
    CHECK(full.B_c.cols() == 10);
    for (int i = 0; i < full.B_c.rows(); ++i)
        for (int j = 0; j < full.B_c.cols(); ++j) {
            CHECK((full.B_c(i, j) == 0.0 || full.B_c(i, j) == 1.0));
            CHECK((full.B_a(i, j) == 0.0 || full.B_a(i, j) == 1.0));
        }

    double c1 = 0, c2 = 0, a1 = 0, a2 = 0;
    long cn = 0, an = 0;
    for (const auto& s : full.data.samples) {
        const Eigen::VectorXd mc = knapsack_mean_cost(s.x, full.B_c, spec.deg_c);
        const Eigen::VectorXd ma = knapsack_mean_weight(s.x, full.B_a, spec.deg_a);
        const double scale = (spec.p - s.x.cwiseAbs().sum()) / spec.p;
        for (int j = 0; j < spec.d; ++j) {
            const double rc = s.c[j] - mc[j];
            c1 += rc; c2 += rc * rc; ++cn;
            // Weight noise is damped by how extreme the context is; undo
            // the damping to recover a unit-variance residual.
            const double ra = (s.a[0][j] - ma[j]) / scale;
            a1 += ra; a2 += ra * ra; ++an;
        }
    }
    CHECK(std::abs(c1 / cn) < 0.02);
    CHECK(c2 / cn == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::abs(a1 / an) < 0.02);
    CHECK(a2 / an == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("generators are deterministic in the seed") {
    KnapsackGenSpec spec;
    spec.n = 50;
    const auto a = gen_knapsack(spec, 3);
    const auto b = gen_knapsack(spec, 3);
    const auto c = gen_knapsack(spec, 4);
    CHECK(a.samples[17].c == b.samples[17].c);
    CHECK(a.samples[17].x == b.samples[17].x);
    CHECK(a.samples[17].c != c.samples[17].c);

    const auto t1 = gen_toy({.n = 50}, 9);
    const auto t2 = gen_toy({.n = 50}, 9);
    CHECK(t1.samples[31].c == t2.samples[31].c);
}

TEST_CASE("noise-free alloy rows equal the shared base concentrations") {
    AlloyGenSpec spec;
    spec.n = 100;
    spec.noise_sd = 0.0;
    const auto full = gen_alloy_full(spec, 13);
    CHECK(full.data.dims == Dims{100, 10, 5, 2});
    CHECK(full.G_base.rows() == 2);
    CHECK(full.G_base.cols() == 5);
    CHECK((full.G_base.array() > 0.0).all());
    for (const auto& s : full.data.samples)
        for (int j = 0; j < spec.m; ++j)
            for (int k = 0; k < spec.d; ++k)
                CHECK(s.a[j][k] == doctest::Approx(full.G_base(j, k)).epsilon(1e-14));
}

TEST_CASE("alloy rows stay nonnegative under noise") {
    AlloyGenSpec spec;
    spec.n = 500;
    spec.noise_sd = 0.5;  // large enough to hit the clip
    const auto data = gen_alloy(spec, 14);
    for (const auto& s : data.samples)
        for (const auto& row : s.a) CHECK((row.array() >= 0.0).all());
}

}  // TEST_SUITE
