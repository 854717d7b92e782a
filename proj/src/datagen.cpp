#include "sporc/datagen.hpp"

#include <cmath>

#include "sporc/rng.hpp"

namespace sporc {

static Eigen::MatrixXd bernoulli_matrix(int rows, int cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    return m;
}

static Eigen::VectorXd poly_kernel(const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& B, int deg,
                                   double offset) {
    const double p = static_cast<double>(x.size());
    const double scale = 5.0 / std::pow(3.5, deg);
    Eigen::VectorXd base = B * x / std::sqrt(p);
    Eigen::VectorXd out(B.rows());
    for (int j = 0; j < B.rows(); ++j)
        out[j] = scale * (std::pow(base[j] + 3.0, deg) + offset);
    return out;
}

Eigen::VectorXd knapsack_mean_cost(const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& B_c, int deg_c) {
    return poly_kernel(x, B_c, deg_c, 10.0);
}

Eigen::VectorXd knapsack_mean_weight(const Eigen::VectorXd& x,
                                     const Eigen::MatrixXd& B_a, int deg_a) {
    return poly_kernel(x, B_a, deg_a, 0.0);
}

KnapsackGenResult gen_knapsack_full(const KnapsackGenSpec& spec, std::uint64_t seed) {
    Rng coeff_rng = Rng(seed).child(1);
    Rng sample_rng = Rng(seed).child(2);

    KnapsackGenResult out;
    out.B_c = bernoulli_matrix(spec.d, spec.p, coeff_rng);
    out.B_a = bernoulli_matrix(spec.d, spec.p, coeff_rng);
    out.data.dims = {spec.n, spec.p, spec.d, 1};
    out.data.samples.reserve(static_cast<std::size_t>(spec.n));

    for (int i = 0; i < spec.n; ++i) {
        ContextSample s;
        s.x.resize(spec.p);
        for (int k = 0; k < spec.p; ++k) s.x[k] = sample_rng.uniform(-1.0, 1.0);

        s.c = knapsack_mean_cost(s.x, out.B_c, spec.deg_c);
        for (int j = 0; j < spec.d; ++j) s.c[j] += sample_rng.normal();

        // Weight noise scales with p - |x|_1, so extreme contexts are quieter.
        const double noise_scale =
            (static_cast<double>(spec.p) - s.x.cwiseAbs().sum()) / spec.p;
        Eigen::VectorXd a = knapsack_mean_weight(s.x, out.B_a, spec.deg_a);
        for (int j = 0; j < spec.d; ++j) a[j] += noise_scale * sample_rng.normal();
        s.a.push_back(a);

        out.data.samples.push_back(std::move(s));
    }
    return out;
}

Dataset gen_knapsack(const KnapsackGenSpec& spec, std::uint64_t seed) {
    return gen_knapsack_full(spec, seed).data;
}

AlloyGenResult gen_alloy_full(const AlloyGenSpec& spec, std::uint64_t seed) {
    Rng coeff_rng = Rng(seed).child(1);
    Rng sample_rng = Rng(seed).child(2);

    AlloyGenResult out;
    out.B_c = bernoulli_matrix(spec.d, spec.p, coeff_rng);

    // Base concentrations are a property of the suppliers, drawn once;
    // samples only see measurement-level noise around them.
    out.G_base.resize(spec.m, spec.d);
    for (int j = 0; j < spec.m; ++j)
        for (int i = 0; i < spec.d; ++i)
            out.G_base(j, i) = coeff_rng.gamma(coeff_rng.uniform(0.1, 1.0));

    out.data.dims = {spec.n, spec.p, spec.d, spec.m};
    out.data.samples.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) {
        ContextSample s;
        s.x.resize(spec.p);
        for (int k = 0; k < spec.p; ++k) s.x[k] = sample_rng.uniform(-1.0, 1.0);

        s.c = knapsack_mean_cost(s.x, out.B_c, spec.deg_c);
        for (int j = 0; j < spec.d; ++j) s.c[j] += sample_rng.normal();

        for (int j = 0; j < spec.m; ++j) {
            Eigen::VectorXd row(spec.d);
            for (int k = 0; k < spec.d; ++k)
                row[k] = std::max(
                    out.G_base(j, k) + sample_rng.normal(0.0, spec.noise_sd), 0.0);
            s.a.push_back(std::move(row));
        }
        out.data.samples.push_back(std::move(s));
    }
    return out;
}

Dataset gen_alloy(const AlloyGenSpec& spec, std::uint64_t seed) {
    return gen_alloy_full(spec, seed).data;
}

Eigen::Vector2d toy_mean_costs(double x) {
    return {-4.0 * x * x + 4.0, 0.125 * (x + 1.0) * (x + 1.0) + 2.75};
}

std::array<double, 2> toy_crossings() {
    // -4x^2 + 4 = (x+1)^2/8 + 2.75 reduces to 33x^2 + 2x - 9 = 0.
    const double disc = std::sqrt(4.0 + 4.0 * 33.0 * 9.0);
    return {(-2.0 - disc) / 66.0, (-2.0 + disc) / 66.0};
}

double toy2_capacity(double x) {
    return x < 0.8 ? 100.0 : 0.0;
}

Dataset gen_toy(const ToyGenSpec& spec, std::uint64_t seed) {
    if (spec.variant != 1 && spec.variant != 2)
        throw ConfigError("gen_toy: variant must be 1 or 2");
    Rng rng = Rng(seed).child(2);

    Dataset out;
    out.dims = {spec.n, 1, 2, 1};
    out.samples.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) {
        ContextSample s;
        s.x.resize(1);
        s.x[0] = rng.uniform(-1.0, 1.0);
        Eigen::Vector2d mean = toy_mean_costs(s.x[0]);
        s.c.resize(2);
        s.c[0] = mean[0] + rng.normal(0.0, spec.noise_sd);
        s.c[1] = mean[1] + rng.normal(0.0, spec.noise_sd);

        Eigen::VectorXd row(2);
        if (spec.variant == 2) {
            row << 100.0, toy2_capacity(s.x[0]);  // item 1 is never capped
        } else {
            row << 100.0, 100.0;  // caps far above the simplex: never bind
        }
        s.a.push_back(std::move(row));
        out.samples.push_back(std::move(s));
    }
    return out;
}

}  // namespace sporc
