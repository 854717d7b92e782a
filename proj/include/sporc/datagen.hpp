#pragma once

#include <cstdint>

#include "sporc/dataset.hpp"

namespace sporc {

/// Synthetic knapsack-style data. Features are uniform on (-1,1)^p. Costs
/// follow a degree-deg_c polynomial of a random binary mix of the features,
/// rescaled so the output range stays comparable across degrees; weights
/// follow the same construction at degree deg_a with heteroscedastic noise
/// that shrinks as |x| grows.
struct KnapsackGenSpec {
    int n = 1000;
    int p = 10;
    int d = 5;
    int deg_c = 4;
    int deg_a = 4;
    double b = 20.0;   ///< capacity carried into the decision problem
};

struct KnapsackGenResult {
    Dataset data;
    Eigen::MatrixXd B_c;  ///< d x p binary mixing matrix for costs
    Eigen::MatrixXd B_a;  ///< d x p binary mixing matrix for weights
};

KnapsackGenResult gen_knapsack_full(const KnapsackGenSpec& spec, std::uint64_t seed);
Dataset gen_knapsack(const KnapsackGenSpec& spec, std::uint64_t seed);

/// Noiseless mean cost/weight entries for a given context; shared by the
/// generator, tests, and the oracle model used in well-specified runs.
Eigen::VectorXd knapsack_mean_cost(const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& B_c, int deg_c);
Eigen::VectorXd knapsack_mean_weight(const Eigen::VectorXd& x,
                                     const Eigen::MatrixXd& B_a, int deg_a);

/// Alloy blending data: d suppliers, m mineral concentration rows. A base
/// concentration matrix is drawn once per dataset (Gamma with per-entry
/// shapes uniform on [0.1,1]); each sample observes it under small additive
/// noise, clipped at zero. Costs reuse the knapsack polynomial scheme.
struct AlloyGenSpec {
    int n = 1000;
    int p = 10;
    int d = 5;
    int m = 2;
    int deg_c = 2;
    double noise_sd = 0.05;
    std::array<double, 2> h{2.9, 7.1};  ///< minimum content requirements
};

struct AlloyGenResult {
    Dataset data;
    Eigen::MatrixXd B_c;
    Eigen::MatrixXd G_base;  ///< m x d base concentrations
};

AlloyGenResult gen_alloy_full(const AlloyGenSpec& spec, std::uint64_t seed);
Dataset gen_alloy(const AlloyGenSpec& spec, std::uint64_t seed);

/// Two-item toy data on a scalar feature. Mean costs are two parabolas that
/// cross twice inside (-1,1). Variant 2 adds a capacity on item 2 that drops
/// from 100 to 0 at x = 0.8; variant 1 keeps both caps at 100 (never
/// binding) so the variants share one schema.
struct ToyGenSpec {
    int n = 1000;
    int variant = 1;  ///< 1 or 2
    double noise_sd = 0.1;
};

Dataset gen_toy(const ToyGenSpec& spec, std::uint64_t seed);

/// Mean cost curves (c1, c2) at scalar x.
Eigen::Vector2d toy_mean_costs(double x);
/// The two crossings of the mean cost curves, ascending.
std::array<double, 2> toy_crossings();
/// Item-2 capacity for the toy variant 2 at scalar x.
double toy2_capacity(double x);

}  // namespace sporc
