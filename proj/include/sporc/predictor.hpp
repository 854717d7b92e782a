#pragma once

#include <cstdint>
#include <optional>

#include "sporc/dataset.hpp"

namespace sporc {

/// One-hidden-layer ReLU network mapping features to the flattened
/// constraint rows (m*d outputs, row-major). hidden == 0 degrades to a
/// plain affine map, which is how a linear constraint predictor is
/// requested. Inputs and targets are standardized internally; predict()
/// works in original units.
struct MLPPredictor {
    int p = 0, hidden = 0, rows = 0, d = 0;
    Eigen::MatrixXd W1;  // hidden x p
    Eigen::VectorXd b1;
    Eigen::MatrixXd W2;  // (rows*d) x hidden, or x p when hidden == 0
    Eigen::VectorXd b2;
    Eigen::VectorXd x_mean, x_scale, y_mean, y_scale;

    /// Predicted constraint rows (m x d) at context x.
    Eigen::MatrixXd predict(const Eigen::VectorXd& x) const;
};

struct PredictorFitConfig {
    int hidden = 32;
    int epochs = 50;
    double lr = 1e-3;
    int batch = 32;
    int patience = 5;        ///< early stopping on the validation slice
    double val_frac = 0.10;
    std::uint64_t seed = 0;
};

struct FitReport {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    int epochs_run = 0;
};

/// Fits the constraint predictor by minibatch Adam on mean squared error.
MLPPredictor fit_constraint_predictor(const Dataset& train,
                                      const PredictorFitConfig& cfg,
                                      FitReport* report = nullptr);

Eigen::MatrixXd predict_constraint(const MLPPredictor& model,
                                   const Eigen::VectorXd& x);

/// Linear cost model c_hat = B x + b0.
struct LinearCostModel {
    Eigen::MatrixXd B;   // d x p
    Eigen::VectorXd b0;  // d
    Eigen::VectorXd predict(const Eigen::VectorXd& x) const { return B * x + b0; }
};

/// Weighted mean squared error of the cost model; weights default to ones.
double mse_loss(const LinearCostModel& model, const Dataset& data,
                const Eigen::VectorXd* weights = nullptr);

/// Full-batch Adam fit of the linear cost model under the weighted MSE
///   sum_i w_i |B x_i + b0 - c_i|^2 / sum_i w_i.
/// The normalization makes the fit invariant to weight rescaling and to
/// dropping zero-weight samples; full-batch steps make it deterministic.
/// `epochs` counts gradient steps. `seed` is accepted for interface
/// uniformity; the fit itself draws no random numbers.
LinearCostModel fit_mse_baseline(const Dataset& train,
                                 const Eigen::VectorXd* weights = nullptr,
                                 int epochs = 1500, double lr = 1e-2,
                                 std::uint64_t seed = 0,
                                 const LinearCostModel* warm_start = nullptr);

}  // namespace sporc
