#pragma once

#include "sporc/evaluation.hpp"
#include "sporc/reweight.hpp"
#include "sporc/rng.hpp"

namespace sporc {

struct TrainConfig {
    double lr = 4e-3;
    int epochs = 100;
    int batch_size = 32;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int early_stop_patience = 5;
    double val_frac = 0.10;
    /// Probability of actually re-solving the per-sample robust subproblem
    /// instead of reusing the best cached decision. 1 disables caching.
    double resolve_prob = 1.0;
    bool warm_start_mse = true;
    int warm_start_epochs = 1500;
    double warm_start_lr = 1e-2;
    std::uint64_t seed = 0;
};

/// Per-instance lists of feasible decisions seen so far. Feasible sets
/// differ per instance (each has its own uncertainty ball), so entries are
/// never shared across instances.
struct SolutionCache {
    std::vector<std::vector<Eigen::VectorXd>> entries;

    SolutionCache() = default;
    explicit SolutionCache(int n) : entries(n) {}
    void add(int id, const Eigen::VectorXd& w) { entries[id].push_back(w); }
    /// Index of the cached decision minimizing v'w; -1 when the list is empty.
    int best(int id, const Eigen::VectorXd& v) const;
};

struct SolveCounters {
    long solves = 0;
    long cache_hits = 0;
};

/// With probability resolve_prob performs a fresh solve_min (appending the
/// optimizer to the cache); otherwise returns the cached decision with the
/// smallest objective. Falls back to a fresh solve when the cache entry is
/// empty.
Solution cached_solve(SolutionCache& cache, int instance_id,
                      const RobustProblem& prob, const Eigen::VectorXd& v,
                      const BallUncertainty& U, double resolve_prob, Rng& rng,
                      SolveCounters* counters = nullptr);

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    long solves = 0;      ///< robust solves during this epoch
    long cache_hits = 0;  ///< cache lookups that avoided a solve
    double wall_ms = 0.0;
};

struct TrainStats {
    std::vector<EpochLog> log;
    long solves = 0;
    long cache_hits = 0;
    int skipped_infeasible = 0;  ///< samples without solvable subproblems
    int epochs_run = 0;
    double best_val = 0.0;
    double wall_s = 0.0;
};

/// Minimizes the weighted empirical surrogate loss over linear cost models
/// by minibatch adaptive-moment descent on the subgradient, chain-ruled
/// through c_hat = B x + b0. beta may be empty (all ones); otherwise one
/// weight per sample, normalized to mean one internally. The anchor solve
/// w*(c, U) per sample never changes during training, so it is computed
/// once up front and seeds the solution cache; only the flipped-cost solve
/// is cache-mediated.
LinearCostModel train_spo_rc_plus(const Dataset& trunc,
                                  const Eigen::VectorXd& beta,
                                  const ConformalCalibrator& cal,
                                  const RobustProblem& prob,
                                  const TrainConfig& cfg,
                                  TrainStats* stats = nullptr);

struct PipelineConfig {
    RobustProblem problem;
    SplitSpec split;
    PredictorFitConfig predictor;
    double alpha = 0.2;
    Norm norm = Norm::L2;
    TrainConfig train;
    int mse_epochs = 1500;
    double mse_lr = 1e-2;
    std::vector<std::string> methods{"mse", "spo-rc-plus", "pto"};
    std::vector<std::string> variants{"O", "T", "IR"};
    KmmConfig kmm;
    /// Reuse the calibration part as the reweighting target instead of the
    /// held-out fourth part.
    bool kmm_target_calibration_part = false;
    /// Replace set-membership truncation with random removal of a fraction
    /// of samples in a feature window (the unconstrained toy problem). The
    /// default window holds half the feature mass, so removing 60% of the
    /// in-window samples drops 30% of the dataset.
    bool interval_truncation = false;
    double trunc_lo = -0.5;
    double trunc_hi = 0.5;
    double trunc_frac = 0.6;
    std::uint64_t seed = 0;
};

struct TrainedModel {
    std::string method;   ///< "mse" | "spo-rc-plus" | "pto"
    std::string variant;  ///< "O" | "T" | "IR"
    LinearCostModel model;
    TrainStats stats;
    double train_s = 0.0;
};

struct PipelineResult {
    FourWaySplit split;
    ConformalCalibrator cal;
    TruncationResult trunc;
    ImportanceWeights weights;  ///< empty beta when no "IR" variant ran
    std::vector<TrainedModel> models;
    std::vector<ExperimentReport> reports;  ///< filled when a test set is given
};

/// The full chain: split -> constraint predictor (part 1) -> conformal
/// calibration (part 2) -> truncation of the training part -> importance
/// weights matching truncated features to the target part -> one trained
/// model per requested method and dataset variant (O original, T truncated,
/// IR truncated + reweighted). "pto" is the point-estimate baseline: the
/// original-data least-squares cost model evaluated without uncertainty.
/// When `test` is provided every model is also scored into `reports`.
PipelineResult run_pipeline(const Dataset& full, const PipelineConfig& cfg,
                            const Dataset* test = nullptr);

}  // namespace sporc
