#pragma once

#include "sporc/datagen.hpp"
#include "sporc/training.hpp"

namespace sporc {

/// Everything one benchmark run needs, in flat key=value form. Unset keys
/// fall back to per-problem defaults from default_config().
struct ExperimentConfig {
    std::string problem = "knapsack-l2";  ///< knapsack-l2 | knapsack-l1 | alloy | toy1 | toy2

    // data generation
    int n = 1000;       ///< pool that feeds the four-way split
    int n_test = 3000;  ///< held-out evaluation draw from the same process
    int p = 10;
    int d = 5;
    int m = 2;  ///< alloy constraint rows (must be 2, matching h)
    int deg_c = 4;
    int deg_a = 4;
    double b = 20.0;  ///< knapsack capacity; lower it to make it bind
    std::array<double, 2> h{2.9, 7.1};
    double noise_sd = 0.05;  ///< alloy observation noise
    double toy_noise = 0.1;

    // uncertainty sets
    double alpha = 0.2;
    std::array<double, 4> split{0.25, 0.25, 0.40, 0.10};

    // what to train
    std::vector<std::string> methods{"mse", "spo-rc-plus", "pto"};
    std::vector<std::string> variants{"O", "T", "IR"};

    // optimization
    double lr = 4e-3;
    double mse_lr = 1e-3;
    int epochs = 50;
    int mse_epochs = 1500;
    int batch_size = 32;
    int patience = 5;
    double resolve_prob = 1.0;
    bool warm_start_mse = true;
    int hidden = 32;  ///< constraint-predictor width, 0 = affine
    int predictor_epochs = 50;
    double predictor_lr = 1e-3;
    double kmm_eps = -1.0;  ///< <0: (sqrt(n)-1)/sqrt(n)
    bool kmm_target_calibration_part = false;

    // runs
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "out";
    bool deterministic = false;
    std::vector<int> sweep_deg_c;
    std::vector<double> sweep_resolve_prob;
};

/// Per-problem defaults (learning rates, coverage level, predictor shape).
ExperimentConfig default_config(const std::string& problem);

/// Flat key=value text, one pair per line, '#' comments. A "problem=" line
/// selects the default set; every other key overrides one field. Unknown
/// keys and invalid values throw ConfigError naming the key.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Hex digest over every config field; changes iff some field changes.
std::string config_digest(const ExperimentConfig& cfg);

struct RunSetup {
    RobustProblem problem;
    PipelineConfig pipe;
    Dataset train;
    Dataset test;
};

/// Resolved pipeline configuration for one seed (no data attached).
PipelineConfig build_pipe(const ExperimentConfig& cfg, std::uint64_t seed);
/// Training pool and test set drawn from one generator process; dataset
/// level parameters (mixing matrices, base concentrations) are shared.
std::pair<Dataset, Dataset> generate_data(const ExperimentConfig& cfg,
                                          std::uint64_t seed);
RunSetup build_setup(const ExperimentConfig& cfg, std::uint64_t seed);

struct MetricsRow {
    std::uint64_t seed = 0;
    std::string method, variant, problem;
    int deg_c = 0;
    double alpha = 0.0;
    double norm_pct = 0.0;
    double infeasible_pct = 0.0;
    double train_s = 0.0, eval_s = 0.0;
};

/// Long-format point for external plotting.
struct FigureRow {
    std::string problem;
    std::string sweep_key;  ///< "" | "deg_c" | "resolve_prob"
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    std::string method, variant, metric;
    double value = 0.0;
};

struct ExperimentOutput {
    std::vector<MetricsRow> metrics;
    std::vector<FigureRow> figure;
    std::vector<std::pair<std::string, std::vector<EpochLog>>> logs;
    double total_s = 0.0;
};

/// One pipeline run for one seed; from_disk loads the datasets written by
/// cmd_gen instead of regenerating them.
void run_one(const ExperimentConfig& cfg, std::uint64_t seed,
             const std::string& sweep_key, double sweep_value, bool from_disk,
             ExperimentOutput& out);

/// Commands behind the CLI verbs. All artifact files land under
/// cfg.out_dir: metrics.csv, figure-data.csv, manifest.json and per-run
/// training logs. Failures surface as exceptions (ConfigError for bad
/// input, PipelineError and friends for runtime trouble).
void cmd_gen(const ExperimentConfig& cfg);
void cmd_run(const ExperimentConfig& cfg);
void cmd_eval(const ExperimentConfig& cfg);
void cmd_sweep(const ExperimentConfig& cfg);

}  // namespace sporc
