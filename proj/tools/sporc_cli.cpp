#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "sporc/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"decision-focused training with conformal constraint sets"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed_override = -1;
    bool deterministic = false;

    auto* gen = app.add_subcommand("gen", "write datasets for each seed");
    auto* run = app.add_subcommand(
        "run", "generate data in memory, train all methods, write metrics");
    auto* eval = app.add_subcommand(
        "eval", "train and score on datasets previously written by gen");
    auto* sweep = app.add_subcommand(
        "sweep", "run the deg_c / resolve_prob sweeps from the config");
    for (auto* cmd : {gen, run, eval, sweep}) {
        cmd->add_option("--config", config_path, "key=value config file")
            ->required();
        cmd->add_option("--seed", seed_override,
                        "replace the config's seed list with this one seed");
        cmd->add_option("--out", out_dir, "override the output directory");
        cmd->add_flag("--deterministic", deterministic,
                      "zero wall-clock fields so reruns are byte-identical");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sporc::ExperimentConfig cfg = sporc::parse_config_file(config_path);
        if (seed_override >= 0)
            cfg.seeds = {static_cast<std::uint64_t>(seed_override)};
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (deterministic) cfg.deterministic = true;
        if (const char* t = std::getenv("SPORC_THREADS");
            t && std::string(t) == "1")
            cfg.deterministic = true;

        if (app.got_subcommand(gen))
            sporc::cmd_gen(cfg);
        else if (app.got_subcommand(run))
            sporc::cmd_run(cfg);
        else if (app.got_subcommand(eval))
            sporc::cmd_eval(cfg);
        else
            sporc::cmd_sweep(cfg);
        std::printf("ok: artifacts in %s\n", cfg.out_dir.c_str());
        return 0;
    } catch (const sporc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
