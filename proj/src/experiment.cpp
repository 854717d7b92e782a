#include "sporc/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace sporc {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool is_toy(const std::string& problem) {
    return problem == "toy1" || problem == "toy2";
}

bool is_knapsack(const std::string& problem) {
    return problem == "knapsack-l2" || problem == "knapsack-l1";
}

void validate_config(const ExperimentConfig& c) {
    if (!is_knapsack(c.problem) && c.problem != "alloy" && !is_toy(c.problem))
        throw ConfigError("config: unknown problem '" + c.problem + "'");
    if (c.seeds.empty()) throw ConfigError("config: seeds must be non-empty");
    if (c.n < 8) throw ConfigError("config: n too small to split four ways");
    if (c.n_test < 1) throw ConfigError("config: n_test must be positive");
    if (!(c.alpha > 0.0 && c.alpha < 1.0))
        throw ConfigError("config: alpha must lie in (0, 1)");
    if (c.d < 2) throw ConfigError("config: d must be at least 2");
    if (c.deg_c < 1 || c.deg_c > 16)
        throw ConfigError("config: deg_c outside {1,...,16}");
    if (c.deg_a < 1 || c.deg_a > 16)
        throw ConfigError("config: deg_a outside {1,...,16}");
    if (c.b <= 0) throw ConfigError("config: b must be positive");
    if (c.problem == "alloy" && c.m != 2)
        throw ConfigError("config: alloy supports m=2 (two requirements)");
    if (c.lr <= 0 || c.mse_lr <= 0 || c.predictor_lr <= 0)
        throw ConfigError("config: learning rates must be positive");
    if (c.epochs < 0 || c.mse_epochs < 1 || c.predictor_epochs < 1)
        throw ConfigError("config: epoch counts out of range");
    if (c.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (c.resolve_prob < 0 || c.resolve_prob > 1)
        throw ConfigError("config: resolve_prob outside [0, 1]");
    if (c.hidden < 0) throw ConfigError("config: hidden must be >= 0");
    if (c.methods.empty() || c.variants.empty())
        throw ConfigError("config: methods and variants must be non-empty");
    if (c.out_dir.empty()) throw ConfigError("config: out_dir must be set");
    double fsum = 0;
    for (double f : c.split) {
        if (f <= 0) throw ConfigError("config: split fractions must be positive");
        fsum += f;
    }
    if (std::abs(fsum - 1.0) > 1e-9)
        throw ConfigError("config: split fractions must sum to 1");
}

int thread_budget() {
    if (const char* env = std::getenv("SPORC_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Runs fn(0..njobs-1) on up to `threads` workers; first exception wins.
void run_jobs(int njobs, int threads, bool sequential,
              const std::function<void(int)>& fn) {
    if (sequential || threads <= 1 || njobs <= 1) {
        for (int j = 0; j < njobs; ++j) fn(j);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            int j = next.fetch_add(1);
            if (j >= njobs || failed.load()) return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, njobs); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentConfig default_config(const std::string& problem) {
    ExperimentConfig c;
    c.problem = problem;
    if (problem == "knapsack-l2") {
        c.lr = 4e-3;
        c.mse_lr = 1e-3;
    } else if (problem == "knapsack-l1") {
        c.lr = 5e-2;
        c.mse_lr = 1e-2;
    } else if (problem == "alloy") {
        c.deg_c = 2;
        c.lr = 4e-2;
        c.mse_lr = 1e-2;
    } else if (is_toy(problem)) {
        c.p = 1;
        c.d = 2;
        c.m = 1;
        c.alpha = 0.25;
        c.hidden = 0;  // plain linear regression on the constraint row
        c.predictor_epochs = 300;
        c.predictor_lr = 1e-2;
        c.lr = 5e-2;
        c.mse_lr = 1e-2;
        c.mse_epochs = 800;
        c.n_test = 2000;
        // the capacity-drop variant needs a precise calibration cut, which
        // takes more predictor-fit and calibration samples
        if (problem == "toy2") c.n = 4000;
        // two-item subproblems solve in closed form, so run the surrogate
        // descent to convergence instead of stopping early
        c.epochs = 1000;
        c.patience = 1000;
        c.batch_size = 64;
    } else {
        throw ConfigError("config: unknown problem '" + problem + "'");
    }
    validate_config(c);
    return c;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: bad boolean value for '" + key + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string problem = "knapsack-l2";
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            std::size_t x = s.find_first_not_of(" \t");
            std::size_t y = s.find_last_not_of(" \t");
            s = x == std::string::npos ? "" : s.substr(x, y - x + 1);
        };
        trim(key);
        trim(val);
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key or value");
        if (key == "problem") problem = val;
        pairs.emplace_back(key, val);
    }

    ExperimentConfig c = default_config(problem);
    for (const auto& [key, val] : pairs) {
        if (key == "problem") {
        } else if (key == "n") {
            c.n = static_cast<int>(parse_int(key, val));
        } else if (key == "n_test") {
            c.n_test = static_cast<int>(parse_int(key, val));
        } else if (key == "p") {
            c.p = static_cast<int>(parse_int(key, val));
        } else if (key == "d") {
            c.d = static_cast<int>(parse_int(key, val));
        } else if (key == "m") {
            c.m = static_cast<int>(parse_int(key, val));
        } else if (key == "deg_c") {
            c.deg_c = static_cast<int>(parse_int(key, val));
        } else if (key == "deg_a") {
            c.deg_a = static_cast<int>(parse_int(key, val));
        } else if (key == "b") {
            c.b = parse_double(key, val);
        } else if (key == "h") {
            auto items = split_list(val);
            if (items.size() != 2)
                throw ConfigError("config: 'h' needs exactly two values");
            c.h = {parse_double(key, items[0]), parse_double(key, items[1])};
        } else if (key == "noise_sd") {
            c.noise_sd = parse_double(key, val);
        } else if (key == "toy_noise") {
            c.toy_noise = parse_double(key, val);
        } else if (key == "alpha") {
            c.alpha = parse_double(key, val);
        } else if (key == "split") {
            auto items = split_list(val);
            if (items.size() != 4)
                throw ConfigError("config: 'split' needs four fractions");
            for (int i = 0; i < 4; ++i) c.split[i] = parse_double(key, items[i]);
        } else if (key == "methods") {
            c.methods = split_list(val);
        } else if (key == "variants") {
            c.variants = split_list(val);
        } else if (key == "lr") {
            c.lr = parse_double(key, val);
        } else if (key == "mse_lr") {
            c.mse_lr = parse_double(key, val);
        } else if (key == "epochs") {
            c.epochs = static_cast<int>(parse_int(key, val));
        } else if (key == "mse_epochs") {
            c.mse_epochs = static_cast<int>(parse_int(key, val));
        } else if (key == "batch_size") {
            c.batch_size = static_cast<int>(parse_int(key, val));
        } else if (key == "patience") {
            c.patience = static_cast<int>(parse_int(key, val));
        } else if (key == "resolve_prob") {
            c.resolve_prob = parse_double(key, val);
        } else if (key == "warm_start_mse") {
            c.warm_start_mse = parse_bool(key, val);
        } else if (key == "hidden") {
            c.hidden = static_cast<int>(parse_int(key, val));
        } else if (key == "predictor_epochs") {
            c.predictor_epochs = static_cast<int>(parse_int(key, val));
        } else if (key == "predictor_lr") {
            c.predictor_lr = parse_double(key, val);
        } else if (key == "kmm_eps") {
            c.kmm_eps = parse_double(key, val);
        } else if (key == "kmm_target_calibration_part") {
            c.kmm_target_calibration_part = parse_bool(key, val);
        } else if (key == "seeds") {
            c.seeds.clear();
            for (const auto& s : split_list(val))
                c.seeds.push_back(static_cast<std::uint64_t>(parse_int(key, s)));
        } else if (key == "out_dir") {
            c.out_dir = val;
        } else if (key == "deterministic") {
            c.deterministic = parse_bool(key, val);
        } else if (key == "sweep_deg_c") {
            c.sweep_deg_c.clear();
            for (const auto& s : split_list(val))
                c.sweep_deg_c.push_back(static_cast<int>(parse_int(key, s)));
        } else if (key == "sweep_resolve_prob") {
            c.sweep_resolve_prob.clear();
            for (const auto& s : split_list(val))
                c.sweep_resolve_prob.push_back(parse_double(key, s));
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    validate_config(c);
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_digest(const ExperimentConfig& c) {
    std::ostringstream s;
    s << "problem=" << c.problem << ";n=" << c.n << ";n_test=" << c.n_test
      << ";p=" << c.p << ";d=" << c.d << ";m=" << c.m << ";deg_c=" << c.deg_c
      << ";deg_a=" << c.deg_a << ";b=" << num(c.b) << ";h=" << num(c.h[0])
      << "," << num(c.h[1]) << ";noise_sd=" << num(c.noise_sd)
      << ";toy_noise=" << num(c.toy_noise) << ";alpha=" << num(c.alpha)
      << ";split=";
    for (double f : c.split) s << num(f) << ",";
    s << ";methods=";
    for (const auto& v : c.methods) s << v << ",";
    s << ";variants=";
    for (const auto& v : c.variants) s << v << ",";
    s << ";lr=" << num(c.lr) << ";mse_lr=" << num(c.mse_lr)
      << ";epochs=" << c.epochs << ";mse_epochs=" << c.mse_epochs
      << ";batch_size=" << c.batch_size << ";patience=" << c.patience
      << ";resolve_prob=" << num(c.resolve_prob)
      << ";warm_start_mse=" << c.warm_start_mse << ";hidden=" << c.hidden
      << ";predictor_epochs=" << c.predictor_epochs
      << ";predictor_lr=" << num(c.predictor_lr)
      << ";kmm_eps=" << num(c.kmm_eps)
      << ";kmm_target_calibration_part=" << c.kmm_target_calibration_part
      << ";seeds=";
    for (auto v : c.seeds) s << v << ",";
    s << ";out_dir=" << c.out_dir << ";deterministic=" << c.deterministic
      << ";sweep_deg_c=";
    for (int v : c.sweep_deg_c) s << v << ",";
    s << ";sweep_resolve_prob=";
    for (double v : c.sweep_resolve_prob) s << num(v) << ",";

    std::string bytes = s.str();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

PipelineConfig build_pipe(const ExperimentConfig& c, std::uint64_t seed) {
    validate_config(c);
    PipelineConfig pc;
    if (is_knapsack(c.problem)) {
        pc.problem.family = Family::FractionalKnapsack;
        pc.problem.d = c.d;
        pc.problem.b = c.b;
        pc.norm = c.problem == "knapsack-l1" ? Norm::L1 : Norm::L2;
    } else if (c.problem == "alloy") {
        pc.problem.family = Family::AlloyCovering;
        pc.problem.d = c.d;
        pc.problem.h = Eigen::Vector2d(c.h[0], c.h[1]);
        pc.norm = Norm::L2;
    } else {
        pc.problem.family = Family::CapacitySimplex;
        pc.problem.d = 2;
        pc.norm = Norm::L2;
        if (c.problem == "toy1") {
            pc.interval_truncation = true;
            pc.trunc_lo = -0.5;
            pc.trunc_hi = 0.5;
            pc.trunc_frac = 0.6;
        }
    }
    pc.split.fractions = c.split;
    pc.predictor.hidden = c.hidden;
    pc.predictor.epochs = c.predictor_epochs;
    pc.predictor.lr = c.predictor_lr;
    pc.alpha = c.alpha;
    pc.train.lr = c.lr;
    pc.train.epochs = c.epochs;
    pc.train.batch_size = c.batch_size;
    pc.train.early_stop_patience = c.patience;
    pc.train.resolve_prob = c.resolve_prob;
    pc.train.warm_start_mse = c.warm_start_mse;
    pc.train.warm_start_epochs = c.mse_epochs;
    pc.train.warm_start_lr = c.mse_lr;
    pc.mse_epochs = c.mse_epochs;
    pc.mse_lr = c.mse_lr;
    pc.methods = c.methods;
    pc.variants = c.variants;
    pc.kmm.eps = c.kmm_eps;
    pc.kmm_target_calibration_part = c.kmm_target_calibration_part;
    pc.seed = seed;
    return pc;
}

std::pair<Dataset, Dataset> generate_data(const ExperimentConfig& c,
                                          std::uint64_t seed) {
    validate_config(c);
    const int total = c.n + c.n_test;
    Dataset full;
    std::uint64_t gen_seed = mix_seed(seed, 0xDA7A);
    if (is_knapsack(c.problem)) {
        KnapsackGenSpec spec{total, c.p, c.d, c.deg_c, c.deg_a, c.b};
        full = gen_knapsack(spec, gen_seed);
    } else if (c.problem == "alloy") {
        AlloyGenSpec spec{total, c.p, c.d, c.m, c.deg_c, c.noise_sd, c.h};
        full = gen_alloy(spec, gen_seed);
    } else {
        ToyGenSpec spec{total, c.problem == "toy2" ? 2 : 1, c.toy_noise};
        full = gen_toy(spec, gen_seed);
    }
    std::vector<int> head(c.n), tail(c.n_test);
    for (int i = 0; i < c.n; ++i) head[i] = i;
    for (int i = 0; i < c.n_test; ++i) tail[i] = c.n + i;
    return {full.select(head), full.select(tail)};
}

RunSetup build_setup(const ExperimentConfig& cfg, std::uint64_t seed) {
    RunSetup s;
    s.pipe = build_pipe(cfg, seed);
    s.problem = s.pipe.problem;
    auto [train, test] = generate_data(cfg, seed);
    s.train = std::move(train);
    s.test = std::move(test);
    return s;
}

void run_one(const ExperimentConfig& cfg, std::uint64_t seed,
             const std::string& sweep_key, double sweep_value, bool from_disk,
             ExperimentOutput& out) {
    auto t0 = Clock::now();
    RunSetup s;
    if (from_disk) {
        std::string dir = cfg.out_dir + "/seed-" + std::to_string(seed);
        if (!fs::exists(dir + "/train.jsonl") || !fs::exists(dir + "/test.jsonl"))
            throw PipelineError("eval: no generated datasets under " + dir +
                                " (run gen first)");
        s.pipe = build_pipe(cfg, seed);
        s.problem = s.pipe.problem;
        s.train = read_jsonl(dir + "/train.jsonl");
        s.test = read_jsonl(dir + "/test.jsonl");
    } else {
        s = build_setup(cfg, seed);
    }

    PipelineResult res = run_pipeline(s.train, s.pipe, &s.test);

    const bool det = cfg.deterministic;
    const std::string digest = config_digest(cfg);
    std::string run_tag = "seed-" + std::to_string(seed);
    if (!sweep_key.empty()) run_tag += "-" + sweep_key + "-" + num(sweep_value);

    for (std::size_t k = 0; k < res.models.size(); ++k) {
        const ExperimentReport& rep = res.reports[k];
        MetricsRow row;
        row.seed = seed;
        row.method = rep.method;
        row.variant = rep.variant;
        row.problem = cfg.problem;
        row.deg_c = cfg.deg_c;
        row.alpha = cfg.alpha;
        row.norm_pct = rep.norm_test_pct;
        row.infeasible_pct = rep.infeasible_pct;
        row.train_s = det ? 0.0 : rep.train_s;
        row.eval_s = det ? 0.0 : rep.eval_s;
        out.metrics.push_back(std::move(row));

        auto fig = [&](const std::string& metric, double value) {
            out.figure.push_back({cfg.problem, sweep_key, sweep_value, seed,
                                  rep.method, rep.variant, metric, value});
        };
        fig("norm_spo_rc_test", rep.norm_test_pct);
        fig("infeasible_pct", rep.infeasible_pct);
        if (is_toy(cfg.problem)) {
            EvalOptions opt;
            opt.use_uncertainty = rep.method != "pto";
            auto cr = toy_crossings();
            auto rr = region_regret(res.models[k].model, s.test, res.cal,
                                    s.pipe.problem, {cr[0], cr[1]}, opt);
            fig("region_a", rr[0]);
            fig("region_b", rr[1]);
            fig("region_c", rr[2]);
        }

        if (!res.models[k].stats.log.empty()) {
            auto log = res.models[k].stats.log;
            if (det)
                for (auto& e : log) e.wall_ms = 0.0;
            out.logs.emplace_back(
                run_tag + "-" + rep.method + "-" + rep.variant, std::move(log));
        }
    }
    out.total_s += det ? 0.0 : seconds_since(t0);
}

namespace {

void write_artifacts(const ExperimentConfig& cfg, const ExperimentOutput& out) {
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream f(cfg.out_dir + "/metrics.csv");
        f << "seed,method,variant,problem,deg_c,alpha,norm_spo_rc_test,"
             "infeasible_pct,train_s,eval_s\n";
        for (const auto& r : out.metrics)
            f << r.seed << ',' << r.method << ',' << r.variant << ','
              << r.problem << ',' << r.deg_c << ',' << num(r.alpha) << ','
              << num(r.norm_pct) << ',' << num(r.infeasible_pct) << ','
              << num(r.train_s) << ',' << num(r.eval_s) << '\n';
    }
    {
        std::ofstream f(cfg.out_dir + "/figure-data.csv");
        f << "problem,sweep_key,sweep_value,seed,method,variant,metric,value\n";
        for (const auto& r : out.figure)
            f << r.problem << ',' << r.sweep_key << ','
              << (r.sweep_key.empty() ? "" : num(r.sweep_value)) << ','
              << r.seed << ',' << r.method << ',' << r.variant << ','
              << r.metric << ',' << num(r.value) << '\n';
    }
    if (!out.logs.empty()) fs::create_directories(cfg.out_dir + "/logs");
    for (const auto& [name, log] : out.logs) {
        std::ofstream f(cfg.out_dir + "/logs/" + name + ".csv");
        f << "epoch,train_loss,val_loss,solves,cache_hits,wall_ms\n";
        for (const auto& e : log)
            f << e.epoch << ',' << num(e.train_loss) << ',' << num(e.val_loss)
              << ',' << e.solves << ',' << e.cache_hits << ','
              << num(e.wall_ms) << '\n';
    }
    nlohmann::json manifest;
    manifest["digest"] = config_digest(cfg);
    manifest["problem"] = cfg.problem;
    manifest["seeds"] = cfg.seeds;
    manifest["n"] = cfg.n;
    manifest["n_test"] = cfg.n_test;
    manifest["deg_c"] = cfg.deg_c;
    manifest["alpha"] = cfg.alpha;
    manifest["methods"] = cfg.methods;
    manifest["variants"] = cfg.variants;
    manifest["deterministic"] = cfg.deterministic;
    manifest["metric_rows"] = out.metrics.size();
    manifest["total_s"] = cfg.deterministic ? 0.0 : out.total_s;
    manifest["library_version"] = "0.1.0";
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
    std::ofstream mf(cfg.out_dir + "/manifest.json");
    mf << manifest.dump(2) << '\n';
}

void merge_outputs(std::vector<ExperimentOutput>& parts,
                   ExperimentOutput& all) {
    for (auto& part : parts) {
        all.metrics.insert(all.metrics.end(), part.metrics.begin(),
                           part.metrics.end());
        all.figure.insert(all.figure.end(), part.figure.begin(),
                          part.figure.end());
        for (auto& lg : part.logs) all.logs.push_back(std::move(lg));
        all.total_s += part.total_s;
    }
}

void run_seeds(const ExperimentConfig& cfg, bool from_disk) {
    const int njobs = static_cast<int>(cfg.seeds.size());
    std::vector<ExperimentOutput> parts(njobs);
    run_jobs(njobs, thread_budget(), cfg.deterministic, [&](int j) {
        run_one(cfg, cfg.seeds[j], "", 0.0, from_disk, parts[j]);
    });
    ExperimentOutput all;
    merge_outputs(parts, all);
    write_artifacts(cfg, all);
}

}  // namespace

void cmd_gen(const ExperimentConfig& cfg) {
    validate_config(cfg);
    for (std::uint64_t seed : cfg.seeds) {
        auto [train, test] = generate_data(cfg, seed);
        std::string dir = cfg.out_dir + "/seed-" + std::to_string(seed);
        fs::create_directories(dir);
        write_jsonl(train, dir + "/train.jsonl");
        write_jsonl(test, dir + "/test.jsonl");
    }
}

void cmd_run(const ExperimentConfig& cfg) {
    validate_config(cfg);
    run_seeds(cfg, false);
}

void cmd_eval(const ExperimentConfig& cfg) {
    validate_config(cfg);
    run_seeds(cfg, true);
}

void cmd_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.sweep_deg_c.empty() && cfg.sweep_resolve_prob.empty())
        throw ConfigError(
            "sweep: set sweep_deg_c and/or sweep_resolve_prob in the config");

    struct Job {
        ExperimentConfig cfg;
        std::uint64_t seed;
        std::string key;
        double value;
    };
    std::vector<Job> jobs;
    for (int v : cfg.sweep_deg_c) {
        ExperimentConfig c = cfg;
        c.deg_c = v;
        for (std::uint64_t seed : cfg.seeds)
            jobs.push_back({c, seed, "deg_c", static_cast<double>(v)});
    }
    for (double v : cfg.sweep_resolve_prob) {
        ExperimentConfig c = cfg;
        c.resolve_prob = v;
        for (std::uint64_t seed : cfg.seeds)
            jobs.push_back({c, seed, "resolve_prob", v});
    }

    std::vector<ExperimentOutput> parts(jobs.size());
    run_jobs(static_cast<int>(jobs.size()), thread_budget(), cfg.deterministic,
             [&](int j) {
                 run_one(jobs[j].cfg, jobs[j].seed, jobs[j].key, jobs[j].value,
                         false, parts[j]);
             });
    ExperimentOutput all;
    merge_outputs(parts, all);
    write_artifacts(cfg, all);
}

}  // namespace sporc
