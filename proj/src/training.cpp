#include "sporc/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sporc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate(const TrainConfig& cfg) {
    if (cfg.lr <= 0) throw ConfigError("train: lr must be positive");
    if (cfg.epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (cfg.resolve_prob < 0 || cfg.resolve_prob > 1)
        throw ConfigError("train: resolve_prob outside [0, 1]");
    if (cfg.val_frac < 0 || cfg.val_frac >= 1)
        throw ConfigError("train: val_frac outside [0, 1)");
    if (cfg.early_stop_patience < 0)
        throw ConfigError("train: early_stop_patience must be >= 0");
}

}  // namespace

int SolutionCache::best(int id, const Eigen::VectorXd& v) const {
    const auto& list = entries[id];
    int arg = -1;
    double best = 0.0;
    for (int k = 0; k < static_cast<int>(list.size()); ++k) {
        double val = v.dot(list[k]);
        if (arg < 0 || val < best) {
            arg = k;
            best = val;
        }
    }
    return arg;
}

Solution cached_solve(SolutionCache& cache, int instance_id,
                      const RobustProblem& prob, const Eigen::VectorXd& v,
                      const BallUncertainty& U, double resolve_prob, Rng& rng,
                      SolveCounters* counters) {
    bool fresh = rng.uniform01() < resolve_prob;
    if (!fresh && !cache.entries[instance_id].empty()) {
        int k = cache.best(instance_id, v);
        if (counters) ++counters->cache_hits;
        Solution sol;
        sol.status = SolveStatus::Optimal;
        sol.w = cache.entries[instance_id][k];
        sol.objective = v.dot(sol.w);
        return sol;
    }
    Solution sol = solve_min(prob, v, U);
    if (counters) ++counters->solves;
    if (sol.status == SolveStatus::Optimal) cache.add(instance_id, sol.w);
    return sol;
}

LinearCostModel train_spo_rc_plus(const Dataset& trunc,
                                  const Eigen::VectorXd& beta,
                                  const ConformalCalibrator& cal,
                                  const RobustProblem& prob,
                                  const TrainConfig& cfg, TrainStats* stats) {
    validate(cfg);
    trunc.validate();
    const int n = trunc.size();
    if (n == 0) throw EmptyPart("train_spo_rc_plus: empty training part");
    if (beta.size() != 0 && beta.size() != n)
        throw DimMismatch("train_spo_rc_plus: one weight per sample required");

    const auto t0 = Clock::now();
    const double sg = to_min_sign(prob);
    const int p = trunc.dims.p, d = trunc.dims.d;

    Eigen::VectorXd w8 = beta.size() ? beta : Eigen::VectorXd::Ones(n);
    if ((w8.array() < 0).any())
        throw ConfigError("train_spo_rc_plus: negative sample weight");
    double wsum = w8.sum();
    if (wsum <= 0) throw ConfigError("train_spo_rc_plus: weights sum to zero");
    // Elementwise (beta_i * n) / sum keeps equal weights at exactly 1.0.
    for (int i = 0; i < n; ++i) w8[i] = w8[i] * n / wsum;

    TrainStats local;
    TrainStats& st = stats ? *stats : local;
    st = TrainStats{};
    SolveCounters counters;

    // Fixed per-sample pieces: uncertainty set, internal costs, the anchor
    // decision w*(c, U) and the hindsight value. Samples whose anchor or
    // hindsight subproblem fails are left out of training entirely.
    std::vector<BallUncertainty> sets(n);
    std::vector<Eigen::VectorXd> ct(n), anchor(n);
    std::vector<double> hind(n, 0.0);
    std::vector<int> usable;
    SolutionCache cache(n);
    for (int i = 0; i < n; ++i) {
        const auto& smp = trunc.samples[i];
        sets[i] = cal.uncertainty_set(smp.x);
        ct[i] = sg * smp.c;
        Solution a = solve_min(prob, ct[i], sets[i]);
        ++counters.solves;
        if (a.status != SolveStatus::Optimal) {
            ++st.skipped_infeasible;
            continue;
        }
        Solution h = solve_min(prob, ct[i], singleton_at(smp.a));
        ++counters.solves;
        if (h.status != SolveStatus::Optimal) {
            ++st.skipped_infeasible;
            continue;
        }
        anchor[i] = a.w;
        hind[i] = h.objective;
        cache.add(i, a.w);
        usable.push_back(i);
    }
    if (usable.empty())
        throw InfeasibleError("train_spo_rc_plus: no sample has solvable subproblems");

    Rng root(cfg.seed);
    Rng split_rng = root.child(1);
    Rng epoch_rng = root.child(2);
    Rng resolve_rng = root.child(3);

    split_rng.shuffle(usable);
    const int n_val = static_cast<int>(cfg.val_frac * usable.size());
    std::vector<int> val_idx(usable.end() - n_val, usable.end());
    std::vector<int> train_idx(usable.begin(), usable.end() - n_val);
    if (train_idx.empty())
        throw EmptyPart("train_spo_rc_plus: validation slice consumed all samples");

    LinearCostModel model;
    model.B = Eigen::MatrixXd::Zero(d, p);
    model.b0 = Eigen::VectorXd::Zero(d);
    if (cfg.warm_start_mse) {
        Dataset sub = trunc.select(train_idx);
        Eigen::VectorXd wsub(train_idx.size());
        for (int k = 0; k < static_cast<int>(train_idx.size()); ++k)
            wsub[k] = w8[train_idx[k]];
        model = fit_mse_baseline(sub, &wsub, cfg.warm_start_epochs,
                                 cfg.warm_start_lr, cfg.seed);
    }

    // Surrogate loss and subgradient of one sample at the current model.
    // Gradient steps may take the flipped-cost argmin from the cache; loss
    // reporting and validation always re-solve, because a thin cache
    // understates the inner maximum and would steer early stopping.
    auto sample_loss = [&](int i, Eigen::VectorXd* grad_chat,
                           bool fresh) -> double {
        const auto& smp = trunc.samples[i];
        Eigen::VectorXd cht = sg * model.predict(smp.x);
        Eigen::VectorXd v = 2.0 * cht - ct[i];
        Solution f;
        if (fresh) {
            f = solve_min(prob, v, sets[i]);
            ++counters.solves;
            if (f.status == SolveStatus::Optimal) cache.add(i, f.w);
        } else {
            f = cached_solve(cache, i, prob, v, sets[i], cfg.resolve_prob,
                             resolve_rng, &counters);
        }
        if (f.status != SolveStatus::Optimal) {
            if (grad_chat) grad_chat->setZero();
            return std::numeric_limits<double>::quiet_NaN();
        }
        if (grad_chat) *grad_chat = 2.0 * (anchor[i] - f.w);
        return (ct[i] - 2.0 * cht).dot(f.w) + 2.0 * cht.dot(anchor[i]) - hind[i];
    };
    auto mean_loss = [&](const std::vector<int>& idx) -> double {
        double s = 0.0;
        int cnt = 0;
        for (int i : idx) {
            double li = sample_loss(i, nullptr, true);
            if (std::isfinite(li)) {
                s += w8[i] * li;
                ++cnt;
            }
        }
        return cnt ? s / cnt : 0.0;
    };

    Eigen::MatrixXd mB = Eigen::MatrixXd::Zero(d, p), vB = mB;
    Eigen::VectorXd mb = Eigen::VectorXd::Zero(d), vb = mb;
    long adam_t = 0;

    Eigen::MatrixXd best_B = model.B;
    Eigen::VectorXd best_b0 = model.b0;
    const bool has_val = !val_idx.empty();
    double best_metric = std::numeric_limits<double>::infinity();
    int since_best = 0;

    long solves_seen = 0, hits_seen = 0;
    auto log_epoch = [&](int epoch, double tl, double vl, Clock::time_point te) {
        EpochLog row;
        row.epoch = epoch;
        row.train_loss = tl;
        row.val_loss = vl;
        row.solves = counters.solves - solves_seen;
        row.cache_hits = counters.cache_hits - hits_seen;
        row.wall_ms = 1e3 * seconds_since(te);
        solves_seen = counters.solves;
        hits_seen = counters.cache_hits;
        st.log.push_back(row);
    };

    {
        // Baseline row before any update, so loss trajectories start at the
        // warm-start model.
        auto te = Clock::now();
        double tl = mean_loss(train_idx);
        double vl = has_val ? mean_loss(val_idx) : tl;
        log_epoch(0, tl, vl, te);
        best_metric = vl;
    }

    Eigen::VectorXd g(d);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        auto te = Clock::now();
        epoch_rng.shuffle(train_idx);
        double loss_sum = 0.0;
        int loss_cnt = 0;
        for (std::size_t start = 0; start < train_idx.size();
             start += cfg.batch_size) {
            std::size_t stop =
                std::min(train_idx.size(), start + cfg.batch_size);
            Eigen::MatrixXd gB = Eigen::MatrixXd::Zero(d, p);
            Eigen::VectorXd gb = Eigen::VectorXd::Zero(d);
            int got = 0;
            for (std::size_t k = start; k < stop; ++k) {
                int i = train_idx[k];
                double li = sample_loss(i, &g, false);
                if (!std::isfinite(li)) continue;
                gB += (w8[i] * sg) * g * trunc.samples[i].x.transpose();
                gb += (w8[i] * sg) * g;
                loss_sum += w8[i] * li;
                ++loss_cnt;
                ++got;
            }
            if (!got) continue;
            gB /= got;
            gb /= got;
            ++adam_t;
            double bc1 = 1.0 - std::pow(cfg.adam_beta1, adam_t);
            double bc2 = 1.0 - std::pow(cfg.adam_beta2, adam_t);
            mB = cfg.adam_beta1 * mB + (1 - cfg.adam_beta1) * gB;
            vB = cfg.adam_beta2 * vB + (1 - cfg.adam_beta2) * gB.cwiseAbs2();
            mb = cfg.adam_beta1 * mb + (1 - cfg.adam_beta1) * gb;
            vb = cfg.adam_beta2 * vb + (1 - cfg.adam_beta2) * gb.cwiseAbs2();
            model.B -= cfg.lr *
                       ((mB / bc1).array() /
                        ((vB / bc2).array().sqrt() + cfg.adam_eps)).matrix();
            model.b0 -= cfg.lr *
                        ((mb / bc1).array() /
                         ((vb / bc2).array().sqrt() + cfg.adam_eps)).matrix();
        }
        double train_loss = loss_cnt ? loss_sum / loss_cnt : 0.0;
        if (!std::isfinite(train_loss))
            throw Divergence("train_spo_rc_plus: non-finite training loss");
        double val_loss = has_val ? mean_loss(val_idx) : train_loss;
        log_epoch(epoch, train_loss, val_loss, te);
        st.epochs_run = epoch;

        double metric = has_val ? val_loss : train_loss;
        if (metric < best_metric) {
            best_metric = metric;
            best_B = model.B;
            best_b0 = model.b0;
            since_best = 0;
        } else if (++since_best > cfg.early_stop_patience) {
            break;
        }
    }

    model.B = best_B;
    model.b0 = best_b0;
    st.best_val = best_metric;
    st.solves = counters.solves;
    st.cache_hits = counters.cache_hits;
    st.wall_s = seconds_since(t0);
    return model;
}

PipelineResult run_pipeline(const Dataset& full, const PipelineConfig& cfg,
                            const Dataset* test) {
    full.validate();
    for (const auto& m : cfg.methods)
        if (m != "mse" && m != "spo-rc-plus" && m != "pto")
            throw ConfigError("run_pipeline: unknown method '" + m + "'");
    for (const auto& v : cfg.variants)
        if (v != "O" && v != "T" && v != "IR")
            throw ConfigError("run_pipeline: unknown variant '" + v + "'");

    PipelineResult out;
    out.split = four_way_split(full, cfg.split, mix_seed(cfg.seed, 1));

    PredictorFitConfig pc = cfg.predictor;
    pc.seed = mix_seed(cfg.seed, 2);
    MLPPredictor pred = fit_constraint_predictor(out.split.parts[0], pc);
    out.cal = calibrate(pred, out.split.parts[1], cfg.alpha, cfg.norm);

    const Dataset& train_full = out.split.parts[2];
    out.trunc = cfg.interval_truncation
                    ? truncate_interval_random(train_full, cfg.trunc_lo,
                                               cfg.trunc_hi, cfg.trunc_frac,
                                               mix_seed(cfg.seed, 3))
                    : truncate_outside_set(out.cal, train_full);

    bool needs_ir = std::find(cfg.variants.begin(), cfg.variants.end(), "IR") !=
                    cfg.variants.end();
    if (needs_ir) {
        const Dataset& target = cfg.kmm_target_calibration_part
                                    ? out.split.parts[1]
                                    : out.split.parts[3];
        out.weights = kmm_weights(out.trunc.kept, target, cfg.kmm);
    }

    const Eigen::VectorXd no_weights;
    auto variant_data = [&](const std::string& v) -> const Dataset& {
        return v == "O" ? train_full : out.trunc.kept;
    };
    auto variant_weights = [&](const std::string& v) -> const Eigen::VectorXd& {
        return v == "IR" ? out.weights.beta : no_weights;
    };

    int mse_on_original = -1;
    for (const auto& method : cfg.methods) {
        if (method == "pto") continue;  // needs the mse models first
        for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
            const std::string& var = cfg.variants[vi];
            TrainedModel tm;
            tm.method = method;
            tm.variant = var;
            auto t0 = Clock::now();
            if (method == "mse") {
                const Eigen::VectorXd& w = variant_weights(var);
                tm.model = fit_mse_baseline(variant_data(var),
                                            w.size() ? &w : nullptr,
                                            cfg.mse_epochs, cfg.mse_lr,
                                            mix_seed(cfg.seed, 10 + vi));
                if (var == "O")
                    mse_on_original = static_cast<int>(out.models.size());
            } else {
                TrainConfig tc = cfg.train;
                tc.seed = mix_seed(cfg.seed, 20 + vi);
                tm.model = train_spo_rc_plus(variant_data(var),
                                             variant_weights(var), out.cal,
                                             cfg.problem, tc, &tm.stats);
            }
            tm.train_s = seconds_since(t0);
            out.models.push_back(std::move(tm));
        }
    }
    if (std::find(cfg.methods.begin(), cfg.methods.end(), "pto") !=
        cfg.methods.end()) {
        TrainedModel tm;
        tm.method = "pto";
        tm.variant = "O";
        auto t0 = Clock::now();
        if (mse_on_original >= 0) {
            tm.model = out.models[mse_on_original].model;
        } else {
            tm.model = fit_mse_baseline(train_full, nullptr, cfg.mse_epochs,
                                        cfg.mse_lr, mix_seed(cfg.seed, 30));
        }
        tm.train_s = seconds_since(t0);
        out.models.push_back(std::move(tm));
    }

    if (test) {
        for (const auto& tm : out.models) {
            EvalOptions opt;
            opt.use_uncertainty = tm.method != "pto";
            auto t0 = Clock::now();
            EvalBreakdown bd =
                evaluate_model(tm.model, *test, out.cal, cfg.problem, opt);
            ExperimentReport rep;
            rep.method = tm.method;
            rep.variant = tm.variant;
            rep.norm_test_pct = bd.norm_pct;
            rep.infeasible_pct = bd.infeasible_pct;
            rep.n_test = bd.n_eval;
            rep.n_skipped = bd.n_skipped;
            rep.n_no_decision = bd.n_no_decision;
            rep.train_s = tm.train_s;
            rep.eval_s = seconds_since(t0);
            rep.seed = cfg.seed;
            out.reports.push_back(std::move(rep));
        }
    }
    return out;
}

}  // namespace sporc
