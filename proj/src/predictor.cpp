#include "sporc/predictor.hpp"

#include <cmath>
#include <numeric>

#include "sporc/rng.hpp"

namespace sporc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Adam state for one parameter block.
struct Adam {
    MatrixXd m, v;
    double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    long t = 0;

    void init(Eigen::Index rows, Eigen::Index cols) {
        m = MatrixXd::Zero(rows, cols);
        v = MatrixXd::Zero(rows, cols);
    }
    void step(MatrixXd& theta, const MatrixXd& g, double lr) {
        ++t;
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
        theta -= (lr / c1) * (m.array() /
                              ((v.array() / c2).sqrt() + eps))
                      .matrix();
    }
};

MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-a, a);
    return w;
}

}  // namespace

Eigen::MatrixXd MLPPredictor::predict(const Eigen::VectorXd& x) const {
    VectorXd xs = (x - x_mean).cwiseQuotient(x_scale);
    VectorXd ys;
    if (hidden > 0) {
        VectorXd h = (W1 * xs + b1).cwiseMax(0.0);
        ys = W2 * h + b2;
    } else {
        ys = W2 * xs + b2;
    }
    VectorXd y = ys.cwiseProduct(y_scale) + y_mean;
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(y.data(), rows, d);
}

Eigen::MatrixXd predict_constraint(const MLPPredictor& model,
                                   const Eigen::VectorXd& x) {
    return model.predict(x);
}

MLPPredictor fit_constraint_predictor(const Dataset& train,
                                      const PredictorFitConfig& cfg,
                                      FitReport* report) {
    train.validate();
    const int n = train.size();
    const int p = train.dims.p;
    const int out = train.dims.m * train.dims.d;
    if (n < 2) throw Error("fit_constraint_predictor: need at least 2 samples");

    MatrixXd X(p, n), Y(out, n);
    for (int i = 0; i < n; ++i) {
        X.col(i) = train.samples[static_cast<std::size_t>(i)].x;
        const auto& rows = train.samples[static_cast<std::size_t>(i)].a;
        for (int j = 0; j < train.dims.m; ++j)
            Y.col(i).segment(j * train.dims.d, train.dims.d) = rows[static_cast<std::size_t>(j)];
    }

    MLPPredictor model;
    model.p = p;
    model.hidden = cfg.hidden;
    model.rows = train.dims.m;
    model.d = train.dims.d;
    model.x_mean = X.rowwise().mean();
    model.y_mean = Y.rowwise().mean();
    auto scale_of = [n](const MatrixXd& M, const VectorXd& mean) {
        VectorXd s(M.rows());
        for (Eigen::Index r = 0; r < M.rows(); ++r) {
            const double var =
                (M.row(r).array() - mean[r]).square().sum() / n;
            s[r] = std::max(std::sqrt(var), 1e-8);
        }
        return s;
    };
    model.x_scale = scale_of(X, model.x_mean);
    model.y_scale = scale_of(Y, model.y_mean);

    MatrixXd Xs = (X.colwise() - model.x_mean).array().colwise() /
                  model.x_scale.array();
    MatrixXd Ys = (Y.colwise() - model.y_mean).array().colwise() /
                  model.y_scale.array();

    Rng rng(cfg.seed);
    if (cfg.hidden > 0) {
        model.W1 = glorot(cfg.hidden, p, rng);
        model.b1 = VectorXd::Zero(cfg.hidden);
        model.W2 = glorot(out, cfg.hidden, rng);
    } else {
        model.W2 = glorot(out, p, rng);
    }
    model.b2 = VectorXd::Zero(out);

    // Last val_frac of a fixed shuffle is held out for early stopping.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    int n_val = std::min(n - 1, static_cast<int>(std::floor(cfg.val_frac * n)));
    const int n_fit = n - n_val;

    auto loss_on = [&](int begin, int count) {
        if (count == 0) return 0.0;
        double acc = 0.0;
        for (int i = begin; i < begin + count; ++i) {
            const int col = order[static_cast<std::size_t>(i)];
            VectorXd pred;
            if (cfg.hidden > 0)
                pred = model.W2 * (model.W1 * Xs.col(col) + model.b1).cwiseMax(0.0) +
                       model.b2;
            else
                pred = model.W2 * Xs.col(col) + model.b2;
            acc += (pred - Ys.col(col)).squaredNorm();
        }
        return acc / (static_cast<double>(count) * out);
    };

    Adam aW1, ab1, aW2, ab2;
    if (cfg.hidden > 0) {
        aW1.init(cfg.hidden, p);
        ab1.init(cfg.hidden, 1);
        aW2.init(out, cfg.hidden);
    } else {
        aW2.init(out, p);
    }
    ab2.init(out, 1);

    const double initial = loss_on(0, n_fit);
    double best_val = n_val > 0 ? loss_on(n_fit, n_val) : initial;
    MLPPredictor best = model;
    int since_best = 0;
    int epochs_run = 0;

    std::vector<int> fit_idx(order.begin(), order.begin() + n_fit);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(fit_idx);
        for (int start = 0; start < n_fit; start += cfg.batch) {
            const int bs = std::min(cfg.batch, n_fit - start);
            MatrixXd Xb(p, bs), Yb(out, bs);
            for (int i = 0; i < bs; ++i) {
                Xb.col(i) = Xs.col(fit_idx[static_cast<std::size_t>(start + i)]);
                Yb.col(i) = Ys.col(fit_idx[static_cast<std::size_t>(start + i)]);
            }
            if (cfg.hidden > 0) {
                MatrixXd H = ((model.W1 * Xb).colwise() + model.b1).cwiseMax(0.0);
                MatrixXd dY = ((model.W2 * H).colwise() + model.b2) - Yb;
                dY /= static_cast<double>(bs);
                MatrixXd gW2 = dY * H.transpose();
                VectorXd gb2 = dY.rowwise().sum();
                MatrixXd dH = (model.W2.transpose() * dY).array() *
                              (H.array() > 0.0).cast<double>();
                MatrixXd gW1 = dH * Xb.transpose();
                VectorXd gb1 = dH.rowwise().sum();
                aW1.step(model.W1, gW1, cfg.lr);
                MatrixXd b1m = model.b1;
                ab1.step(b1m, gb1, cfg.lr);
                model.b1 = b1m;
                aW2.step(model.W2, gW2, cfg.lr);
                MatrixXd b2m = model.b2;
                ab2.step(b2m, gb2, cfg.lr);
                model.b2 = b2m;
            } else {
                MatrixXd dY = ((model.W2 * Xb).colwise() + model.b2) - Yb;
                dY /= static_cast<double>(bs);
                MatrixXd gW2 = dY * Xb.transpose();
                VectorXd gb2 = dY.rowwise().sum();
                aW2.step(model.W2, gW2, cfg.lr);
                MatrixXd b2m = model.b2;
                ab2.step(b2m, gb2, cfg.lr);
                model.b2 = b2m;
            }
        }
        epochs_run = epoch + 1;
        if (n_val > 0) {
            const double val = loss_on(n_fit, n_val);
            if (val < best_val - 1e-12) {
                best_val = val;
                best = model;
                since_best = 0;
            } else if (++since_best >= cfg.patience) {
                model = best;
                break;
            }
        }
    }
    if (n_val > 0 && best_val < loss_on(n_fit, n_val)) model = best;

    if (report) {
        report->initial_loss = initial;
        report->final_loss = loss_on(0, n_fit);
        report->epochs_run = epochs_run;
    }
    return model;
}

double mse_loss(const LinearCostModel& model, const Dataset& data,
                const Eigen::VectorXd* weights) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < data.size(); ++i) {
        const auto& s = data.samples[static_cast<std::size_t>(i)];
        const double w = weights ? (*weights)[i] : 1.0;
        num += w * (model.predict(s.x) - s.c).squaredNorm();
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

LinearCostModel fit_mse_baseline(const Dataset& train,
                                 const Eigen::VectorXd* weights, int epochs,
                                 double lr, std::uint64_t seed,
                                 const LinearCostModel* warm_start) {
    (void)seed;
    train.validate();
    const int n = train.size();
    const int p = train.dims.p;
    const int d = train.dims.d;
    if (weights && weights->size() != n)
        throw DimMismatch("fit_mse_baseline: weight length " +
                          std::to_string(weights->size()) + " != n " +
                          std::to_string(n));

    LinearCostModel model;
    if (warm_start) {
        model = *warm_start;
    } else {
        model.B = MatrixXd::Zero(d, p);
        model.b0 = VectorXd::Zero(d);
    }

    double wsum = 0.0;
    for (int i = 0; i < n; ++i) wsum += weights ? (*weights)[i] : 1.0;
    if (wsum <= 0.0) throw Error("fit_mse_baseline: weights sum to zero");

    Adam aB, ab0;
    aB.init(d, p);
    ab0.init(d, 1);
    for (int step = 0; step < epochs; ++step) {
        MatrixXd gB = MatrixXd::Zero(d, p);
        VectorXd gb0 = VectorXd::Zero(d);
        for (int i = 0; i < n; ++i) {
            const auto& s = train.samples[static_cast<std::size_t>(i)];
            const double w = weights ? (*weights)[i] : 1.0;
            if (w == 0.0) continue;
            VectorXd r = (2.0 * w / wsum) * (model.predict(s.x) - s.c);
            gB += r * s.x.transpose();
            gb0 += r;
        }
        aB.step(model.B, gB, lr);
        MatrixXd b0m = model.b0;
        ab0.step(b0m, gb0, lr);
        model.b0 = b0m;
        if (!model.B.allFinite()) throw Divergence("fit_mse_baseline: non-finite parameters");
    }
    return model;
}

}  // namespace sporc
