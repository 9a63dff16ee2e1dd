#include "aim/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "aim/error.hpp"

namespace aim::baseline {

const char* penalty_name(Penalty p) { return p == Penalty::l1 ? "l1" : "l2"; }

Penalty penalty_from_name(const std::string& s) {
    if (s == "l1" || s == "L1") return Penalty::l1;
    if (s == "l2" || s == "L2") return Penalty::l2;
    throw ConfigError("unknown penalty: " + s);
}

void LrConfig::validate() const {
    if (strength <= 0.0) throw ConfigError("regularization strength must be positive");
    if (pos_weight < 1.0) throw ConfigError("positive class weight must be >= 1");
    if (tol <= 0.0) throw ConfigError("tolerance must be positive");
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_data(const LrDataset& data) {
    if (data.x.size() != data.y.size()) throw ShapeError("feature/label count mismatch");
    std::size_t pos = 0, neg = 0;
    for (int y : data.y) {
        if (y == 1) ++pos;
        else if (y == 0) ++neg;
        else throw DataError("labels must be 0 or 1");
    }
    if (pos == 0 || neg == 0) throw DataError("logistic regression needs both classes");
    for (const auto& x : data.x) {
        for (const auto& [i, _] : x.entries) {
            if (i >= data.dim) throw ShapeError("feature index outside dataset dim");
        }
    }
}

// class-weighted NLL and its gradient (smooth part; L2 term folded in)
struct SmoothEval {
    double value = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

SmoothEval eval_smooth(const LrConfig& cfg, const LrDataset& data,
                       const std::vector<double>& w, double b, bool want_grad) {
    SmoothEval ev;
    if (want_grad) ev.grad_w.assign(data.dim, 0.0);
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        double z = data.x[i].dot_dense(w) + b;
        double c = data.y[i] == 1 ? cfg.pos_weight : 1.0;
        // log(1+exp) computed stably on either branch
        double nll = z > 0 ? std::log1p(std::exp(-z)) + (data.y[i] == 1 ? 0.0 : z)
                           : std::log1p(std::exp(z)) - (data.y[i] == 1 ? z : 0.0);
        ev.value += c * nll;
        if (want_grad) {
            double r = c * (sigmoid(z) - double(data.y[i]));
            for (const auto& [k, v] : data.x[i].entries) ev.grad_w[k] += r * v;
            ev.grad_b += r;
        }
    }
    if (cfg.penalty == Penalty::l2) {
        double lam = 1.0 / cfg.strength;
        double ss = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            ss += w[k] * w[k];
            if (want_grad) ev.grad_w[k] += lam * w[k];
        }
        ev.value += 0.5 * lam * ss;
    }
    return ev;
}

double l1_term(const LrConfig& cfg, const std::vector<double>& w) {
    if (cfg.penalty != Penalty::l1) return 0.0;
    double s = 0.0;
    for (double x : w) s += std::fabs(x);
    return s / cfg.strength;
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

} // namespace

double lr_objective(const LrConfig& cfg, const LrDataset& data, const LrModel& model) {
    return eval_smooth(cfg, data, model.weights, model.intercept, false).value +
           l1_term(cfg, model.weights);
}

double lr_optimality_norm(const LrConfig& cfg, const LrDataset& data, const LrModel& model) {
    SmoothEval ev = eval_smooth(cfg, data, model.weights, model.intercept, true);
    double ss = ev.grad_b * ev.grad_b;
    if (cfg.penalty == Penalty::l2) {
        for (double g : ev.grad_w) ss += g * g;
        return std::sqrt(ss);
    }
    // gradient mapping at unit step
    double lam = 1.0 / cfg.strength;
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        double moved = soft_threshold(model.weights[k] - ev.grad_w[k], lam);
        double gm = model.weights[k] - moved;
        ss += gm * gm;
    }
    return std::sqrt(ss);
}

LrModel fit_lr(const LrConfig& cfg, const LrDataset& data) {
    cfg.validate();
    check_data(data);

    LrModel m;
    m.weights.assign(data.dim, 0.0);
    m.intercept = 0.0;
    double step = 1.0;

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        SmoothEval ev = eval_smooth(cfg, data, m.weights, m.intercept, true);

        // convergence: gradient norm (L2) or unit-step gradient mapping (L1)
        double opt = 0.0;
        if (cfg.penalty == Penalty::l2) {
            double ss = ev.grad_b * ev.grad_b;
            for (double g : ev.grad_w) ss += g * g;
            opt = std::sqrt(ss);
        } else {
            double lam = 1.0 / cfg.strength;
            double ss = ev.grad_b * ev.grad_b;
            for (std::size_t k = 0; k < data.dim; ++k) {
                double moved = soft_threshold(m.weights[k] - ev.grad_w[k], lam);
                double gm = m.weights[k] - moved;
                ss += gm * gm;
            }
            opt = std::sqrt(ss);
        }
        if (opt <= cfg.tol) break;

        // backtracking line search on the smooth part
        step *= 2.0;  // allow recovery after conservative steps
        std::vector<double> w_new(data.dim);
        double b_new = 0.0;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t k = 0; k < data.dim; ++k) {
                double v = m.weights[k] - step * ev.grad_w[k];
                w_new[k] = cfg.penalty == Penalty::l1 ? soft_threshold(v, step / cfg.strength) : v;
            }
            b_new = m.intercept - step * ev.grad_b;

            double qterm = 0.0, lin = 0.0;
            for (std::size_t k = 0; k < data.dim; ++k) {
                double d = w_new[k] - m.weights[k];
                qterm += d * d;
                lin += ev.grad_w[k] * d;
            }
            double db = b_new - m.intercept;
            qterm += db * db;
            lin += ev.grad_b * db;

            double f_new = eval_smooth(cfg, data, w_new, b_new, false).value;
            if (f_new <= ev.value + lin + qterm / (2.0 * step) + 1e-12) break;
            step *= 0.5;
        }
        m.weights.swap(w_new);
        m.intercept = b_new;
    }
    return m;
}

double predict_lr(const LrModel& model, const features::SparseVector& x) {
    for (const auto& [i, _] : x.entries) {
        if (i >= model.weights.size()) throw ShapeError("feature index outside model dim");
    }
    return sigmoid(x.dot_dense(model.weights) + model.intercept);
}

double predict_lr(const LrModel& model, const std::vector<double>& dense_x) {
    if (dense_x.size() != model.weights.size()) {
        throw ShapeError("feature dim " + std::to_string(dense_x.size()) + " != model dim " +
                         std::to_string(model.weights.size()));
    }
    double z = model.intercept;
    for (std::size_t i = 0; i < dense_x.size(); ++i) z += model.weights[i] * dense_x[i];
    return sigmoid(z);
}

std::pair<std::vector<NgramWeight>, std::vector<NgramWeight>> top_ngrams(
    const LrModel& model, const features::TfidfModel& tfidf, std::size_t k) {
    if (model.weights.size() < tfidf.dim() || tfidf.dim() == 0) {
        throw ConfigError("model was not trained over this TFIDF feature space");
    }
    std::vector<std::size_t> idx(tfidf.dim());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    auto by_weight_desc = [&](std::size_t a, std::size_t b) {
        if (model.weights[a] != model.weights[b]) return model.weights[a] > model.weights[b];
        return tfidf.ngrams[a] < tfidf.ngrams[b];
    };
    auto by_weight_asc = [&](std::size_t a, std::size_t b) {
        if (model.weights[a] != model.weights[b]) return model.weights[a] < model.weights[b];
        return tfidf.ngrams[a] < tfidf.ngrams[b];
    };

    std::size_t take = std::min(k, idx.size());
    std::vector<std::size_t> pos_idx = idx, neg_idx = idx;
    std::sort(pos_idx.begin(), pos_idx.end(), by_weight_desc);
    std::sort(neg_idx.begin(), neg_idx.end(), by_weight_asc);

    std::pair<std::vector<NgramWeight>, std::vector<NgramWeight>> out;
    for (std::size_t i = 0; i < take; ++i) {
        out.first.push_back({tfidf.ngrams[pos_idx[i]], model.weights[pos_idx[i]]});
        out.second.push_back({tfidf.ngrams[neg_idx[i]], model.weights[neg_idx[i]]});
    }
    return out;
}

void save_lr(const LrModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model: " + path);
    char buf[64];
    out << "AIMLR 1 " << model.weights.size() << "\n";
    std::snprintf(buf, sizeof(buf), "%a", model.intercept);
    out << buf << "\n";
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%a", model.weights[i]);
        out << buf << (i + 1 == model.weights.size() ? "" : " ");
    }
    out << "\n";
}

LrModel load_lr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read model: " + path);
    std::string magic, tok;
    int version = 0;
    std::size_t dim = 0;
    in >> magic >> version >> dim;
    if (magic != "AIMLR" || version != 1) throw ParseError("not an LR model file: " + path);
    LrModel m;
    in >> tok;
    m.intercept = std::strtod(tok.c_str(), nullptr);
    m.weights.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        in >> tok;
        if (!in) throw ParseError("truncated LR model file: " + path);
        m.weights[i] = std::strtod(tok.c_str(), nullptr);
    }
    return m;
}

} // namespace aim::baseline
