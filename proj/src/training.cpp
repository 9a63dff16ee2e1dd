#include "aim/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "aim/error.hpp"
#include "aim/metrics.hpp"
#include "aim/rng.hpp"

namespace aim::train {

void TrainConfig::validate() const {
    if (margin < 0.0) throw ConfigError("margin must be non-negative");
    if (decay <= 0.0 || decay > 1.0) throw ConfigError("decay must be in (0, 1]");
    if (batch_size < 2) throw ConfigError("batch size must be >= 2 (ranking loss needs pairs)");
    if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
    if (base_epochs == 0) throw ConfigError("need at least one epoch");
}

double epoch_lr(const TrainConfig& cfg, std::size_t epoch) {
    return cfg.learning_rate * std::pow(cfg.decay, double(epoch) - 1.0);
}

bool continue_past_base(const std::vector<double>& val_auc, std::size_t base_epochs) {
    if (val_auc.size() < base_epochs || base_epochs < 2) return false;
    std::size_t half = base_epochs / 2;
    double first = 0.0, second = 0.0;
    for (std::size_t i = 0; i < half; ++i) first += val_auc[i];
    for (std::size_t i = base_epochs - half; i < base_epochs; ++i) second += val_auc[i];
    return second / double(half) >= first / double(half);
}

namespace {
constexpr double kProbFloor = 1e-12;
}

double bce(double p, int label) {
    p = std::min(1.0 - kProbFloor, std::max(kProbFloor, p));
    if (p <= 0.0 || p >= 1.0) throw DomainError("probability outside (0,1)");
    return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

Tensor bce_loss(const Tensor& p, int label) {
    if (p.numel() != 1) throw ShapeError("bce expects a scalar probability");
    Tensor pc = clamp(p, kProbFloor, 1.0 - kProbFloor);
    if (label == 1) return scale(log(pc), -1.0);
    return scale(log(sub(Tensor::scalar(1.0), pc)), -1.0);
}

double mrl(double p_pos, double p_neg, double margin) {
    return std::max(0.0, p_neg - p_pos + margin);
}

Tensor batch_loss(const std::vector<BatchItem>& items,
                  const std::map<std::string, std::size_t>& post_comment_counts,
                  double margin) {
    if (items.empty()) throw EmptyInputError("batch_loss on empty batch");

    std::set<std::string> posts;
    std::vector<Tensor> bce_terms;
    bce_terms.reserve(items.size());
    for (const BatchItem& it : items) {
        auto found = post_comment_counts.find(it.post_id);
        if (found == post_comment_counts.end() || found->second == 0) {
            throw DataError("unknown post id in batch: " + it.post_id);
        }
        posts.insert(it.post_id);
        bce_terms.push_back(scale(bce_loss(it.p, it.label), 1.0 / double(found->second)));
    }
    Tensor loss = scale(sum_over_axis(concat(bce_terms), 0), 1.0 / double(posts.size()));

    std::vector<Tensor> rank_terms;
    Tensor margin_t = Tensor::scalar(margin);
    for (const BatchItem& pos : items) {
        if (pos.label != 1) continue;
        for (const BatchItem& neg : items) {
            if (neg.label != 0) continue;
            rank_terms.push_back(relu(add(sub(neg.p, pos.p), margin_t)));
        }
    }
    if (!rank_terms.empty()) {
        Tensor mrl_term = scale(sum_over_axis(concat(rank_terms), 0), 1.0 / double(rank_terms.size()));
        loss = add(loss, mrl_term);
    }
    return loss;
}

AdaMaxState AdaMaxState::for_params(const std::vector<Tensor*>& params,
                                    double beta1, double beta2, double eps) {
    AdaMaxState s;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    for (const Tensor* t : params) {
        s.m.emplace_back(t->numel(), 0.0);
        s.u.emplace_back(t->numel(), 0.0);
    }
    return s;
}

void adamax_step(AdaMaxState& state, const std::vector<Tensor*>& params,
                 const std::vector<Tensor>& grads, double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ShapeError("adamax: parameter/gradient count mismatch");
    }
    state.step += 1;
    double correction = 1.0 - std::pow(state.beta1, double(state.step));
    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& t = *params[k];
        const Tensor& g = grads[k];
        if (g.shape != t.shape) throw ShapeError("adamax: gradient shape mismatch");
        std::vector<double>& m = state.m[k];
        std::vector<double>& u = state.u[k];
        for (std::size_t i = 0; i < t.numel(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g.values[i];
            u[i] = std::max(state.beta2 * u[i], std::fabs(g.values[i]));
            t.values[i] -= (lr / correction) * m[i] / (u[i] + state.eps);
        }
    }
}

namespace {

std::vector<Tensor*> param_ptrs(model::AimParams& p) {
    std::vector<Tensor*> out;
    p.visit([&](const std::string&, Tensor& t) { out.push_back(&t); });
    return out;
}

double score_one(const model::AimParams& params, const model::AimConfig& cfg,
                 const TrainPair& pair) {
    return model::forward(params, cfg, pair.oh_embs, pair.comment_embs, pair.features)
        .probability.item();
}

} // namespace

std::vector<double> score_pairs_serial(const model::AimParams& params, const model::AimConfig& cfg,
                                       const std::vector<TrainPair>& pairs) {
    std::vector<double> scores(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) scores[i] = score_one(params, cfg, pairs[i]);
    return scores;
}

std::vector<double> score_pairs(const model::AimParams& params, const model::AimConfig& cfg,
                                const std::vector<TrainPair>& pairs) {
    std::vector<double> scores(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < static_cast<long long>(pairs.size()); ++i) {
        scores[std::size_t(i)] = score_one(params, cfg, pairs[std::size_t(i)]);
    }
    return scores;
}

TrainResult train(const model::AimConfig& mcfg, const TrainConfig& tcfg,
                  const std::vector<TrainPair>& train_pairs,
                  const std::vector<TrainPair>& val_pairs) {
    mcfg.validate();
    tcfg.validate();
    if (train_pairs.empty()) throw EmptyInputError("empty training split");
    if (val_pairs.empty()) throw EmptyInputError("empty validation split");

    std::map<std::string, std::size_t> post_counts;
    for (const TrainPair& p : train_pairs) post_counts[p.post_id] += 1;

    Rng init_rng(tcfg.seed, "init");
    TrainResult result;
    result.params = model::init_params(mcfg, init_rng);
    std::vector<Tensor*> params = param_ptrs(result.params);
    AdaMaxState opt = AdaMaxState::for_params(params, tcfg.beta1, tcfg.beta2, tcfg.eps);

    std::vector<int> val_labels;
    for (const TrainPair& p : val_pairs) val_labels.push_back(p.label);

    std::vector<std::size_t> order(train_pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> val_auc_log;
    for (std::size_t epoch = 1; epoch <= tcfg.max_epochs(); ++epoch) {
        double lr = epoch_lr(tcfg, epoch);
        Rng shuffle_rng(tcfg.seed, "shuffle." + std::to_string(epoch));
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += tcfg.batch_size) {
            std::size_t end = std::min(order.size(), start + tcfg.batch_size);
            Tape tape;
            model::AimParams taped = model::taped_copy(tape, result.params);
            std::vector<BatchItem> items;
            items.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const TrainPair& pair = train_pairs[order[i]];
                Tensor p = model::forward(taped, mcfg, pair.oh_embs, pair.comment_embs,
                                          pair.features).probability;
                items.push_back({pair.post_id, pair.label, p});
            }
            Tensor loss = batch_loss(items, post_counts, tcfg.margin);
            Gradients grads = tape.backward(loss);

            std::vector<Tensor> grad_list;
            grad_list.reserve(params.size());
            taped.visit([&](const std::string&, Tensor& t) { grad_list.push_back(grads.at(t)); });
            adamax_step(opt, params, grad_list, lr);

            loss_sum += loss.item();
            ++n_batches;
        }

        std::vector<double> val_scores = score_pairs(result.params, mcfg, val_pairs);
        double val_auc = metrics::auc(val_scores, val_labels).auc;
        val_auc_log.push_back(val_auc);
        result.epochs.push_back({epoch, lr, loss_sum / double(n_batches), val_auc});

        if (epoch == tcfg.base_epochs && !continue_past_base(val_auc_log, tcfg.base_epochs)) {
            break;
        }
    }
    return result;
}

} // namespace aim::train
