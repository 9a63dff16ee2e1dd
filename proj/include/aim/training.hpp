#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aim/model.hpp"
#include "aim/tensor.hpp"

namespace aim::train {

struct TrainConfig {
    double margin = 0.5;           // ranking-loss margin epsilon
    double learning_rate = 0.002;  // initial AdaMax rate
    double decay = 0.95;           // per-epoch multiplicative decay
    std::size_t batch_size = 10;
    std::size_t base_epochs = 10;  // always run; then val-AUC rule decides
    std::size_t extra_epochs = 5;  // granted when the second half improved
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;

    std::size_t max_epochs() const { return base_epochs + extra_epochs; }
    void validate() const;
};

// lr at a 1-based epoch: learning_rate * decay^(epoch-1)
double epoch_lr(const TrainConfig& cfg, std::size_t epoch);

// Continuation rule on the validation AUC log of the base epochs: keep going
// iff the mean of the second half is at least the mean of the first half.
bool continue_past_base(const std::vector<double>& val_auc, std::size_t base_epochs);

// ---- losses ---------------------------------------------------------------

// Binary cross-entropy; p is clamped into [1e-12, 1-1e-12] before use so a
// saturated sigmoid cannot produce log(0).
double bce(double p, int label);
Tensor bce_loss(const Tensor& p, int label);

// Margin ranking loss max(0, p_neg - p_pos + margin); first argument is the
// positive comment's probability.
double mrl(double p_pos, double p_neg, double margin);

struct BatchItem {
    std::string post_id;
    int label = 0;
    Tensor p;  // predicted probability, typically taped
};

// Combined loss of one minibatch: per-comment BCE normalized by the post's
// total training-set comment count and averaged over the batch's distinct
// posts, plus the mean ranking loss over every (positive, negative) pair in
// the batch (zero when the batch is single-class).
Tensor batch_loss(const std::vector<BatchItem>& items,
                  const std::map<std::string, std::size_t>& post_comment_counts,
                  double margin);

// ---- optimizer --------------------------------------------------------------

struct AdaMaxState {
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::size_t step = 0;
    std::vector<std::vector<double>> m;  // first moment, per parameter tensor
    std::vector<std::vector<double>> u;  // elementwise infinity norm

    static AdaMaxState for_params(const std::vector<Tensor*>& params,
                                  double beta1, double beta2, double eps);
};

void adamax_step(AdaMaxState& state, const std::vector<Tensor*>& params,
                 const std::vector<Tensor>& grads, double lr);

// ---- training loop ----------------------------------------------------------

// One labeled instance with everything the model consumes.
struct TrainPair {
    std::string post_id;
    std::string comment_id;
    int label = 0;
    std::vector<Tensor> oh_embs;       // detached sentence embeddings
    std::vector<Tensor> comment_embs;
    model::PairFeatures features;
};

struct EpochLog {
    std::size_t epoch = 0;
    double lr = 0.0;
    double mean_train_loss = 0.0;
    double val_auc = 0.0;
};

struct TrainResult {
    model::AimParams params;
    std::vector<EpochLog> epochs;
};

TrainResult train(const model::AimConfig& mcfg, const TrainConfig& tcfg,
                  const std::vector<TrainPair>& train_pairs,
                  const std::vector<TrainPair>& val_pairs);

// Forward probabilities over pairs on detached parameter snapshots; pairs are
// independent, so the loop runs under OpenMP with results written by index.
std::vector<double> score_pairs(const model::AimParams& params, const model::AimConfig& cfg,
                                const std::vector<TrainPair>& pairs);
std::vector<double> score_pairs_serial(const model::AimParams& params, const model::AimConfig& cfg,
                                       const std::vector<TrainPair>& pairs);

} // namespace aim::train
