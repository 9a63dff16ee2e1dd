#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "aim/nn.hpp"
#include "aim/rng.hpp"
#include "aim/tensor.hpp"

namespace aim::model {

enum class InteractionKind { inner_product, feedforward };

const char* interaction_name(InteractionKind k);
InteractionKind interaction_from_name(const std::string& s);

// Network configuration. The prediction component consumes any subset of
// {MAX, HSENT, TFIDF, WDO}; at least one of MAX/HSENT must be present.
struct AimConfig {
    std::size_t input_dim = 8;               // sentence-embedding dim D_in
    std::size_t hidden_dim = 128;            // encoder hidden dim D^S
    InteractionKind interaction = InteractionKind::inner_product;
    std::size_t interaction_hidden = 60;     // hidden width of the interaction net
    bool attention = true;                   // false = uniform weights ((A)IM ablation)
    bool use_max = true;
    bool use_hsent = false;
    bool use_tfidf = false;
    bool use_wdo = false;
    std::size_t head1_dim = 1;               // 1 when MAX alone, else 32 or 64
    std::size_t tfidf_head_dim = 1;          // 1 or 3
    std::size_t tfidf_dim = 0;               // TFIDF feature count (when use_tfidf)
    bool share_encoders = false;

    // 1 for the inner product, 3 for the interaction net
    std::size_t interaction_dim() const {
        return interaction == InteractionKind::inner_product ? 1 : 3;
    }
    void validate() const;  // ConfigError on violations
};

struct AimParams {
    bool share_encoders = false;
    nn::GruParams encoder_oh;
    nn::GruParams encoder_c;        // unused when share_encoders
    nn::FeedForwardParams scorer;   // vulnerability g: [H] -> [1]
    nn::FeedForwardParams interact_net;  // h: [2H] -> hidden -> 3 (feedforward kind)
    nn::FeedForwardParams head1;
    nn::FeedForwardParams tfidf_head;    // present iff use_tfidf
    nn::FeedForwardParams final_layer;   // -> [1], sigmoid

    const nn::GruParams& comment_encoder() const { return share_encoders ? encoder_oh : encoder_c; }
    void visit(const std::function<void(const std::string&, Tensor&)>& fn);
};

AimParams init_params(const AimConfig& cfg, Rng& rng);

// Copy of params with every tensor registered as a leaf on the tape.
AimParams taped_copy(Tape& tape, const AimParams& p);

// Per-pair auxiliary inputs; only the parts named by the config are read.
struct PairFeatures {
    std::vector<double> tfidf;                    // dense vector, size tfidf_dim
    std::array<double, 4> word_overlap{0, 0, 0, 0};
};

// Detached interaction embeddings v[i][j][k], M^O x M^C x D^I.
struct InteractionTensor {
    std::size_t m_o = 0, m_c = 0, dim = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return values[(i * m_c + j) * dim + k];
    }
    // comment-sentence index with the highest value on dimension k (ties ->
    // lowest (i, j))
    std::pair<std::size_t, std::size_t> argmax_dim(std::size_t k) const;
};

// ---- model stages ----------------------------------------------------------

// (scores g(s_i), attention weights). Uniform weights when disabled.
std::pair<Tensor, Tensor> vulnerability(const nn::FeedForwardParams& scorer,
                                        const std::vector<Tensor>& oh_states,
                                        bool attention_enabled);

// v[i][j] in R^{D^I} for every (OH sentence, comment sentence) pair.
std::vector<std::vector<Tensor>> interact(const AimConfig& cfg,
                                          const nn::FeedForwardParams& interact_net,
                                          const std::vector<Tensor>& oh_states,
                                          const std::vector<Tensor>& comment_states);

// u^max = sum_i a_i * (per-dimension max over j of v[i][j]).
Tensor summarize(const std::vector<std::vector<Tensor>>& interactions, const Tensor& weights);

// P(delta=1). Null pointers stand for "not provided".
Tensor predict(const AimParams& p, const AimConfig& cfg,
               const Tensor* summary, const Tensor* hsent, const PairFeatures& feats);

struct ForwardResult {
    Tensor probability;                        // [1]
    Tensor attention;                          // [M^O]
    std::vector<std::vector<Tensor>> interactions;

    std::vector<double> attention_values() const;
    InteractionTensor interaction_values() const;
};

// Full pass: encode both documents, score vulnerability, embed interactions,
// summarize, predict. Diagnostics (attention, interactions) always returned.
ForwardResult forward(const AimParams& p, const AimConfig& cfg,
                      const std::vector<Tensor>& oh_sentence_embs,
                      const std::vector<Tensor>& comment_sentence_embs,
                      const PairFeatures& feats);

// Checkpoint glue.
void save_params(AimParams& p, const AimConfig& cfg, const std::string& path);
AimParams load_params(const AimConfig& cfg, const std::string& path);

} // namespace aim::model
