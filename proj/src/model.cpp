#include "aim/model.hpp"

#include "aim/checkpoint.hpp"
#include "aim/error.hpp"

namespace aim::model {

const char* interaction_name(InteractionKind k) {
    return k == InteractionKind::inner_product ? "inner-product" : "feedforward";
}

InteractionKind interaction_from_name(const std::string& s) {
    if (s == "inner-product") return InteractionKind::inner_product;
    if (s == "feedforward") return InteractionKind::feedforward;
    throw ConfigError("unknown interaction kind: " + s);
}

void AimConfig::validate() const {
    if (input_dim == 0 || hidden_dim == 0) throw ConfigError("dims must be positive");
    if (!use_max && !use_hsent) throw ConfigError("prediction needs MAX or HSENT input");
    if (use_hsent) {
        if (head1_dim != 32 && head1_dim != 64) {
            throw ConfigError("head1 dim must be 32 or 64 when HSENT is used");
        }
    } else if (head1_dim != 1) {
        throw ConfigError("head1 dim must be 1 when the summary vector is the only input");
    }
    if (use_tfidf) {
        if (tfidf_head_dim != 1 && tfidf_head_dim != 3) {
            throw ConfigError("tfidf head dim must be 1 or 3");
        }
        if (tfidf_dim == 0) throw ConfigError("tfidf_dim required when TFIDF input is used");
    }
    if (interaction == InteractionKind::feedforward && interaction_hidden == 0) {
        throw ConfigError("interaction hidden width must be positive");
    }
}

void AimParams::visit(const std::function<void(const std::string&, Tensor&)>& fn) {
    encoder_oh.visit("encoder_oh", fn);
    if (!share_encoders) encoder_c.visit("encoder_c", fn);
    scorer.visit("scorer", fn);
    if (!interact_net.empty()) interact_net.visit("interact", fn);
    head1.visit("head1", fn);
    if (!tfidf_head.empty()) tfidf_head.visit("tfidf_head", fn);
    final_layer.visit("final", fn);
}

AimParams init_params(const AimConfig& cfg, Rng& rng) {
    cfg.validate();
    AimParams p;
    p.share_encoders = cfg.share_encoders;
    p.encoder_oh = nn::make_gru(cfg.input_dim, cfg.hidden_dim, rng);
    if (!cfg.share_encoders) {
        p.encoder_c = nn::make_gru(cfg.input_dim, cfg.hidden_dim, rng);
    }
    p.scorer = nn::make_feedforward({cfg.hidden_dim, 1}, {nn::Activation::identity}, rng);
    if (cfg.interaction == InteractionKind::feedforward) {
        p.interact_net = nn::make_feedforward(
            {2 * cfg.hidden_dim, cfg.interaction_hidden, 3},
            {nn::Activation::relu, nn::Activation::identity}, rng);
    }
    std::size_t head1_in = (cfg.use_max ? cfg.interaction_dim() : 0) +
                           (cfg.use_hsent ? cfg.hidden_dim : 0);
    p.head1 = nn::make_feedforward(
        {head1_in, cfg.head1_dim},
        {cfg.use_hsent ? nn::Activation::relu : nn::Activation::identity}, rng);
    if (cfg.use_tfidf) {
        p.tfidf_head = nn::make_feedforward({cfg.tfidf_dim, cfg.tfidf_head_dim},
                                            {nn::Activation::relu}, rng);
    }
    std::size_t final_in = cfg.head1_dim + (cfg.use_tfidf ? cfg.tfidf_head_dim : 0) +
                           (cfg.use_wdo ? 4 : 0);
    p.final_layer = nn::make_feedforward({final_in, 1}, {nn::Activation::sigmoid}, rng);
    return p;
}

AimParams taped_copy(Tape& tape, const AimParams& p) {
    AimParams out = p;
    out.visit([&](const std::string&, Tensor& t) { t = tape.leaf(t); });
    return out;
}

std::pair<std::size_t, std::size_t> InteractionTensor::argmax_dim(std::size_t k) const {
    std::size_t bi = 0, bj = 0;
    double best = at(0, 0, k);
    for (std::size_t i = 0; i < m_o; ++i) {
        for (std::size_t j = 0; j < m_c; ++j) {
            if (at(i, j, k) > best) {
                best = at(i, j, k);
                bi = i;
                bj = j;
            }
        }
    }
    return {bi, bj};
}

std::pair<Tensor, Tensor> vulnerability(const nn::FeedForwardParams& scorer,
                                        const std::vector<Tensor>& oh_states,
                                        bool attention_enabled) {
    if (oh_states.empty()) throw EmptyInputError("vulnerability over zero sentences");
    std::vector<Tensor> per_sentence;
    per_sentence.reserve(oh_states.size());
    for (const Tensor& s : oh_states) per_sentence.push_back(nn::feedforward(scorer, s));
    Tensor scores = concat(per_sentence);
    Tensor weights = attention_enabled
                         ? nn::attention_weights(scores)
                         : Tensor::full({oh_states.size()}, 1.0 / double(oh_states.size()));
    return {scores, weights};
}

std::vector<std::vector<Tensor>> interact(const AimConfig& cfg,
                                          const nn::FeedForwardParams& interact_net,
                                          const std::vector<Tensor>& oh_states,
                                          const std::vector<Tensor>& comment_states) {
    if (oh_states.empty() || comment_states.empty()) {
        throw EmptyInputError("interaction over empty sentence sequence");
    }
    std::vector<std::vector<Tensor>> v(oh_states.size());
    for (std::size_t i = 0; i < oh_states.size(); ++i) {
        v[i].reserve(comment_states.size());
        for (const Tensor& sc : comment_states) {
            if (cfg.interaction == InteractionKind::inner_product) {
                v[i].push_back(dot(oh_states[i], sc));
            } else {
                v[i].push_back(nn::feedforward(interact_net, concat({oh_states[i], sc})));
            }
        }
    }
    return v;
}

Tensor summarize(const std::vector<std::vector<Tensor>>& interactions, const Tensor& weights) {
    if (interactions.empty()) throw EmptyInputError("summarize with no interactions");
    if (weights.numel() != interactions.size()) {
        throw ShapeError("attention length " + std::to_string(weights.numel()) +
                         " != " + std::to_string(interactions.size()) + " OH sentences");
    }
    std::vector<Tensor> per_oh;
    per_oh.reserve(interactions.size());
    for (const auto& row : interactions) {
        // [M^C, D^I] -> per-dimension max over comment sentences
        per_oh.push_back(max_over_axis(stack_rows(row), 0));
    }
    // weights [M^O] x stacked [M^O, D^I] -> [D^I]
    return matmul(weights, stack_rows(per_oh));
}

Tensor predict(const AimParams& p, const AimConfig& cfg,
               const Tensor* summary, const Tensor* hsent, const PairFeatures& feats) {
    std::vector<Tensor> head1_parts;
    if (cfg.use_max) {
        if (!summary) throw ConfigError("config requires MAX input but none was provided");
        head1_parts.push_back(*summary);
    }
    if (cfg.use_hsent) {
        if (!hsent) throw ConfigError("config requires HSENT input but none was provided");
        head1_parts.push_back(*hsent);
    }
    Tensor head1_out = nn::feedforward(p.head1, concat(head1_parts));

    std::vector<Tensor> final_parts{head1_out};
    if (cfg.use_tfidf) {
        if (feats.tfidf.size() != cfg.tfidf_dim) {
            throw ConfigError("config requires a TFIDF vector of dim " +
                              std::to_string(cfg.tfidf_dim) + ", got " +
                              std::to_string(feats.tfidf.size()));
        }
        final_parts.push_back(nn::feedforward(p.tfidf_head, Tensor::vector(feats.tfidf)));
    }
    if (cfg.use_wdo) {
        final_parts.push_back(Tensor::vector(
            {feats.word_overlap[0], feats.word_overlap[1], feats.word_overlap[2], feats.word_overlap[3]}));
    }
    return nn::feedforward(p.final_layer, concat(final_parts));
}

std::vector<double> ForwardResult::attention_values() const { return attention.values; }

InteractionTensor ForwardResult::interaction_values() const {
    InteractionTensor t;
    t.m_o = interactions.size();
    t.m_c = interactions.empty() ? 0 : interactions[0].size();
    t.dim = t.m_c == 0 ? 0 : interactions[0][0].numel();
    t.values.reserve(t.m_o * t.m_c * t.dim);
    for (const auto& row : interactions) {
        for (const Tensor& v : row) {
            t.values.insert(t.values.end(), v.values.begin(), v.values.end());
        }
    }
    return t;
}

ForwardResult forward(const AimParams& p, const AimConfig& cfg,
                      const std::vector<Tensor>& oh_sentence_embs,
                      const std::vector<Tensor>& comment_sentence_embs,
                      const PairFeatures& feats) {
    if (oh_sentence_embs.empty() || comment_sentence_embs.empty()) {
        throw EmptyInputError("forward needs at least one sentence on each side");
    }
    std::vector<Tensor> oh_states = nn::gru_encode(p.encoder_oh, oh_sentence_embs);
    std::vector<Tensor> c_states = nn::gru_encode(p.comment_encoder(), comment_sentence_embs);

    auto [scores, weights] = vulnerability(p.scorer, oh_states, cfg.attention);
    (void)scores;
    std::vector<std::vector<Tensor>> v = interact(cfg, p.interact_net, oh_states, c_states);

    ForwardResult r;
    r.attention = weights;
    r.interactions = v;
    Tensor summary = summarize(v, weights);
    const Tensor& hsent = c_states.back();
    r.probability = predict(p, cfg, cfg.use_max ? &summary : nullptr,
                            cfg.use_hsent ? &hsent : nullptr, feats);
    return r;
}

void save_params(AimParams& p, const AimConfig& cfg, const std::string& path) {
    (void)cfg;
    Checkpoint ckpt;
    p.visit([&](const std::string& name, Tensor& t) { ckpt.add(name, t); });
    save_checkpoint(ckpt, path);
}

AimParams load_params(const AimConfig& cfg, const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    Rng rng(0, "load");  // values are overwritten below
    AimParams p = init_params(cfg, rng);
    p.visit([&](const std::string& name, Tensor& t) {
        const Tensor& stored = ckpt.require(name);
        if (stored.shape != t.shape) {
            throw DataError("checkpoint shape mismatch for " + name + ": " +
                            shape_str(stored.shape) + " vs " + shape_str(t.shape));
        }
        t = stored;
    });
    return p;
}

} // namespace aim::model
