#include "aim/topics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "aim/error.hpp"
#include "aim/rng.hpp"

namespace aim::topics {

std::size_t LdaModel::total_tokens() const {
    return std::accumulate(topic_total.begin(), topic_total.end(), std::size_t{0});
}

std::vector<double> LdaModel::doc_distribution(std::size_t d) const {
    std::vector<double> theta(n_topics);
    double denom = double(doc_len[d]) + double(n_topics) * alpha;
    for (std::size_t k = 0; k < n_topics; ++k) {
        theta[k] = (double(doc_topic[d][k]) + alpha) / denom;
    }
    return theta;
}

namespace {

void verify_conservation(const LdaModel& m, std::size_t expected_tokens) {
    if (m.total_tokens() != expected_tokens) {
        throw DataError("lda: topic totals no longer sum to the corpus token count");
    }
    for (std::size_t k = 0; k < m.n_topics; ++k) {
        std::size_t row = std::accumulate(m.topic_word[k].begin(), m.topic_word[k].end(), std::size_t{0});
        if (row != m.topic_total[k]) throw DataError("lda: topic-word row drifted from its total");
    }
    std::size_t doc_sum = 0;
    for (std::size_t d = 0; d < m.doc_topic.size(); ++d) {
        doc_sum += std::accumulate(m.doc_topic[d].begin(), m.doc_topic[d].end(), std::size_t{0});
    }
    if (doc_sum != expected_tokens) {
        throw DataError("lda: document-topic counts no longer sum to the corpus token count");
    }
}

} // namespace

LdaModel lda_fit(const std::vector<std::vector<std::string>>& docs, const LdaConfig& cfg) {
    if (cfg.n_topics < 2) throw ConfigError("lda needs at least 2 topics");
    if (docs.empty()) throw DataError("lda on an empty corpus");

    LdaModel m;
    m.n_topics = cfg.n_topics;
    m.alpha = cfg.effective_alpha();
    m.beta = cfg.beta;

    for (const auto& doc : docs) {
        for (const std::string& tok : doc) {
            if (m.vocab_index.emplace(tok, m.vocab.size()).second) m.vocab.push_back(tok);
        }
    }
    const std::size_t v_size = m.vocab.size();
    const std::size_t k_size = cfg.n_topics;
    if (v_size == 0) throw DataError("lda corpus has no tokens");

    m.topic_word.assign(k_size, std::vector<std::size_t>(v_size, 0));
    m.topic_total.assign(k_size, 0);
    m.doc_topic.assign(docs.size(), std::vector<std::size_t>(k_size, 0));
    m.doc_len.assign(docs.size(), 0);

    // flattened token stream with per-token document and word ids
    std::vector<std::uint32_t> tok_doc, tok_word;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (docs[d].empty()) ++m.empty_docs;
        m.doc_len[d] = docs[d].size();
        for (const std::string& tok : docs[d]) {
            tok_doc.push_back(std::uint32_t(d));
            tok_word.push_back(std::uint32_t(m.vocab_index.at(tok)));
        }
    }
    const std::size_t n_tokens = tok_doc.size();

    Rng rng(cfg.seed, "gibbs");
    std::vector<std::uint16_t> z(n_tokens);
    for (std::size_t i = 0; i < n_tokens; ++i) {
        std::size_t k = rng.below(k_size);
        z[i] = std::uint16_t(k);
        m.topic_word[k][tok_word[i]] += 1;
        m.topic_total[k] += 1;
        m.doc_topic[tok_doc[i]][k] += 1;
    }

    const double vbeta = double(v_size) * cfg.beta;
    std::vector<double> weights(k_size);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        for (std::size_t i = 0; i < n_tokens; ++i) {
            std::size_t d = tok_doc[i], w = tok_word[i], old = z[i];
            m.topic_word[old][w] -= 1;
            m.topic_total[old] -= 1;
            m.doc_topic[d][old] -= 1;

            double total = 0.0;
            for (std::size_t k = 0; k < k_size; ++k) {
                total += (double(m.doc_topic[d][k]) + m.alpha) *
                         (double(m.topic_word[k][w]) + cfg.beta) /
                         (double(m.topic_total[k]) + vbeta);
                weights[k] = total;
            }
            double u = rng.uniform() * total;
            std::size_t pick = std::size_t(std::lower_bound(weights.begin(), weights.end(), u) -
                                           weights.begin());
            if (pick >= k_size) pick = k_size - 1;

            z[i] = std::uint16_t(pick);
            m.topic_word[pick][w] += 1;
            m.topic_total[pick] += 1;
            m.doc_topic[d][pick] += 1;
        }
        if (cfg.check_conservation) verify_conservation(m, n_tokens);
    }

    // per-topic top words by count, ties lexicographic
    m.top_words.assign(k_size, {});
    for (std::size_t k = 0; k < k_size; ++k) {
        std::vector<std::size_t> idx;
        for (std::size_t w = 0; w < v_size; ++w) {
            if (m.topic_word[k][w] > 0) idx.push_back(w);
        }
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (m.topic_word[k][a] != m.topic_word[k][b]) return m.topic_word[k][a] > m.topic_word[k][b];
            return m.vocab[a] < m.vocab[b];
        });
        if (idx.size() > cfg.top_words) idx.resize(cfg.top_words);
        for (std::size_t w : idx) m.top_words[k].push_back(m.vocab[w]);
    }
    return m;
}

std::vector<int> assign_from_theta(const std::vector<std::vector<double>>& theta) {
    if (theta.empty()) return {};
    std::size_t k_size = theta[0].size();
    std::size_t n = theta.size();

    std::vector<double> mean(k_size, 0.0), stdev(k_size, 0.0);
    for (const auto& row : theta) {
        for (std::size_t k = 0; k < k_size; ++k) mean[k] += row[k];
    }
    for (std::size_t k = 0; k < k_size; ++k) mean[k] /= double(n);
    for (const auto& row : theta) {
        for (std::size_t k = 0; k < k_size; ++k) {
            stdev[k] += (row[k] - mean[k]) * (row[k] - mean[k]);
        }
    }
    for (std::size_t k = 0; k < k_size; ++k) stdev[k] = std::sqrt(stdev[k] / double(n));

    std::vector<int> out(n, 0);
    for (std::size_t d = 0; d < n; ++d) {
        double best = -HUGE_VAL;
        std::size_t arg = 0;
        for (std::size_t k = 0; k < k_size; ++k) {
            double zscore = stdev[k] > 0.0 ? (theta[d][k] - mean[k]) / stdev[k] : 0.0;
            if (zscore > best) {
                best = zscore;
                arg = k;
            }
        }
        out[d] = int(arg);
    }
    return out;
}

std::vector<int> assign_topics(const LdaModel& model) {
    std::vector<std::vector<double>> theta;
    theta.reserve(model.doc_topic.size());
    for (std::size_t d = 0; d < model.doc_topic.size(); ++d) {
        theta.push_back(model.doc_distribution(d));
    }
    return assign_from_theta(theta);
}

double delta_ratio(const corpus::Thread& filtered_thread, const corpus::FilterRules& rules) {
    auto strip = [](const std::string& id) {
        return id.size() > 3 && id[0] == 't' && id[2] == '_' ? id.substr(3) : id;
    };
    std::string root = strip(filtered_thread.id);
    std::size_t replies = 0, with_delta = 0;
    for (const corpus::Comment& c : filtered_thread.comments) {
        if (!corpus::is_oh_comment(filtered_thread, c)) continue;
        // a reply answers a comment; OH comments directly under the post are
        // clarifications, not replies
        if (strip(c.parent_id) == root) continue;
        ++replies;
        with_delta += std::size_t(corpus::detect_delta(c, filtered_thread, rules));
    }
    return replies == 0 ? 0.0 : double(with_delta) / double(replies);
}

double topic_similarity(const LdaModel& model, const std::vector<std::string>& tokens_a,
                        const std::vector<std::string>& tokens_b) {
    std::unordered_map<std::string, std::vector<std::size_t>> word_topics;
    for (std::size_t k = 0; k < model.top_words.size(); ++k) {
        for (const std::string& w : model.top_words[k]) word_topics[w].push_back(k);
    }
    auto distribution = [&](const std::vector<std::string>& tokens) {
        std::vector<double> counts(model.n_topics, 0.0);
        double total = 0.0;
        for (const std::string& t : tokens) {
            auto it = word_topics.find(t);
            if (it == word_topics.end()) continue;
            for (std::size_t k : it->second) {
                counts[k] += 1.0;
                total += 1.0;
            }
        }
        if (total > 0.0) {
            for (double& c : counts) c /= total;
        }
        return counts;
    };
    std::vector<double> a = distribution(tokens_a);
    std::vector<double> b = distribution(tokens_b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < model.n_topics; ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

void save_lda(const LdaModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write topic model: " + path);
    char buf[64];
    out << "AIMLDA 1 " << model.n_topics << " " << model.vocab.size() << " "
        << model.doc_topic.size() << " " << model.empty_docs << "\n";
    std::snprintf(buf, sizeof(buf), "%a", model.alpha);
    out << buf << " ";
    std::snprintf(buf, sizeof(buf), "%a", model.beta);
    out << buf << "\n";
    for (const std::string& w : model.vocab) out << w << "\n";
    for (std::size_t k = 0; k < model.n_topics; ++k) {
        for (std::size_t w = 0; w < model.vocab.size(); ++w) {
            out << model.topic_word[k][w] << (w + 1 == model.vocab.size() ? "" : " ");
        }
        out << "\n";
    }
    for (std::size_t d = 0; d < model.doc_topic.size(); ++d) {
        out << model.doc_len[d];
        for (std::size_t k = 0; k < model.n_topics; ++k) out << " " << model.doc_topic[d][k];
        out << "\n";
    }
    for (std::size_t k = 0; k < model.n_topics; ++k) {
        out << model.top_words[k].size();
        for (const std::string& w : model.top_words[k]) out << " " << w;
        out << "\n";
    }
}

LdaModel load_lda(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read topic model: " + path);
    std::string magic, tok;
    int version = 0;
    std::size_t v_size = 0, d_size = 0;
    LdaModel m;
    in >> magic >> version >> m.n_topics >> v_size >> d_size >> m.empty_docs;
    if (magic != "AIMLDA" || version != 1) throw ParseError("not a topic model file: " + path);
    in >> tok;
    m.alpha = std::strtod(tok.c_str(), nullptr);
    in >> tok;
    m.beta = std::strtod(tok.c_str(), nullptr);
    m.vocab.resize(v_size);
    for (std::size_t w = 0; w < v_size; ++w) {
        in >> m.vocab[w];
        m.vocab_index[m.vocab[w]] = w;
    }
    m.topic_word.assign(m.n_topics, std::vector<std::size_t>(v_size, 0));
    m.topic_total.assign(m.n_topics, 0);
    for (std::size_t k = 0; k < m.n_topics; ++k) {
        for (std::size_t w = 0; w < v_size; ++w) {
            in >> m.topic_word[k][w];
            m.topic_total[k] += m.topic_word[k][w];
        }
    }
    m.doc_topic.assign(d_size, std::vector<std::size_t>(m.n_topics, 0));
    m.doc_len.assign(d_size, 0);
    for (std::size_t d = 0; d < d_size; ++d) {
        in >> m.doc_len[d];
        for (std::size_t k = 0; k < m.n_topics; ++k) in >> m.doc_topic[d][k];
    }
    m.top_words.assign(m.n_topics, {});
    for (std::size_t k = 0; k < m.n_topics; ++k) {
        std::size_t count = 0;
        in >> count;
        m.top_words[k].resize(count);
        for (std::size_t i = 0; i < count; ++i) in >> m.top_words[k][i];
    }
    if (!in) throw ParseError("truncated topic model file: " + path);
    return m;
}

} // namespace aim::topics
