#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "aim/corpus.hpp"

namespace aim::topics {

struct LdaConfig {
    std::size_t n_topics = 20;
    double alpha = -1.0;  // negative -> 50/K
    double beta = 0.01;
    std::size_t iterations = 500;
    std::uint64_t seed = 0;
    std::size_t top_words = 100;
    bool check_conservation = false;  // verify count invariants every sweep

    double effective_alpha() const { return alpha < 0.0 ? 50.0 / double(n_topics) : alpha; }
};

struct LdaModel {
    std::size_t n_topics = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::string> vocab;
    std::unordered_map<std::string, std::size_t> vocab_index;
    std::vector<std::vector<std::size_t>> topic_word;  // [K][V] counts
    std::vector<std::size_t> topic_total;              // [K]
    std::vector<std::vector<std::size_t>> doc_topic;   // [D][K] counts
    std::vector<std::size_t> doc_len;                  // [D]
    std::vector<std::vector<std::string>> top_words;   // [K][<=top_words]
    std::size_t empty_docs = 0;

    std::size_t total_tokens() const;
    // smoothed document-topic distribution theta_dk
    std::vector<double> doc_distribution(std::size_t d) const;
};

// Collapsed Gibbs sampling; deterministic for a fixed seed. Documents with no
// tokens keep their (all-zero) rows so indices stay aligned with the input.
LdaModel lda_fit(const std::vector<std::vector<std::string>>& docs, const LdaConfig& cfg);

// Argmax of the per-topic z-score of theta across documents (ties -> lower
// topic id). Exposed on raw distributions for direct testing.
std::vector<int> assign_from_theta(const std::vector<std::vector<double>>& theta);
std::vector<int> assign_topics(const LdaModel& model);

// Fraction of the OH's replies (OH comments whose parent is a comment) that
// carry a delta; 0 when the OH posted no replies.
double delta_ratio(const corpus::Thread& filtered_thread, const corpus::FilterRules& rules);

// Cosine between the topic-word-count distributions of two sentences; 0 when
// either sentence hits no topic word.
double topic_similarity(const LdaModel& model, const std::vector<std::string>& tokens_a,
                        const std::vector<std::string>& tokens_b);

void save_lda(const LdaModel& model, const std::string& path);
LdaModel load_lda(const std::string& path);

} // namespace aim::topics
