#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aim/corpus.hpp"
#include "aim/metrics.hpp"
#include "aim/model.hpp"
#include "aim/topics.hpp"

namespace aim::analysis {

// One record per evaluated pair, written by the inspect-attention command and
// consumed by the posthoc analyses; keeps analysis decoupled from training.
struct DiagnosticsRecord {
    std::string post_id;
    std::string comment_id;
    int label = 0;
    double probability = 0.0;
    std::vector<double> attention;                                // per OH sentence
    model::InteractionTensor interactions;                        // M^O x M^C x D^I
    std::vector<std::pair<std::size_t, std::size_t>> argmax;      // per dimension
};

void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::string& path);
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path);

// Line format: comment_id idx1 idx2 ('#' starts a comment line).
struct AnnotationRecord {
    std::string comment_id;
    std::size_t idx1 = 0;
    std::size_t idx2 = 0;
};

std::vector<AnnotationRecord> read_annotations(const std::string& path);

struct AlignmentResult {
    double mean_successful = 0.0;
    double mean_unsuccessful = 0.0;
    metrics::TTestResult ttest;
    std::size_t n_posts = 0;  // posts with both a successful and an unsuccessful comment
};

// Mean attention over each comment's two annotated OH sentences, compared
// between successful and unsuccessful comments with a paired t-test across
// posts.
AlignmentResult attention_alignment(const std::vector<DiagnosticsRecord>& diagnostics,
                                    const std::vector<AnnotationRecord>& annotations);

struct DimensionCorrelation {
    bool defined = false;  // false when the dimension (or similarity) is constant
    double r = 0.0;
    std::size_t n = 0;
};

using PairTextLookup = std::map<std::pair<std::string, std::string>, const corpus::LabeledPair*>;

// Pearson correlation between each interaction dimension and the topic
// similarity of the underlying sentence pair, over all exported pairs.
std::vector<DimensionCorrelation> interaction_topic_correlation(
    const std::vector<DiagnosticsRecord>& diagnostics, const topics::LdaModel& topic_model,
    const PairTextLookup& pair_texts);

struct TopPair {
    double value = 0.0;
    std::string post_id;
    std::string comment_id;
    std::size_t i = 0;
    std::size_t j = 0;
};

// Highest-valued sentence pairs on one interaction dimension, ordered by
// (value desc, post-id, comment-id, i, j).
std::vector<TopPair> top_interaction_pairs(const std::vector<DiagnosticsRecord>& diagnostics,
                                           std::size_t dimension, std::size_t n);

} // namespace aim::analysis
