#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "aim/error.hpp"

namespace aim::corpus {

struct Comment {
    std::string id;
    std::string parent_id;  // post id or comment id; t1_/t3_ prefixes tolerated
    std::string author;
    std::string body;
    std::int64_t created_utc = 0;
    bool delta_from_bot = false;  // a bot confirmation replied to this comment
};

struct Thread {
    std::string id;
    std::string title;
    std::string body;    // selftext
    std::string author;  // the opinion holder
    std::string split;   // "train" or "test" (dataset-provided date split)
    std::vector<Comment> comments;

    const Comment* find_comment(const std::string& id_or_fullname) const;
};

struct FilterRules {
    std::string bot_name = "DeltaBot";
    std::string bot_confirm_marker = "Confirmed";
    std::vector<std::string> delta_tokens = {"∆", "Δ", "!delta"};
    std::size_t min_post_chars = 100;
};

struct FilterReport {
    std::size_t threads_in = 0;
    std::size_t dropped_deleted_post = 0;
    std::size_t dropped_short_post = 0;
    std::size_t threads_kept = 0;
    std::size_t comments_in = 0;
    std::size_t dropped_bot_comments = 0;
    std::size_t dropped_deleted_comments = 0;
    std::size_t comments_kept = 0;
    std::size_t post_footers_stripped = 0;
};

// Strip the standard footer block (an underscore rule and everything after).
std::string strip_post_footer(const std::string& body, bool* stripped = nullptr);

// Applies the exclusion rules in order: bot-confirmation flags are folded
// into parent comments, then contentless bot comments and "[deleted]"
// comments go, then discussions whose (footer-stripped, title-excluded) post
// body is shorter than min_post_chars. Idempotent.
std::vector<Thread> filter_threads(std::vector<Thread> threads, const FilterRules& rules,
                                   FilterReport* report = nullptr);

bool is_oh_comment(const Thread& thread, const Comment& c);

// 1 iff a bot confirmation replies to this OH comment or the body carries a
// delta token.
int detect_delta(const Comment& oh_comment, const Thread& thread, const FilterRules& rules);

struct LinearizeStats {
    std::size_t missing_ancestors = 0;
};

// Reading-order flattening: walk OH comments chronologically, emitting each
// one's not-yet-seen ancestors root-to-leaf and then the comment itself.
std::vector<const Comment*> linearize(const Thread& thread, LinearizeStats* stats = nullptr);

struct LabeledPair {
    std::string post_id;
    std::string comment_id;
    int label = 0;
    std::vector<std::string> oh_sentences;       // title is sentence 0
    std::vector<std::string> comment_sentences;
};

struct LabelStats {
    std::size_t oh_comments = 0;
    std::size_t no_predecessor = 0;
    std::size_t predecessor_is_oh = 0;
    std::size_t already_labeled = 0;
    std::size_t empty_sentence_pairs = 0;
    std::size_t pairs = 0;
    std::size_t positives = 0;
};

// Labels each OH comment's predecessor in the linearized order; a challenger
// comment is labeled at most once (first OH reply wins).
std::vector<LabeledPair> label_pairs(const Thread& thread,
                                     const std::vector<const Comment*>& order,
                                     const FilterRules& rules, LabelStats* stats = nullptr);

// ---- vocabulary -------------------------------------------------------------

struct Vocabulary {
    std::vector<std::string> tokens;                     // index -> token
    std::unordered_map<std::string, std::size_t> index;  // token -> index

    bool contains(const std::string& t) const { return index.count(t) > 0; }
    std::size_t size() const { return tokens.size(); }

    // Most frequent `cap` tokens over the given threads (title + post body +
    // comment bodies); ties break lexicographically.
    static Vocabulary build(const std::vector<const Thread*>& training_threads,
                            std::size_t cap = 40000);
};

// ---- splits -----------------------------------------------------------------

enum class SplitKind { train, val, test_in_domain, test_cross_domain, unused };

const char* split_kind_name(SplitKind k);
SplitKind split_kind_from_name(const std::string& s);

struct ThreadMeta {
    std::string post_id;
    std::string dataset_split;  // "train" or "test"
    int topic = -1;
    double delta_ratio = 0.0;
};

struct SplitConfig {
    std::size_t n_train_topics = 7;
    double val_fraction = 0.1;
    std::uint64_t seed = 0;
};

struct SplitManifest {
    std::map<std::string, SplitKind> assignment;  // post id -> split
    std::vector<int> training_topics;             // chosen topics, ratio-descending
};

// Training topics are the n_train_topics with the highest mean delta ratio
// over train-tagged discussions; 10% of each training topic's train-tagged
// discussions go to validation; test-tagged discussions map to in-domain or
// cross-domain by topic membership. Every discussion lands in exactly one
// bucket ("unused" holds train-tagged discussions of non-training topics).
SplitManifest make_splits(const std::vector<ThreadMeta>& metas, const SplitConfig& cfg);

// ---- sentence embeddings ------------------------------------------------------

struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;
};

// word2vec text format: "count dim" header, then "token v1 .. vdim" lines.
EmbeddingTable load_word_vectors(const std::string& path);

// Mean of the vectors of tokens present in the table; zero vector when none.
std::vector<double> average_embedding(const EmbeddingTable& table,
                                      const std::vector<std::string>& tokens);

struct PrecomputedEmbeddings {
    std::size_t dim = 0;
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> by_key;

    const std::vector<double>& require(const std::string& doc_id, std::size_t sentence) const;
};

void save_precomputed(const PrecomputedEmbeddings& emb, const std::string& path);
PrecomputedEmbeddings load_precomputed(const std::string& path);

struct PairEmbeddings {
    std::vector<std::vector<double>> oh;
    std::vector<std::vector<double>> comment;
};

PairEmbeddings embed_pair(const LabeledPair& pair, const EmbeddingTable& table);
PairEmbeddings embed_pair(const LabeledPair& pair, const PrecomputedEmbeddings& pre);

// ---- file I/O -----------------------------------------------------------------

// One JSON object per line: {id, title, selftext, author, split?, comments:
// [{id, parent_id, author, body, created_utc}]}.
std::vector<Thread> read_threads(const std::string& path);
void write_threads(const std::vector<Thread>& threads, const std::string& path);

void write_pairs(const std::vector<LabeledPair>& pairs, const std::string& path);
std::vector<LabeledPair> read_pairs(const std::string& path);

void write_split_manifest(const SplitManifest& manifest, const std::string& path);
SplitManifest read_split_manifest(const std::string& path);

} // namespace aim::corpus
