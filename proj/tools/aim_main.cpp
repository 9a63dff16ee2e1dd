// Command-line pipeline: preprocess -> topics -> split -> features ->
// train/baseline -> eval -> inspect-attention -> analyze.
//
// Exit codes: 0 success, 1 usage/config, 2 data/parse error, 3 numeric failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aim/analysis.hpp"
#include "aim/baseline.hpp"
#include "aim/corpus.hpp"
#include "aim/features.hpp"
#include "aim/metrics.hpp"
#include "aim/model.hpp"
#include "aim/tokenize.hpp"
#include "aim/topics.hpp"
#include "aim/training.hpp"

using nlohmann::json;
using namespace aim;

namespace {

// ---------------------------------------------------------------------------
// shared glue
// ---------------------------------------------------------------------------

void write_meta(const std::string& out_path, const std::string& subcommand, const json& config) {
    json j;
    j["tool"] = "aim";
    j["format_version"] = 1;
    j["subcommand"] = subcommand;
    j["config"] = config;
    std::ofstream out(out_path + ".meta.json");
    if (out) out << j.dump(2) << "\n";
}

std::string join_sentences(const std::vector<std::string>& sentences) {
    std::string out;
    for (const std::string& s : sentences) {
        if (!out.empty()) out += " ";
        out += s;
    }
    return out;
}

void save_vocabulary(const corpus::Vocabulary& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write vocabulary: " + path);
    out << "AIMVOCAB 1 " << v.size() << "\n";
    for (const std::string& t : v.tokens) out << t << "\n";
}

corpus::Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read vocabulary: " + path);
    std::string magic;
    int version = 0;
    std::size_t n = 0;
    in >> magic >> version >> n;
    if (magic != "AIMVOCAB" || version != 1) throw ParseError("not a vocabulary file: " + path);
    corpus::Vocabulary v;
    for (std::size_t i = 0; i < n; ++i) {
        std::string tok;
        in >> tok;
        if (!in) throw ParseError("truncated vocabulary file: " + path);
        v.index[tok] = v.tokens.size();
        v.tokens.push_back(tok);
    }
    return v;
}

struct EmbeddingSource {
    bool use_precomputed = false;
    corpus::EmbeddingTable table;
    corpus::PrecomputedEmbeddings pre;

    std::size_t dim() const { return use_precomputed ? pre.dim : table.dim; }
    corpus::PairEmbeddings embed(const corpus::LabeledPair& p) const {
        return use_precomputed ? corpus::embed_pair(p, pre) : corpus::embed_pair(p, table);
    }
};

EmbeddingSource open_embeddings(const std::string& precomputed_path,
                                const std::string& word_vector_path) {
    EmbeddingSource src;
    if (!precomputed_path.empty()) {
        src.use_precomputed = true;
        src.pre = corpus::load_precomputed(precomputed_path);
    } else if (!word_vector_path.empty()) {
        src.table = corpus::load_word_vectors(word_vector_path);
    } else {
        throw ConfigError("an embedding source is required: --embeddings or --word-vectors");
    }
    if (src.dim() == 0) throw DataError("embedding source has dimension 0");
    return src;
}

// split a comma list like "MAX,TFIDF"
std::set<std::string> parse_input_set(const std::string& csv) {
    std::set<std::string> out;
    std::string cur;
    std::istringstream is(csv);
    while (std::getline(is, cur, ',')) {
        std::transform(cur.begin(), cur.end(), cur.begin(), ::toupper);
        if (!cur.empty()) out.insert(cur);
    }
    return out;
}

train::TrainPair to_train_pair(const corpus::LabeledPair& p, const EmbeddingSource& src,
                               const model::AimConfig& cfg, const features::TfidfModel* tfidf,
                               const corpus::Vocabulary* vocab) {
    train::TrainPair out;
    out.post_id = p.post_id;
    out.comment_id = p.comment_id;
    out.label = p.label;
    corpus::PairEmbeddings emb = src.embed(p);
    for (auto& v : emb.oh) out.oh_embs.push_back(Tensor::vector(std::move(v)));
    for (auto& v : emb.comment) out.comment_embs.push_back(Tensor::vector(std::move(v)));
    if (cfg.use_tfidf) {
        features::SparseVector sv =
            features::transform_tfidf(*tfidf, text::tokenize(join_sentences(p.comment_sentences)));
        out.features.tfidf = sv.densify(tfidf->dim());
    }
    if (cfg.use_wdo) {
        features::WordOverlapFeatures w = features::word_overlap(
            text::tokenize(join_sentences(p.comment_sentences)),
            text::tokenize(join_sentences(p.oh_sentences)), *vocab);
        out.features.word_overlap = w.as_array();
    }
    return out;
}

struct SplitPairs {
    std::vector<corpus::LabeledPair> train, val, test_id, test_cd;
};

SplitPairs partition_pairs(const std::vector<corpus::LabeledPair>& pairs,
                           const corpus::SplitManifest& manifest) {
    SplitPairs out;
    for (const corpus::LabeledPair& p : pairs) {
        auto it = manifest.assignment.find(p.post_id);
        if (it == manifest.assignment.end()) continue;
        switch (it->second) {
            case corpus::SplitKind::train: out.train.push_back(p); break;
            case corpus::SplitKind::val: out.val.push_back(p); break;
            case corpus::SplitKind::test_in_domain: out.test_id.push_back(p); break;
            case corpus::SplitKind::test_cross_domain: out.test_cd.push_back(p); break;
            case corpus::SplitKind::unused: break;
        }
    }
    return out;
}

model::AimConfig config_from_meta(const json& meta) {
    const json& c = meta.at("config");
    model::AimConfig cfg;
    cfg.input_dim = c.at("input_dim").get<std::size_t>();
    cfg.hidden_dim = c.at("hidden_dim").get<std::size_t>();
    cfg.interaction = model::interaction_from_name(c.at("interaction").get<std::string>());
    cfg.interaction_hidden = c.at("interaction_hidden").get<std::size_t>();
    cfg.attention = c.at("attention").get<bool>();
    cfg.use_max = c.at("use_max").get<bool>();
    cfg.use_hsent = c.at("use_hsent").get<bool>();
    cfg.use_tfidf = c.at("use_tfidf").get<bool>();
    cfg.use_wdo = c.at("use_wdo").get<bool>();
    cfg.head1_dim = c.at("head1_dim").get<std::size_t>();
    cfg.tfidf_head_dim = c.at("tfidf_head_dim").get<std::size_t>();
    cfg.tfidf_dim = c.at("tfidf_dim").get<std::size_t>();
    cfg.share_encoders = c.at("share_encoders").get<bool>();
    return cfg;
}

json config_to_json(const model::AimConfig& cfg) {
    json c;
    c["input_dim"] = cfg.input_dim;
    c["hidden_dim"] = cfg.hidden_dim;
    c["interaction"] = model::interaction_name(cfg.interaction);
    c["interaction_hidden"] = cfg.interaction_hidden;
    c["attention"] = cfg.attention;
    c["use_max"] = cfg.use_max;
    c["use_hsent"] = cfg.use_hsent;
    c["use_tfidf"] = cfg.use_tfidf;
    c["use_wdo"] = cfg.use_wdo;
    c["head1_dim"] = cfg.head1_dim;
    c["tfidf_head_dim"] = cfg.tfidf_head_dim;
    c["tfidf_dim"] = cfg.tfidf_dim;
    c["share_encoders"] = cfg.share_encoders;
    return c;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON: " + path);
    return j;
}

// meta sidecars wrap their payload: {"subcommand": ..., "config": {payload}}
std::pair<std::string, json> load_meta(const std::string& artifact_path) {
    json j = load_json_file(artifact_path + ".meta.json");
    return {j.at("subcommand").get<std::string>(), j.at("config")};
}

// ---------------------------------------------------------------------------
// preprocess
// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string threads_path;
    std::string out_dir = ".";
    std::size_t min_post_chars = 100;
    std::size_t vocab_cap = 40000;
};

void cmd_preprocess(const PreprocessArgs& a) {
    namespace fs = std::filesystem;
    fs::create_directories(a.out_dir);
    corpus::FilterRules rules;
    rules.min_post_chars = a.min_post_chars;

    std::vector<corpus::Thread> raw = corpus::read_threads(a.threads_path);
    if (raw.empty()) {
        std::cerr << "warning: no threads in " << a.threads_path << "\n";
    }
    corpus::FilterReport freport;
    std::vector<corpus::Thread> threads = corpus::filter_threads(std::move(raw), rules, &freport);

    corpus::LinearizeStats lin_stats;
    corpus::LabelStats label_stats;
    std::vector<corpus::LabeledPair> pairs;
    std::map<std::string, std::string> split_tag;  // post -> dataset split
    for (const corpus::Thread& t : threads) {
        split_tag[t.id] = t.split;
        auto order = corpus::linearize(t, &lin_stats);
        for (corpus::LabeledPair& p : corpus::label_pairs(t, order, rules, &label_stats)) {
            pairs.push_back(std::move(p));
        }
    }

    std::vector<const corpus::Thread*> train_threads;
    for (const corpus::Thread& t : threads) {
        if (t.split == "train") train_threads.push_back(&t);
    }
    corpus::Vocabulary vocab = corpus::Vocabulary::build(train_threads, a.vocab_cap);

    std::string pairs_path = (fs::path(a.out_dir) / "pairs.jsonl").string();
    std::string vocab_path = (fs::path(a.out_dir) / "vocab.txt").string();
    std::string report_path = (fs::path(a.out_dir) / "preprocess_report.json").string();
    corpus::write_pairs(pairs, pairs_path);
    save_vocabulary(vocab, vocab_path);

    json report;
    report["exclusions"] = {
        {"threads_in", freport.threads_in},
        {"dropped_deleted_post", freport.dropped_deleted_post},
        {"dropped_short_post", freport.dropped_short_post},
        {"threads_kept", freport.threads_kept},
        {"comments_in", freport.comments_in},
        {"dropped_bot_comments", freport.dropped_bot_comments},
        {"dropped_deleted_comments", freport.dropped_deleted_comments},
        {"comments_kept", freport.comments_kept},
        {"post_footers_stripped", freport.post_footers_stripped},
    };
    report["labeling"] = {
        {"oh_comments", label_stats.oh_comments},
        {"no_predecessor", label_stats.no_predecessor},
        {"predecessor_is_oh", label_stats.predecessor_is_oh},
        {"already_labeled", label_stats.already_labeled},
        {"empty_sentence_pairs", label_stats.empty_sentence_pairs},
        {"missing_ancestors", lin_stats.missing_ancestors},
        {"pairs", label_stats.pairs},
        {"positives", label_stats.positives},
    };
    std::size_t train_count = 0, test_count = 0;
    for (const auto& [id, s] : split_tag) (s == "train" ? train_count : test_count) += 1;
    report["dataset_split"] = {{"train_discussions", train_count}, {"test_discussions", test_count}};
    report["vocabulary_size"] = vocab.size();
    std::ofstream rout(report_path);
    rout << report.dump(2) << "\n";

    write_meta(pairs_path, "preprocess",
               json{{"threads", a.threads_path},
                    {"min_post_chars", a.min_post_chars},
                    {"vocab_cap", a.vocab_cap}});
    std::cout << "pairs: " << pairs.size() << " (" << label_stats.positives << " positive), vocab: "
              << vocab.size() << " tokens\n"
              << "wrote " << pairs_path << ", " << vocab_path << ", " << report_path << "\n";
}

// ---------------------------------------------------------------------------
// topics
// ---------------------------------------------------------------------------

struct TopicsArgs {
    std::string threads_path;
    std::string out_dir = ".";
    std::size_t n_topics = 20;
    std::size_t iterations = 500;
    std::size_t top_words = 100;
    double alpha = -1.0;
    double beta = 0.01;
    std::uint64_t seed = 0;
    std::string doc_unit = "discussion";  // or "document" (post/comment level)
};

void cmd_topics(const TopicsArgs& a) {
    namespace fs = std::filesystem;
    fs::create_directories(a.out_dir);
    corpus::FilterRules rules;
    std::vector<corpus::Thread> threads =
        corpus::filter_threads(corpus::read_threads(a.threads_path), rules);

    std::vector<std::vector<std::string>> docs;
    std::vector<std::string> doc_ids;
    if (a.doc_unit == "discussion") {
        for (const corpus::Thread& t : threads) {
            std::string full = t.title + " " + t.body;
            for (const corpus::Comment& c : t.comments) full += " " + c.body;
            docs.push_back(text::tokenize(full));
            doc_ids.push_back(t.id);
        }
    } else if (a.doc_unit == "document") {
        for (const corpus::Thread& t : threads) {
            docs.push_back(text::tokenize(t.title + " " + t.body));
            doc_ids.push_back(t.id);
            for (const corpus::Comment& c : t.comments) {
                docs.push_back(text::tokenize(c.body));
                doc_ids.push_back(c.id);
            }
        }
    } else {
        throw ConfigError("--doc-unit must be 'discussion' or 'document'");
    }

    topics::LdaConfig cfg;
    cfg.n_topics = a.n_topics;
    cfg.iterations = a.iterations;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.seed = a.seed;
    cfg.top_words = a.top_words;
    topics::LdaModel model = topics::lda_fit(docs, cfg);
    std::vector<int> assign = topics::assign_topics(model);

    std::string model_path = (fs::path(a.out_dir) / "lda_model.txt").string();
    topics::save_lda(model, model_path);

    std::string assign_path = (fs::path(a.out_dir) / "topic_assignments.jsonl").string();
    std::string report_path = (fs::path(a.out_dir) / "topics_report.txt").string();
    std::map<int, std::pair<double, std::size_t>> topic_ratio;
    {
        std::ofstream out(assign_path);
        std::map<std::string, const corpus::Thread*> by_id;
        for (const corpus::Thread& t : threads) by_id[t.id] = &t;
        for (std::size_t d = 0; d < doc_ids.size(); ++d) {
            auto it = by_id.find(doc_ids[d]);
            if (it == by_id.end()) continue;  // comment-level docs carry no ratio
            double ratio = topics::delta_ratio(*it->second, rules);
            json j;
            j["post_id"] = doc_ids[d];
            j["topic"] = assign[d];
            j["delta_ratio"] = ratio;
            out << j.dump() << "\n";
            topic_ratio[assign[d]].first += ratio;
            topic_ratio[assign[d]].second += 1;
        }
    }
    {
        std::ofstream out(report_path);
        out << "topic  discussions  mean_delta_ratio  top_words\n";
        for (std::size_t k = 0; k < model.n_topics; ++k) {
            auto [sum, count] = topic_ratio.count(int(k)) ? topic_ratio[int(k)]
                                                          : std::pair<double, std::size_t>{0.0, 0};
            out << k << "  " << count << "  " << (count ? sum / double(count) : 0.0) << "  ";
            for (std::size_t w = 0; w < model.top_words[k].size() && w < 10; ++w) {
                out << (w ? " " : "") << model.top_words[k][w];
            }
            out << "\n";
        }
    }
    write_meta(model_path, "topics",
               json{{"threads", a.threads_path},
                    {"n_topics", a.n_topics},
                    {"iterations", a.iterations},
                    {"alpha", cfg.effective_alpha()},
                    {"beta", a.beta},
                    {"seed", a.seed},
                    {"doc_unit", a.doc_unit}});
    std::cout << "fitted " << a.n_topics << "-topic model over " << docs.size() << " documents\n"
              << "wrote " << model_path << ", " << assign_path << ", " << report_path << "\n";
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

struct SplitArgs {
    std::string threads_path;
    std::string assignments_path;
    std::string pairs_path;
    std::string out_path = "splits.json";
    std::size_t n_train_topics = 7;
    double val_fraction = 0.1;
    std::uint64_t seed = 0;
};

void cmd_split(const SplitArgs& a) {
    std::vector<corpus::Thread> threads =
        corpus::filter_threads(corpus::read_threads(a.threads_path), {});
    std::map<std::string, std::string> tags;
    for (const corpus::Thread& t : threads) tags[t.id] = t.split;

    std::vector<corpus::ThreadMeta> metas;
    {
        std::ifstream in(a.assignments_path);
        if (!in) throw DataError("cannot read topic assignments: " + a.assignments_path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                throw ParseError(a.assignments_path + ":" + std::to_string(lineno) + ": bad record");
            }
            corpus::ThreadMeta m;
            m.post_id = j.at("post_id").get<std::string>();
            m.topic = j.at("topic").get<int>();
            m.delta_ratio = j.at("delta_ratio").get<double>();
            auto it = tags.find(m.post_id);
            if (it == tags.end()) continue;  // filtered out
            m.dataset_split = it->second;
            metas.push_back(std::move(m));
        }
    }

    corpus::SplitConfig cfg;
    cfg.n_train_topics = a.n_train_topics;
    cfg.val_fraction = a.val_fraction;
    cfg.seed = a.seed;
    corpus::SplitManifest manifest = corpus::make_splits(metas, cfg);
    corpus::write_split_manifest(manifest, a.out_path);

    // discussion / pair / positive counts per split
    std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
    SplitPairs sp = partition_pairs(pairs, manifest);
    std::map<corpus::SplitKind, std::size_t> disc;
    for (const auto& [id, kind] : manifest.assignment) disc[kind] += 1;
    auto positives = [](const std::vector<corpus::LabeledPair>& v) {
        std::size_t n = 0;
        for (const auto& p : v) n += std::size_t(p.label == 1);
        return n;
    };
    std::ostringstream table;
    table << "                Train      Val     Test       CD\n";
    table << "# discussions" << std::setw(9) << disc[corpus::SplitKind::train] << std::setw(9)
          << disc[corpus::SplitKind::val] << std::setw(9) << disc[corpus::SplitKind::test_in_domain]
          << std::setw(9) << disc[corpus::SplitKind::test_cross_domain] << "\n";
    table << "# pairs      " << std::setw(9) << sp.train.size() << std::setw(9) << sp.val.size()
          << std::setw(9) << sp.test_id.size() << std::setw(9) << sp.test_cd.size() << "\n";
    table << "# positives  " << std::setw(9) << positives(sp.train) << std::setw(9)
          << positives(sp.val) << std::setw(9) << positives(sp.test_id) << std::setw(9)
          << positives(sp.test_cd) << "\n";
    std::cout << table.str();
    std::ofstream stats(a.out_path + ".stats.txt");
    stats << table.str();

    write_meta(a.out_path, "split",
               json{{"threads", a.threads_path},
                    {"assignments", a.assignments_path},
                    {"pairs", a.pairs_path},
                    {"n_train_topics", a.n_train_topics},
                    {"val_fraction", a.val_fraction},
                    {"seed", a.seed},
                    {"training_topics", manifest.training_topics}});
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

struct FeaturesArgs {
    std::string pairs_path;
    std::string splits_path;
    std::string out_path = "tfidf.txt";
    std::size_t cap = 40000;
};

void cmd_features(const FeaturesArgs& a) {
    std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
    corpus::SplitManifest manifest = corpus::read_split_manifest(a.splits_path);
    SplitPairs sp = partition_pairs(pairs, manifest);

    std::vector<std::vector<std::string>> docs;
    std::set<std::string> seen_posts;
    for (const corpus::LabeledPair& p : sp.train) {
        docs.push_back(text::tokenize(join_sentences(p.comment_sentences)));
        if (seen_posts.insert(p.post_id).second) {
            docs.push_back(text::tokenize(join_sentences(p.oh_sentences)));
        }
    }
    features::TfidfModel model = features::fit_tfidf(docs, a.cap);
    features::save_tfidf(model, a.out_path);
    write_meta(a.out_path, "features",
               json{{"pairs", a.pairs_path},
                    {"splits", a.splits_path},
                    {"cap", a.cap},
                    {"training_documents", docs.size()},
                    {"n_features", model.dim()}});
    std::cout << "fitted tfidf over " << docs.size() << " training documents, " << model.dim()
              << " n-gram features -> " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string pairs_path, splits_path;
    std::string embeddings_path, word_vectors_path;
    std::string tfidf_path, vocab_path;
    std::string out_path = "aim.ckpt";
    std::string inputs = "MAX";
    std::string interaction = "inner-product";
    std::size_t hidden_dim = 128;
    std::size_t head1_dim = 0;  // 0 -> derived from inputs
    std::size_t tfidf_head_dim = 1;
    bool no_attention = false;
    bool share_encoders = false;
    double margin = 0.5;
    double lr = 0.002;
    double decay = 0.95;
    std::size_t batch_size = 10;
    std::size_t base_epochs = 10;
    std::size_t extra_epochs = 5;
    std::uint64_t seed = 0;
};

void cmd_train(const TrainArgs& a) {
    EmbeddingSource src = open_embeddings(a.embeddings_path, a.word_vectors_path);
    std::set<std::string> inputs = parse_input_set(a.inputs);

    model::AimConfig cfg;
    cfg.input_dim = src.dim();
    cfg.hidden_dim = a.hidden_dim;
    cfg.interaction = model::interaction_from_name(a.interaction);
    cfg.attention = !a.no_attention;
    cfg.use_max = inputs.count("MAX") > 0;
    cfg.use_hsent = inputs.count("HSENT") > 0;
    cfg.use_tfidf = inputs.count("TFIDF") > 0;
    cfg.use_wdo = inputs.count("WDO") > 0;
    cfg.head1_dim = a.head1_dim != 0 ? a.head1_dim : (cfg.use_hsent ? 32 : 1);
    cfg.tfidf_head_dim = a.tfidf_head_dim;
    cfg.share_encoders = a.share_encoders;

    features::TfidfModel tfidf;
    if (cfg.use_tfidf) {
        if (a.tfidf_path.empty()) throw ConfigError("TFIDF input needs --tfidf");
        tfidf = features::load_tfidf(a.tfidf_path);
        cfg.tfidf_dim = tfidf.dim();
    }
    corpus::Vocabulary vocab;
    if (cfg.use_wdo) {
        if (a.vocab_path.empty()) throw ConfigError("WDO input needs --vocab");
        vocab = load_vocabulary(a.vocab_path);
    }
    cfg.validate();

    std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
    corpus::SplitManifest manifest = corpus::read_split_manifest(a.splits_path);
    SplitPairs sp = partition_pairs(pairs, manifest);
    if (sp.train.empty()) throw DataError("no training pairs under the split manifest");
    if (sp.val.empty()) throw DataError("no validation pairs under the split manifest");

    auto build = [&](const std::vector<corpus::LabeledPair>& in) {
        std::vector<train::TrainPair> out;
        out.reserve(in.size());
        for (const corpus::LabeledPair& p : in) {
            out.push_back(to_train_pair(p, src, cfg, &tfidf, &vocab));
        }
        return out;
    };
    std::vector<train::TrainPair> train_pairs = build(sp.train);
    std::vector<train::TrainPair> val_pairs = build(sp.val);

    train::TrainConfig tcfg;
    tcfg.margin = a.margin;
    tcfg.learning_rate = a.lr;
    tcfg.decay = a.decay;
    tcfg.batch_size = a.batch_size;
    tcfg.base_epochs = a.base_epochs;
    tcfg.extra_epochs = a.extra_epochs;
    tcfg.seed = a.seed;

    train::TrainResult result = train::train(cfg, tcfg, train_pairs, val_pairs);
    model::save_params(result.params, cfg, a.out_path);

    std::ofstream log(a.out_path + ".log.tsv");
    log << "epoch\tlr\tmean_train_loss\tval_auc\n";
    for (const train::EpochLog& e : result.epochs) {
        log << e.epoch << "\t" << e.lr << "\t" << e.mean_train_loss << "\t" << e.val_auc << "\n";
    }

    json meta;
    meta["config"] = config_to_json(cfg);
    meta["train"] = {{"margin", a.margin},      {"lr", a.lr},
                     {"decay", a.decay},        {"batch_size", a.batch_size},
                     {"base_epochs", a.base_epochs}, {"extra_epochs", a.extra_epochs},
                     {"seed", a.seed},          {"epochs_run", result.epochs.size()}};
    meta["embedding"] = {{"precomputed", a.embeddings_path}, {"word_vectors", a.word_vectors_path}};
    meta["tfidf"] = a.tfidf_path;
    meta["vocab"] = a.vocab_path;
    write_meta(a.out_path, "train", meta);

    std::cout << "trained " << result.epochs.size() << " epochs; final val AUC "
              << result.epochs.back().val_auc << " -> " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------
// baseline
// ---------------------------------------------------------------------------

struct BaselineArgs {
    std::string pairs_path, splits_path;
    std::string tfidf_path, vocab_path;
    std::string embeddings_path, word_vectors_path;
    std::string out_path = "lr_model.txt";
    std::string inputs = "TFIDF";  // TFIDF | TFIDF+OH | WDO | SENT | SENT+TFIDF | TFIDF+WDO
    std::string penalties = "l1,l2";
    std::string strengths = "0.5,1,2,4";
    std::string pos_weights = "1,2,5";
};

struct BaselineFeatureSpace {
    std::size_t dim = 0;
    std::function<features::SparseVector(const corpus::LabeledPair&)> make;
};

BaselineFeatureSpace baseline_features(const std::string& inputs_upper,
                                       const features::TfidfModel* tfidf,
                                       const corpus::Vocabulary* vocab,
                                       const EmbeddingSource* emb) {
    auto comment_tfidf = [tfidf](const corpus::LabeledPair& p) {
        return features::transform_tfidf(*tfidf, text::tokenize(join_sentences(p.comment_sentences)));
    };
    auto oh_tfidf = [tfidf](const corpus::LabeledPair& p) {
        return features::transform_tfidf(*tfidf, text::tokenize(join_sentences(p.oh_sentences)));
    };
    auto wdo_vec = [vocab](const corpus::LabeledPair& p) {
        features::WordOverlapFeatures w = features::word_overlap(
            text::tokenize(join_sentences(p.comment_sentences)),
            text::tokenize(join_sentences(p.oh_sentences)), *vocab);
        features::SparseVector v;
        auto arr = w.as_array();
        for (std::size_t i = 0; i < 4; ++i) v.entries.push_back({i, arr[i]});
        return v;
    };
    auto sent_vec = [emb](const corpus::LabeledPair& p) {
        corpus::PairEmbeddings pe = emb->embed(p);
        features::SparseVector v;
        std::vector<double> sum(emb->dim(), 0.0);
        for (const auto& s : pe.comment) {
            for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += s[d];
        }
        for (std::size_t d = 0; d < sum.size(); ++d) v.entries.push_back({d, sum[d]});
        return v;
    };
    auto offset = [](features::SparseVector v, std::size_t off) {
        for (auto& [i, _] : v.entries) i += off;
        return v;
    };
    auto combine = [](features::SparseVector a, features::SparseVector b) {
        a.entries.insert(a.entries.end(), b.entries.begin(), b.entries.end());
        return a;
    };

    BaselineFeatureSpace out;
    if (inputs_upper == "TFIDF") {
        out.dim = tfidf->dim();
        out.make = comment_tfidf;
    } else if (inputs_upper == "TFIDF+OH") {
        out.dim = 2 * tfidf->dim();
        std::size_t half = tfidf->dim();
        out.make = [=](const corpus::LabeledPair& p) {
            return combine(comment_tfidf(p), offset(oh_tfidf(p), half));
        };
    } else if (inputs_upper == "WDO") {
        out.dim = 4;
        out.make = wdo_vec;
    } else if (inputs_upper == "SENT") {
        out.dim = emb->dim();
        out.make = sent_vec;
    } else if (inputs_upper == "SENT+TFIDF") {
        out.dim = emb->dim() + tfidf->dim();
        std::size_t half = emb->dim();
        out.make = [=](const corpus::LabeledPair& p) {
            return combine(sent_vec(p), offset(comment_tfidf(p), half));
        };
    } else if (inputs_upper == "TFIDF+WDO") {
        out.dim = tfidf->dim() + 4;
        std::size_t half = tfidf->dim();
        out.make = [=](const corpus::LabeledPair& p) {
            return combine(comment_tfidf(p), offset(wdo_vec(p), half));
        };
    } else {
        throw ConfigError("unknown baseline input set: " + inputs_upper);
    }
    return out;
}

template <class T>
std::vector<T> parse_csv_values(const std::string& csv) {
    std::vector<T> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        std::istringstream one(tok);
        T v;
        one >> v;
        out.push_back(v);
    }
    return out;
}

void cmd_baseline(const BaselineArgs& a) {
    std::string inputs = a.inputs;
    std::transform(inputs.begin(), inputs.end(), inputs.begin(), ::toupper);

    features::TfidfModel tfidf;
    corpus::Vocabulary vocab;
    EmbeddingSource emb;
    bool needs_tfidf = inputs.find("TFIDF") != std::string::npos;
    bool needs_wdo = inputs.find("WDO") != std::string::npos;
    bool needs_sent = inputs.find("SENT") != std::string::npos;
    if (needs_tfidf) {
        if (a.tfidf_path.empty()) throw ConfigError("this input set needs --tfidf");
        tfidf = features::load_tfidf(a.tfidf_path);
    }
    if (needs_wdo) {
        if (a.vocab_path.empty()) throw ConfigError("this input set needs --vocab");
        vocab = load_vocabulary(a.vocab_path);
    }
    if (needs_sent) emb = open_embeddings(a.embeddings_path, a.word_vectors_path);

    BaselineFeatureSpace space = baseline_features(inputs, &tfidf, &vocab, &emb);

    std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
    corpus::SplitManifest manifest = corpus::read_split_manifest(a.splits_path);
    SplitPairs sp = partition_pairs(pairs, manifest);
    if (sp.train.empty() || sp.val.empty()) throw DataError("empty train or val split");

    baseline::LrDataset train_set;
    train_set.dim = space.dim;
    for (const corpus::LabeledPair& p : sp.train) {
        train_set.x.push_back(space.make(p));
        train_set.y.push_back(p.label);
    }
    std::vector<features::SparseVector> val_x;
    std::vector<int> val_y;
    for (const corpus::LabeledPair& p : sp.val) {
        val_x.push_back(space.make(p));
        val_y.push_back(p.label);
    }

    struct GridPoint {
        baseline::LrConfig cfg;
        double val_auc = 0.0;
    };
    std::vector<GridPoint> grid;
    for (const std::string& pen : parse_csv_values<std::string>(a.penalties)) {
        for (double c : parse_csv_values<double>(a.strengths)) {
            for (double w : parse_csv_values<double>(a.pos_weights)) {
                GridPoint g;
                g.cfg.penalty = baseline::penalty_from_name(pen);
                g.cfg.strength = c;
                g.cfg.pos_weight = w;
                grid.push_back(g);
            }
        }
    }
    std::vector<baseline::LrModel> models(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(grid.size()); ++i) {
        models[std::size_t(i)] = baseline::fit_lr(grid[std::size_t(i)].cfg, train_set);
        std::vector<double> scores;
        scores.reserve(val_x.size());
        for (const auto& x : val_x) scores.push_back(baseline::predict_lr(models[std::size_t(i)], x));
        grid[std::size_t(i)].val_auc = metrics::auc(scores, val_y).auc;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i].val_auc > grid[best].val_auc) best = i;
    }
    baseline::save_lr(models[best], a.out_path);

    std::ofstream report(a.out_path + ".selection.tsv");
    report << "penalty\tstrength\tpos_weight\tval_auc\tchosen\n";
    std::cout << "penalty strength pos_weight val_auc\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        report << baseline::penalty_name(grid[i].cfg.penalty) << "\t" << grid[i].cfg.strength << "\t"
               << grid[i].cfg.pos_weight << "\t" << grid[i].val_auc << "\t"
               << (i == best ? "*" : "") << "\n";
        std::cout << baseline::penalty_name(grid[i].cfg.penalty) << " " << grid[i].cfg.strength
                  << " " << grid[i].cfg.pos_weight << " " << grid[i].val_auc
                  << (i == best ? "  <- chosen" : "") << "\n";
    }

    json meta;
    meta["inputs"] = inputs;
    meta["dim"] = space.dim;
    meta["tfidf"] = a.tfidf_path;
    meta["vocab"] = a.vocab_path;
    meta["embeddings"] = {{"precomputed", a.embeddings_path}, {"word_vectors", a.word_vectors_path}};
    meta["chosen"] = {{"penalty", baseline::penalty_name(grid[best].cfg.penalty)},
                      {"strength", grid[best].cfg.strength},
                      {"pos_weight", grid[best].cfg.pos_weight},
                      {"val_auc", grid[best].val_auc}};
    write_meta(a.out_path, "baseline", meta);

    if (inputs.rfind("TFIDF", 0) == 0) {
        auto [top_pos, top_neg] = baseline::top_ngrams(models[best], tfidf, 30);
        std::ofstream ngrams(a.out_path + ".top_ngrams.txt");
        ngrams << "# most positive\n";
        for (const auto& [g, w] : top_pos) ngrams << g << "\t" << w << "\n";
        ngrams << "# most negative\n";
        for (const auto& [g, w] : top_neg) ngrams << g << "\t" << w << "\n";
    }
    std::cout << "chosen model -> " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string pairs_path, splits_path;
    std::vector<std::string> models;  // NAME=path (meta sidecar decides the kind)
    std::string reference;
    std::string out_path = "eval_report.tsv";
};

struct EvalEntry {
    std::string name;
    std::string inputs;
    std::vector<double> id_scores, cd_scores;
    double id_auc = 0.0, cd_auc = 0.0;
    double id_p = 1.0, cd_p = 1.0;
};

void cmd_eval(const EvalArgs& a) {
    std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
    corpus::SplitManifest manifest = corpus::read_split_manifest(a.splits_path);
    SplitPairs sp = partition_pairs(pairs, manifest);
    if (sp.test_id.empty() || sp.test_cd.empty()) throw DataError("empty test split");

    std::vector<int> id_labels, cd_labels;
    for (const auto& p : sp.test_id) id_labels.push_back(p.label);
    for (const auto& p : sp.test_cd) cd_labels.push_back(p.label);

    std::vector<EvalEntry> entries;
    for (const std::string& spec : a.models) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError("--model expects NAME=path, got " + spec);
        EvalEntry entry;
        entry.name = spec.substr(0, eq);
        std::string path = spec.substr(eq + 1);
        auto [kind, meta] = load_meta(path);

        auto score_with = [&](const std::vector<corpus::LabeledPair>& subset) {
            std::vector<double> scores;
            if (kind == "train") {
                model::AimConfig cfg = config_from_meta(meta);
                EmbeddingSource src =
                    open_embeddings(meta.at("embedding").value("precomputed", ""),
                                    meta.at("embedding").value("word_vectors", ""));
                features::TfidfModel tfidf;
                corpus::Vocabulary vocab;
                if (cfg.use_tfidf) tfidf = features::load_tfidf(meta.at("tfidf").get<std::string>());
                if (cfg.use_wdo) vocab = load_vocabulary(meta.at("vocab").get<std::string>());
                model::AimParams params = model::load_params(cfg, path);
                std::vector<train::TrainPair> tp;
                tp.reserve(subset.size());
                for (const corpus::LabeledPair& p : subset) {
                    tp.push_back(to_train_pair(p, src, cfg, &tfidf, &vocab));
                }
                scores = train::score_pairs(params, cfg, tp);
            } else if (kind == "baseline") {
                std::string inputs = meta.at("inputs").get<std::string>();
                entry.inputs = inputs;
                features::TfidfModel tfidf;
                corpus::Vocabulary vocab;
                EmbeddingSource emb;
                if (inputs.find("TFIDF") != std::string::npos) {
                    tfidf = features::load_tfidf(meta.at("tfidf").get<std::string>());
                }
                if (inputs.find("WDO") != std::string::npos) {
                    vocab = load_vocabulary(meta.at("vocab").get<std::string>());
                }
                if (inputs.find("SENT") != std::string::npos) {
                    emb = open_embeddings(meta.at("embeddings").value("precomputed", ""),
                                          meta.at("embeddings").value("word_vectors", ""));
                }
                BaselineFeatureSpace space = baseline_features(inputs, &tfidf, &vocab, &emb);
                baseline::LrModel m = baseline::load_lr(path);
                for (const corpus::LabeledPair& p : subset) {
                    scores.push_back(baseline::predict_lr(m, space.make(p)));
                }
            } else {
                throw ConfigError("cannot evaluate a '" + kind + "' artifact");
            }
            return scores;
        };
        if (kind == "train") {
            json c = meta.at("config");
            std::string in;
            if (c.at("use_max").get<bool>()) in += "MAX";
            if (c.at("use_hsent").get<bool>()) in += in.empty() ? "HSENT" : "+HSENT";
            if (c.at("use_tfidf").get<bool>()) in += "+TFIDF";
            if (c.at("use_wdo").get<bool>()) in += "+WDO";
            entry.inputs = in;
        }
        entry.id_scores = score_with(sp.test_id);
        entry.cd_scores = score_with(sp.test_cd);
        entry.id_auc = metrics::auc(entry.id_scores, id_labels).auc;
        entry.cd_auc = metrics::auc(entry.cd_scores, cd_labels).auc;
        entries.push_back(std::move(entry));
    }

    const EvalEntry* ref = nullptr;
    for (const EvalEntry& e : entries) {
        if (e.name == a.reference) ref = &e;
    }
    if (!a.reference.empty() && !ref) throw ConfigError("reference model not found: " + a.reference);
    if (ref) {
        for (EvalEntry& e : entries) {
            e.id_p = metrics::delong(e.id_scores, ref->id_scores, id_labels).p;
            e.cd_p = metrics::delong(e.cd_scores, ref->cd_scores, cd_labels).p;
        }
    }

    std::ostringstream table;
    table << "model\tinputs\tID_AUC\tCD_AUC\tID_p_vs_ref\tCD_p_vs_ref\n";
    for (const EvalEntry& e : entries) {
        table << e.name << "\t" << e.inputs << "\t" << e.id_auc << "\t" << e.cd_auc << "\t"
              << e.id_p << "\t" << e.cd_p << "\n";
    }
    std::cout << table.str();
    std::ofstream out(a.out_path);
    out << table.str();
    write_meta(a.out_path, "eval",
               json{{"pairs", a.pairs_path},
                    {"splits", a.splits_path},
                    {"models", a.models},
                    {"reference", a.reference}});
}

// ---------------------------------------------------------------------------
// inspect-attention
// ---------------------------------------------------------------------------

struct InspectArgs {
    std::string pairs_path, splits_path, ckpt_path;
    std::string split = "test_id";  // or train/val/test_cd/all
    std::string out_path = "diagnostics.jsonl";
};

void cmd_inspect(const InspectArgs& a) {
    auto [kind, meta] = load_meta(a.ckpt_path);
    if (kind != "train") throw ConfigError("--ckpt must point at a train artifact");
    model::AimConfig cfg = config_from_meta(meta);
    EmbeddingSource src =
        open_embeddings(meta.at("embedding").value("precomputed", ""),
                        meta.at("embedding").value("word_vectors", ""));
    features::TfidfModel tfidf;
    corpus::Vocabulary vocab;
    if (cfg.use_tfidf) tfidf = features::load_tfidf(meta.at("tfidf").get<std::string>());
    if (cfg.use_wdo) vocab = load_vocabulary(meta.at("vocab").get<std::string>());
    model::AimParams params = model::load_params(cfg, a.ckpt_path);

    std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
    corpus::SplitManifest manifest = corpus::read_split_manifest(a.splits_path);
    SplitPairs sp = partition_pairs(pairs, manifest);
    const std::vector<corpus::LabeledPair>* subset = nullptr;
    std::vector<corpus::LabeledPair> all;
    if (a.split == "train") subset = &sp.train;
    else if (a.split == "val") subset = &sp.val;
    else if (a.split == "test_id") subset = &sp.test_id;
    else if (a.split == "test_cd") subset = &sp.test_cd;
    else if (a.split == "all") {
        all = pairs;
        subset = &all;
    } else {
        throw ConfigError("--split must be train|val|test_id|test_cd|all");
    }

    std::vector<analysis::DiagnosticsRecord> records(subset->size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < static_cast<long long>(subset->size()); ++i) {
        const corpus::LabeledPair& p = (*subset)[std::size_t(i)];
        train::TrainPair tp = to_train_pair(p, src, cfg, &tfidf, &vocab);
        model::ForwardResult r = model::forward(params, cfg, tp.oh_embs, tp.comment_embs, tp.features);
        analysis::DiagnosticsRecord rec;
        rec.post_id = p.post_id;
        rec.comment_id = p.comment_id;
        rec.label = p.label;
        rec.probability = r.probability.item();
        rec.attention = r.attention_values();
        rec.interactions = r.interaction_values();
        for (std::size_t k = 0; k < rec.interactions.dim; ++k) {
            rec.argmax.push_back(rec.interactions.argmax_dim(k));
        }
        records[std::size_t(i)] = std::move(rec);
    }
    analysis::write_diagnostics(records, a.out_path);
    write_meta(a.out_path, "inspect-attention",
               json{{"pairs", a.pairs_path},
                    {"splits", a.splits_path},
                    {"ckpt", a.ckpt_path},
                    {"split", a.split},
                    {"records", records.size()}});
    std::cout << "wrote " << records.size() << " diagnostics records -> " << a.out_path << "\n";
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string diagnostics_path;
    std::string pairs_path;
    std::string annotations_path;
    std::string topic_model_path;
    std::string out_path = "analysis_report.txt";
    std::size_t top_n = 150;
};

void cmd_analyze(const AnalyzeArgs& a) {
    std::vector<analysis::DiagnosticsRecord> diags = analysis::read_diagnostics(a.diagnostics_path);
    if (diags.empty()) throw DataError("no diagnostics records in " + a.diagnostics_path);

    std::ostringstream report;

    if (!a.annotations_path.empty()) {
        std::vector<analysis::AnnotationRecord> anns = analysis::read_annotations(a.annotations_path);
        analysis::AlignmentResult res = analysis::attention_alignment(diags, anns);
        report << "== attention vs annotated sentences ==\n"
               << "matched posts: " << res.n_posts << "\n"
               << "mean attention, successful comments:   " << res.mean_successful << "\n"
               << "mean attention, unsuccessful comments: " << res.mean_unsuccessful << "\n"
               << "paired t = " << res.ttest.t << ", two-sided p = " << res.ttest.p << " (dof "
               << res.ttest.dof << ")\n\n";
    } else {
        report << "== attention vs annotated sentences ==\n"
               << "skipped: no annotation file provided\n\n";
    }

    if (!a.topic_model_path.empty()) {
        if (a.pairs_path.empty()) throw ConfigError("topic correlation needs --pairs for sentence text");
        topics::LdaModel tm = topics::load_lda(a.topic_model_path);
        std::vector<corpus::LabeledPair> pairs = corpus::read_pairs(a.pairs_path);
        analysis::PairTextLookup lookup;
        for (const corpus::LabeledPair& p : pairs) lookup[{p.post_id, p.comment_id}] = &p;
        auto corr = analysis::interaction_topic_correlation(diags, tm, lookup);
        report << "== interaction dimensions vs topic similarity ==\n";
        for (std::size_t k = 0; k < corr.size(); ++k) {
            report << "dimension " << k << ": ";
            if (corr[k].defined) {
                report << "pearson r = " << corr[k].r << " over " << corr[k].n << " sentence pairs\n";
            } else {
                report << "undefined (constant values)\n";
            }
        }
        report << "\n";
    }

    std::size_t dims = diags[0].interactions.dim;
    report << "== top interaction pairs per dimension ==\n";
    for (std::size_t k = 0; k < dims; ++k) {
        auto top = analysis::top_interaction_pairs(diags, k, a.top_n);
        report << "dimension " << k << " (top " << top.size() << "):\n";
        for (const analysis::TopPair& t : top) {
            report << "  " << t.value << "\t" << t.post_id << "\t" << t.comment_id << "\ti=" << t.i
                   << " j=" << t.j << "\n";
        }
    }

    std::cout << report.str();
    std::ofstream out(a.out_path);
    out << report.str();
    write_meta(a.out_path, "analyze",
               json{{"diagnostics", a.diagnostics_path},
                    {"pairs", a.pairs_path},
                    {"annotations", a.annotations_path},
                    {"topic_model", a.topic_model_path},
                    {"top_n", a.top_n}});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attentive Interaction Model toolkit for Change My View discussions"};
    app.require_subcommand(1);
    // key-value config file; explicit flags take precedence over file values
    app.set_config("--config", "", "read options from an INI file ([subcommand] sections)");

    PreprocessArgs pre;
    CLI::App* c_pre = app.add_subcommand("preprocess", "filter threads, linearize, label pairs");
    c_pre->add_option("--threads", pre.threads_path, "thread JSONL file")->required();
    c_pre->add_option("--out", pre.out_dir, "output directory");
    c_pre->add_option("--min-post-chars", pre.min_post_chars, "minimum OH post length");
    c_pre->add_option("--vocab-cap", pre.vocab_cap, "vocabulary size cap");

    TopicsArgs top;
    CLI::App* c_top = app.add_subcommand("topics", "fit the LDA topic model and delta ratios");
    c_top->add_option("--threads", top.threads_path)->required();
    c_top->add_option("--out", top.out_dir, "output directory");
    c_top->add_option("--k", top.n_topics, "number of topics");
    c_top->add_option("--iterations", top.iterations);
    c_top->add_option("--alpha", top.alpha);
    c_top->add_option("--beta", top.beta);
    c_top->add_option("--top-words", top.top_words);
    c_top->add_option("--seed", top.seed)->required();
    c_top->add_option("--doc-unit", top.doc_unit, "discussion or document");

    SplitArgs spl;
    CLI::App* c_spl = app.add_subcommand("split", "build train/val/test splits from topics");
    c_spl->add_option("--threads", spl.threads_path)->required();
    c_spl->add_option("--topics", spl.assignments_path, "topic assignments JSONL")->required();
    c_spl->add_option("--pairs", spl.pairs_path)->required();
    c_spl->add_option("--out", spl.out_path);
    c_spl->add_option("--train-topics", spl.n_train_topics);
    c_spl->add_option("--val-fraction", spl.val_fraction);
    c_spl->add_option("--seed", spl.seed)->required();

    FeaturesArgs fea;
    CLI::App* c_fea = app.add_subcommand("features", "fit the TFIDF vectorizer on the train split");
    c_fea->add_option("--pairs", fea.pairs_path)->required();
    c_fea->add_option("--splits", fea.splits_path)->required();
    c_fea->add_option("--out", fea.out_path);
    c_fea->add_option("--cap", fea.cap);

    TrainArgs tra;
    CLI::App* c_tra = app.add_subcommand("train", "train the attentive interaction model");
    c_tra->add_option("--pairs", tra.pairs_path)->required();
    c_tra->add_option("--splits", tra.splits_path)->required();
    c_tra->add_option("--embeddings", tra.embeddings_path, "precomputed sentence embeddings");
    c_tra->add_option("--word-vectors", tra.word_vectors_path, "word vectors for the averaging fallback");
    c_tra->add_option("--tfidf", tra.tfidf_path);
    c_tra->add_option("--vocab", tra.vocab_path);
    c_tra->add_option("--out", tra.out_path);
    c_tra->add_option("--inputs", tra.inputs, "comma list from MAX,HSENT,TFIDF,WDO");
    c_tra->add_option("--interaction", tra.interaction)
        ->check(CLI::IsMember({"inner-product", "feedforward"}));
    c_tra->add_option("--hidden-dim", tra.hidden_dim)->check(CLI::IsMember({128, 192}));
    c_tra->add_option("--head1-dim", tra.head1_dim)->check(CLI::IsMember({0, 1, 32, 64}));
    c_tra->add_option("--tfidf-head-dim", tra.tfidf_head_dim)->check(CLI::IsMember({1, 3}));
    c_tra->add_flag("--no-attention", tra.no_attention, "uniform attention ablation");
    c_tra->add_flag("--share-encoders", tra.share_encoders);
    c_tra->add_option("--margin", tra.margin);
    c_tra->add_option("--lr", tra.lr);
    c_tra->add_option("--decay", tra.decay);
    c_tra->add_option("--batch-size", tra.batch_size);
    c_tra->add_option("--epochs", tra.base_epochs, "base epoch budget");
    c_tra->add_option("--extra-epochs", tra.extra_epochs);
    c_tra->add_option("--seed", tra.seed)->required();

    BaselineArgs bas;
    CLI::App* c_bas = app.add_subcommand("baseline", "logistic-regression baseline grid");
    c_bas->add_option("--pairs", bas.pairs_path)->required();
    c_bas->add_option("--splits", bas.splits_path)->required();
    c_bas->add_option("--tfidf", bas.tfidf_path);
    c_bas->add_option("--vocab", bas.vocab_path);
    c_bas->add_option("--embeddings", bas.embeddings_path);
    c_bas->add_option("--word-vectors", bas.word_vectors_path);
    c_bas->add_option("--out", bas.out_path);
    c_bas->add_option("--inputs", bas.inputs, "TFIDF, TFIDF+OH, WDO, SENT, SENT+TFIDF, TFIDF+WDO");
    c_bas->add_option("--penalties", bas.penalties);
    c_bas->add_option("--strengths", bas.strengths);
    c_bas->add_option("--pos-weights", bas.pos_weights);

    EvalArgs eva;
    CLI::App* c_eva = app.add_subcommand("eval", "AUC table with DeLong tests vs a reference");
    c_eva->add_option("--pairs", eva.pairs_path)->required();
    c_eva->add_option("--splits", eva.splits_path)->required();
    c_eva->add_option("--model", eva.models, "NAME=path, repeatable")->required();
    c_eva->add_option("--reference", eva.reference, "reference model name for DeLong");
    c_eva->add_option("--out", eva.out_path);

    InspectArgs ins;
    CLI::App* c_ins = app.add_subcommand("inspect-attention", "export per-pair diagnostics");
    c_ins->add_option("--pairs", ins.pairs_path)->required();
    c_ins->add_option("--splits", ins.splits_path)->required();
    c_ins->add_option("--ckpt", ins.ckpt_path)->required();
    c_ins->add_option("--split", ins.split, "train|val|test_id|test_cd|all");
    c_ins->add_option("--out", ins.out_path);

    AnalyzeArgs ana;
    CLI::App* c_ana = app.add_subcommand("analyze", "posthoc attention and interaction analyses");
    c_ana->add_option("--diagnostics", ana.diagnostics_path)->required();
    c_ana->add_option("--pairs", ana.pairs_path);
    c_ana->add_option("--annotations", ana.annotations_path);
    c_ana->add_option("--topic-model", ana.topic_model_path);
    c_ana->add_option("--out", ana.out_path);
    c_ana->add_option("--top-n", ana.top_n);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_pre->parsed()) cmd_preprocess(pre);
        else if (c_top->parsed()) cmd_topics(top);
        else if (c_spl->parsed()) cmd_split(spl);
        else if (c_fea->parsed()) cmd_features(fea);
        else if (c_tra->parsed()) cmd_train(tra);
        else if (c_bas->parsed()) cmd_baseline(bas);
        else if (c_eva->parsed()) cmd_eval(eva);
        else if (c_ins->parsed()) cmd_inspect(ins);
        else if (c_ana->parsed()) cmd_analyze(ana);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
