#include "aim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_set>

#include "aim/rng.hpp"
#include "aim/tokenize.hpp"

namespace aim::corpus {

namespace {

// reddit fullnames carry type prefixes; ids inside one thread do not
std::string strip_prefix(const std::string& id) {
    if (id.size() > 3 && id[2] == '_' && id[0] == 't' && std::isdigit(static_cast<unsigned char>(id[1]))) {
        return id.substr(3);
    }
    return id;
}

bool is_underscore_rule(const std::string& line) {
    std::size_t n = 0;
    for (char c : line) {
        if (c == '_') ++n;
        else if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return n >= 3;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

bool whitespace_only(const std::string& s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

// Bot comments are boilerplate: the confirmation line, footnote lines and
// separator rules. Whatever survives counts as content.
std::string strip_bot_boilerplate(const std::string& body, const FilterRules& rules) {
    std::ostringstream out;
    bool first = true;
    for (const std::string& line : lines_of(body)) {
        if (starts_with(line, rules.bot_confirm_marker)) continue;
        if (is_underscore_rule(line)) continue;
        if (starts_with(line, "^")) continue;
        if (!first) out << "\n";
        out << line;
        first = false;
    }
    return out.str();
}

} // namespace

const Comment* Thread::find_comment(const std::string& id_or_fullname) const {
    std::string key = strip_prefix(id_or_fullname);
    for (const Comment& c : comments) {
        if (strip_prefix(c.id) == key) return &c;
    }
    return nullptr;
}

std::string strip_post_footer(const std::string& body, bool* stripped) {
    if (stripped) *stripped = false;
    std::vector<std::string> ls = lines_of(body);
    std::size_t cut = ls.size();
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (is_underscore_rule(ls[i])) {
            cut = i;
            break;
        }
    }
    if (cut == ls.size()) return body;
    if (stripped) *stripped = true;
    std::ostringstream out;
    for (std::size_t i = 0; i < cut; ++i) {
        if (i) out << "\n";
        out << ls[i];
    }
    return out.str();
}

bool is_oh_comment(const Thread& thread, const Comment& c) {
    return !thread.author.empty() && c.author == thread.author;
}

std::vector<Thread> filter_threads(std::vector<Thread> threads, const FilterRules& rules,
                                   FilterReport* report) {
    FilterReport local;
    FilterReport& r = report ? *report : local;
    std::vector<Thread> kept;
    kept.reserve(threads.size());

    for (Thread& t : threads) {
        ++r.threads_in;
        r.comments_in += t.comments.size();
        if (t.id.empty()) throw ParseError("thread without id");

        bool stripped = false;
        t.body = strip_post_footer(t.body, &stripped);
        if (stripped) ++r.post_footers_stripped;

        // fold bot confirmations into their parent comments before the bot
        // comments themselves are removed
        for (const Comment& c : t.comments) {
            if (c.author != rules.bot_name) continue;
            if (c.body.find(rules.bot_confirm_marker) == std::string::npos) continue;
            std::string parent = strip_prefix(c.parent_id);
            for (Comment& p : t.comments) {
                if (strip_prefix(p.id) == parent) {
                    if (is_oh_comment(t, p)) p.delta_from_bot = true;
                    break;
                }
            }
        }

        std::vector<Comment> survivors;
        survivors.reserve(t.comments.size());
        for (Comment& c : t.comments) {
            if (c.author == rules.bot_name) {
                std::string content = strip_bot_boilerplate(c.body, rules);
                if (whitespace_only(content)) {
                    ++r.dropped_bot_comments;
                    continue;
                }
                c.body = content;  // keep the comment, system lines removed
            }
            if (c.body == "[deleted]") {
                ++r.dropped_deleted_comments;
                continue;
            }
            survivors.push_back(std::move(c));
        }
        t.comments = std::move(survivors);

        if (t.body == "[deleted]") {
            ++r.dropped_deleted_post;
            continue;
        }
        if (t.body.size() < rules.min_post_chars) {
            ++r.dropped_short_post;
            continue;
        }
        ++r.threads_kept;
        r.comments_kept += t.comments.size();
        kept.push_back(std::move(t));
    }
    return kept;
}

int detect_delta(const Comment& oh_comment, const Thread& thread, const FilterRules& rules) {
    (void)thread;
    if (oh_comment.delta_from_bot) return 1;
    for (const std::string& token : rules.delta_tokens) {
        if (!token.empty() && oh_comment.body.find(token) != std::string::npos) return 1;
    }
    return 0;
}

std::vector<const Comment*> linearize(const Thread& thread, LinearizeStats* stats) {
    LinearizeStats local;
    LinearizeStats& st = stats ? *stats : local;

    std::vector<const Comment*> oh_comments;
    for (const Comment& c : thread.comments) {
        if (is_oh_comment(thread, c)) oh_comments.push_back(&c);
    }
    std::stable_sort(oh_comments.begin(), oh_comments.end(),
                     [](const Comment* a, const Comment* b) {
                         if (a->created_utc != b->created_utc) return a->created_utc < b->created_utc;
                         return a->id < b->id;
                     });

    std::string root = strip_prefix(thread.id);
    std::vector<const Comment*> order;
    std::unordered_set<const Comment*> seen;

    for (const Comment* oh : oh_comments) {
        if (seen.count(oh)) continue;
        std::vector<const Comment*> chain;  // leaf-to-root, excluding oh itself
        std::string pid = strip_prefix(oh->parent_id);
        std::unordered_set<std::string> walked;
        while (pid != root) {
            if (!walked.insert(pid).second) {
                throw ParseError("cycle in comment tree of thread " + thread.id);
            }
            const Comment* parent = thread.find_comment(pid);
            if (parent == nullptr) {
                ++st.missing_ancestors;  // removed by filtering; tolerated
                break;
            }
            if (seen.count(parent)) break;  // its own ancestors are already in
            chain.push_back(parent);
            pid = strip_prefix(parent->parent_id);
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            order.push_back(*it);
            seen.insert(*it);
        }
        order.push_back(oh);
        seen.insert(oh);
    }
    return order;
}

std::vector<LabeledPair> label_pairs(const Thread& thread,
                                     const std::vector<const Comment*>& order,
                                     const FilterRules& rules, LabelStats* stats) {
    LabelStats local;
    LabelStats& st = stats ? *stats : local;

    std::vector<std::string> oh_sentences;
    if (!thread.title.empty()) oh_sentences.push_back(thread.title);
    for (std::string& s : text::split_sentences(thread.body)) {
        oh_sentences.push_back(std::move(s));
    }

    std::vector<LabeledPair> pairs;
    std::unordered_set<std::string> labeled;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Comment* c = order[i];
        if (!is_oh_comment(thread, *c)) continue;
        ++st.oh_comments;
        if (i == 0) {
            ++st.no_predecessor;
            continue;
        }
        const Comment* pred = order[i - 1];
        if (is_oh_comment(thread, *pred)) {
            ++st.predecessor_is_oh;
            continue;
        }
        if (labeled.count(pred->id)) {
            ++st.already_labeled;
            continue;
        }
        labeled.insert(pred->id);

        LabeledPair pair;
        pair.post_id = thread.id;
        pair.comment_id = pred->id;
        pair.label = detect_delta(*c, thread, rules);
        pair.oh_sentences = oh_sentences;
        pair.comment_sentences = text::split_sentences(pred->body);
        if (pair.oh_sentences.empty() || pair.comment_sentences.empty()) {
            ++st.empty_sentence_pairs;
            continue;
        }
        ++st.pairs;
        if (pair.label == 1) ++st.positives;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

Vocabulary Vocabulary::build(const std::vector<const Thread*>& training_threads, std::size_t cap) {
    std::unordered_map<std::string, std::size_t> freq;
    auto count = [&](const std::string& textblock) {
        for (std::string& tok : text::tokenize(textblock)) freq[std::move(tok)] += 1;
    };
    for (const Thread* t : training_threads) {
        count(t->title);
        count(t->body);
        for (const Comment& c : t->comments) count(c.body);
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > cap) ranked.resize(cap);

    Vocabulary v;
    v.tokens.reserve(ranked.size());
    for (auto& [tok, _] : ranked) {
        v.index[tok] = v.tokens.size();
        v.tokens.push_back(tok);
    }
    return v;
}

const char* split_kind_name(SplitKind k) {
    switch (k) {
        case SplitKind::train: return "train";
        case SplitKind::val: return "val";
        case SplitKind::test_in_domain: return "test_id";
        case SplitKind::test_cross_domain: return "test_cd";
        case SplitKind::unused: return "unused";
    }
    return "?";
}

SplitKind split_kind_from_name(const std::string& s) {
    if (s == "train") return SplitKind::train;
    if (s == "val") return SplitKind::val;
    if (s == "test_id") return SplitKind::test_in_domain;
    if (s == "test_cd") return SplitKind::test_cross_domain;
    if (s == "unused") return SplitKind::unused;
    throw ParseError("unknown split kind: " + s);
}

SplitManifest make_splits(const std::vector<ThreadMeta>& metas, const SplitConfig& cfg) {
    // mean delta ratio per topic over train-tagged discussions
    std::map<int, std::pair<double, std::size_t>> topic_ratio;  // sum, count
    for (const ThreadMeta& m : metas) {
        if (m.topic < 0) throw DataError("discussion " + m.post_id + " has no topic");
        if (m.dataset_split == "train") {
            topic_ratio[m.topic].first += m.delta_ratio;
            topic_ratio[m.topic].second += 1;
        }
    }
    std::vector<std::pair<double, int>> ranked;  // (-mean, topic)
    for (const auto& [topic, sc] : topic_ratio) {
        if (sc.second == 0) continue;
        ranked.push_back({sc.first / double(sc.second), topic});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    SplitManifest manifest;
    std::set<int> training_topics;
    for (std::size_t i = 0; i < ranked.size() && i < cfg.n_train_topics; ++i) {
        manifest.training_topics.push_back(ranked[i].second);
        training_topics.insert(ranked[i].second);
    }

    // validation draw: per training topic, a seeded shuffle of its
    // train-tagged discussions, first floor(fraction * n) go to validation
    std::map<int, std::vector<std::string>> train_by_topic;
    for (const ThreadMeta& m : metas) {
        if (m.dataset_split == "train" && training_topics.count(m.topic)) {
            train_by_topic[m.topic].push_back(m.post_id);
        }
    }
    Rng rng(cfg.seed, "split");
    std::set<std::string> val_ids;
    for (auto& [topic, ids] : train_by_topic) {
        std::sort(ids.begin(), ids.end());
        rng.shuffle(ids);
        std::size_t n_val = std::size_t(double(ids.size()) * cfg.val_fraction);
        for (std::size_t i = 0; i < n_val; ++i) val_ids.insert(ids[i]);
    }

    for (const ThreadMeta& m : metas) {
        SplitKind kind;
        bool in_domain = training_topics.count(m.topic) > 0;
        if (m.dataset_split == "train") {
            if (!in_domain) kind = SplitKind::unused;
            else kind = val_ids.count(m.post_id) ? SplitKind::val : SplitKind::train;
        } else {
            kind = in_domain ? SplitKind::test_in_domain : SplitKind::test_cross_domain;
        }
        if (!manifest.assignment.emplace(m.post_id, kind).second) {
            throw DataError("duplicate discussion id in split input: " + m.post_id);
        }
    }
    return manifest;
}

std::vector<double> average_embedding(const EmbeddingTable& table,
                                      const std::vector<std::string>& tokens) {
    std::vector<double> acc(table.dim, 0.0);
    std::size_t n = 0;
    for (const std::string& t : tokens) {
        auto it = table.vectors.find(t);
        if (it == table.vectors.end()) continue;
        for (std::size_t d = 0; d < table.dim; ++d) acc[d] += it->second[d];
        ++n;
    }
    if (n > 0) {
        for (double& x : acc) x /= double(n);
    }
    return acc;
}

const std::vector<double>& PrecomputedEmbeddings::require(const std::string& doc_id,
                                                          std::size_t sentence) const {
    auto it = by_key.find({doc_id, sentence});
    if (it == by_key.end()) {
        throw DataError("no precomputed embedding for document " + doc_id + " sentence " +
                        std::to_string(sentence));
    }
    return it->second;
}

PairEmbeddings embed_pair(const LabeledPair& pair, const EmbeddingTable& table) {
    PairEmbeddings out;
    for (const std::string& s : pair.oh_sentences) {
        out.oh.push_back(average_embedding(table, text::tokenize(s)));
    }
    for (const std::string& s : pair.comment_sentences) {
        out.comment.push_back(average_embedding(table, text::tokenize(s)));
    }
    return out;
}

PairEmbeddings embed_pair(const LabeledPair& pair, const PrecomputedEmbeddings& pre) {
    PairEmbeddings out;
    for (std::size_t i = 0; i < pair.oh_sentences.size(); ++i) {
        out.oh.push_back(pre.require(pair.post_id, i));
    }
    for (std::size_t j = 0; j < pair.comment_sentences.size(); ++j) {
        out.comment.push_back(pre.require(pair.comment_id, j));
    }
    return out;
}

} // namespace aim::corpus
