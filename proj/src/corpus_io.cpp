#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aim/corpus.hpp"

namespace aim::corpus {

using nlohmann::json;

namespace {

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": malformed JSON record");
    }
    return j;
}

std::string hexfloat(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

} // namespace

std::vector<Thread> read_threads(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read thread file: " + path);
    std::vector<Thread> threads;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, path, lineno);
        Thread t;
        try {
            t.id = j.at("id").get<std::string>();
            t.title = j.value("title", std::string{});
            t.body = j.value("selftext", std::string{});
            t.author = j.value("author", std::string{});
            t.split = j.value("split", std::string{"train"});
            for (const json& jc : j.value("comments", json::array())) {
                Comment c;
                c.id = jc.at("id").get<std::string>();
                c.parent_id = jc.value("parent_id", std::string{});
                c.author = jc.value("author", std::string{});
                c.body = jc.value("body", std::string{});
                c.created_utc = jc.value("created_utc", std::int64_t{0});
                t.comments.push_back(std::move(c));
            }
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (t.split != "train" && t.split != "test") {
            throw ParseError("thread " + t.id + ": split must be 'train' or 'test'");
        }
        threads.push_back(std::move(t));
    }
    return threads;
}

void write_threads(const std::vector<Thread>& threads, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write thread file: " + path);
    for (const Thread& t : threads) {
        json j;
        j["id"] = t.id;
        j["title"] = t.title;
        j["selftext"] = t.body;
        j["author"] = t.author;
        j["split"] = t.split;
        json comments = json::array();
        for (const Comment& c : t.comments) {
            comments.push_back({{"id", c.id},
                                {"parent_id", c.parent_id},
                                {"author", c.author},
                                {"body", c.body},
                                {"created_utc", c.created_utc}});
        }
        j["comments"] = std::move(comments);
        out << j.dump() << "\n";
    }
}

void write_pairs(const std::vector<LabeledPair>& pairs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write pair file: " + path);
    for (const LabeledPair& p : pairs) {
        json j;
        j["post_id"] = p.post_id;
        j["comment_id"] = p.comment_id;
        j["label"] = p.label;
        j["oh_sentences"] = p.oh_sentences;
        j["comment_sentences"] = p.comment_sentences;
        out << j.dump() << "\n";
    }
}

std::vector<LabeledPair> read_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read pair file: " + path);
    std::vector<LabeledPair> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, path, lineno);
        LabeledPair p;
        try {
            p.post_id = j.at("post_id").get<std::string>();
            p.comment_id = j.at("comment_id").get<std::string>();
            p.label = j.at("label").get<int>();
            p.oh_sentences = j.at("oh_sentences").get<std::vector<std::string>>();
            p.comment_sentences = j.at("comment_sentences").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void write_split_manifest(const SplitManifest& manifest, const std::string& path) {
    json j;
    j["training_topics"] = manifest.training_topics;
    json assignment = json::object();
    for (const auto& [id, kind] : manifest.assignment) {
        assignment[id] = split_kind_name(kind);
    }
    j["assignment"] = std::move(assignment);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write split manifest: " + path);
    out << j.dump(2) << "\n";
}

SplitManifest read_split_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read split manifest: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed split manifest: " + path);
    SplitManifest m;
    try {
        m.training_topics = j.at("training_topics").get<std::vector<int>>();
        for (const auto& [id, kind] : j.at("assignment").items()) {
            m.assignment[id] = split_kind_from_name(kind.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("split manifest: ") + e.what());
    }
    return m;
}

EmbeddingTable load_word_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read word vectors: " + path);
    std::size_t count = 0, dim = 0;
    in >> count >> dim;
    if (!in || dim == 0) throw ParseError("word vector file needs a 'count dim' header: " + path);
    EmbeddingTable table;
    table.dim = dim;
    for (std::size_t i = 0; i < count; ++i) {
        std::string word;
        in >> word;
        std::vector<double> v(dim);
        for (std::size_t d = 0; d < dim; ++d) in >> v[d];
        if (!in) throw ParseError("truncated word vector file: " + path);
        table.vectors[word] = std::move(v);
    }
    return table;
}

void save_precomputed(const PrecomputedEmbeddings& emb, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write embedding file: " + path);
    out << "AIMEMB 1 " << emb.dim << " " << emb.by_key.size() << "\n";
    for (const auto& [key, vec] : emb.by_key) {
        out << key.first << " " << key.second;
        for (double x : vec) out << " " << hexfloat(x);
        out << "\n";
    }
}

PrecomputedEmbeddings load_precomputed(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read embedding file: " + path);
    std::string magic;
    int version = 0;
    PrecomputedEmbeddings emb;
    std::size_t count = 0;
    in >> magic >> version >> emb.dim >> count;
    if (magic != "AIMEMB" || version != 1) throw ParseError("not an embedding file: " + path);
    for (std::size_t i = 0; i < count; ++i) {
        std::string doc;
        std::size_t sent = 0;
        in >> doc >> sent;
        std::vector<double> v(emb.dim);
        for (std::size_t d = 0; d < emb.dim; ++d) {
            std::string tok;
            in >> tok;
            char* end = nullptr;
            v[d] = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str()) throw ParseError("bad value in embedding file: " + path);
        }
        if (!in) throw ParseError("truncated embedding file: " + path);
        emb.by_key[{doc, sent}] = std::move(v);
    }
    return emb;
}

} // namespace aim::corpus
