#include "aim/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "aim/error.hpp"

namespace aim::features {

double SparseVector::norm() const {
    double acc = 0.0;
    for (const auto& [_, v] : entries) acc += v * v;
    return std::sqrt(acc);
}

std::vector<double> SparseVector::densify(std::size_t dim) const {
    std::vector<double> out(dim, 0.0);
    for (const auto& [i, v] : entries) out.at(i) = v;
    return out;
}

double SparseVector::dot_dense(const std::vector<double>& w) const {
    double acc = 0.0;
    for (const auto& [i, v] : entries) acc += w[i] * v;
    return acc;
}

std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    for (std::size_t n = 1; n <= 3; ++n) {
        if (tokens.size() < n) break;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string g = tokens[i];
            for (std::size_t k = 1; k < n; ++k) {
                g += '_';
                g += tokens[i + k];
            }
            out.push_back(std::move(g));
        }
    }
    return out;
}

TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& training_docs, std::size_t cap) {
    if (training_docs.empty()) throw DataError("fit_tfidf on an empty corpus");

    std::unordered_map<std::string, std::size_t> tf;
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : training_docs) {
        std::set<std::string> seen;
        for (std::string& g : extract_ngrams(doc)) {
            tf[g] += 1;
            seen.insert(std::move(g));
        }
        for (const std::string& g : seen) df[g] += 1;
    }

    std::vector<std::pair<std::string, std::size_t>> ranked(tf.begin(), tf.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > cap) ranked.resize(cap);

    TfidfModel m;
    m.n_docs = training_docs.size();
    for (auto& [g, _] : ranked) {
        m.index[g] = m.ngrams.size();
        m.df.push_back(df[g]);
        m.idf.push_back(std::log((1.0 + double(m.n_docs)) / (1.0 + double(df[g]))) + 1.0);
        m.ngrams.push_back(g);
    }
    return m;
}

SparseVector transform_tfidf(const TfidfModel& model, const std::vector<std::string>& tokens) {
    std::map<std::size_t, double> weights;
    for (const std::string& g : extract_ngrams(tokens)) {
        auto it = model.index.find(g);
        if (it == model.index.end()) continue;  // unknown n-grams ignored
        weights[it->second] += model.idf[it->second];
    }
    SparseVector v;
    v.entries.assign(weights.begin(), weights.end());
    double n = v.norm();
    if (n > 0.0) {
        for (auto& [_, x] : v.entries) x /= n;
    }
    return v;
}

void save_tfidf(const TfidfModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write vectorizer: " + path);
    out << "AIMTFIDF 1 " << model.dim() << " " << model.n_docs << "\n";
    char buf[64];
    for (std::size_t i = 0; i < model.dim(); ++i) {
        std::snprintf(buf, sizeof(buf), "%a", model.idf[i]);
        out << model.df[i] << " " << buf << " " << model.ngrams[i] << "\n";
    }
}

TfidfModel load_tfidf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read vectorizer: " + path);
    std::string magic;
    int version = 0;
    std::size_t dim = 0;
    TfidfModel m;
    in >> magic >> version >> dim >> m.n_docs;
    if (magic != "AIMTFIDF" || version != 1) throw ParseError("not a vectorizer file: " + path);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t dfi = 0;
        std::string idf_tok, g;
        in >> dfi >> idf_tok >> g;
        if (!in) throw ParseError("truncated vectorizer file: " + path);
        m.df.push_back(dfi);
        m.idf.push_back(std::strtod(idf_tok.c_str(), nullptr));
        m.index[g] = m.ngrams.size();
        m.ngrams.push_back(g);
    }
    return m;
}

WordOverlapFeatures word_overlap(const std::vector<std::string>& comment_tokens,
                                 const std::vector<std::string>& oh_tokens,
                                 const corpus::Vocabulary& vocab) {
    std::set<std::string> c, o;
    for (const std::string& t : comment_tokens) {
        if (vocab.contains(t)) c.insert(t);
    }
    for (const std::string& t : oh_tokens) {
        if (vocab.contains(t)) o.insert(t);
    }
    std::size_t inter = 0;
    for (const std::string& t : c) inter += o.count(t);
    std::size_t uni = c.size() + o.size() - inter;

    WordOverlapFeatures f;
    f.intersection = double(inter);
    f.frac_comment = c.empty() ? 0.0 : double(inter) / double(c.size());
    f.frac_oh = o.empty() ? 0.0 : double(inter) / double(o.size());
    f.jaccard = uni == 0 ? 0.0 : double(inter) / double(uni);
    return f;
}

} // namespace aim::features
