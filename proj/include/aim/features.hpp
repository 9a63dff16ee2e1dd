#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "aim/corpus.hpp"

namespace aim::features {

struct SparseVector {
    std::vector<std::pair<std::size_t, double>> entries;  // sorted by index

    double norm() const;
    std::vector<double> densify(std::size_t dim) const;
    double dot_dense(const std::vector<double>& w) const;
};

// n-grams for n = 1..3 over the token stream, tokens joined by '_'.
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens);

struct TfidfModel {
    std::vector<std::string> ngrams;                      // column -> ngram
    std::unordered_map<std::string, std::size_t> index;  // ngram -> column
    std::vector<std::size_t> df;                          // training document frequency
    std::vector<double> idf;                              // ln((1+N)/(1+df)) + 1
    std::size_t n_docs = 0;

    std::size_t dim() const { return ngrams.size(); }
};

// Top `cap` n-grams by raw training term frequency (ties lexicographic),
// smoothed IDF from the same documents.
TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& training_docs,
                     std::size_t cap = 40000);

// tf * idf per modeled n-gram, L2-normalized; unknown n-grams are ignored.
SparseVector transform_tfidf(const TfidfModel& model, const std::vector<std::string>& tokens);

void save_tfidf(const TfidfModel& model, const std::string& path);
TfidfModel load_tfidf(const std::string& path);

struct WordOverlapFeatures {
    double intersection = 0.0;   // |C ∩ O|
    double frac_comment = 0.0;   // |C ∩ O| / |C|
    double frac_oh = 0.0;        // |C ∩ O| / |O|
    double jaccard = 0.0;        // |C ∩ O| / |C ∪ O|

    std::array<double, 4> as_array() const { return {intersection, frac_comment, frac_oh, jaccard}; }
};

// Sets are distinct tokens restricted to the vocabulary; empty-set ratios are
// defined as zero.
WordOverlapFeatures word_overlap(const std::vector<std::string>& comment_tokens,
                                 const std::vector<std::string>& oh_tokens,
                                 const corpus::Vocabulary& vocab);

} // namespace aim::features
