#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "aim/features.hpp"

namespace aim::baseline {

enum class Penalty { l1, l2 };

const char* penalty_name(Penalty p);
Penalty penalty_from_name(const std::string& s);

struct LrConfig {
    Penalty penalty = Penalty::l2;
    double strength = 1.0;    // inverse-penalty constant C: loss + (1/C) * R(w)
    double pos_weight = 1.0;  // loss multiplier for positive examples
    std::size_t max_iters = 5000;
    double tol = 1e-6;        // gradient(-mapping) norm at the optimum

    void validate() const;
};

struct LrModel {
    std::vector<double> weights;
    double intercept = 0.0;
};

struct LrDataset {
    std::size_t dim = 0;
    std::vector<features::SparseVector> x;
    std::vector<int> y;
};

// Full-batch proximal gradient with backtracking line search on the
// class-weighted regularized negative log-likelihood. The intercept is not
// penalized. L2 runs as plain gradient descent, L1 via soft thresholding.
LrModel fit_lr(const LrConfig& cfg, const LrDataset& data);

double predict_lr(const LrModel& model, const features::SparseVector& x);
double predict_lr(const LrModel& model, const std::vector<double>& dense_x);

// Weighted-NLL-plus-penalty objective and the norm used as the convergence
// check; exposed so tests can assert optimality directly.
double lr_objective(const LrConfig& cfg, const LrDataset& data, const LrModel& model);
double lr_optimality_norm(const LrConfig& cfg, const LrDataset& data, const LrModel& model);

struct NgramWeight {
    std::string ngram;
    double weight = 0.0;
};

// k most positive and k most negative n-gram weights of a model whose first
// tfidf.dim() coefficients sit over the vectorizer's columns.
std::pair<std::vector<NgramWeight>, std::vector<NgramWeight>> top_ngrams(
    const LrModel& model, const features::TfidfModel& tfidf, std::size_t k);

void save_lr(const LrModel& model, const std::string& path);
LrModel load_lr(const std::string& path);

} // namespace aim::baseline
