#pragma once

// Independent oracles used by the acceptance suite. Each recomputes its
// target quantity by a route the production code never takes: quadratic pair
// counting for AUC, a literal group-by-post transcription of the combined
// loss, and a model-exchange permutation test for DeLong p-values.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "aim/metrics.hpp"
#include "aim/rng.hpp"
#include "aim/training.hpp"

namespace aimtest {

inline double auc_pair_counting(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t np = 0, nn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        ++np;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (int l : labels) {
        if (l == 0) ++nn;
    }
    return wins / (double(np) * double(nn));
}

struct OracleBatchItem {
    std::string post_id;
    int label = 0;
    double p = 0.0;
};

// Combined loss written exactly as the formula reads: the double average of
// BCE grouped by post, plus the mean ranking loss over positive/negative
// pairs of the batch.
inline double combined_loss_transcription(const std::vector<OracleBatchItem>& batch,
                                          const std::map<std::string, std::size_t>& n_comments,
                                          double margin) {
    std::map<std::string, double> per_post;
    for (const OracleBatchItem& it : batch) {
        double p = std::min(1.0 - 1e-12, std::max(1e-12, it.p));
        double bce = it.label == 1 ? -std::log(p) : -std::log(1.0 - p);
        per_post[it.post_id] += bce / double(n_comments.at(it.post_id));
    }
    double bce_term = 0.0;
    for (const auto& [_, v] : per_post) bce_term += v;
    bce_term /= double(per_post.size());

    double mrl_sum = 0.0;
    std::size_t n_pairs = 0;
    for (const OracleBatchItem& pos : batch) {
        if (pos.label != 1) continue;
        for (const OracleBatchItem& neg : batch) {
            if (neg.label != 0) continue;
            mrl_sum += std::max(0.0, neg.p - pos.p + margin);
            ++n_pairs;
        }
    }
    return bce_term + (n_pairs ? mrl_sum / double(n_pairs) : 0.0);
}

// Self-contained midrank AUC for the permutation loop below; its agreement
// with pair counting is itself established by the suite, so the oracle can
// afford the O(n log n) form.
inline double fast_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0, i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        double mid = 0.5 * (double(i + 1) + double(j + 1));
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) {
                rank_sum_pos += mid;
                ++n_pos;
            }
        }
        i = j + 1;
    }
    std::size_t n_neg = n - n_pos;
    return (rank_sum_pos - double(n_pos) * double(n_pos + 1) / 2.0) /
           (double(n_pos) * double(n_neg));
}

// Two-sided p-value for "both score vectors come from the same model": each
// instance's pair of scores is swapped with probability 1/2 per resample.
inline double delong_permutation_p(const std::vector<double>& s1, const std::vector<double>& s2,
                                   const std::vector<int>& labels, std::size_t resamples,
                                   aim::Rng& rng) {
    double observed = std::fabs(fast_auc(s1, labels) - fast_auc(s2, labels));
    std::vector<double> a(s1.size()), b(s2.size());
    std::size_t hits = 0;
    for (std::size_t r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < s1.size(); ++i) {
            if (rng.coin()) {
                a[i] = s2[i];
                b[i] = s1[i];
            } else {
                a[i] = s1[i];
                b[i] = s2[i];
            }
        }
        double diff = std::fabs(fast_auc(a, labels) - fast_auc(b, labels));
        if (diff >= observed - 1e-12) ++hits;
    }
    return double(hits) / double(resamples);
}

} // namespace aimtest
