#pragma once

#include <cstddef>
#include <vector>

namespace aim::metrics {

struct RocResult {
    std::vector<double> scores;
    std::vector<int> labels;
    double auc = 0.0;
};

// Mann-Whitney AUC with half credit for ties, computed from midranks in
// O(n log n). EvalError unless both classes are present.
RocResult auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct DeLongComparison {
    double auc1 = 0.0;
    double auc2 = 0.0;
    double var_diff = 0.0;  // variance of (auc1 - auc2)
    double z = 0.0;
    double p = 1.0;         // two-sided normal p-value
};

// Paired DeLong comparison of two correlated ROC curves scored on the same
// instances. Zero variance: equal AUCs -> z=0, p=1 by convention; unequal ->
// DegenerateError.
DeLongComparison delong(const std::vector<double>& scores1,
                        const std::vector<double>& scores2,
                        const std::vector<int>& labels);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    std::size_t dof = 0;
};

// Paired sample t-test on the differences a[i] - b[i]. Identical inputs give
// t=0, p=1 (same convention as delong); zero variance with a nonzero mean
// difference is a DegenerateError.
TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

// Sample Pearson correlation; DegenerateError when either input is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Special functions behind the p-values, exposed for direct testing.
double normal_cdf(double z);
double incomplete_beta(double a, double b, double x);  // regularized I_x(a,b)
double student_t_cdf(double t, double dof);

} // namespace aim::metrics
