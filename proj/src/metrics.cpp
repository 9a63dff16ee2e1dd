#include "aim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aim/error.hpp"

namespace aim::metrics {

namespace {

void check_binary(const std::vector<double>& scores, const std::vector<int>& labels,
                  std::size_t* n_pos, std::size_t* n_neg) {
    if (scores.size() != labels.size()) {
        throw ShapeError("scores and labels differ in length");
    }
    std::size_t pos = 0, neg = 0;
    for (int l : labels) {
        if (l == 1) ++pos;
        else if (l == 0) ++neg;
        else throw DataError("labels must be 0 or 1");
    }
    if (pos == 0 || neg == 0) throw EvalError("AUC undefined on single-class input");
    *n_pos = pos;
    *n_neg = neg;
}

// Midranks (average rank of each tie group, 1-based).
std::vector<double> midranks(const std::vector<double>& x) {
    std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        double mid = (double(i + 1) + double(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }
    return rank;
}

} // namespace

RocResult auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::size_t m = 0, n = 0;
    check_binary(scores, labels, &m, &n);
    std::vector<double> rank = midranks(scores);
    double rank_sum_pos = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) rank_sum_pos += rank[i];
    }
    RocResult r;
    r.scores = scores;
    r.labels = labels;
    r.auc = (rank_sum_pos - double(m) * double(m + 1) / 2.0) / (double(m) * double(n));
    return r;
}

namespace {

// DeLong placement values: for each positive, the fraction of negatives it
// outranks (ties half); for each negative, the fraction of positives ranking
// above it.
struct Placements {
    std::vector<double> v10;  // per positive
    std::vector<double> v01;  // per negative
    double auc = 0.0;
};

Placements placements(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        (labels[i] == 1 ? pos : neg).push_back(scores[i]);
    }
    std::vector<double> sneg = neg, spos = pos;
    std::sort(sneg.begin(), sneg.end());
    std::sort(spos.begin(), spos.end());

    Placements pl;
    pl.v10.reserve(pos.size());
    pl.v01.reserve(neg.size());
    for (double s : pos) {
        auto lo = std::lower_bound(sneg.begin(), sneg.end(), s) - sneg.begin();
        auto hi = std::upper_bound(sneg.begin(), sneg.end(), s) - sneg.begin();
        pl.v10.push_back((double(lo) + 0.5 * double(hi - lo)) / double(neg.size()));
    }
    for (double s : neg) {
        auto lo = std::lower_bound(spos.begin(), spos.end(), s) - spos.begin();
        auto hi = std::upper_bound(spos.begin(), spos.end(), s) - spos.begin();
        double above = double(long(pos.size()) - hi);
        pl.v01.push_back((above + 0.5 * double(hi - lo)) / double(pos.size()));
    }
    pl.auc = std::accumulate(pl.v10.begin(), pl.v10.end(), 0.0) / double(pos.size());
    return pl;
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (a[i] - ma) * (b[i] - mb);
    return acc / double(n - 1);
}

} // namespace

DeLongComparison delong(const std::vector<double>& scores1,
                        const std::vector<double>& scores2,
                        const std::vector<int>& labels) {
    if (scores1.size() != scores2.size()) {
        throw ShapeError("paired DeLong needs both models scored on the same instances");
    }
    std::size_t m = 0, n = 0;
    check_binary(scores1, labels, &m, &n);
    if (m < 2 || n < 2) throw EvalError("DeLong needs at least 2 positives and 2 negatives");

    Placements p1 = placements(scores1, labels);
    Placements p2 = placements(scores2, labels);

    DeLongComparison c;
    c.auc1 = p1.auc;
    c.auc2 = p2.auc;
    double s10_11 = sample_cov(p1.v10, p1.v10);
    double s10_22 = sample_cov(p2.v10, p2.v10);
    double s10_12 = sample_cov(p1.v10, p2.v10);
    double s01_11 = sample_cov(p1.v01, p1.v01);
    double s01_22 = sample_cov(p2.v01, p2.v01);
    double s01_12 = sample_cov(p1.v01, p2.v01);
    c.var_diff = (s10_11 + s10_22 - 2.0 * s10_12) / double(m) +
                 (s01_11 + s01_22 - 2.0 * s01_12) / double(n);

    double diff = c.auc1 - c.auc2;
    if (c.var_diff <= 0.0) {
        if (diff == 0.0) {
            c.z = 0.0;
            c.p = 1.0;
            return c;
        }
        throw DegenerateError("zero variance with unequal AUCs");
    }
    c.z = diff / std::sqrt(c.var_diff);
    c.p = 2.0 * (1.0 - normal_cdf(std::fabs(c.z)));
    return c;
}

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ShapeError("paired t-test needs equal-length samples");
    std::size_t n = a.size();
    if (n < 2) throw ShapeError("paired t-test needs at least 2 pairs");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double mean = std::accumulate(d.begin(), d.end(), 0.0) / double(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / double(n - 1));

    TTestResult r;
    r.dof = n - 1;
    if (sd == 0.0) {
        if (mean == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
            return r;
        }
        throw DegenerateError("zero-variance differences with nonzero mean");
    }
    r.t = mean / (sd / std::sqrt(double(n)));
    double nu = double(r.dof);
    r.p = incomplete_beta(nu / 2.0, 0.5, nu / (nu + r.t * r.t));
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ShapeError("pearson needs equal-length samples");
    std::size_t n = x.size();
    if (n < 2) throw ShapeError("pearson needs at least 2 samples");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateError("pearson on constant input");
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw DomainError("incomplete beta did not converge");
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete beta needs x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          b * std::log(1.0 - x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (dof <= 0.0) throw DomainError("t distribution needs positive dof");
    double x = dof / (dof + t * t);
    double tail = 0.5 * incomplete_beta(dof / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

} // namespace aim::metrics
