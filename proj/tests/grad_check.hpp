#pragma once

// Central finite differences, the independent oracle for every analytic
// gradient in the suite. Error measure: |a - n| / max(|a|, |n|, 1e-3).
// Above 1e-3 gradient magnitude this is the plain relative error (checked
// against the 1e-4 bound); below it degrades to a 1e-7 absolute bound, which
// keeps legitimately-zero gradients from dividing by noise.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "aim/rng.hpp"
#include "aim/tensor.hpp"

namespace aimtest {

inline double grad_rel_err(double analytic, double numeric) {
    double denom = std::max(std::max(std::fabs(analytic), std::fabs(numeric)), 1e-3);
    return std::fabs(analytic - numeric) / denom;
}

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::size_t worst_index = 0;
    std::size_t n_checked = 0;
};

// f: flat parameter vector -> scalar. analytic: implementation gradient.
inline GradCheckResult finite_difference_check(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0,
    const std::vector<double>& analytic,
    double step = 1e-5) {
    GradCheckResult r;
    std::vector<double> x = x0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        x[i] = x0[i] + step;
        double up = f(x);
        x[i] = x0[i] - step;
        double down = f(x);
        x[i] = x0[i];
        double numeric = (up - down) / (2.0 * step);
        double e = grad_rel_err(analytic[i], numeric);
        if (e > r.max_rel_err) {
            r.max_rel_err = e;
            r.worst_index = i;
        }
        ++r.n_checked;
    }
    return r;
}

// Convenience runner for checking one tensor expression: `build` assembles a
// scalar loss from taped copies of `inputs` on the given tape.
using BuildFn = std::function<aim::Tensor(aim::Tape&, std::vector<aim::Tensor>&)>;

inline GradCheckResult check_expression_gradient(const std::vector<aim::Tensor>& inputs,
                                                 const BuildFn& build,
                                                 double step = 1e-5) {
    std::vector<double> flat;
    for (const aim::Tensor& t : inputs) {
        flat.insert(flat.end(), t.values.begin(), t.values.end());
    }

    auto rebuild = [&](const std::vector<double>& x) {
        std::vector<aim::Tensor> out;
        std::size_t off = 0;
        for (const aim::Tensor& t : inputs) {
            std::vector<double> v(x.begin() + long(off), x.begin() + long(off + t.numel()));
            out.push_back(aim::Tensor(t.shape, std::move(v)));
            off += t.numel();
        }
        return out;
    };

    // analytic pass
    aim::Tape tape;
    std::vector<aim::Tensor> taped;
    {
        std::vector<aim::Tensor> vals = rebuild(flat);
        for (const aim::Tensor& t : vals) taped.push_back(tape.leaf(t));
    }
    aim::Tensor loss = build(tape, taped);
    aim::Gradients g = tape.backward(loss);
    std::vector<double> analytic;
    for (const aim::Tensor& t : taped) {
        aim::Tensor gt = g.at(t);
        analytic.insert(analytic.end(), gt.values.begin(), gt.values.end());
    }

    auto f = [&](const std::vector<double>& x) {
        aim::Tape t2;
        std::vector<aim::Tensor> vals = rebuild(x);
        std::vector<aim::Tensor> tp;
        for (const aim::Tensor& t : vals) tp.push_back(t2.leaf(t));
        return build(t2, tp).item();
    };
    return finite_difference_check(f, flat, analytic, step);
}

inline aim::Tensor random_tensor(aim::Rng& rng, aim::Shape shape, double lo = -2.0, double hi = 2.0) {
    std::size_t n = aim::shape_numel(shape);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return aim::Tensor(std::move(shape), std::move(v));
}

} // namespace aimtest
