#include <doctest.h>

#include <cmath>
#include <vector>

#include "aim/rng.hpp"
#include "aim/tensor.hpp"
#include "grad_check.hpp"

using namespace aim;
using aimtest::check_expression_gradient;
using aimtest::random_tensor;

TEST_SUITE("tensor") {

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), ShapeError);
    CHECK_THROWS_AS(Tensor({2}, {1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(Tensor({2}, {1.0, INFINITY}), DomainError);
    Tensor t = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(t.numel() == 6);
    CHECK(t(1, 2) == 6.0);
}

TEST_CASE("matmul hand arithmetic") {
    Tensor a = Tensor::matrix(2, 2, {1, 2, 3, 4});
    Tensor b = Tensor::matrix(2, 1, {1, 1});
    Tensor c = matmul(a, b);
    CHECK(c.shape == Shape{2, 1});
    CHECK(c.values == std::vector<double>{3, 7});

    // 1-D operand conventions
    Tensor v = Tensor::vector({1, 1});
    CHECK(matmul(v, a).values == std::vector<double>{4, 6});
    CHECK(matmul(a, v).values == std::vector<double>{3, 7});
    CHECK_THROWS_AS(matmul(v, Tensor::vector({1, 2, 3})), ShapeError);
}

TEST_CASE("relu and softmax definitions") {
    CHECK(relu(Tensor::vector({-1, 0, 2})).values == std::vector<double>{0, 0, 2});
    Tensor s = softmax(Tensor::vector({0, 0, 0}));
    for (double x : s.values) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    Tensor s2 = softmax(Tensor::vector({std::log(2.0), 0.0}));
    CHECK(s2.values[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(s2.values[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("softmax properties: range, normalization, overflow safety") {
    Rng rng(7, "softmax");
    for (int it = 0; it < 50; ++it) {
        std::size_t n = 1 + rng.below(8);
        Tensor x = random_tensor(rng, {n}, -700, 700);
        Tensor y = softmax(x);
        double sum = 0;
        for (double v : y.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("errors: log domain, shape mismatch") {
    CHECK_THROWS_AS(log(Tensor::vector({1.0, 0.0})), DomainError);
    CHECK_THROWS_AS(log(Tensor::vector({-1.0})), DomainError);
    CHECK_THROWS_AS(add(Tensor::vector({1, 2}), Tensor::vector({1, 2, 3})), ShapeError);
    CHECK_THROWS_AS(mul(Tensor::vector({1, 2}), Tensor::matrix(1, 2, {1, 2})), ShapeError);
}

TEST_CASE("backward basics") {
    // f(x) = x.x at x=3 -> grad 6
    Tape tape;
    Tensor x = tape.leaf(Tensor::vector({3.0}));
    Tensor y = tape.leaf(Tensor::vector({5.0}));
    Tensor f = dot(x, x);
    Gradients g = tape.backward(f);
    CHECK(g.at(x).values == std::vector<double>{6.0});
    // f does not depend on y -> zero gradient
    CHECK(g.at(y).values == std::vector<double>{0.0});
}

TEST_CASE("backward preconditions") {
    Tape tape;
    Tensor x = tape.leaf(Tensor::vector({1.0, 2.0}));
    Tensor y = add(x, x);
    CHECK_THROWS_AS(tape.backward(y), ShapeError);           // not scalar
    Tensor detached = Tensor::scalar(1.0);
    CHECK_THROWS_AS(tape.backward(detached), TapeError);     // not on tape
    Tape other;
    Tensor z = other.leaf(Tensor::vector({2.0, 3.0}));
    CHECK_THROWS_AS(dot(x, z), TapeError);                   // mixed tapes
}

TEST_CASE("max-over-axis ties route to lowest index and conserve gradient") {
    Tape tape;
    Tensor x = tape.leaf(Tensor::vector({1.0, 5.0, 5.0, 2.0}));
    Tensor m = max_over_axis(x, 0);
    CHECK(m.item() == 5.0);
    Gradients g = tape.backward(m);
    CHECK(g.at(x).values == std::vector<double>{0, 1, 0, 0});

    Tape t2;
    Tensor a = t2.leaf(Tensor::matrix(2, 2, {3, 1, 3, 2}));
    Tensor m2 = max_over_axis(a, 0);       // column maxima: ties in column 0
    Tensor s = sum_over_axis(m2, 0);
    Gradients g2 = t2.backward(s);
    CHECK(g2.at(a).values == std::vector<double>{1, 0, 0, 1});
    double total = 0;
    for (double v : g2.at(a).values) total += std::fabs(v);
    CHECK(total == 2.0);                   // equals upstream gradient mass
}

TEST_CASE("tape replay reproduces recorded values bit-exactly") {
    Rng rng(11, "replay");
    Tape tape;
    Tensor w = tape.leaf(random_tensor(rng, {3, 3}));
    Tensor x = tape.leaf(random_tensor(rng, {3}));
    Tensor h = aim::tanh(matmul(w, x));
    Tensor s = softmax(h);
    Tensor loss = dot(s, h);
    CHECK(tape.replay_matches());

    // two independent forward passes agree exactly
    Tape t2;
    Tensor w2 = t2.leaf(Tensor(w.shape, w.values));
    Tensor x2 = t2.leaf(Tensor(x.shape, x.values));
    Tensor loss2 = dot(softmax(aim::tanh(matmul(w2, x2))), aim::tanh(matmul(w2, x2)));
    CHECK(loss2.values == loss.values);
}

TEST_CASE("gradient of 5-op random composite matches finite differences") {
    Rng rng(23, "composite");
    for (int it = 0; it < 5; ++it) {
        std::vector<Tensor> inputs = {
            random_tensor(rng, {3, 4}),
            random_tensor(rng, {4}),
            random_tensor(rng, {3}),
        };
        auto build = [](Tape&, std::vector<Tensor>& in) {
            Tensor h = aim::tanh(matmul(in[0], in[1]));   // [3]
            Tensor m = mul(h, in[2]);
            Tensor s = softmax(m);
            return dot(s, h);
        };
        auto r = check_expression_gradient(inputs, build);
        CHECK(r.max_rel_err < 1e-4);
    }
}

TEST_CASE("every primitive passes the finite-difference oracle") {
    Rng rng(37, "per-op");

    // Reduce any op output to a scalar through a probe vector that is fixed
    // for the whole check, so the finite differences see a stable function.
    using OpFn = std::function<Tensor(std::vector<Tensor>&)>;
    auto check = [&](const std::vector<Tensor>& inputs, const OpFn& op) {
        std::vector<Tensor> plain = inputs;
        Tensor sample = op(plain);
        Rng prng(99, "probe");
        std::vector<double> pv(sample.numel());
        for (double& x : pv) x = prng.uniform(-1, 1);
        Tensor probe_t(sample.shape, pv);
        auto build = [&](Tape&, std::vector<Tensor>& in) {
            Tensor out = op(in);
            if (out.rank() == 1) return dot(out, probe_t);
            return sum_over_axis(sum_over_axis(mul(out, probe_t), 0), 0);
        };
        auto r = check_expression_gradient(inputs, build);
        CAPTURE(r.worst_index);
        CHECK(r.max_rel_err < 1e-4);
    };
    check({random_tensor(rng, {3, 4}), random_tensor(rng, {4, 2})},
          [](std::vector<Tensor>& in) { return matmul(in[0], in[1]); });
    check({random_tensor(rng, {4}), random_tensor(rng, {4, 3})},
          [](std::vector<Tensor>& in) { return matmul(in[0], in[1]); });
    check({random_tensor(rng, {3, 4}), random_tensor(rng, {4})},
          [](std::vector<Tensor>& in) { return matmul(in[0], in[1]); });
    check({random_tensor(rng, {2, 3}), random_tensor(rng, {2, 3})},
          [](std::vector<Tensor>& in) { return add(in[0], in[1]); });
    check({random_tensor(rng, {2, 3}), random_tensor(rng, {3})},
          [](std::vector<Tensor>& in) { return add(in[0], in[1]); });  // bias row
    check({random_tensor(rng, {5}), random_tensor(rng, {5})},
          [](std::vector<Tensor>& in) { return sub(in[0], in[1]); });
    check({random_tensor(rng, {5}), random_tensor(rng, {5})},
          [](std::vector<Tensor>& in) { return mul(in[0], in[1]); });
    check({random_tensor(rng, {2}), random_tensor(rng, {3})},
          [](std::vector<Tensor>& in) { return concat({in[0], in[1]}); });
    check({random_tensor(rng, {3}), random_tensor(rng, {3}), random_tensor(rng, {3})},
          [](std::vector<Tensor>& in) { return stack_rows({in[0], in[1], in[2]}); });
    check({random_tensor(rng, {4}), random_tensor(rng, {4})},
          [](std::vector<Tensor>& in) { return dot(in[0], in[1]); });
    check({random_tensor(rng, {4})},
          [](std::vector<Tensor>& in) { return sigmoid(in[0]); });
    check({random_tensor(rng, {4})},
          [](std::vector<Tensor>& in) { return aim::tanh(in[0]); });
    check({random_tensor(rng, {6})},
          [](std::vector<Tensor>& in) { return relu(in[0]); });
    check({random_tensor(rng, {4})},
          [](std::vector<Tensor>& in) { return aim::exp(in[0]); });
    check({random_tensor(rng, {4}, 0.5, 2.0)},
          [](std::vector<Tensor>& in) { return aim::log(in[0]); });
    check({random_tensor(rng, {5})},
          [](std::vector<Tensor>& in) { return softmax(in[0]); });
    check({random_tensor(rng, {3, 4})},
          [](std::vector<Tensor>& in) { return max_over_axis(in[0], 0); });
    check({random_tensor(rng, {3, 4})},
          [](std::vector<Tensor>& in) { return max_over_axis(in[0], 1); });
    check({random_tensor(rng, {5})},
          [](std::vector<Tensor>& in) { return max_over_axis(in[0], 0); });
    check({random_tensor(rng, {3, 4})},
          [](std::vector<Tensor>& in) { return sum_over_axis(in[0], 0); });
    check({random_tensor(rng, {3, 4})},
          [](std::vector<Tensor>& in) { return sum_over_axis(in[0], 1); });
    check({random_tensor(rng, {4})},
          [](std::vector<Tensor>& in) { return scale(in[0], -1.7); });
    check({random_tensor(rng, {6})},
          [](std::vector<Tensor>& in) { return clamp(in[0], -1.0, 1.0); });
}

TEST_CASE("constants entering an op stay gradient-free but get zero entries") {
    Tape tape;
    Tensor x = tape.leaf(Tensor::vector({1.0, 2.0}));
    Tensor c = Tensor::vector({3.0, 4.0});  // detached constant
    Tensor y = dot(x, c);
    Gradients g = tape.backward(y);
    CHECK(g.at(x).values == std::vector<double>{3.0, 4.0});
}

} // TEST_SUITE
