#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "aim/error.hpp"

namespace aim {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& s);
std::string shape_str(const Shape& s);

class Tape;

// Dense row-major array of doubles, rank 1 or 2. A Tensor is either detached
// (immutable value, safe to share across threads) or linked to a node on a
// Tape, in which case ops consuming it are recorded for backward().
// Scalars are shape {1}.
struct Tensor {
    Shape shape;
    std::vector<double> values;
    Tape* tape = nullptr;
    int node = -1;

    Tensor() = default;
    Tensor(Shape s, std::vector<double> v);

    static Tensor scalar(double x);
    static Tensor vector(std::vector<double> v);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> v);
    static Tensor zeros(Shape s);
    static Tensor full(Shape s, double x);

    bool taped() const { return tape != nullptr && node >= 0; }
    std::size_t numel() const { return values.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t rows() const { return shape.at(0); }
    std::size_t cols() const { return shape.at(1); }

    double item() const;                              // scalar value; ShapeError if numel != 1
    double operator()(std::size_t i) const { return values[i]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * shape[1] + j]; }

    Tensor detached() const;                          // value copy with no tape link
};

enum class OpKind {
    leaf, matmul, add, mul, sub, concat, stack, dot,
    sigmoid, tanh, relu, exp, log, softmax, max_axis, sum_axis, scale, clamp,
};

const char* op_name(OpKind k);

struct Node {
    OpKind op = OpKind::leaf;
    std::vector<int> inputs;
    Shape shape;
    std::vector<double> value;           // saved forward value
    int axis = -1;                       // softmax / max_axis / sum_axis
    double c0 = 0.0, c1 = 0.0;           // scale factor or clamp bounds
    std::vector<std::size_t> arg;        // argmax positions (max_axis)
};

class Gradients {
public:
    // Gradient of the loss w.r.t. a taped tensor; zero tensor if untouched.
    Tensor at(const Tensor& t) const;
    const std::vector<double>& raw(int node_id) const { return grads_.at(std::size_t(node_id)); }

private:
    friend class Tape;
    const Tape* tape_ = nullptr;
    std::vector<std::vector<double>> grads_;
};

// Ordered record of primitive ops. Nodes are appended in execution order, so
// every input id precedes its consumer. Single-threaded by construction.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Register a value as a differentiable leaf.
    Tensor leaf(const Tensor& value);
    Tensor leaf(Shape shape, std::vector<double> values);

    std::size_t size() const { return nodes_.size(); }
    const Node& node(int id) const { return nodes_.at(std::size_t(id)); }

    // Reverse sweep from a taped scalar. Every node gets a gradient buffer;
    // leaves never touched by the loss come back zero.
    Gradients backward(const Tensor& loss) const;

    // Recompute every non-leaf node from the recorded leaves. Returns true if
    // the replayed values match the saved ones bit-for-bit.
    bool replay_matches() const;

    int record(Node n);
    // Node id for an operand: its own node if taped here, else a fresh
    // constant leaf. A tensor taped on a *different* tape is a TapeError.
    int operand(const Tensor& t);

private:
    std::vector<Node> nodes_;
    static std::vector<double> eval(const Node& n, const std::vector<Node>& nodes);
    friend class Gradients;
};

// ---- primitive ops -------------------------------------------------------
// Each returns the forward value; the result is taped iff any input is taped.

Tensor matmul(const Tensor& a, const Tensor& b);    // [m,k]x[k,n]; 1-D operands act as row/column
Tensor add(const Tensor& a, const Tensor& b);       // same shape, or [m,n] + [n] bias row
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);       // elementwise
Tensor concat(const std::vector<Tensor>& parts);    // 1-D concat
Tensor stack_rows(const std::vector<Tensor>& rows); // n vectors [d] -> [n,d]
Tensor dot(const Tensor& a, const Tensor& b);       // inner product -> scalar
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor exp(const Tensor& x);
Tensor log(const Tensor& x);                        // DomainError on x <= 0
Tensor softmax(const Tensor& x);                    // 1-D, max-subtracted
Tensor max_over_axis(const Tensor& x, int axis);    // ties -> lowest index
Tensor sum_over_axis(const Tensor& x, int axis);
Tensor scale(const Tensor& x, double c);
Tensor clamp(const Tensor& x, double lo, double hi);

} // namespace aim
