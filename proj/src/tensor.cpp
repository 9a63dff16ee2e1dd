#include "aim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aim/kernels.hpp"

namespace aim {

std::size_t shape_numel(const Shape& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return s.empty() ? 0 : n;
}

std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "]";
    return os.str();
}

Tensor::Tensor(Shape s, std::vector<double> v) : shape(std::move(s)), values(std::move(v)) {
    if (shape.empty() || shape.size() > 2) {
        throw ShapeError("tensor rank must be 1 or 2, got " + shape_str(shape));
    }
    if (shape_numel(shape) != values.size()) {
        throw ShapeError("shape " + shape_str(shape) + " does not match " +
                         std::to_string(values.size()) + " values");
    }
    for (double x : values) {
        if (!std::isfinite(x)) throw DomainError("non-finite value in tensor");
    }
}

Tensor Tensor::scalar(double x) { return Tensor({1}, {x}); }
Tensor Tensor::vector(std::vector<double> v) {
    Shape s{v.size()};
    return Tensor(std::move(s), std::move(v));
}
Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> v) {
    return Tensor({rows, cols}, std::move(v));
}
Tensor Tensor::zeros(Shape s) { return full(std::move(s), 0.0); }
Tensor Tensor::full(Shape s, double x) {
    std::size_t n = shape_numel(s);
    return Tensor(std::move(s), std::vector<double>(n, x));
}

double Tensor::item() const {
    if (numel() != 1) throw ShapeError("item() on tensor with " + std::to_string(numel()) + " values");
    return values[0];
}

Tensor Tensor::detached() const {
    Tensor t;
    t.shape = shape;
    t.values = values;
    return t;
}

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::leaf: return "leaf";
        case OpKind::matmul: return "matmul";
        case OpKind::add: return "add";
        case OpKind::mul: return "mul";
        case OpKind::sub: return "sub";
        case OpKind::concat: return "concat";
        case OpKind::stack: return "stack";
        case OpKind::dot: return "inner-product";
        case OpKind::sigmoid: return "sigmoid";
        case OpKind::tanh: return "tanh";
        case OpKind::relu: return "relu";
        case OpKind::exp: return "exp";
        case OpKind::log: return "log";
        case OpKind::softmax: return "softmax-over-axis";
        case OpKind::max_axis: return "max-over-axis";
        case OpKind::sum_axis: return "sum-over-axis";
        case OpKind::scale: return "scalar-scale";
        case OpKind::clamp: return "clamp";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// forward computation, shared between op entry points and tape replay
// ---------------------------------------------------------------------------

namespace {

struct RawIn {
    const double* p;
    const Shape* s;
};

// Dims of a matmul: 1-D left operand acts as a row vector, 1-D right operand
// as a column vector.
struct MmDims {
    std::size_t m, k, n;
    Shape out;
};

MmDims mm_dims(const Shape& a, const Shape& b) {
    if (a.size() == 1 && b.size() == 1) {
        throw ShapeError("matmul of two vectors; use inner product");
    }
    std::size_t m = a.size() == 2 ? a[0] : 1;
    std::size_t ka = a.size() == 2 ? a[1] : a[0];
    std::size_t kb = b[0];
    std::size_t n = b.size() == 2 ? b[1] : 1;
    if (ka != kb) {
        throw ShapeError("matmul inner dims " + shape_str(a) + " x " + shape_str(b));
    }
    Shape out;
    if (a.size() == 2 && b.size() == 2) out = {m, n};
    else if (a.size() == 1) out = {n};
    else out = {m};
    return {m, ka, n, out};
}

std::vector<double> transpose(const double* a, std::size_t m, std::size_t n) {
    std::vector<double> t(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) t[j * m + i] = a[i * n + j];
    return t;
}

std::vector<double> compute(OpKind op, const std::vector<RawIn>& in, const Shape& out_shape,
                            int axis, double c0, double c1, std::vector<std::size_t>* arg_out) {
    const std::size_t out_n = shape_numel(out_shape);
    std::vector<double> out(out_n, 0.0);
    switch (op) {
        case OpKind::leaf:
            throw TapeError("leaf nodes are not computed");
        case OpKind::matmul: {
            MmDims d = mm_dims(*in[0].s, *in[1].s);
            kernels::matmul(in[0].p, in[1].p, out.data(), d.m, d.k, d.n);
            break;
        }
        case OpKind::add: {
            const Shape& sa = *in[0].s;
            const Shape& sb = *in[1].s;
            if (sa == sb) {
                kernels::zip(kernels::Binary::add, in[0].p, in[1].p, out.data(), out_n);
            } else {
                // bias row broadcast: [m,n] + [n]
                std::size_t m = sa[0], n = sa[1];
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = in[0].p[i * n + j] + in[1].p[j];
            }
            break;
        }
        case OpKind::sub:
            kernels::zip(kernels::Binary::sub, in[0].p, in[1].p, out.data(), out_n);
            break;
        case OpKind::mul:
            kernels::zip(kernels::Binary::mul, in[0].p, in[1].p, out.data(), out_n);
            break;
        case OpKind::concat: {
            std::size_t off = 0;
            for (const RawIn& r : in) {
                std::size_t len = shape_numel(*r.s);
                std::copy(r.p, r.p + len, out.begin() + long(off));
                off += len;
            }
            break;
        }
        case OpKind::stack: {
            std::size_t d = (*in[0].s)[0];
            for (std::size_t i = 0; i < in.size(); ++i) {
                std::copy(in[i].p, in[i].p + d, out.begin() + long(i * d));
            }
            break;
        }
        case OpKind::dot: {
            std::size_t k = (*in[0].s)[0];
            double acc = 0.0;
            for (std::size_t i = 0; i < k; ++i) acc += in[0].p[i] * in[1].p[i];
            out[0] = acc;
            break;
        }
        case OpKind::sigmoid:
            for (std::size_t i = 0; i < out_n; ++i) out[i] = 1.0 / (1.0 + std::exp(-in[0].p[i]));
            break;
        case OpKind::tanh:
            for (std::size_t i = 0; i < out_n; ++i) out[i] = std::tanh(in[0].p[i]);
            break;
        case OpKind::relu:
            for (std::size_t i = 0; i < out_n; ++i) out[i] = in[0].p[i] > 0.0 ? in[0].p[i] : 0.0;
            break;
        case OpKind::exp:
            for (std::size_t i = 0; i < out_n; ++i) out[i] = std::exp(in[0].p[i]);
            break;
        case OpKind::log:
            for (std::size_t i = 0; i < out_n; ++i) {
                if (in[0].p[i] <= 0.0) throw DomainError("log of non-positive value");
                out[i] = std::log(in[0].p[i]);
            }
            break;
        case OpKind::softmax: {
            // max-subtracted for overflow safety
            double mx = in[0].p[0];
            for (std::size_t i = 1; i < out_n; ++i) mx = std::max(mx, in[0].p[i]);
            double z = 0.0;
            for (std::size_t i = 0; i < out_n; ++i) {
                out[i] = std::exp(in[0].p[i] - mx);
                z += out[i];
            }
            for (std::size_t i = 0; i < out_n; ++i) out[i] /= z;
            break;
        }
        case OpKind::max_axis: {
            const Shape& s = *in[0].s;
            std::vector<std::size_t> arg(out_n, 0);
            if (s.size() == 1) {
                double best = in[0].p[0];
                std::size_t bi = 0;
                for (std::size_t i = 1; i < s[0]; ++i) {
                    if (in[0].p[i] > best) { best = in[0].p[i]; bi = i; }
                }
                out[0] = best;
                arg[0] = bi;
            } else if (axis == 0) {
                std::size_t m = s[0], n = s[1];
                for (std::size_t j = 0; j < n; ++j) {
                    double best = in[0].p[j];
                    std::size_t bi = 0;
                    for (std::size_t i = 1; i < m; ++i) {
                        if (in[0].p[i * n + j] > best) { best = in[0].p[i * n + j]; bi = i; }
                    }
                    out[j] = best;
                    arg[j] = bi;
                }
            } else {
                std::size_t m = s[0], n = s[1];
                for (std::size_t i = 0; i < m; ++i) {
                    double best = in[0].p[i * n];
                    std::size_t bj = 0;
                    for (std::size_t j = 1; j < n; ++j) {
                        if (in[0].p[i * n + j] > best) { best = in[0].p[i * n + j]; bj = j; }
                    }
                    out[i] = best;
                    arg[i] = bj;
                }
            }
            if (arg_out) *arg_out = std::move(arg);
            break;
        }
        case OpKind::sum_axis: {
            const Shape& s = *in[0].s;
            if (s.size() == 1) {
                double acc = 0.0;
                for (std::size_t i = 0; i < s[0]; ++i) acc += in[0].p[i];
                out[0] = acc;
            } else if (axis == 0) {
                kernels::colsum(in[0].p, out.data(), s[0], s[1]);
            } else {
                std::size_t m = s[0], n = s[1];
                for (std::size_t i = 0; i < m; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j) acc += in[0].p[i * n + j];
                    out[i] = acc;
                }
            }
            break;
        }
        case OpKind::scale:
            for (std::size_t i = 0; i < out_n; ++i) out[i] = c0 * in[0].p[i];
            break;
        case OpKind::clamp:
            for (std::size_t i = 0; i < out_n; ++i) out[i] = std::min(c1, std::max(c0, in[0].p[i]));
            break;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// tape
// ---------------------------------------------------------------------------

int Tape::record(Node n) {
    nodes_.push_back(std::move(n));
    return int(nodes_.size()) - 1;
}

int Tape::operand(const Tensor& t) {
    if (t.taped()) {
        if (t.tape != this) throw TapeError("tensor belongs to a different tape");
        return t.node;
    }
    Node n;
    n.op = OpKind::leaf;
    n.shape = t.shape;
    n.value = t.values;
    return record(std::move(n));
}

Tensor Tape::leaf(const Tensor& value) {
    Tensor out = value.detached();
    Node n;
    n.op = OpKind::leaf;
    n.shape = out.shape;
    n.value = out.values;
    out.tape = this;
    out.node = record(std::move(n));
    return out;
}

Tensor Tape::leaf(Shape shape, std::vector<double> values) {
    return leaf(Tensor(std::move(shape), std::move(values)));
}

std::vector<double> Tape::eval(const Node& n, const std::vector<Node>& nodes) {
    std::vector<RawIn> in;
    in.reserve(n.inputs.size());
    for (int id : n.inputs) {
        in.push_back({nodes[std::size_t(id)].value.data(), &nodes[std::size_t(id)].shape});
    }
    return compute(n.op, in, n.shape, n.axis, n.c0, n.c1, nullptr);
}

bool Tape::replay_matches() const {
    for (const Node& n : nodes_) {
        if (n.op == OpKind::leaf) continue;
        std::vector<double> v = eval(n, nodes_);
        if (v != n.value) return false;
    }
    return true;
}

Gradients Tape::backward(const Tensor& loss) const {
    if (!loss.taped() || loss.tape != this) throw TapeError("loss is not on this tape");
    if (loss.numel() != 1) throw ShapeError("loss must be a scalar");

    Gradients g;
    g.tape_ = this;
    g.grads_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        g.grads_[i].assign(nodes_[i].value.size(), 0.0);
    }
    g.grads_[std::size_t(loss.node)][0] = 1.0;

    for (int id = loss.node; id >= 0; --id) {
        const Node& n = nodes_[std::size_t(id)];
        if (n.op == OpKind::leaf) continue;
        const std::vector<double>& go = g.grads_[std::size_t(id)];
        bool all_zero = true;
        for (double x : go) {
            if (x != 0.0) { all_zero = false; break; }
        }
        if (all_zero) continue;

        auto gin = [&](int k) -> std::vector<double>& { return g.grads_[std::size_t(n.inputs[std::size_t(k)])]; };
        auto vin = [&](int k) -> const std::vector<double>& { return nodes_[std::size_t(n.inputs[std::size_t(k)])].value; };
        auto sin = [&](int k) -> const Shape& { return nodes_[std::size_t(n.inputs[std::size_t(k)])].shape; };

        switch (n.op) {
            case OpKind::leaf:
                break;
            case OpKind::matmul: {
                MmDims d = mm_dims(sin(0), sin(1));
                // dA = G * B^T, dB = A^T * G
                std::vector<double> bt = transpose(vin(1).data(), d.k, d.n);
                std::vector<double> da(d.m * d.k);
                kernels::matmul(go.data(), bt.data(), da.data(), d.m, d.n, d.k);
                for (std::size_t i = 0; i < da.size(); ++i) gin(0)[i] += da[i];
                std::vector<double> at = transpose(vin(0).data(), d.m, d.k);
                std::vector<double> db(d.k * d.n);
                kernels::matmul(at.data(), go.data(), db.data(), d.k, d.m, d.n);
                for (std::size_t i = 0; i < db.size(); ++i) gin(1)[i] += db[i];
                break;
            }
            case OpKind::add: {
                if (sin(0) == sin(1)) {
                    for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += go[i];
                    for (std::size_t i = 0; i < go.size(); ++i) gin(1)[i] += go[i];
                } else {
                    std::size_t m = sin(0)[0], nc = sin(0)[1];
                    for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += go[i];
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < nc; ++j) gin(1)[j] += go[i * nc + j];
                }
                break;
            }
            case OpKind::sub:
                for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += go[i];
                for (std::size_t i = 0; i < go.size(); ++i) gin(1)[i] -= go[i];
                break;
            case OpKind::mul:
                for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += go[i] * vin(1)[i];
                for (std::size_t i = 0; i < go.size(); ++i) gin(1)[i] += go[i] * vin(0)[i];
                break;
            case OpKind::concat: {
                std::size_t off = 0;
                for (std::size_t k = 0; k < n.inputs.size(); ++k) {
                    std::size_t len = vin(int(k)).size();
                    for (std::size_t i = 0; i < len; ++i) gin(int(k))[i] += go[off + i];
                    off += len;
                }
                break;
            }
            case OpKind::stack: {
                std::size_t d = sin(0)[0];
                for (std::size_t k = 0; k < n.inputs.size(); ++k) {
                    for (std::size_t i = 0; i < d; ++i) gin(int(k))[i] += go[k * d + i];
                }
                break;
            }
            case OpKind::dot:
                for (std::size_t i = 0; i < vin(0).size(); ++i) {
                    gin(0)[i] += go[0] * vin(1)[i];
                    gin(1)[i] += go[0] * vin(0)[i];
                }
                break;
            case OpKind::sigmoid:
                for (std::size_t i = 0; i < go.size(); ++i) {
                    gin(0)[i] += go[i] * n.value[i] * (1.0 - n.value[i]);
                }
                break;
            case OpKind::tanh:
                for (std::size_t i = 0; i < go.size(); ++i) {
                    gin(0)[i] += go[i] * (1.0 - n.value[i] * n.value[i]);
                }
                break;
            case OpKind::relu:
                for (std::size_t i = 0; i < go.size(); ++i) {
                    if (vin(0)[i] > 0.0) gin(0)[i] += go[i];
                }
                break;
            case OpKind::exp:
                for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += go[i] * n.value[i];
                break;
            case OpKind::log:
                for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += go[i] / vin(0)[i];
                break;
            case OpKind::softmax: {
                double s = 0.0;
                for (std::size_t i = 0; i < go.size(); ++i) s += go[i] * n.value[i];
                for (std::size_t i = 0; i < go.size(); ++i) {
                    gin(0)[i] += n.value[i] * (go[i] - s);
                }
                break;
            }
            case OpKind::max_axis: {
                const Shape& s = sin(0);
                if (s.size() == 1) {
                    gin(0)[n.arg[0]] += go[0];
                } else if (n.axis == 0) {
                    std::size_t nc = s[1];
                    for (std::size_t j = 0; j < nc; ++j) gin(0)[n.arg[j] * nc + j] += go[j];
                } else {
                    std::size_t nc = s[1];
                    for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i * nc + n.arg[i]] += go[i];
                }
                break;
            }
            case OpKind::sum_axis: {
                const Shape& s = sin(0);
                if (s.size() == 1) {
                    for (std::size_t i = 0; i < s[0]; ++i) gin(0)[i] += go[0];
                } else if (n.axis == 0) {
                    std::size_t m = s[0], nc = s[1];
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < nc; ++j) gin(0)[i * nc + j] += go[j];
                } else {
                    std::size_t m = s[0], nc = s[1];
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < nc; ++j) gin(0)[i * nc + j] += go[i];
                }
                break;
            }
            case OpKind::scale:
                for (std::size_t i = 0; i < go.size(); ++i) gin(0)[i] += n.c0 * go[i];
                break;
            case OpKind::clamp:
                for (std::size_t i = 0; i < go.size(); ++i) {
                    if (vin(0)[i] > n.c0 && vin(0)[i] < n.c1) gin(0)[i] += go[i];
                }
                break;
        }
    }
    return g;
}

Tensor Gradients::at(const Tensor& t) const {
    if (!t.taped() || t.tape != tape_) throw TapeError("gradient lookup for tensor not on this tape");
    const std::vector<double>& g = grads_.at(std::size_t(t.node));
    Tensor out;
    out.shape = t.shape;
    out.values = g;
    return out;
}

// ---------------------------------------------------------------------------
// op entry points
// ---------------------------------------------------------------------------

namespace {

Tensor run_op(OpKind op, std::vector<const Tensor*> ins, Shape out_shape,
              int axis = -1, double c0 = 0.0, double c1 = 0.0) {
    Tape* tape = nullptr;
    for (const Tensor* t : ins) {
        if (!t->taped()) continue;
        if (tape == nullptr) tape = t->tape;
        else if (tape != t->tape) throw TapeError("operands live on different tapes");
    }
    std::vector<RawIn> raw;
    raw.reserve(ins.size());
    for (const Tensor* t : ins) raw.push_back({t->values.data(), &t->shape});
    std::vector<std::size_t> arg;
    std::vector<double> v = compute(op, raw, out_shape, axis, c0, c1, &arg);

    Tensor out;
    out.shape = std::move(out_shape);
    out.values = v;
    if (tape != nullptr) {
        Node n;
        n.op = op;
        n.shape = out.shape;
        n.value = std::move(v);
        n.axis = axis;
        n.c0 = c0;
        n.c1 = c1;
        n.arg = std::move(arg);
        n.inputs.reserve(ins.size());
        for (const Tensor* t : ins) n.inputs.push_back(tape->operand(*t));
        out.tape = tape;
        out.node = tape->record(std::move(n));
    }
    return out;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (a.shape != b.shape) {
        throw ShapeError(std::string(what) + ": " + shape_str(a.shape) + " vs " + shape_str(b.shape));
    }
}

} // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    MmDims d = mm_dims(a.shape, b.shape);
    return run_op(OpKind::matmul, {&a, &b}, d.out);
}

Tensor add(const Tensor& a, const Tensor& b) {
    if (a.shape == b.shape) return run_op(OpKind::add, {&a, &b}, a.shape);
    if (a.rank() == 2 && b.rank() == 1 && a.shape[1] == b.shape[0]) {
        return run_op(OpKind::add, {&a, &b}, a.shape);
    }
    throw ShapeError("add: " + shape_str(a.shape) + " vs " + shape_str(b.shape));
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    return run_op(OpKind::sub, {&a, &b}, a.shape);
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mul");
    return run_op(OpKind::mul, {&a, &b}, a.shape);
}

Tensor concat(const std::vector<Tensor>& parts) {
    if (parts.empty()) throw EmptyInputError("concat of zero tensors");
    std::size_t total = 0;
    std::vector<const Tensor*> ins;
    for (const Tensor& t : parts) {
        if (t.rank() != 1) throw ShapeError("concat expects vectors, got " + shape_str(t.shape));
        total += t.numel();
        ins.push_back(&t);
    }
    return run_op(OpKind::concat, std::move(ins), Shape{total});
}

Tensor stack_rows(const std::vector<Tensor>& rows) {
    if (rows.empty()) throw EmptyInputError("stack of zero rows");
    std::size_t d = rows[0].numel();
    std::vector<const Tensor*> ins;
    for (const Tensor& t : rows) {
        if (t.rank() != 1 || t.numel() != d) {
            throw ShapeError("stack rows must be equal-length vectors");
        }
        ins.push_back(&t);
    }
    return run_op(OpKind::stack, std::move(ins), Shape{rows.size(), d});
}

Tensor dot(const Tensor& a, const Tensor& b) {
    if (a.rank() != 1 || b.rank() != 1 || a.numel() != b.numel()) {
        throw ShapeError("inner product: " + shape_str(a.shape) + " vs " + shape_str(b.shape));
    }
    if (a.numel() == 0) throw EmptyInputError("inner product of empty vectors");
    return run_op(OpKind::dot, {&a, &b}, Shape{1});
}

Tensor sigmoid(const Tensor& x) { return run_op(OpKind::sigmoid, {&x}, x.shape); }
Tensor tanh(const Tensor& x) { return run_op(OpKind::tanh, {&x}, x.shape); }
Tensor relu(const Tensor& x) { return run_op(OpKind::relu, {&x}, x.shape); }
Tensor exp(const Tensor& x) { return run_op(OpKind::exp, {&x}, x.shape); }
Tensor log(const Tensor& x) { return run_op(OpKind::log, {&x}, x.shape); }

Tensor softmax(const Tensor& x) {
    if (x.rank() != 1) throw ShapeError("softmax expects a vector");
    if (x.numel() == 0) throw EmptyInputError("softmax of empty vector");
    return run_op(OpKind::softmax, {&x}, x.shape, 0);
}

Tensor max_over_axis(const Tensor& x, int axis) {
    Shape out;
    if (x.rank() == 1) {
        if (axis != 0) throw ShapeError("axis out of range for vector");
        if (x.numel() == 0) throw EmptyInputError("max over empty vector");
        out = {1};
    } else {
        if (axis != 0 && axis != 1) throw ShapeError("axis out of range for matrix");
        out = {axis == 0 ? x.shape[1] : x.shape[0]};
    }
    return run_op(OpKind::max_axis, {&x}, std::move(out), axis);
}

Tensor sum_over_axis(const Tensor& x, int axis) {
    Shape out;
    if (x.rank() == 1) {
        if (axis != 0) throw ShapeError("axis out of range for vector");
        out = {1};
    } else {
        if (axis != 0 && axis != 1) throw ShapeError("axis out of range for matrix");
        out = {axis == 0 ? x.shape[1] : x.shape[0]};
    }
    return run_op(OpKind::sum_axis, {&x}, std::move(out), axis);
}

Tensor scale(const Tensor& x, double c) { return run_op(OpKind::scale, {&x}, x.shape, -1, c); }

Tensor clamp(const Tensor& x, double lo, double hi) {
    if (lo > hi) throw DomainError("clamp with lo > hi");
    return run_op(OpKind::clamp, {&x}, x.shape, -1, lo, hi);
}

} // namespace aim
