#include "aim/nn.hpp"

#include <cmath>

#include "aim/error.hpp"

namespace aim::nn {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
    }
    return "?";
}

Activation activation_from_name(const std::string& s) {
    if (s == "identity") return Activation::identity;
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    throw ConfigError("unknown activation: " + s);
}

void FeedForwardParams::visit(const std::string& prefix,
                              const std::function<void(const std::string&, Tensor&)>& fn) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        std::string base = prefix + ".layer" + std::to_string(i);
        fn(base + ".weight", layers[i].weight);
        fn(base + ".bias", layers[i].bias);
    }
}

void GruParams::visit(const std::string& prefix,
                      const std::function<void(const std::string&, Tensor&)>& fn) {
    fn(prefix + ".update.w_in", wz);
    fn(prefix + ".update.w_h", uz);
    fn(prefix + ".update.bias", bz);
    fn(prefix + ".reset.w_in", wr);
    fn(prefix + ".reset.w_h", ur);
    fn(prefix + ".reset.bias", br);
    fn(prefix + ".cand.w_in", wh);
    fn(prefix + ".cand.w_h", uh);
    fn(prefix + ".cand.bias", bh);
}

namespace {
Tensor uniform_init(Rng& rng, Shape shape, std::size_t fan_in) {
    double bound = 1.0 / std::sqrt(double(fan_in));
    std::size_t n = shape_numel(shape);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-bound, bound);
    return Tensor(std::move(shape), std::move(v));
}
}

FeedForwardParams make_feedforward(const std::vector<std::size_t>& dims,
                                   const std::vector<Activation>& acts, Rng& rng) {
    if (dims.size() < 2) throw ConfigError("feedforward needs at least input and output dims");
    if (acts.size() != dims.size() - 1) throw ConfigError("one activation per layer required");
    FeedForwardParams p;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        Layer l;
        l.weight = uniform_init(rng, {dims[i + 1], dims[i]}, dims[i]);
        l.bias = uniform_init(rng, {dims[i + 1]}, dims[i]);
        l.act = acts[i];
        p.layers.push_back(std::move(l));
    }
    return p;
}

GruParams make_gru(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
    if (input_dim == 0 || hidden_dim == 0) throw ConfigError("gru dims must be positive");
    GruParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.wz = uniform_init(rng, {hidden_dim, input_dim}, input_dim);
    p.uz = uniform_init(rng, {hidden_dim, hidden_dim}, hidden_dim);
    p.bz = uniform_init(rng, {hidden_dim}, hidden_dim);
    p.wr = uniform_init(rng, {hidden_dim, input_dim}, input_dim);
    p.ur = uniform_init(rng, {hidden_dim, hidden_dim}, hidden_dim);
    p.br = uniform_init(rng, {hidden_dim}, hidden_dim);
    p.wh = uniform_init(rng, {hidden_dim, input_dim}, input_dim);
    p.uh = uniform_init(rng, {hidden_dim, hidden_dim}, hidden_dim);
    p.bh = uniform_init(rng, {hidden_dim}, hidden_dim);
    return p;
}

namespace {
Tensor activate(const Tensor& x, Activation a) {
    switch (a) {
        case Activation::identity: return x;
        case Activation::relu: return relu(x);
        case Activation::sigmoid: return sigmoid(x);
    }
    return x;
}
}

Tensor feedforward(const FeedForwardParams& params, const Tensor& input) {
    if (params.empty()) throw ConfigError("feedforward with no layers");
    if (input.rank() != 1 || input.numel() != params.input_dim()) {
        throw ShapeError("feedforward input dim " + std::to_string(input.numel()) +
                         " != " + std::to_string(params.input_dim()));
    }
    Tensor h = input;
    for (const Layer& l : params.layers) {
        h = activate(add(matmul(l.weight, h), l.bias), l.act);
    }
    return h;
}

std::vector<Tensor> gru_encode(const GruParams& params, const std::vector<Tensor>& inputs) {
    if (inputs.empty()) throw EmptyInputError("gru_encode on empty sequence");
    for (const Tensor& x : inputs) {
        if (x.rank() != 1 || x.numel() != params.input_dim) {
            throw ShapeError("gru input dim " + std::to_string(x.numel()) +
                             " != " + std::to_string(params.input_dim));
        }
    }
    Tensor h = Tensor::zeros({params.hidden_dim});
    Tensor ones = Tensor::full({params.hidden_dim}, 1.0);
    std::vector<Tensor> states;
    states.reserve(inputs.size());
    for (const Tensor& x : inputs) {
        Tensor z = sigmoid(add(add(matmul(params.wz, x), matmul(params.uz, h)), params.bz));
        Tensor r = sigmoid(add(add(matmul(params.wr, x), matmul(params.ur, h)), params.br));
        Tensor hc = aim::tanh(add(add(matmul(params.wh, x), matmul(params.uh, mul(r, h))), params.bh));
        h = add(mul(sub(ones, z), h), mul(z, hc));
        states.push_back(h);
    }
    return states;
}

Tensor attention_weights(const Tensor& scores) {
    if (scores.numel() == 0) throw EmptyInputError("attention over zero scores");
    return softmax(scores);
}

} // namespace aim::nn
