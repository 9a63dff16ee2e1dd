#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "aim/rng.hpp"
#include "aim/tensor.hpp"

namespace aim::nn {

enum class Activation { identity, relu, sigmoid };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& s);

struct Layer {
    Tensor weight;  // [out, in]
    Tensor bias;    // [out]
    Activation act = Activation::identity;
};

struct FeedForwardParams {
    std::vector<Layer> layers;

    std::size_t input_dim() const { return layers.front().weight.shape[1]; }
    std::size_t output_dim() const { return layers.back().weight.shape[0]; }
    bool empty() const { return layers.empty(); }

    void visit(const std::string& prefix, const std::function<void(const std::string&, Tensor&)>& fn);
};

// Gate convention: update z, reset r, candidate hc, h' = (1-z)*h + z*hc.
// Weight matrices are [hidden, input] for w_* and [hidden, hidden] for u_*.
struct GruParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Tensor wz, uz, bz;
    Tensor wr, ur, br;
    Tensor wh, uh, bh;

    void visit(const std::string& prefix, const std::function<void(const std::string&, Tensor&)>& fn);
};

// Parameter init is uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per matrix,
// biases included.
FeedForwardParams make_feedforward(const std::vector<std::size_t>& dims,
                                   const std::vector<Activation>& acts, Rng& rng);
GruParams make_gru(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

Tensor feedforward(const FeedForwardParams& params, const Tensor& input);

// One hidden state per input position; the initial hidden state is zero.
std::vector<Tensor> gru_encode(const GruParams& params, const std::vector<Tensor>& inputs);

// Softmax of vulnerability scores.
Tensor attention_weights(const Tensor& scores);

} // namespace aim::nn
