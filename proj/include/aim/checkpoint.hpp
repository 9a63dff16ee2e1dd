#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aim/tensor.hpp"

namespace aim {

// Versioned text checkpoint: parameter name -> shape -> values. Values are
// written as C hexfloats, so a save/load round trip is bit-exact.
struct Checkpoint {
    std::vector<std::pair<std::string, Tensor>> entries;

    void add(const std::string& name, const Tensor& t);
    const Tensor* find(const std::string& name) const;
    const Tensor& require(const std::string& name) const;  // DataError if missing
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace aim
