#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace aim {

// Every random choice in the toolkit flows from one user seed through a named
// sub-stream ("init", "shuffle", "split", "gibbs", ...), so changing how one
// stage consumes randomness never perturbs the others.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ull ^ (seed * 0x9e3779b97f4a7c15ull);
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return h;
}

// mt19937_64 plus hand-rolled draws. The standard distributions are
// implementation-defined, these are not, so outputs are stable across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    Rng(std::uint64_t seed, std::string_view stream) : gen_(substream_seed(seed, stream)) {}

    // Uniform in [0, 1), 53 bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n == 0 is invalid.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t lim = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= lim);
        return x % n;
    }

    bool coin(double p = 0.5) { return uniform() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::mt19937_64& raw() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace aim
