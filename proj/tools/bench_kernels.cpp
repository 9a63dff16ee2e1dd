// Compares the serial reference kernels against the OpenMP variants, and
// whole-model scoring with parallelism on and off. Results are also checked
// for bit-identity while timing, since the parallel kernels only split
// independent output elements.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aim/kernels.hpp"
#include "aim/model.hpp"
#include "aim/rng.hpp"
#include "aim/training.hpp"

using namespace aim;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<double> randv(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1, 1);
    return v;
}

void bench_matmul(std::size_t n, int reps) {
    Rng rng(1, "bench");
    std::vector<double> a = randv(rng, n * n);
    std::vector<double> b = randv(rng, n * n);
    std::vector<double> cs(n * n), cp(n * n);

    Clock::time_point t0 = Clock::now();
    for (int r = 0; r < reps; ++r) kernels::matmul_serial(a.data(), b.data(), cs.data(), n, n, n);
    double serial = ms_since(t0) / reps;

    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) kernels::matmul_omp(a.data(), b.data(), cp.data(), n, n, n);
    double parallel = ms_since(t0) / reps;

    std::printf("matmul %4zux%-4zu  serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   bit-equal %s\n",
                n, n, serial, parallel, serial / parallel, cs == cp ? "yes" : "NO");
}

void bench_scoring(std::size_t n_pairs, int reps) {
    model::AimConfig cfg;
    cfg.input_dim = 64;
    cfg.hidden_dim = 128;
    Rng rng(2, "bench-score");
    model::AimParams params = model::init_params(cfg, rng);

    std::vector<train::TrainPair> pairs;
    for (std::size_t i = 0; i < n_pairs; ++i) {
        train::TrainPair p;
        p.post_id = "p";
        p.label = int(i % 2);
        for (int s = 0; s < 6; ++s) {
            p.oh_embs.push_back(Tensor::vector(randv(rng, cfg.input_dim)));
        }
        for (int s = 0; s < 4; ++s) {
            p.comment_embs.push_back(Tensor::vector(randv(rng, cfg.input_dim)));
        }
        pairs.push_back(std::move(p));
    }

    Clock::time_point t0 = Clock::now();
    std::vector<double> serial_scores;
    for (int r = 0; r < reps; ++r) serial_scores = train::score_pairs_serial(params, cfg, pairs);
    double serial = ms_since(t0) / reps;

    t0 = Clock::now();
    std::vector<double> parallel_scores;
    for (int r = 0; r < reps; ++r) parallel_scores = train::score_pairs(params, cfg, pairs);
    double parallel = ms_since(t0) / reps;

    std::printf("score %4zu pairs   serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   bit-equal %s\n",
                n_pairs, serial, parallel, serial / parallel,
                serial_scores == parallel_scores ? "yes" : "NO");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif
    kernels::set_parallel_enabled(true);

    for (std::size_t n : {64, 128, 256, 512}) bench_matmul(n, n <= 128 ? 20 : 5);
    for (std::size_t n_pairs : {16, 64, 256}) bench_scoring(n_pairs, 3);
    return 0;
}
