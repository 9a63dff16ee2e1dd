#include "aim/kernels.hpp"

#include <atomic>

namespace aim::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

void set_parallel_enabled(bool on) { g_parallel.store(on); }
bool parallel_enabled() { return g_parallel.load(); }

void matmul_serial(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) {
                acc += a[i * k + t] * b[t * n + j];
            }
            c[i * n + j] = acc;
        }
    }
}

void matmul_omp(const double* a, const double* b, double* c,
                std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(m); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) {
                acc += a[std::size_t(i) * k + t] * b[t * n + j];
            }
            c[std::size_t(i) * n + j] = acc;
        }
    }
}

void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n) {
    if (parallel_enabled() && m > 1 && m * k * n >= kParallelThreshold) {
        matmul_omp(a, b, c, m, k, n);
    } else {
        matmul_serial(a, b, c, m, k, n);
    }
}

namespace {
inline double apply(Binary op, double x, double y) {
    switch (op) {
        case Binary::add: return x + y;
        case Binary::sub: return x - y;
        case Binary::mul: return x * y;
    }
    return 0.0;
}
}

void zip_serial(Binary op, const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = apply(op, a[i], b[i]);
}

void zip_omp(Binary op, const double* a, const double* b, double* out, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        out[i] = apply(op, a[i], b[i]);
    }
}

void zip(Binary op, const double* a, const double* b, double* out, std::size_t n) {
    if (parallel_enabled() && n >= kParallelThreshold) {
        zip_omp(op, a, b, out, n);
    } else {
        zip_serial(op, a, b, out, n);
    }
}

void colsum_serial(const double* a, double* out, std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += a[i * n + j];
        out[j] = acc;
    }
}

void colsum_omp(const double* a, double* out, std::size_t m, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(n); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += a[i * n + std::size_t(j)];
        out[j] = acc;
    }
}

void colsum(const double* a, double* out, std::size_t m, std::size_t n) {
    if (parallel_enabled() && m * n >= kParallelThreshold && n > 1) {
        colsum_omp(a, out, m, n);
    } else {
        colsum_serial(a, out, m, n);
    }
}

} // namespace aim::kernels
