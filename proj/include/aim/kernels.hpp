#pragma once

#include <cstddef>

namespace aim::kernels {

// Dense kernels backing the tensor ops. Each has a serial reference
// implementation and an OpenMP variant; the unprefixed entry point picks one
// by problem size. The parallel variants split work across *independent
// output elements* only, so every element is accumulated in the same order as
// in the serial kernel and results are bit-identical.

// Work threshold (in multiply-adds or elements) below which the serial path
// is used unconditionally.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

// Process-wide switch, mainly for the benchmark and the equivalence tests.
void set_parallel_enabled(bool on);
bool parallel_enabled();

// c[m x n] = a[m x k] * b[k x n], row-major.
void matmul_serial(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n);
void matmul_omp(const double* a, const double* b, double* c,
                std::size_t m, std::size_t k, std::size_t n);
void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n);

// out[i] = a[i] op b[i]
enum class Binary { add, sub, mul };
void zip_serial(Binary op, const double* a, const double* b, double* out, std::size_t n);
void zip_omp(Binary op, const double* a, const double* b, double* out, std::size_t n);
void zip(Binary op, const double* a, const double* b, double* out, std::size_t n);

// out[j] = sum_i a[i*n + j]   (column sums of an m x n matrix)
void colsum_serial(const double* a, double* out, std::size_t m, std::size_t n);
void colsum_omp(const double* a, double* out, std::size_t m, std::size_t n);
void colsum(const double* a, double* out, std::size_t m, std::size_t n);

} // namespace aim::kernels
