#pragma once

#include <cstddef>
#include <string_view>

namespace wincast::kernels {

/// Table of the arithmetic inner loops used by the solver and the ELM
/// feature map. The scalar set is the reference; vector sets must agree
/// with it to rounding (see tests/unit/test_kernels.cpp).
struct KernelSet {
    std::string_view name;

    /// sum_k a[k] * b[k]
    double (*dot)(const double* a, const double* b, std::size_t n);

    /// y[k] += alpha * x[k]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    /// out[i] = max(0, sum_k w[i*cols + k] * x[k]) for i < rows
    void (*relu_affine)(const double* w, std::size_t rows, std::size_t cols, const double* x,
                        double* out);

    /// sum_k (a[k] - b[k])^2
    double (*sq_dist)(const double* a, const double* b, std::size_t n);
};

const KernelSet& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks
/// AVX2+FMA.
const KernelSet* avx2_kernels() noexcept;

/// The process-wide kernel set. Chosen once on first use: AVX2 when
/// available, else scalar. WINCAST_KERNELS=scalar|avx2 overrides.
const KernelSet& active() noexcept;

}  // namespace wincast::kernels
