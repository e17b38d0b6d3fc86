#include "wincast/kernels.hpp"

#include <algorithm>

namespace wincast::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void relu_affine(const double* w, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t i = 0; i < rows; ++i) out[i] = std::max(0.0, dot(w + i * cols, x, cols));
}

double sq_dist(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

}  // namespace

const KernelSet& scalar_kernels() noexcept {
    static const KernelSet set{"scalar", &dot, &axpy, &relu_affine, &sq_dist};
    return set;
}

}  // namespace wincast::kernels
