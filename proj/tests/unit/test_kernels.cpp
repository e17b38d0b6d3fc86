#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wincast/kernels.hpp"

using namespace wincast;

namespace {

std::vector<double> randv(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

void check_close(double a, double b, double scale) { CHECK(std::abs(a - b) <= 1e-12 * (1.0 + scale)); }

}  // namespace

TEST_CASE("scalar kernels on hand-worked inputs") {
    const auto& k = kernels::scalar_kernels();
    const double a[] = {1, 2, 3};
    const double b[] = {4, -5, 6};
    CHECK(k.dot(a, b, 3) == 12.0);
    CHECK(k.sq_dist(a, b, 3) == 9.0 + 49.0 + 9.0);
    double y[] = {1, 1, 1};
    k.axpy(2.0, a, y, 3);
    CHECK(y[2] == 7.0);
    const double w[] = {1, 1, -1, -1};
    double out[2];
    k.relu_affine(w, 2, 2, a, out);
    CHECK(out[0] == 3.0);
    CHECK(out[1] == 0.0);
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto* v = kernels::avx2_kernels();
    if (v == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this build or CPU");
        return;
    }
    const auto& s = kernels::scalar_kernels();
    std::mt19937_64 rng(7);
    for (std::size_t n = 0; n < 70; ++n) {
        const auto a = randv(rng, n);
        const auto b = randv(rng, n);
        double mag = 0.0;
        for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
        check_close(v->dot(a.data(), b.data(), n), s.dot(a.data(), b.data(), n), mag);
        check_close(v->sq_dist(a.data(), b.data(), n), s.sq_dist(a.data(), b.data(), n), mag + n);

        auto y1 = b;
        auto y2 = b;
        v->axpy(0.37, a.data(), y1.data(), n);
        s.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], 1.0);

        for (const std::size_t rows : {1, 3, 8, 17}) {
            const auto w = randv(rng, rows * n);
            std::vector<double> o1(rows), o2(rows);
            v->relu_affine(w.data(), rows, n, a.data(), o1.data());
            s.relu_affine(w.data(), rows, n, a.data(), o2.data());
            for (std::size_t i = 0; i < rows; ++i) {
                CHECK(o1[i] >= 0.0);
                check_close(o1[i], o2[i], static_cast<double>(n));
            }
        }
    }
}

TEST_CASE("active kernel set is one of the known sets") {
    const auto& k = kernels::active();
    CHECK((k.name == kernels::scalar_kernels().name ||
           (kernels::avx2_kernels() != nullptr && k.name == kernels::avx2_kernels()->name)));
}
