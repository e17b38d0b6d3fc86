#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wincast/ingest.hpp"
#include "wincast/linalg.hpp"
#include "wincast/series.hpp"

namespace wincast::test {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(r, c);
    for (double& v : m.values()) v = u(rng);
    return m;
}

// Smooth logistic-like growth with multiplicative noise, rounded to counts
// and kept monotone.
inline CountrySeries growth_series(std::mt19937_64& rng, std::size_t n, std::string name = "Testland") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.02);
    const double cap = std::exp(8.0 + 4.0 * u(rng));
    const double rate = 0.08 + 0.15 * u(rng);
    const double mid = static_cast<double>(n) * (0.3 + 0.4 * u(rng));
    CountrySeries s;
    s.country = std::move(name);
    s.start_date = Date{std::chrono::year{2020}, std::chrono::month{2}, std::chrono::day{1}};
    Count prev = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = cap / (1.0 + std::exp(-rate * (static_cast<double>(i) - mid)));
        const auto v = std::max(prev, static_cast<Count>(std::llround(std::max(1.0, x * std::exp(noise(rng))))));
        s.counts.push_back(v);
        s.raw_counts.push_back(v);
        prev = v;
    }
    return s;
}

inline CountrySeries series_from(const std::vector<Count>& counts, std::string name = "Testland") {
    CountrySeries s;
    s.country = std::move(name);
    s.start_date = Date{std::chrono::year{2020}, std::chrono::month{3}, std::chrono::day{1}};
    s.counts = counts;
    s.raw_counts = counts;
    return s;
}

}  // namespace wincast::test
