#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wincast/ingest.hpp"

namespace wincast {

/// Natural-log cumulative counts. Model fitting and prediction all happen
/// on these values; counts come back through exp() only when reported.
struct LogSeries {
    std::string country;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

LogSeries log_transform(const CountrySeries& series);

/// [v[end-w+1], ..., v[end]]; throws WindowOutOfRange when end < w-1 or
/// end >= size().
std::span<const double> window_at(const LogSeries& ls, std::size_t end_index, std::size_t w);

/// Pairs (window ending at m) -> value at m + tau, for m = w-1 .. N-1-tau.
struct SupervisedSet {
    std::size_t w = 0;
    std::size_t tau = 0;
    std::vector<double> inputs;   ///< count × w, row-major
    std::vector<double> targets;  ///< count
    std::vector<std::size_t> end_indices;

    [[nodiscard]] std::size_t count() const noexcept { return targets.size(); }
    [[nodiscard]] std::span<const double> input(std::size_t i) const noexcept {
        return {inputs.data() + i * w, w};
    }
};

/// Empty when N < w + tau.
SupervisedSet build_supervised(const LogSeries& ls, std::size_t w, std::size_t tau);

/// Same pairs restricted to those whose target index is <= last_index, so
/// nothing after last_index is read.
SupervisedSet build_supervised(const LogSeries& ls, std::size_t w, std::size_t tau, std::size_t last_index);

/// Number of pairs build_supervised would produce.
constexpr std::size_t supervised_count(std::size_t n, std::size_t w, std::size_t tau) noexcept {
    return n >= w + tau ? n - w - tau + 1 : 0;
}

}  // namespace wincast
