#include "wincast/series.hpp"

#include <cmath>

#include "wincast/error.hpp"

namespace wincast {

LogSeries log_transform(const CountrySeries& series) {
    LogSeries ls;
    ls.country = series.country;
    ls.values.reserve(series.size());
    for (const Count c : series.counts) {
        if (c < 1) throw Error(ErrorCode::InvalidArgument, "log transform needs counts >= 1");
        ls.values.push_back(std::log(static_cast<double>(c)));
    }
    return ls;
}

std::span<const double> window_at(const LogSeries& ls, std::size_t end_index, std::size_t w) {
    if (w == 0 || end_index + 1 < w || end_index >= ls.size()) {
        throw Error(ErrorCode::WindowOutOfRange, "window of " + std::to_string(w) + " days ending at index " +
                                                     std::to_string(end_index) + " does not fit a series of " +
                                                     std::to_string(ls.size()) + " days");
    }
    return std::span<const double>(ls.values).subspan(end_index + 1 - w, w);
}

SupervisedSet build_supervised(const LogSeries& ls, std::size_t w, std::size_t tau) {
    return build_supervised(ls, w, tau, ls.size() == 0 ? 0 : ls.size() - 1);
}

SupervisedSet build_supervised(const LogSeries& ls, std::size_t w, std::size_t tau, std::size_t last_index) {
    if (w == 0 || tau == 0) throw Error(ErrorCode::InvalidArgument, "window size and horizon must be >= 1");
    SupervisedSet set;
    set.w = w;
    set.tau = tau;
    if (ls.size() == 0) return set;
    const std::size_t n = std::min(last_index + 1, ls.size());
    const std::size_t count = supervised_count(n, w, tau);
    set.inputs.reserve(count * w);
    set.targets.reserve(count);
    set.end_indices.reserve(count);
    for (std::size_t m = w - 1; m + tau < n; ++m) {
        const auto x = window_at(ls, m, w);
        set.inputs.insert(set.inputs.end(), x.begin(), x.end());
        set.targets.push_back(ls.values[m + tau]);
        set.end_indices.push_back(m);
    }
    return set;
}

}  // namespace wincast
