#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wincast/ingest.hpp"
#include "wincast/linalg.hpp"
#include "wincast/series.hpp"

namespace wincast {

enum class ModelKind { Poly, Elm };

std::string_view to_string(ModelKind kind) noexcept;

struct ModelSpec {
    ModelKind kind = ModelKind::Elm;
    /// Append a constant 1 to every ELM input (W gets one extra column).
    bool elm_bias = false;
    /// Keep only the most recent training pairs; 0 keeps the full history.
    std::size_t max_train_pairs = 0;
};

/// Window size, hidden width and ridge weight. h and lambda are unused by
/// the polynomial model and stay 0 there.
struct HyperParams {
    std::size_t w = 4;
    std::size_t h = 0;
    double lambda = 0.0;

    friend auto operator<=>(const HyperParams&, const HyperParams&) = default;
    friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

inline constexpr int kPolyDegree = 3;

/// Throws InvalidArgument when hp cannot be used with `kind`.
void validate(const HyperParams& hp, ModelKind kind);

// --- polynomial ----------------------------------------------------------------

/// Least-squares cubic over a window; coefficients are in the local index
/// basis where the window occupies indices 0..w-1.
struct PolyModel {
    std::array<double, kPolyDegree + 1> coeffs{};
    std::size_t w = 0;
    std::size_t window_end = 0;
};

PolyModel fit_poly(const LogSeries& ls, std::size_t end_index, const HyperParams& hp);

/// Value of the cubic at local index w-1+tau (log domain).
double predict_poly(const PolyModel& m, std::size_t tau);

// --- ELM -------------------------------------------------------------------------

/// h×w matrix of standard normals drawn row by row from NormalStream(seed).
/// The first k rows do not depend on h.
Matrix init_elm_weights(std::uint64_t seed, std::size_t h, std::size_t w);

struct ElmModel {
    Matrix weights;  ///< h × input width (w, or w+1 with bias)
    Matrix output;   ///< 1 × h
    std::uint64_t seed = 0;
    HyperParams hp;
    bool bias = false;
};

/// Hidden features ReLU(W x) for every training input, one row per neuron
/// (h × count).
Matrix elm_features(const Matrix& weights, const SupervisedSet& train, bool bias = false);

/// Output layer by ridge regression on frozen weights.
ElmModel fit_elm(const SupervisedSet& train, Matrix weights, double lambda, bool bias = false);

/// Draws W from `seed` with hp.h rows, then fits.
ElmModel fit_elm(const SupervisedSet& train, std::uint64_t seed, const HyperParams& hp, bool bias = false);

/// O · ReLU(W x) (log domain).
double predict_elm(const ElmModel& m, std::span<const double> x);

// --- end to end ----------------------------------------------------------------------

/// ELM training pairs available at last_index (targets <= last_index),
/// trimmed to spec.max_train_pairs when set.
SupervisedSet training_pairs(const LogSeries& ls, std::size_t last_index, const ModelSpec& spec, std::size_t w,
                             std::size_t tau);

/// Log-domain prediction for day last_index + tau using only values up to
/// last_index. ELM trains on every pair available by then.
double forecast_log(const LogSeries& ls, std::size_t last_index, const ModelSpec& spec, const HyperParams& hp,
                    std::size_t tau, std::uint64_t seed);

/// Minimum number of leading days forecast_log needs (last_index + 1 >= this).
std::size_t min_history(const ModelSpec& spec, const HyperParams& hp, std::size_t tau) noexcept;

struct Forecast {
    double point = 0.0;      ///< count domain
    double log_point = 0.0;  ///< natural log of point
};

/// Fits on the whole series and predicts tau days past its last day.
Forecast forecast(const CountrySeries& series, const ModelSpec& spec, const HyperParams& hp, std::size_t tau,
                  std::uint64_t seed);

}  // namespace wincast
