#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wincast/ingest.hpp"
#include "wincast/models.hpp"
#include "wincast/tuning.hpp"

namespace wincast {

/// poly / elm tune once at the start of the evaluation span; the -tv
/// variants retune every evaluated day.
enum class Method { Poly, PolyTv, Elm, ElmTv };

enum class TuneMode { Fixed, Daily };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;
ModelKind model_kind(Method m) noexcept;
TuneMode tune_mode(Method m) noexcept;
Method make_method(ModelKind kind, TuneMode mode) noexcept;

/// 100·|y_true − y_pred| / y_true
double error_pct(double y_true, double y_pred) noexcept;

struct BacktestRecord {
    std::string country;
    std::size_t day_index = 0;  ///< index of the target day in the series
    Date date;                  ///< target day
    std::size_t tau = 0;
    Method method = Method::Poly;
    Count y_true = 0;
    double y_pred = 0.0;           ///< MC mean of count predictions for ELM
    double error_pct = 0.0;        ///< MC mean of per-trial errors for ELM
    double point_error_pct = 0.0;  ///< error of y_pred itself
    HyperParams hp;
    std::size_t trials = 1;

    friend bool operator==(const BacktestRecord&, const BacktestRecord&) = default;
};

struct BacktestOptions {
    Method method = Method::ElmTv;
    std::size_t tau = 1;
    SearchGrid grid;
    std::size_t days = 31;
    std::size_t trials = 100;
    std::uint64_t base_seed = 0;
    bool elm_bias = false;
    std::size_t max_train_pairs = 0;
};

struct BacktestResult {
    std::vector<BacktestRecord> records;  ///< ascending day
    std::vector<std::string> warnings;
};

/// Rolling evaluation over the last `days` days. The target on day d is
/// predicted from data through day d − tau. Days without enough history
/// are skipped with a warning.
BacktestResult run_backtest(const CountrySeries& series, const BacktestOptions& opts);

/// Prediction of series value at `target` using data through target - tau
/// with fixed hyperparameters. ELM averages `trials` draws seeded
/// base_seed + i.
BacktestRecord evaluate_day(const CountrySeries& series, const LogSeries& ls, std::size_t target,
                            const BacktestOptions& opts, const HyperParams& hp);

/// Forecast tau days past the last data day, tuned on the full history.
/// ELM reports the mean of `trials` count predictions.
struct AheadForecast {
    std::string country;
    Date last_date;
    Date target_date;
    std::size_t tau = 0;
    Method method = Method::Poly;
    HyperParams hp;
    double y_pred = 0.0;
    std::size_t trials = 1;
};

AheadForecast forecast_ahead(const CountrySeries& series, const BacktestOptions& opts);

struct ErrorSummary {
    double mean_pct = 0.0;
    double std_pct = 0.0;  ///< population standard deviation
    double last10_mean_pct = 0.0;
    std::size_t count = 0;
    std::size_t last10_count = 0;  ///< < 10 when fewer records exist
};

ErrorSummary summarize(std::span<const BacktestRecord> records);
ErrorSummary summarize_errors(std::span<const double> errors);

struct KdeCurve {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
    bool degenerate = false;  ///< all samples identical; fallback bandwidth used
};

inline constexpr std::size_t kKdeGridPoints = 256;

/// Gaussian KDE of non-negative error percentages, reflected at 0 so no
/// mass falls below the support. Default bandwidth is Silverman's rule
/// 1.06·σ·n^(-1/5). The grid spans [0, max(1.1·max, max + 4·bandwidth)].
KdeCurve kde(std::span<const double> errors, std::optional<double> bandwidth = std::nullopt);

/// Trapezoidal integral of the curve.
double integrate(const KdeCurve& curve) noexcept;

}  // namespace wincast
