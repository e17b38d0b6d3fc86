#include "wincast/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wincast/error.hpp"
#include "wincast/parallel.hpp"

namespace wincast {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Poly: return "poly";
        case Method::PolyTv: return "poly-tv";
        case Method::Elm: return "elm";
        case Method::ElmTv: return "elm-tv";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
    for (const Method m : {Method::Poly, Method::PolyTv, Method::Elm, Method::ElmTv})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

ModelKind model_kind(Method m) noexcept {
    return m == Method::Poly || m == Method::PolyTv ? ModelKind::Poly : ModelKind::Elm;
}

TuneMode tune_mode(Method m) noexcept {
    return m == Method::PolyTv || m == Method::ElmTv ? TuneMode::Daily : TuneMode::Fixed;
}

Method make_method(ModelKind kind, TuneMode mode) noexcept {
    if (kind == ModelKind::Poly) return mode == TuneMode::Daily ? Method::PolyTv : Method::Poly;
    return mode == TuneMode::Daily ? Method::ElmTv : Method::Elm;
}

double error_pct(double y_true, double y_pred) noexcept { return 100.0 * std::abs(y_true - y_pred) / y_true; }

namespace {

ModelSpec spec_of(const BacktestOptions& opts) {
    return ModelSpec{model_kind(opts.method), opts.elm_bias, opts.max_train_pairs};
}

std::string skip_message(const CountrySeries& s, std::size_t day, const BacktestOptions& opts,
                         const std::string& why) {
    return s.country + " " + to_iso(s.date_at(day)) + " tau=" + std::to_string(opts.tau) + " " +
           std::string(to_string(opts.method)) + ": skipped, " + why;
}

}  // namespace

BacktestRecord evaluate_day(const CountrySeries& series, const LogSeries& ls, std::size_t target,
                            const BacktestOptions& opts, const HyperParams& hp) {
    if (target >= series.size()) throw Error(ErrorCode::InvalidArgument, "target day past the end of the series");
    if (target < opts.tau) {
        throw Error(ErrorCode::InsufficientHistory, "no data " + std::to_string(opts.tau) + " days before target");
    }
    const ModelSpec spec = spec_of(opts);
    const std::size_t origin = target - opts.tau;

    BacktestRecord r;
    r.country = series.country;
    r.day_index = target;
    r.date = series.date_at(target);
    r.tau = opts.tau;
    r.method = opts.method;
    r.y_true = series.counts[target];
    r.hp = hp;
    const auto y_true = static_cast<double>(r.y_true);

    if (spec.kind == ModelKind::Poly) {
        r.trials = 1;
        r.y_pred = std::exp(forecast_log(ls, origin, spec, hp, opts.tau, opts.base_seed));
        r.error_pct = error_pct(y_true, r.y_pred);
        r.point_error_pct = r.error_pct;
        return r;
    }

    validate(hp, spec.kind);
    if (opts.trials == 0) throw Error(ErrorCode::InvalidArgument, "ELM needs at least one trial");
    if (origin + 1 < min_history(spec, hp, opts.tau)) {
        throw Error(ErrorCode::InsufficientHistory, "ELM with w=" + std::to_string(hp.w) + " has no training pair");
    }
    const SupervisedSet train = training_pairs(ls, origin, spec, hp.w, opts.tau);
    const auto x = window_at(ls, origin, hp.w);
    double pred_sum = 0.0;
    double err_sum = 0.0;
    for (std::size_t i = 0; i < opts.trials; ++i) {
        const ElmModel m = fit_elm(train, opts.base_seed + i, hp, spec.elm_bias);
        const double y = std::exp(predict_elm(m, x));
        pred_sum += y;
        err_sum += error_pct(y_true, y);
    }
    r.trials = opts.trials;
    r.y_pred = pred_sum / static_cast<double>(opts.trials);
    r.error_pct = err_sum / static_cast<double>(opts.trials);
    r.point_error_pct = error_pct(y_true, r.y_pred);
    return r;
}

BacktestResult run_backtest(const CountrySeries& series, const BacktestOptions& opts) {
    if (opts.tau == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    const ModelSpec spec = spec_of(opts);
    validate(opts.grid, spec.kind);
    const LogSeries ls = log_transform(series);
    const std::size_t n = ls.size();
    const std::size_t first = n > opts.days ? n - opts.days : 0;
    const std::size_t span = n - first;

    std::vector<std::optional<BacktestRecord>> slots(span);
    std::vector<std::string> notes(span);

    auto run_day = [&](std::size_t i, const std::optional<HyperParams>& fixed) {
        const std::size_t d = first + i;
        if (d < opts.tau) {
            notes[i] = skip_message(series, d, opts, "no data tau days earlier");
            return;
        }
        try {
            const HyperParams hp = fixed ? *fixed : tune(ls, d - opts.tau, spec, opts.tau, opts.grid, opts.base_seed).best;
            slots[i] = evaluate_day(series, ls, d, opts, hp);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientHistory) throw;
            notes[i] = skip_message(series, d, opts, e.what());
        }
    };

    if (tune_mode(opts.method) == TuneMode::Daily) {
        parallel_for(span, [&](std::size_t i) { run_day(i, std::nullopt); });
    } else {
        // Tune once, at the first evaluated day with enough history.
        std::optional<HyperParams> fixed;
        std::size_t start = 0;
        for (; start < span && !fixed; ++start) {
            const std::size_t d = first + start;
            if (d < opts.tau) {
                notes[start] = skip_message(series, d, opts, "no data tau days earlier");
                continue;
            }
            try {
                fixed = tune(ls, d - opts.tau, spec, opts.tau, opts.grid, opts.base_seed).best;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InsufficientHistory) throw;
                notes[start] = skip_message(series, d, opts, e.what());
                continue;
            }
            run_day(start, fixed);
        }
        if (fixed) parallel_for(span - start, [&](std::size_t i) { run_day(start + i, fixed); });
    }

    BacktestResult out;
    for (std::size_t i = 0; i < span; ++i) {
        if (slots[i]) out.records.push_back(std::move(*slots[i]));
        if (!notes[i].empty()) out.warnings.push_back(std::move(notes[i]));
    }
    return out;
}

AheadForecast forecast_ahead(const CountrySeries& series, const BacktestOptions& opts) {
    if (opts.tau == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    if (series.size() == 0) throw Error(ErrorCode::InsufficientHistory, "empty series");
    const ModelSpec spec = spec_of(opts);
    const LogSeries ls = log_transform(series);
    const std::size_t last = ls.size() - 1;

    AheadForecast f;
    f.country = series.country;
    f.last_date = series.date_at(last);
    f.target_date = add_days(f.last_date, static_cast<long>(opts.tau));
    f.tau = opts.tau;
    f.method = opts.method;
    f.hp = tune(ls, last, spec, opts.tau, opts.grid, opts.base_seed).best;
    f.trials = spec.kind == ModelKind::Poly ? 1 : opts.trials;
    if (f.trials == 0) throw Error(ErrorCode::InvalidArgument, "ELM needs at least one trial");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.trials; ++i)
        sum += std::exp(forecast_log(ls, last, spec, f.hp, opts.tau, opts.base_seed + i));
    f.y_pred = sum / static_cast<double>(f.trials);
    return f;
}

// --- summaries -------------------------------------------------------------------

ErrorSummary summarize_errors(std::span<const double> errors) {
    if (errors.empty()) throw Error(ErrorCode::EmptyRecords, "no records to summarize");
    ErrorSummary s;
    s.count = errors.size();
    const double n = static_cast<double>(errors.size());
    s.mean_pct = std::accumulate(errors.begin(), errors.end(), 0.0) / n;
    double ss = 0.0;
    for (const double e : errors) ss += (e - s.mean_pct) * (e - s.mean_pct);
    s.std_pct = std::sqrt(ss / n);
    s.last10_count = std::min<std::size_t>(10, errors.size());
    const auto tail = errors.last(s.last10_count);
    s.last10_mean_pct = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(s.last10_count);
    return s;
}

ErrorSummary summarize(std::span<const BacktestRecord> records) {
    std::vector<const BacktestRecord*> ordered;
    ordered.reserve(records.size());
    for (const auto& r : records) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto* a, const auto* b) { return a->day_index < b->day_index; });
    std::vector<double> errors;
    errors.reserve(ordered.size());
    for (const auto* r : ordered) errors.push_back(r->error_pct);
    return summarize_errors(errors);
}

// --- KDE ---------------------------------------------------------------------------

KdeCurve kde(std::span<const double> errors, std::optional<double> bandwidth) {
    if (errors.size() < 2) throw Error(ErrorCode::InsufficientSamples, "density estimate needs at least 2 samples");
    for (const double e : errors)
        if (!std::isfinite(e) || e < 0.0)
            throw Error(ErrorCode::InvalidArgument, "error percentages must be finite and >= 0");
    if (bandwidth && !(*bandwidth > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be > 0");

    const double n = static_cast<double>(errors.size());
    const double max = *std::max_element(errors.begin(), errors.end());
    const double mean = std::accumulate(errors.begin(), errors.end(), 0.0) / n;
    double ss = 0.0;
    for (const double e : errors) ss += (e - mean) * (e - mean);
    const double sd = std::sqrt(ss / (n - 1.0));

    KdeCurve c;
    c.degenerate = sd == 0.0;
    if (bandwidth) {
        c.bandwidth = *bandwidth;
    } else if (c.degenerate) {
        // narrow peak: 10% of the common value, at least 0.05 points
        c.bandwidth = std::max(0.1 * max, 0.05);
    } else {
        c.bandwidth = 1.06 * sd * std::pow(n, -0.2);
        // keep at least one grid step across the nominal range
        c.bandwidth = std::max(c.bandwidth, 1.1 * max / static_cast<double>(kKdeGridPoints - 1));
    }
    const double h = c.bandwidth;
    const double upper = std::max(1.1 * max, max + 4.0 * h);

    constexpr double kInvSqrt2Pi = 0.3989422804014327;
    c.grid.resize(kKdeGridPoints);
    c.density.resize(kKdeGridPoints);
    for (std::size_t g = 0; g < kKdeGridPoints; ++g) {
        const double x = upper * static_cast<double>(g) / static_cast<double>(kKdeGridPoints - 1);
        double s = 0.0;
        for (const double e : errors) {
            const double a = (x - e) / h;
            const double b = (x + e) / h;  // reflection about 0
            s += std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
        }
        c.grid[g] = x;
        c.density[g] = s * kInvSqrt2Pi / (n * h);
    }
    return c;
}

double integrate(const KdeCurve& curve) noexcept {
    double total = 0.0;
    for (std::size_t i = 1; i < curve.grid.size(); ++i)
        total += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
    return total;
}

}  // namespace wincast
