#include "wincast/models.hpp"

#include <cmath>
#include <string>

#include "wincast/error.hpp"
#include "wincast/kernels.hpp"
#include "wincast/random.hpp"

namespace wincast {

std::string_view to_string(ModelKind kind) noexcept { return kind == ModelKind::Poly ? "poly" : "elm"; }

void validate(const HyperParams& hp, ModelKind kind) {
    if (kind == ModelKind::Poly) {
        if (hp.w < kPolyDegree + 1) {
            throw Error(ErrorCode::InvalidArgument,
                        "polynomial window needs at least " + std::to_string(kPolyDegree + 1) + " days");
        }
        return;
    }
    if (hp.w < 1 || hp.h < 1) throw Error(ErrorCode::InvalidArgument, "ELM needs w >= 1 and h >= 1");
    if (!(hp.lambda >= 0.0) || !std::isfinite(hp.lambda))
        throw Error(ErrorCode::InvalidArgument, "ELM lambda must be finite and >= 0");
}

// --- polynomial ----------------------------------------------------------------

PolyModel fit_poly(const LogSeries& ls, std::size_t end_index, const HyperParams& hp) {
    validate(hp, ModelKind::Poly);
    const auto y = window_at(ls, end_index, hp.w);

    // Solve on x = i / (w-1) so the normal equations stay well conditioned,
    // then map back to the integer local index: p_k = q_k / (w-1)^k.
    const double scale = static_cast<double>(hp.w - 1);
    std::vector<double> x(hp.w);
    for (std::size_t i = 0; i < hp.w; ++i) x[i] = static_cast<double>(i) / scale;
    const Matrix design = vandermonde(x, kPolyDegree).transposed();  // 4 × w, one column per day
    const Matrix target(1, hp.w, std::vector<double>(y.begin(), y.end()));
    const Matrix q = solve_ridge(design, target, 0.0);

    PolyModel m;
    m.w = hp.w;
    m.window_end = end_index;
    double s = 1.0;
    for (std::size_t k = 0; k < m.coeffs.size(); ++k) {
        m.coeffs[k] = q(0, k) / s;
        s *= scale;
    }
    return m;
}

double predict_poly(const PolyModel& m, std::size_t tau) {
    const double x = static_cast<double>(m.w - 1 + tau);
    double v = 0.0;
    for (std::size_t k = m.coeffs.size(); k-- > 0;) v = v * x + m.coeffs[k];
    return v;
}

// --- ELM -------------------------------------------------------------------------

Matrix init_elm_weights(std::uint64_t seed, std::size_t h, std::size_t w) {
    if (h == 0 || w == 0) throw Error(ErrorCode::InvalidArgument, "ELM weights need h >= 1 and w >= 1");
    NormalStream normal(seed);
    Matrix m(h, w);
    for (double& v : m.values()) v = normal.next();
    return m;
}

namespace {

std::size_t input_width(std::size_t w, bool bias) { return w + (bias ? 1 : 0); }

// x with an optional trailing 1, written into buf.
std::span<const double> prepare_input(std::span<const double> x, bool bias, std::vector<double>& buf) {
    if (!bias) return x;
    buf.assign(x.begin(), x.end());
    buf.push_back(1.0);
    return buf;
}

}  // namespace

Matrix elm_features(const Matrix& weights, const SupervisedSet& train, bool bias) {
    if (weights.cols() != input_width(train.w, bias)) {
        throw Error(ErrorCode::DimensionMismatch, "W has " + std::to_string(weights.cols()) +
                                                      " columns, inputs need " +
                                                      std::to_string(input_width(train.w, bias)));
    }
    const std::size_t h = weights.rows();
    const std::size_t n = train.count();
    const auto& k = kernels::active();
    Matrix by_sample(n, h);
    std::vector<double> buf;
    for (std::size_t s = 0; s < n; ++s) {
        const auto x = prepare_input(train.input(s), bias, buf);
        k.relu_affine(weights.values().data(), h, weights.cols(), x.data(), by_sample.row(s).data());
    }
    return by_sample.transposed();
}

ElmModel fit_elm(const SupervisedSet& train, Matrix weights, double lambda, bool bias) {
    if (train.count() == 0) throw Error(ErrorCode::EmptyTrainingSet, "ELM needs at least one training pair");
    const Matrix z = elm_features(weights, train, bias);
    const Matrix t(1, train.count(), train.targets);
    ElmModel m;
    m.output = solve_ridge(z, t, lambda);
    m.hp = HyperParams{train.w, weights.rows(), lambda};
    m.weights = std::move(weights);
    m.bias = bias;
    return m;
}

ElmModel fit_elm(const SupervisedSet& train, std::uint64_t seed, const HyperParams& hp, bool bias) {
    validate(hp, ModelKind::Elm);
    if (hp.w != train.w) throw Error(ErrorCode::DimensionMismatch, "training set window differs from hp.w");
    ElmModel m = fit_elm(train, init_elm_weights(seed, hp.h, input_width(hp.w, bias)), hp.lambda, bias);
    m.seed = seed;
    return m;
}

double predict_elm(const ElmModel& m, std::span<const double> x) {
    if (x.size() != m.hp.w) {
        throw Error(ErrorCode::DimensionMismatch,
                    "input has " + std::to_string(x.size()) + " values, model expects " + std::to_string(m.hp.w));
    }
    std::vector<double> buf;
    const auto in = prepare_input(x, m.bias, buf);
    std::vector<double> z(m.weights.rows());
    const auto& k = kernels::active();
    k.relu_affine(m.weights.values().data(), z.size(), m.weights.cols(), in.data(), z.data());
    return k.dot(m.output.row(0).data(), z.data(), z.size());
}

// --- end to end ----------------------------------------------------------------------

SupervisedSet training_pairs(const LogSeries& ls, std::size_t last_index, const ModelSpec& spec, std::size_t w,
                             std::size_t tau) {
    SupervisedSet train = build_supervised(ls, w, tau, last_index);
    if (spec.max_train_pairs > 0 && train.count() > spec.max_train_pairs) {
        const std::size_t drop = train.count() - spec.max_train_pairs;
        train.inputs.erase(train.inputs.begin(), train.inputs.begin() + static_cast<std::ptrdiff_t>(drop * w));
        train.targets.erase(train.targets.begin(), train.targets.begin() + static_cast<std::ptrdiff_t>(drop));
        train.end_indices.erase(train.end_indices.begin(),
                                train.end_indices.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    return train;
}

std::size_t min_history(const ModelSpec& spec, const HyperParams& hp, std::size_t tau) noexcept {
    // ELM: one training pair (window ending at w-1, target at w-1+tau).
    return spec.kind == ModelKind::Poly ? hp.w : hp.w + tau;
}

double forecast_log(const LogSeries& ls, std::size_t last_index, const ModelSpec& spec, const HyperParams& hp,
                    std::size_t tau, std::uint64_t seed) {
    validate(hp, spec.kind);
    if (tau == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    if (last_index >= ls.size() || last_index + 1 < min_history(spec, hp, tau)) {
        throw Error(ErrorCode::InsufficientHistory,
                    std::string(to_string(spec.kind)) + " with w=" + std::to_string(hp.w) + ", tau=" +
                        std::to_string(tau) + " needs " + std::to_string(min_history(spec, hp, tau)) +
                        " days of history, have " + std::to_string(std::min(last_index + 1, ls.size())));
    }
    if (spec.kind == ModelKind::Poly) return predict_poly(fit_poly(ls, last_index, hp), tau);

    const ElmModel m = fit_elm(training_pairs(ls, last_index, spec, hp.w, tau), seed, hp, spec.elm_bias);
    return predict_elm(m, window_at(ls, last_index, hp.w));
}

Forecast forecast(const CountrySeries& series, const ModelSpec& spec, const HyperParams& hp, std::size_t tau,
                  std::uint64_t seed) {
    if (series.size() == 0) throw Error(ErrorCode::InsufficientHistory, "empty series");
    const LogSeries ls = log_transform(series);
    const double v = forecast_log(ls, ls.size() - 1, spec, hp, tau, seed);
    return {std::exp(v), v};
}

}  // namespace wincast
