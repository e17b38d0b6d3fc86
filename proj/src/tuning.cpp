#include "wincast/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wincast/error.hpp"
#include "wincast/kernels.hpp"

namespace wincast {
namespace {

// Fold origins: origins[k-1] = up_to - k·vh.
struct Folds {
    std::vector<std::size_t> origins;
    bool ok = false;
};

Folds make_folds(std::size_t up_to, std::size_t tau, const SearchGrid& grid) {
    Folds f;
    const std::size_t vh = grid.horizon_for(tau);
    if (grid.n_folds == 0 || up_to < grid.n_folds * vh) return f;
    for (std::size_t k = 1; k <= grid.n_folds; ++k) f.origins.push_back(up_to - k * vh);
    f.ok = true;
    return f;
}

bool feasible(const Folds& folds, ModelKind kind, std::size_t w, std::size_t tau) {
    if (!folds.ok) return false;
    const std::size_t oldest = folds.origins.back();
    return kind == ModelKind::Poly ? oldest + 1 >= w : oldest + 1 >= w + tau;
}

double sanitize(double score) { return std::isnan(score) ? std::numeric_limits<double>::infinity() : score; }

double poly_score(const LogSeries& ls, const Folds& folds, std::size_t w, std::size_t tau) {
    double sum = 0.0;
    for (const std::size_t o : folds.origins) {
        const double pred = predict_poly(fit_poly(ls, o, HyperParams{w, 0, 0.0}), tau);
        sum += error_pct_log(ls.values[o + tau], pred);
    }
    return sanitize(sum / static_cast<double>(folds.origins.size()));
}

// Scores every (h, lambda) pair for one window size. All hidden widths share
// one draw of hmax rows (the first h rows of a draw do not depend on hmax),
// one Gram matrix per fold, and one factorization per (fold, lambda): the
// leading h×h block of each serves width h.
void elm_scores(const LogSeries& ls, const Folds& folds, std::size_t w, std::size_t tau, const ModelSpec& spec,
                const std::vector<std::size_t>& hs, const std::vector<double>& lambdas, std::size_t draws,
                std::uint64_t seed, std::map<HyperParams, double>& out) {
    const auto& k = kernels::active();
    const std::size_t hmax = *std::max_element(hs.begin(), hs.end());
    const std::size_t nf = folds.origins.size();
    const std::size_t newest = folds.origins.front();

    // Pairs usable by the newest fold; fold f uses the first n_pairs[f].
    const SupervisedSet train = build_supervised(ls, w, tau, newest);
    std::vector<std::size_t> n_pairs(nf);
    for (std::size_t f = 0; f < nf; ++f) n_pairs[f] = folds.origins[f] + 2 - w - tau;

    std::vector<double> sums(hs.size() * lambdas.size(), 0.0);
    std::vector<double> input;
    std::vector<double> by_sample(train.count() * hmax);

    for (std::size_t r = 0; r < draws; ++r) {
        const Matrix weights = init_elm_weights(seed + r, hmax, w + (spec.elm_bias ? 1 : 0));
        const std::size_t p = weights.cols();

        for (std::size_t s = 0; s < train.count(); ++s) {
            input.assign(train.input(s).begin(), train.input(s).end());
            if (spec.elm_bias) input.push_back(1.0);
            k.relu_affine(weights.values().data(), hmax, p, input.data(), by_sample.data() + s * hmax);
        }
        const Matrix z = Matrix(train.count(), hmax, by_sample).transposed();

        // Nested training sets: oldest fold first, each Gram extends the last.
        // A training-pair cap breaks the nesting, so each fold starts over.
        std::vector<Matrix> grams(nf);
        std::vector<std::vector<double>> rhs(nf);
        Matrix g(hmax, hmax);
        std::vector<double> b(hmax, 0.0);
        std::size_t done = 0;
        for (std::size_t f = nf; f-- > 0;) {
            const std::size_t end = n_pairs[f];
            if (spec.max_train_pairs > 0) {
                g = Matrix(hmax, hmax);
                std::fill(b.begin(), b.end(), 0.0);
                done = end > spec.max_train_pairs ? end - spec.max_train_pairs : 0;
            }
            accumulate_gram(g, z, done, end);
            for (std::size_t i = 0; i < hmax; ++i)
                b[i] += k.dot(train.targets.data() + done, z.row(i).data() + done, end - done);
            done = end;
            grams[f] = g;
            rhs[f] = b;
        }

        std::vector<double> zo(hmax);
        for (std::size_t f = 0; f < nf; ++f) {
            const std::size_t o = folds.origins[f];
            const auto x = window_at(ls, o, w);
            input.assign(x.begin(), x.end());
            if (spec.elm_bias) input.push_back(1.0);
            k.relu_affine(weights.values().data(), hmax, p, input.data(), zo.data());
            const double truth = ls.values[o + tau];

            for (std::size_t li = 0; li < lambdas.size(); ++li) {
                const RidgeSystem sys(grams[f], lambdas[li]);
                for (std::size_t hi = 0; hi < hs.size(); ++hi) {
                    const std::size_t h = hs[hi];
                    const auto coef = sys.solve_leading(std::span<const double>(rhs[f]).first(h), h);
                    const double pred = k.dot(coef.data(), zo.data(), h);
                    sums[hi * lambdas.size() + li] += error_pct_log(truth, pred);
                }
            }
        }
    }

    const double denom = static_cast<double>(draws * nf);
    for (std::size_t hi = 0; hi < hs.size(); ++hi)
        for (std::size_t li = 0; li < lambdas.size(); ++li)
            out[HyperParams{w, hs[hi], lambdas[li]}] = sanitize(sums[hi * lambdas.size() + li] / denom);
}

std::map<HyperParams, double> score_grid(const LogSeries& ls, std::size_t up_to, const ModelSpec& spec,
                                         std::size_t tau, const SearchGrid& grid, std::uint64_t seed) {
    if (tau == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
    if (grid.horizon_for(tau) < tau) {
        throw Error(ErrorCode::InvalidArgument, "validation horizon shorter than tau would score on data after up_to");
    }
    if (up_to >= ls.size()) {
        throw Error(ErrorCode::InsufficientHistory,
                    "up_to index " + std::to_string(up_to) + " is past the end of a " + std::to_string(ls.size()) +
                        "-day series");
    }
    const Folds folds = make_folds(up_to, tau, grid);
    std::map<HyperParams, double> scores;
    for (const std::size_t w : grid.w_values) {
        if (!feasible(folds, spec.kind, w, tau)) continue;
        if (spec.kind == ModelKind::Poly) {
            scores[HyperParams{w, 0, 0.0}] = poly_score(ls, folds, w, tau);
        } else {
            elm_scores(ls, folds, w, tau, spec, grid.h_values, grid.lambda_values, grid.elm_draws, seed, scores);
        }
    }
    return scores;
}

}  // namespace

double error_pct_log(double log_true, double log_pred) noexcept {
    return 100.0 * std::abs(std::expm1(log_pred - log_true));
}

void validate(const SearchGrid& grid, ModelKind kind) {
    if (grid.w_values.empty()) throw Error(ErrorCode::InvalidArgument, "grid has no window sizes");
    if (grid.n_folds == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one fold");
    for (const auto w : grid.w_values) {
        if (w == 0) throw Error(ErrorCode::InvalidArgument, "window sizes must be >= 1");
        if (kind == ModelKind::Poly && w < kPolyDegree + 1)
            throw Error(ErrorCode::InvalidArgument, "polynomial window sizes must be >= 4");
    }
    if (kind == ModelKind::Elm) {
        if (grid.h_values.empty() || grid.lambda_values.empty())
            throw Error(ErrorCode::InvalidArgument, "ELM grid needs hidden widths and ridge weights");
        if (grid.elm_draws == 0) throw Error(ErrorCode::InvalidArgument, "ELM grid needs at least one draw");
        for (const auto h : grid.h_values)
            if (h == 0) throw Error(ErrorCode::InvalidArgument, "hidden widths must be >= 1");
        for (const auto l : grid.lambda_values)
            if (!(l > 0.0) || !std::isfinite(l))
                throw Error(ErrorCode::InvalidArgument, "ELM ridge weights must be finite and > 0");
    }
}

bool preferred_on_tie(const HyperParams& a, const HyperParams& b) noexcept {
    if (a.w != b.w) return a.w < b.w;
    if (a.h != b.h) return a.h < b.h;
    return a.lambda > b.lambda;
}

double validation_score(const LogSeries& ls, std::size_t up_to, const ModelSpec& spec, const HyperParams& hp,
                        std::size_t tau, const SearchGrid& grid, std::uint64_t seed) {
    validate(hp, spec.kind);
    SearchGrid single = grid;
    single.w_values = {hp.w};
    single.h_values = {hp.h};
    single.lambda_values = {hp.lambda};
    const auto scores = score_grid(ls, up_to, spec, tau, single, seed);
    const HyperParams key = spec.kind == ModelKind::Poly ? HyperParams{hp.w, 0, 0.0} : hp;
    const auto it = scores.find(key);
    if (it == scores.end()) {
        throw Error(ErrorCode::InsufficientHistory, "not enough history before index " + std::to_string(up_to) +
                                                        " for " + std::to_string(grid.n_folds) +
                                                        " validation folds with w=" + std::to_string(hp.w));
    }
    return it->second;
}

TuneResult tune(const LogSeries& ls, std::size_t up_to, const ModelSpec& spec, std::size_t tau,
                const SearchGrid& grid, std::uint64_t seed) {
    validate(grid, spec.kind);
    TuneResult result;
    result.scores = score_grid(ls, up_to, spec, tau, grid, seed);
    if (result.scores.empty()) {
        throw Error(ErrorCode::InsufficientHistory, "no grid candidate has enough history before index " +
                                                        std::to_string(up_to) + " (tau=" + std::to_string(tau) + ")");
    }
    bool first = true;
    for (const auto& [hp, score] : result.scores) {
        if (first || score < result.best_score ||
            (score == result.best_score && preferred_on_tie(hp, result.best))) {
            result.best = hp;
            result.best_score = score;
            first = false;
        }
    }
    return result;
}

}  // namespace wincast
