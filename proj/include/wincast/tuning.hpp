#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "wincast/models.hpp"
#include "wincast/series.hpp"

namespace wincast {

/// Candidate values plus the rolling-origin protocol. Fold k (1-based)
/// trains on data through up_to - k·val_horizon and is scored on the value
/// tau days later.
struct SearchGrid {
    std::vector<std::size_t> w_values{4, 6, 8, 10, 14, 21};
    std::vector<std::size_t> h_values{5, 10, 20, 40, 80};
    std::vector<double> lambda_values{1e-3, 1e-2, 1e-1, 1.0, 10.0};
    std::size_t val_horizon = 0;  ///< 0 means "use tau"
    std::size_t n_folds = 5;
    std::size_t elm_draws = 10;  ///< weight draws averaged per ELM candidate

    [[nodiscard]] std::size_t horizon_for(std::size_t tau) const noexcept {
        return val_horizon == 0 ? tau : val_horizon;
    }
};

/// Throws InvalidArgument on empty lists, w < 4 with a polynomial, or
/// lambda <= 0 with an ELM.
void validate(const SearchGrid& grid, ModelKind kind);

struct TuneResult {
    HyperParams best;
    double best_score = 0.0;
    /// Mean validation error (%) per feasible candidate.
    std::map<HyperParams, double> scores;
};

/// True when `a` should win a tie against `b`: smaller w, then smaller h,
/// then larger lambda.
bool preferred_on_tie(const HyperParams& a, const HyperParams& b) noexcept;

/// Mean percentage error of the rolling-origin folds ending at up_to.
/// Reads nothing after up_to. ELM scores average grid.elm_draws weight
/// draws with seeds seed, seed+1, ...
double validation_score(const LogSeries& ls, std::size_t up_to, const ModelSpec& spec, const HyperParams& hp,
                        std::size_t tau, const SearchGrid& grid, std::uint64_t seed);

/// Exhaustive grid search. Candidates without enough history for every
/// fold are left out; InsufficientHistory when none is left.
TuneResult tune(const LogSeries& ls, std::size_t up_to, const ModelSpec& spec, std::size_t tau,
                const SearchGrid& grid, std::uint64_t seed);

/// 100·|exp(pred - truth) - 1|, the percentage error of a log-domain
/// prediction against a log-domain truth.
double error_pct_log(double log_true, double log_pred) noexcept;

}  // namespace wincast
