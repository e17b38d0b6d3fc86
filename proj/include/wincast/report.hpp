#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wincast/backtest.hpp"

namespace wincast::report {

/// Identifies the run that produced a file. CSV outputs carry it as a
/// leading `#` comment line, JSON outputs as top-level fields.
struct Stamp {
    std::uint64_t config_hash = 0;
    std::uint64_t base_seed = 0;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex16(std::uint64_t v);

/// "# wincast config_hash=<hex> base_seed=<n>"
std::string header_comment(const Stamp& stamp);

/// country,date,tau,method,y_true,y_pred,error_pct,w,h,lambda,point_error_pct,trials
void write_records_csv(std::ostream& out, std::span<const BacktestRecord> records, const Stamp& stamp);

/// Reads what write_records_csv wrote; `#` lines are skipped. day_index is
/// not stored, so it comes back as days since 1970-01-01 (order-preserving).
std::vector<BacktestRecord> read_records_csv(std::istream& in);

/// Two columns, error_pct,density.
void write_kde_csv(std::ostream& out, const KdeCurve& curve, const Stamp& stamp);

void write_forecasts_csv(std::ostream& out, std::span<const AheadForecast> rows, const Stamp& stamp);

struct SummaryRow {
    std::string country;
    std::size_t tau = 0;
    Method method = Method::Poly;
    ErrorSummary summary;
};

std::string summary_json(std::span<const SummaryRow> rows, const Stamp& stamp);

std::string tune_json(std::string_view country, Date up_to, std::size_t tau, Method method, const TuneResult& result,
                      const Stamp& stamp);

/// Plain-text table: one row per (method, tau), one column per country,
/// cells are last-10-day mean errors.
std::string last10_table(std::span<const SummaryRow> rows, std::span<const std::string> countries);

}  // namespace wincast::report
