#include "wincast/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wincast/csv.hpp"
#include "wincast/error.hpp"

namespace wincast::report {
namespace {

constexpr std::string_view kRecordHeader =
    "country,date,tau,method,y_true,y_pred,error_pct,w,h,lambda,point_error_pct,trials";

using csv::format_double;

nlohmann::ordered_json stamp_fields(const Stamp& stamp) {
    nlohmann::ordered_json j;
    j["generator"] = "wincast";
    j["config_hash"] = hex16(stamp.config_hash);
    j["base_seed"] = stamp.base_seed;
    return j;
}

// nlohmann prints doubles with %.17g; keep the shortest round-trip form
// so JSON and CSV agree textually.
nlohmann::ordered_json number(double v) {
    return nlohmann::ordered_json::parse(format_double(v));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string header_comment(const Stamp& stamp) {
    return "# wincast config_hash=" + hex16(stamp.config_hash) + " base_seed=" + std::to_string(stamp.base_seed);
}

void write_records_csv(std::ostream& out, std::span<const BacktestRecord> records, const Stamp& stamp) {
    out << header_comment(stamp) << '\n' << kRecordHeader << '\n';
    for (const auto& r : records) {
        csv::write_field(out, r.country);
        out << ',' << to_iso(r.date) << ',' << r.tau << ',' << to_string(r.method) << ',' << r.y_true << ','
            << format_double(r.y_pred) << ',' << format_double(r.error_pct) << ',' << r.hp.w << ',' << r.hp.h << ','
            << format_double(r.hp.lambda) << ',' << format_double(r.point_error_pct) << ',' << r.trials << '\n';
    }
}

std::vector<BacktestRecord> read_records_csv(std::istream& in) {
    std::vector<BacktestRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kRecordHeader)
                throw Error(ErrorCode::MalformedHeader, "records header expected, got '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto f = csv::split_record(line, line_no);
        if (f.size() != 12) {
            throw Error(ErrorCode::RaggedRow, "records line " + std::to_string(line_no) + ": " +
                                                  std::to_string(f.size()) + " fields, expected 12");
        }
        BacktestRecord r;
        r.country = f[0];
        const auto date = parse_iso_date(f[1]);
        if (!date) throw Error(ErrorCode::MalformedHeader, "records line " + std::to_string(line_no) + ": bad date");
        r.date = *date;
        r.day_index = static_cast<std::size_t>(std::chrono::sys_days(*date).time_since_epoch().count());
        r.tau = static_cast<std::size_t>(csv::parse_int(f[2], "tau"));
        const auto m = parse_method(f[3]);
        if (!m) throw Error(ErrorCode::InvalidArgument, "records line " + std::to_string(line_no) + ": bad method");
        r.method = *m;
        r.y_true = csv::parse_int(f[4], "y_true");
        r.y_pred = csv::parse_double(f[5], "y_pred");
        r.error_pct = csv::parse_double(f[6], "error_pct");
        r.hp.w = static_cast<std::size_t>(csv::parse_int(f[7], "w"));
        r.hp.h = static_cast<std::size_t>(csv::parse_int(f[8], "h"));
        r.hp.lambda = csv::parse_double(f[9], "lambda");
        r.point_error_pct = csv::parse_double(f[10], "point_error_pct");
        r.trials = static_cast<std::size_t>(csv::parse_int(f[11], "trials"));
        out.push_back(std::move(r));
    }
    if (!header_seen) throw Error(ErrorCode::MalformedHeader, "no records header");
    return out;
}

void write_kde_csv(std::ostream& out, const KdeCurve& curve, const Stamp& stamp) {
    out << header_comment(stamp) << '\n';
    out << "# bandwidth=" << format_double(curve.bandwidth) << " degenerate=" << (curve.degenerate ? 1 : 0) << '\n';
    out << "error_pct,density\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << format_double(curve.grid[i]) << ',' << format_double(curve.density[i]) << '\n';
}

void write_forecasts_csv(std::ostream& out, std::span<const AheadForecast> rows, const Stamp& stamp) {
    out << header_comment(stamp) << '\n';
    out << "country,last_date,target_date,tau,method,y_pred,w,h,lambda,trials\n";
    for (const auto& f : rows) {
        csv::write_field(out, f.country);
        out << ',' << to_iso(f.last_date) << ',' << to_iso(f.target_date) << ',' << f.tau << ','
            << to_string(f.method) << ',' << format_double(f.y_pred) << ',' << f.hp.w << ',' << f.hp.h << ','
            << format_double(f.hp.lambda) << ',' << f.trials << '\n';
    }
}

std::string summary_json(std::span<const SummaryRow> rows, const Stamp& stamp) {
    auto j = stamp_fields(stamp);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json e;
        e["country"] = r.country;
        e["tau"] = r.tau;
        e["method"] = std::string(to_string(r.method));
        e["count"] = r.summary.count;
        e["mean_pct"] = number(r.summary.mean_pct);
        e["std_pct"] = number(r.summary.std_pct);
        e["last10_mean_pct"] = number(r.summary.last10_mean_pct);
        e["last10_count"] = r.summary.last10_count;
        e["last10_partial"] = r.summary.last10_count < 10;
        arr.push_back(std::move(e));
    }
    j["summaries"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::string tune_json(std::string_view country, Date up_to, std::size_t tau, Method method, const TuneResult& result,
                      const Stamp& stamp) {
    auto j = stamp_fields(stamp);
    j["country"] = country;
    j["up_to"] = to_iso(up_to);
    j["tau"] = tau;
    j["method"] = std::string(to_string(method));
    j["best"] = {{"w", result.best.w}, {"h", result.best.h}, {"lambda", number(result.best.lambda)}};
    j["best_score_pct"] = number(result.best_score);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [hp, score] : result.scores) {
        nlohmann::ordered_json e;
        e["w"] = hp.w;
        e["h"] = hp.h;
        e["lambda"] = number(hp.lambda);
        e["score_pct"] = std::isfinite(score) ? number(score) : nlohmann::ordered_json(nullptr);
        arr.push_back(std::move(e));
    }
    j["scores"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::string last10_table(std::span<const SummaryRow> rows, std::span<const std::string> countries) {
    std::map<std::pair<std::string, std::size_t>, std::map<std::string, double>> cells;
    for (const auto& r : rows)
        cells[{std::string(to_string(r.method)), r.tau}][r.country] = r.summary.last10_mean_pct;
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-8s %4s", "method", "tau");
    out << buf;
    for (const auto& c : countries) {
        std::snprintf(buf, sizeof buf, " %9.9s", c.c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& [key, by_country] : cells) {
        std::snprintf(buf, sizeof buf, "%-8s %4zu", key.first.c_str(), key.second);
        out << buf;
        for (const auto& c : countries) {
            const auto it = by_country.find(c);
            if (it == by_country.end()) {
                std::snprintf(buf, sizeof buf, " %9s", "-");
            } else {
                std::snprintf(buf, sizeof buf, " %9.3f", it->second);
            }
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace wincast::report
