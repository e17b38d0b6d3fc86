// wincast: command-line driver for ingestion, tuning, forecasting and
// rolling backtests on JHU-style confirmed-case snapshots.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wincast/backtest.hpp"
#include "wincast/csv.hpp"
#include "wincast/error.hpp"
#include "wincast/ingest.hpp"
#include "wincast/kernels.hpp"
#include "wincast/report.hpp"

namespace fs = std::filesystem;
using namespace wincast;

namespace {

constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

struct RunConfig {
    std::string data;
    std::vector<std::string> countries;
    std::vector<std::size_t> taus{1};
    std::vector<std::string> methods{"elm-tv"};
    std::string mode;  // empty: as named by the method
    std::size_t days = 31;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string out = "wincast_out";
    std::string aliases;
    SearchGrid grid;
    bool elm_bias = false;
    std::size_t max_train_pairs = 0;
    std::size_t threads = 0;
};

struct Resolved {
    RawTable table;
    std::string table_bytes;
    std::vector<std::string> names;  // as given
    std::vector<std::string> canonical;
    std::vector<Method> methods;
    report::Stamp stamp;
};

void print_error(std::string_view code, const std::string& message, const nlohmann::json& extra = {}) {
    nlohmann::ordered_json j;
    j["error"]["code"] = code;
    j["error"]["message"] = message;
    if (!extra.is_null())
        for (const auto& [k, v] : extra.items()) j["error"][k] = v;
    std::cerr << j.dump() << '\n';
}

std::string slug(std::string_view s) {
    std::string out;
    for (const char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

std::string join(const auto& xs) {
    std::ostringstream o;
    bool first = true;
    for (const auto& x : xs) {
        if (!first) o << ';';
        first = false;
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) {
            o << csv::format_double(x);
        } else {
            o << x;
        }
    }
    return o.str();
}

// Every setting that can change an output, in a fixed order. The data file
// enters by content, not path.
std::string canonical_config(const RunConfig& c, const Resolved& r, std::string_view command) {
    std::ostringstream o;
    o << "command=" << command << "\ndata_fnv=" << report::hex16(report::fnv1a64(r.table_bytes))
      << "\ncountries=" << join(r.canonical) << "\ntaus=" << join(c.taus) << "\nmethods=";
    std::vector<std::string> ms;
    for (const auto m : r.methods) ms.emplace_back(to_string(m));
    o << join(ms) << "\ndays=" << c.days << "\ntrials=" << c.trials << "\nseed=" << c.seed
      << "\ngrid.w=" << join(c.grid.w_values) << "\ngrid.h=" << join(c.grid.h_values)
      << "\ngrid.lambda=" << join(c.grid.lambda_values) << "\ngrid.val_horizon=" << c.grid.val_horizon
      << "\ngrid.folds=" << c.grid.n_folds << "\ngrid.draws=" << c.grid.elm_draws << "\nelm_bias=" << c.elm_bias
      << "\nmax_train_pairs=" << c.max_train_pairs << "\nkernels=" << kernels::active().name << '\n';
    return o.str();
}

Resolved resolve(const RunConfig& c, std::string_view command) {
    Resolved r;
    std::string data = c.data;
    if (data.empty()) {
        const char* dir = std::getenv("WINCAST_DATA_DIR");
        fs::path base = dir ? fs::path(dir) : fs::path(WINCAST_DEFAULT_DATA_DIR);
        data = (base / "synthetic_confirmed_global_2020-05-04.csv").string();
    } else if (fs::is_directory(data)) {
        data = (fs::path(data) / "synthetic_confirmed_global_2020-05-04.csv").string();
    }
    std::ifstream in(data, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open data file " + data);
    r.table_bytes.assign(std::istreambuf_iterator<char>(in), {});
    r.table = parse_jhu_csv(std::string_view(r.table_bytes));

    const AliasMap aliases = c.aliases.empty() ? AliasMap::defaults() : AliasMap::load(c.aliases);
    r.names = c.countries.empty() ? default_countries() : c.countries;
    const auto known = country_names(r.table);
    for (const auto& name : r.names) {
        const std::string canon = aliases.resolve(name);
        if (std::find(known.begin(), known.end(), canon) == known.end()) {
            throw Error(ErrorCode::UnknownCountry, "unknown country '" + name + "'");
        }
        r.canonical.push_back(canon);
    }
    for (const auto& m : c.methods) {
        auto parsed = parse_method(m);
        if (!parsed) throw Error(ErrorCode::InvalidArgument, "unknown method '" + m + "'");
        if (c.mode == "fixed") parsed = make_method(model_kind(*parsed), TuneMode::Fixed);
        if (c.mode == "daily") parsed = make_method(model_kind(*parsed), TuneMode::Daily);
        if (std::find(r.methods.begin(), r.methods.end(), *parsed) == r.methods.end()) r.methods.push_back(*parsed);
    }
    if (c.taus.empty()) throw Error(ErrorCode::InvalidArgument, "no horizons given");
    for (const auto t : c.taus)
        if (t == 0) throw Error(ErrorCode::InvalidArgument, "horizons must be >= 1");
    if (c.trials == 0) throw Error(ErrorCode::InvalidArgument, "--trials must be >= 1");
    r.stamp = report::Stamp{report::fnv1a64(canonical_config(c, r, command)), c.seed};
    return r;
}

BacktestOptions options_for(const RunConfig& c, Method m, std::size_t tau) {
    BacktestOptions o;
    o.method = m;
    o.tau = tau;
    o.grid = c.grid;
    o.days = c.days;
    o.trials = c.trials;
    o.base_seed = c.seed;
    o.elm_bias = c.elm_bias;
    o.max_train_pairs = c.max_train_pairs;
    return o;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
    return f;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

// --- subcommands -------------------------------------------------------------

int cmd_dump_series(const RunConfig& c, const Resolved& r) {
    const fs::path out = c.out;
    fs::create_directories(out);
    auto f = open_out(out / "series.csv");
    f << report::header_comment(r.stamp) << "\ncountry,date,count,raw_count\n";
    for (std::size_t i = 0; i < r.canonical.size(); ++i) {
        const CountrySeries s = load_country(r.table, r.canonical[i]);
        for (const auto& w : s.warnings) warn(s.country + ": " + describe(w));
        for (std::size_t d = 0; d < s.size(); ++d) {
            csv::write_field(f, s.country);
            f << ',' << to_iso(s.date_at(d)) << ',' << s.counts[d] << ',' << s.raw_counts[d] << '\n';
        }
    }
    std::cout << "wrote " << (out / "series.csv").string() << '\n';
    return 0;
}

template <class Fn>
int for_each_pair(const RunConfig& c, const Resolved& r, Fn&& fn) {
    bool all_ok = true;
    for (std::size_t i = 0; i < r.canonical.size(); ++i) {
        const CountrySeries s = load_country(r.table, r.canonical[i]);
        for (const auto m : r.methods) {
            for (const auto tau : c.taus) {
                try {
                    if (!fn(s, m, tau)) all_ok = false;
                } catch (const Error& e) {
                    print_error(to_string(e.code()), s.country + " tau=" + std::to_string(tau) + " " +
                                                         std::string(to_string(m)) + ": " + e.what());
                    all_ok = false;
                }
            }
        }
    }
    return all_ok ? 0 : kExitPartial;
}

int cmd_tune(const RunConfig& c, const Resolved& r) {
    const fs::path out = c.out;
    fs::create_directories(out);
    return for_each_pair(c, r, [&](const CountrySeries& s, Method m, std::size_t tau) {
        const auto o = options_for(c, m, tau);
        const LogSeries ls = log_transform(s);
        const ModelSpec spec{model_kind(m), o.elm_bias, o.max_train_pairs};
        const TuneResult t = tune(ls, ls.size() - 1, spec, tau, o.grid, o.base_seed);
        const auto name = "tune_" + slug(s.country) + "_tau" + std::to_string(tau) + "_" + std::string(to_string(m)) + ".json";
        open_out(out / name) << report::tune_json(s.country, s.date_at(s.size() - 1), tau, m, t, r.stamp);
        std::cout << s.country << " tau=" << tau << " " << to_string(m) << ": w=" << t.best.w << " h=" << t.best.h
                  << " lambda=" << csv::format_double(t.best.lambda) << " score=" << t.best_score << "%\n";
        return true;
    });
}

int cmd_forecast(const RunConfig& c, const Resolved& r) {
    const fs::path out = c.out;
    fs::create_directories(out);
    std::vector<AheadForecast> rows;
    const int rc = for_each_pair(c, r, [&](const CountrySeries& s, Method m, std::size_t tau) {
        rows.push_back(forecast_ahead(s, options_for(c, m, tau)));
        const auto& f = rows.back();
        std::cout << f.country << ' ' << to_iso(f.target_date) << " tau=" << tau << ' ' << to_string(m) << ": "
                  << csv::format_double(std::round(f.y_pred)) << '\n';
        return true;
    });
    {
        auto f = open_out(out / "forecasts.csv");
        report::write_forecasts_csv(f, rows, r.stamp);
    }
    return rc;
}

int cmd_backtest(const RunConfig& c, const Resolved& r) {
    const fs::path out = c.out;
    fs::create_directories(out);
    std::vector<report::SummaryRow> summaries;
    std::map<std::pair<Method, std::size_t>, std::vector<double>> pooled;
    const int rc = for_each_pair(c, r, [&](const CountrySeries& s, Method m, std::size_t tau) {
        const BacktestResult res = run_backtest(s, options_for(c, m, tau));
        for (const auto& w : res.warnings) warn(w);
        const auto stem = slug(s.country) + "_tau" + std::to_string(tau) + "_" + std::string(to_string(m));
        {
            auto f = open_out(out / ("records_" + stem + ".csv"));
            report::write_records_csv(f, res.records, r.stamp);
        }
        if (res.records.empty()) {
            print_error("InsufficientHistory", s.country + " tau=" + std::to_string(tau) + " " +
                                                   std::string(to_string(m)) + ": no day could be evaluated");
            return false;
        }
        summaries.push_back({s.country, tau, m, summarize(res.records)});
        auto& pool = pooled[{m, tau}];
        std::vector<double> errors;
        for (const auto& rec : res.records) errors.push_back(rec.error_pct);
        pool.insert(pool.end(), errors.begin(), errors.end());
        if (errors.size() >= 2) {
            auto f = open_out(out / ("kde_" + stem + ".csv"));
            report::write_kde_csv(f, kde(errors), r.stamp);
        } else {
            warn(stem + ": fewer than 2 records, no density written");
        }
        return true;
    });
    for (const auto& [key, errors] : pooled) {
        if (errors.size() < 2) continue;
        auto f = open_out(out / ("kde_pooled_tau" + std::to_string(key.second) + "_" +
                                 std::string(to_string(key.first)) + ".csv"));
        report::write_kde_csv(f, kde(errors), r.stamp);
    }
    open_out(out / "summary.json") << report::summary_json(summaries, r.stamp);
    std::vector<std::string> cols;
    for (const auto& s : summaries)
        if (std::find(cols.begin(), cols.end(), s.country) == cols.end()) cols.push_back(s.country);
    std::cout << "last-10-day mean error (%)\n" << report::last10_table(summaries, cols);
    return rc;
}

int cmd_report(const RunConfig& c, const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    if (inputs.empty()) {
        for (const auto& e : fs::directory_iterator(c.out)) {
            const auto name = e.path().filename().string();
            if (name.rfind("records_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
        }
    } else {
        for (const auto& i : inputs) files.emplace_back(i);
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorCode::EmptyRecords, "no records_*.csv files under " + c.out);

    std::map<std::tuple<std::string, std::size_t, Method>, std::vector<BacktestRecord>> groups;
    std::string digest;
    for (const auto& p : files) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
        const std::string bytes(std::istreambuf_iterator<char>(in), {});
        digest += report::hex16(report::fnv1a64(bytes));
        std::istringstream is(bytes);
        for (auto& rec : report::read_records_csv(is)) groups[{rec.country, rec.tau, rec.method}].push_back(rec);
    }
    std::vector<report::SummaryRow> rows;
    std::vector<std::string> cols;
    for (const auto& [key, recs] : groups) {
        rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), summarize(recs)});
        if (std::find(cols.begin(), cols.end(), std::get<0>(key)) == cols.end()) cols.push_back(std::get<0>(key));
    }
    const report::Stamp stamp{report::fnv1a64("report\n" + digest), c.seed};
    fs::create_directories(c.out);
    open_out(fs::path(c.out) / "report_summary.json") << report::summary_json(rows, stamp);
    std::cout << "last-10-day mean error (%)\n" << report::last10_table(rows, cols);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wincast: sliding-window forecasts of cumulative case counts"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");

    RunConfig c;
    std::string method_list;
    app.add_option("--data", c.data, "JHU-layout confirmed-cases CSV (or a directory holding the default snapshot)");
    app.add_option("--country", c.countries, "Country names or aliases (repeatable or comma-separated)")
        ->delimiter(',');
    app.add_option("--tau", c.taus, "Forecast horizons in days")->delimiter(',');
    app.add_option("--method", c.methods, "poly, poly-tv, elm, elm-tv")->delimiter(',');
    app.add_option("--mode", c.mode, "Override tuning mode of every method")->check(CLI::IsMember({"fixed", "daily"}));
    app.add_option("--days", c.days, "Backtest span D")->check(CLI::PositiveNumber);
    app.add_option("--trials", c.trials, "ELM Monte Carlo trials M");
    app.add_option("--seed", c.seed, "Base seed");
    app.add_option("--out", c.out, "Output directory");
    app.add_option("--aliases", c.aliases, "Alias file with lines 'alias = Country/Region'");
    app.add_option("--grid-w", c.grid.w_values, "Window sizes")->delimiter(',');
    app.add_option("--grid-h", c.grid.h_values, "Hidden widths")->delimiter(',');
    app.add_option("--grid-lambda", c.grid.lambda_values, "Ridge weights")->delimiter(',');
    app.add_option("--folds", c.grid.n_folds, "Validation folds");
    app.add_option("--val-horizon", c.grid.val_horizon, "Fold spacing in days (0 = tau)");
    app.add_option("--draws", c.grid.elm_draws, "Weight draws per ELM candidate during tuning");
    app.add_flag("--elm-bias", c.elm_bias, "Append a constant input to the ELM hidden layer");
    app.add_option("--max-train-pairs", c.max_train_pairs, "Cap ELM training pairs to the most recent N (0 = all)");
    app.add_option("--threads", c.threads, "Worker threads (default: hardware concurrency)");

    auto* dump = app.add_subcommand("dump-series", "Write the trimmed per-country series");
    auto* tune_cmd = app.add_subcommand("tune", "Grid-search hyperparameters on the full history");
    auto* fc = app.add_subcommand("forecast", "Forecast tau days past the last data day");
    auto* bt = app.add_subcommand("backtest", "Rolling backtest over the last D days");
    auto* rep = app.add_subcommand("report", "Summarize existing records files");
    std::vector<std::string> report_inputs;
    rep->add_option("files", report_inputs, "records CSV files (default: records_*.csv under --out)");
    for (auto* s : {dump, tune_cmd, fc, bt, rep}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (c.threads > 0) ::setenv("WINCAST_THREADS", std::to_string(c.threads).c_str(), 1);

    try {
        if (rep->parsed()) return cmd_report(c, report_inputs);
        const std::string command = app.get_subcommands().front()->get_name();
        Resolved r;
        try {
            r = resolve(c, command);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::UnknownCountry) {
                const AliasMap aliases = c.aliases.empty() ? AliasMap::defaults() : AliasMap::load(c.aliases);
                nlohmann::json extra;
                for (const auto& [alias, canon] : aliases.entries()) extra["known_aliases"][alias] = canon;
                print_error(to_string(e.code()), e.what(), extra);
                return kExitFatal;
            }
            throw;
        }
        if (dump->parsed()) return cmd_dump_series(c, r);
        if (tune_cmd->parsed()) return cmd_tune(c, r);
        if (fc->parsed()) return cmd_forecast(c, r);
        return cmd_backtest(c, r);
    } catch (const Error& e) {
        print_error(to_string(e.code()), e.what());
        return kExitFatal;
    } catch (const std::exception& e) {
        print_error("Internal", e.what());
        return kExitFatal;
    }
}
