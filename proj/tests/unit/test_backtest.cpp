#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "wincast/backtest.hpp"
#include "wincast/error.hpp"
#include "wincast/report.hpp"

using namespace wincast;

namespace {

SearchGrid small_grid() {
    SearchGrid g;
    g.w_values = {4, 8};
    g.h_values = {5, 20};
    g.lambda_values = {1e-2, 1.0};
    g.n_folds = 3;
    g.elm_draws = 2;
    return g;
}

const std::filesystem::path kData{WINCAST_TEST_DATA_DIR};

}  // namespace

TEST_CASE("percentage error") {
    CHECK(error_pct(23216, 23039) == doctest::Approx(17700.0 / 23216.0).epsilon(1e-14));
    CHECK(error_pct(500, 500) == 0.0);
    CHECK(error_pct(100, 150) == 50.0);
    for (const double c : {0.5, 3.0, 1e4}) CHECK(error_pct(c * 800, c * 750) == doctest::Approx(error_pct(800, 750)));
}

TEST_CASE("method names") {
    for (const Method m : {Method::Poly, Method::PolyTv, Method::Elm, Method::ElmTv}) {
        CHECK(parse_method(to_string(m)) == m);
        CHECK(make_method(model_kind(m), tune_mode(m)) == m);
    }
    CHECK_FALSE(parse_method("arima"));
}

TEST_CASE("exponential growth is forecast almost exactly by the daily-tuned cubic") {
    std::vector<Count> c;
    for (int i = 0; i < 60; ++i) c.push_back(std::llround(10.0 * std::exp(0.12 * i)));
    BacktestOptions o;
    o.method = Method::PolyTv;
    o.tau = 1;
    o.days = 10;
    const BacktestResult r = run_backtest(test::series_from(c), o);
    REQUIRE(r.records.size() == 10);
    for (const auto& rec : r.records) CHECK(rec.error_pct < 0.1);
    CHECK(r.records.front().day_index == 50);
    CHECK(r.records.back().day_index == 59);
}

TEST_CASE("one-day backtest is a single tuned forecast") {
    std::mt19937_64 rng(41);
    const CountrySeries s = test::growth_series(rng, 50);
    BacktestOptions o;
    o.method = Method::ElmTv;
    o.tau = 3;
    o.days = 1;
    o.trials = 4;
    o.grid = small_grid();
    const BacktestResult r = run_backtest(s, o);
    REQUIRE(r.records.size() == 1);
    const auto& rec = r.records[0];

    const LogSeries ls = log_transform(s);
    const HyperParams hp = tune(ls, 46, ModelSpec{ModelKind::Elm}, 3, o.grid, o.base_seed).best;
    CHECK(rec.hp == hp);
    double sum = 0.0, err = 0.0;
    for (std::uint64_t i = 0; i < 4; ++i) {
        const double y = std::exp(forecast_log(ls, 46, ModelSpec{ModelKind::Elm}, hp, 3, i));
        sum += y;
        err += error_pct(static_cast<double>(s.counts[49]), y);
    }
    CHECK(rec.y_pred == doctest::Approx(sum / 4));
    CHECK(rec.error_pct == doctest::Approx(err / 4));
    CHECK(rec.point_error_pct == doctest::Approx(error_pct(static_cast<double>(s.counts[49]), sum / 4)));
    CHECK(rec.y_true == s.counts[49]);
    CHECK(rec.date == s.date_at(49));
}

TEST_CASE("fixed mode keeps one hyperparameter set; reruns are identical") {
    std::mt19937_64 rng(42);
    const CountrySeries s = test::growth_series(rng, 60);
    BacktestOptions o;
    o.method = Method::Elm;
    o.days = 8;
    o.trials = 3;
    o.grid = small_grid();
    const BacktestResult a = run_backtest(s, o);
    REQUIRE(a.records.size() == 8);
    for (const auto& rec : a.records) CHECK(rec.hp == a.records.front().hp);
    const BacktestResult b = run_backtest(s, o);
    CHECK(a.records == b.records);
}

TEST_CASE("days without history are skipped with a warning") {
    std::mt19937_64 rng(43);
    const CountrySeries s = test::growth_series(rng, 22);
    BacktestOptions o;
    o.method = Method::ElmTv;
    o.tau = 3;
    o.days = 10;
    o.trials = 2;
    o.grid = small_grid();
    const BacktestResult r = run_backtest(s, o);
    CHECK(r.records.size() + r.warnings.size() == 10);
    CHECK_FALSE(r.warnings.empty());
    CHECK_FALSE(r.records.empty());
}

TEST_CASE("record of day d does not depend on values after d") {
    std::mt19937_64 rng(44);
    const CountrySeries s = test::growth_series(rng, 50);
    CountrySeries m = s;
    for (std::size_t i = 46; i < m.size(); ++i) m.counts[i] *= 3;
    BacktestOptions o;
    o.method = Method::ElmTv;
    o.tau = 2;
    o.days = 5;  // days 45..49
    o.trials = 3;
    o.grid = small_grid();
    const auto a = run_backtest(s, o).records;
    const auto b = run_backtest(m, o).records;
    REQUIRE(a.size() == 5);
    CHECK(a[0] == b[0]);
    CHECK_FALSE(a[2] == b[2]);
}

TEST_CASE("summary statistics") {
    const std::vector<double> ones{1, 1, 1};
    const ErrorSummary s1 = summarize_errors(ones);
    CHECK(s1.mean_pct == 1.0);
    CHECK(s1.std_pct == 0.0);
    CHECK(s1.last10_count == 3);
    const std::vector<double> two{0, 2};
    const ErrorSummary s2 = summarize_errors(two);
    CHECK(s2.mean_pct == 1.0);
    CHECK(s2.std_pct == 1.0);
    std::vector<double> many;
    for (int i = 0; i < 31; ++i) many.push_back(i);
    CHECK(summarize_errors(many).last10_mean_pct == doctest::Approx(25.5));
    CHECK_THROWS_AS((void)summarize_errors(std::vector<double>{}), Error);

    // records are ordered by day before taking the last ten
    std::vector<BacktestRecord> recs(12);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        recs[i].day_index = 11 - i;
        recs[i].error_pct = static_cast<double>(11 - i);
    }
    CHECK(summarize(recs).last10_mean_pct == doctest::Approx(6.5));
}

TEST_CASE("density estimate") {
    std::mt19937_64 rng(45);
    std::gamma_distribution<double> gam(2.0, 1.5);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> e(5 + rng() % 60);
        for (auto& v : e) v = gam(rng);
        const KdeCurve c = kde(e);
        CHECK(c.grid.size() == kKdeGridPoints);
        CHECK(c.grid.front() == 0.0);
        CHECK(c.grid.back() >= 1.1 * *std::max_element(e.begin(), e.end()));
        CHECK(integrate(c) == doctest::Approx(1.0).epsilon(0.02));
        for (const double d : c.density) CHECK(d >= 0.0);
    }

    std::vector<double> zeros(30, 0.0);
    zeros.push_back(10.0);
    const KdeCurve z = kde(zeros);
    const auto peak = std::max_element(z.density.begin(), z.density.end()) - z.density.begin();
    CHECK(z.grid[static_cast<std::size_t>(peak)] < 1.0);

    std::vector<double> twin(15, 1.0);
    twin.insert(twin.end(), 15, 9.0);
    const KdeCurve b = kde(twin, 0.8);
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < b.density.size(); ++i)
        if (b.density[i] > b.density[i - 1] && b.density[i] >= b.density[i + 1]) ++maxima;
    CHECK(maxima == 2);
    CHECK(integrate(b) == doctest::Approx(1.0).epsilon(0.02));

    const KdeCurve d = kde(std::vector<double>(5, 2.5));
    CHECK(d.degenerate);
    CHECK(d.bandwidth > 0.0);
    CHECK(integrate(d) == doctest::Approx(1.0).epsilon(0.02));
    const KdeCurve d0 = kde(std::vector<double>(5, 0.0));
    CHECK(d0.degenerate);
    CHECK(integrate(d0) == doctest::Approx(1.0).epsilon(0.02));

    try {
        (void)kde(std::vector<double>{1.0});
        FAIL("expected InsufficientSamples");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientSamples);
    }
}

TEST_CASE("records CSV round-trips exactly") {
    std::mt19937_64 rng(46);
    BacktestOptions o;
    o.days = 4;
    o.trials = 2;
    o.grid = small_grid();
    auto recs = run_backtest(test::growth_series(rng, 40, "Korea, South"), o).records;
    std::ostringstream out;
    report::write_records_csv(out, recs, report::Stamp{0xabcdef, 7});
    const std::string text = out.str();
    CHECK(text.rfind("# wincast config_hash=0000000000abcdef base_seed=7\n", 0) == 0);
    std::istringstream in(text);
    const auto back = report::read_records_csv(in);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        auto r = recs[i];
        r.day_index = back[i].day_index;
        CHECK(back[i] == r);
    }
    CHECK(report::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(report::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("May-12 Sweden forecasts land near the published deployment figures") {
    const RawTable t = load_jhu_csv(kData / "synthetic_confirmed_global_2020-05-12.csv");
    const CountrySeries s = load_country(t, "Sweden");
    const double published[] = {27737, 28522, 30841};
    const std::size_t taus[] = {1, 3, 7};
    for (int i = 0; i < 3; ++i) {
        BacktestOptions o;
        o.method = Method::ElmTv;
        o.tau = taus[i];
        const AheadForecast f = forecast_ahead(s, o);
        CHECK(to_iso(f.last_date) == "2020-05-12");
        MESSAGE("tau=" << taus[i] << " forecast " << f.y_pred << " vs " << published[i]);
        CHECK(std::abs(f.y_pred / published[i] - 1.0) < 0.10);
    }
}
