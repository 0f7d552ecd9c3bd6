#include "kellybet/error.hpp"
#include "kellybet/io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace kellybet;

TEST_SUITE("io") {

TEST_CASE("norm stats round trip through JSON") {
    NormStats s{{"a", "b"}, {1.5, -2.25}, {0.1, 0.0}, {false, true}};
    auto back = io::norm_stats_from_json(nlohmann::json::parse(io::to_json(s).dump()));
    CHECK(back.columns == s.columns);
    CHECK(back.mean == s.mean);
    CHECK(back.stddev == s.stddev);
    CHECK(back.zero_variance == s.zero_variance);
    auto bad = io::to_json(s);
    bad["mean"] = {1.0};
    CHECK_THROWS_AS(io::norm_stats_from_json(bad), DataError);
}

TEST_CASE("indicator grid JSON") {
    auto grid = io::indicator_grid_from_json(nlohmann::json::parse(
        R"([{"kind": "RSI", "periods": [14]}, {"kind": "macd", "periods": [12, 26]}])"));
    REQUIRE(grid.size() == 2);
    CHECK(grid[1] == IndicatorSpec::macd());
    CHECK(io::indicator_grid_from_json(io::to_json(default_indicator_grid())) == default_indicator_grid());
    CHECK_THROWS_AS(io::indicator_grid_from_json(nlohmann::json::parse(R"([{"kind": "RSI"}])")), ConfigError);
}

TEST_CASE("performance table layout") {
    BacktestReport a;
    a.strategy = "Proposed";
    a.cumulative_return_pct = 263.0;
    a.max_drawdown_pct = 20.0;
    a.sharpe = 1.654;
    a.romad = 2.357;
    BacktestReport b;
    b.strategy = "Flat";
    std::ostringstream out;
    io::write_performance_table(out, {a, b});
    CHECK(out.str() == "Strategy,Cumulative Return,Max Drawdown,Sharpe Ratio,RoMaD\n"
                       "Proposed,263.00%,-20.00%,1.65,2.36\n"
                       "Flat,0.00%,0.00%,N/A,N/A\n");
}

TEST_CASE("barrier label CSV") {
    std::vector<Candle> c{{1600002000 - 1600002000 % 3600, 100, 100, 100, 100, 1}};
    for (int i = 1; i <= 3; ++i) c.push_back({c[0].timestamp + i * 3600, 99, 103, 97, 100, 1});
    CandleSeries s("T", c);
    BarrierConfig cfg;
    cfg.horizon = 2;
    std::ostringstream out;
    io::write_barrier_labels(out, s, label_series(s, cfg, 1));
    CHECK(out.str() == "timestamp,label,hit_kind,hit_bar\n" + std::to_string(c[0].timestamp) + ",-1,AMBIGUOUS,1\n" +
                           std::to_string(c[1].timestamp) + ",-1,AMBIGUOUS,1\n");
}

TEST_CASE("predictions round trip") {
    std::vector<DirectionPrediction> p{{3600, 0.45, 1}, {7200, 0.7, 1}};
    std::vector<ScenarioEstimate> e{{3600, 0.01, 0.02}, {7200, 0.03, 0.001}};
    std::stringstream buf;
    io::write_predictions(buf, p, &e);
    auto back = load_predictions(buf);
    CHECK(back.predictions == p);
    CHECK(*back.estimates == e);
}

TEST_CASE("equity round trip") {
    EquityCurve c;
    c.points = {{3600, 1.0}, {7200, 1.0123456789012345}, {10800, 0.5}};
    std::stringstream buf;
    io::write_equity(buf, c);
    CHECK(io::read_equity(buf).points == c.points);
}

}
