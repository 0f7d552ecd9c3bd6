#include "kellybet/error.hpp"
#include "kellybet/market_data.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace kellybet;

namespace {

CandleSeries parse(const std::string& text, ParseOptions opts = {}) {
    std::istringstream in(text);
    return parse_candles(in, opts);
}

CandleSeries hourly(std::size_t n, Timestamp start = 1600000000 - 1600000000 % 3600) {
    std::vector<Candle> c;
    for (std::size_t i = 0; i < n; ++i)
        c.push_back({start + static_cast<Timestamp>(i) * 3600, 10, 11, 9, 10, 1});
    return CandleSeries("T", c);
}

}  // namespace

TEST_SUITE("market_data") {

TEST_CASE("single row maps fields") {
    auto s = parse("timestamp,open,high,low,close,volume\n1502942400,4261.48,4280.56,4261.32,4261.45,48.5\n");
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Candle{1502942400, 4261.48, 4280.56, 4261.32, 4261.45, 48.5});
}

TEST_CASE("invariant violation names the timestamp") {
    try {
        parse("timestamp,open,high,low,close,volume\n1502942400,10,9,11,10,1\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("1502942400") != std::string::npos);
    }
    CHECK_THROWS_AS(validate_candle({1502942400, 10, 12, 9, 10, -1}), DataError);
    CHECK_THROWS_AS(validate_candle({1502942400, 0, 12, 0, 10, 1}), DataError);
    CHECK_THROWS_AS(validate_candle({1502942400, 13, 12, 9, 10, 1}), DataError);
}

TEST_CASE("duplicate timestamps rejected") {
    CHECK_THROWS_AS(parse("timestamp,open,high,low,close,volume\n"
                          "1502942400,10,11,9,10,1\n1502942400,10,11,9,10,1\n"),
                    DataError);
}

TEST_CASE("malformed row reports its line") {
    try {
        parse("timestamp,open,high,low,close,volume\n1502942400,10,11,9,10,1\n1502946000,10,abc,9,10,1\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse("timestamp,open,high,low,close,volume\n1502942400,10,11\n"), DataError);
    CHECK_THROWS_AS(parse("timestamp,open,high,close,volume\n1502942400,10,11,9,1\n"), DataError);
}

TEST_CASE("rows are sorted unless strict") {
    const std::string text = "timestamp,open,high,low,close,volume\n"
                             "1502946000,10,11,9,10,1\n1502942400,10,11,9,10,2\n";
    auto s = parse(text);
    CHECK(s[0].timestamp == 1502942400);
    CHECK(s[1].volume == 1);
    ParseOptions strict;
    strict.strict_order = true;
    CHECK_THROWS_AS(parse(text, strict), DataError);
}

TEST_CASE("custom column mapping, delimiter and millisecond timestamps") {
    ParseOptions o;
    o.columns = {"time", "o", "h", "l", "c", "v"};
    o.delimiter = ';';
    o.timestamps_in_millis = true;
    auto s = parse("v;c;l;h;o;time\n5;10;9;11;10;1502942400000\n", o);
    CHECK(s[0] == Candle{1502942400, 10, 11, 9, 10, 5});
}

TEST_CASE("gaps are indexed, misaligned timestamps rejected") {
    const Timestamp t0 = 1502942400;
    std::vector<Candle> c{{t0, 1, 1, 1, 1, 0}, {t0 + 3600, 1, 1, 1, 1, 0}, {t0 + 4 * 3600, 1, 1, 1, 1, 0}};
    CandleSeries s("X", c);
    CHECK(s.gaps() == std::vector<std::size_t>{2});
    c[1].timestamp += 5;
    CHECK_THROWS_AS(CandleSeries("X", c), DataError);
}

TEST_CASE("write then parse reproduces every field") {
    for (unsigned seed = 1; seed <= 20; ++seed) {
        CandleSeries s("R", oracle::random_candles(200, seed, 0.001 + seed * 137.5));
        std::stringstream buf;
        write_candles(buf, s);
        auto back = parse_candles(buf);
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(back[i] == s[i]);
    }
}

TEST_CASE("split sizes and boundary ownership") {
    auto s = hourly(10);
    auto d = split_dataset(s, {s[3].timestamp, s[6].timestamp});
    CHECK(d.train.size() == 4);
    CHECK(d.validation.size() == 3);
    CHECK(d.test.size() == 3);
    CHECK(d.train.back().timestamp == s[3].timestamp);

    CHECK_THROWS_AS(split_dataset(s, {s[0].timestamp, s[6].timestamp}), ConfigError);
    CHECK_THROWS_AS(split_dataset(s, {s[3].timestamp, s[9].timestamp}), ConfigError);
    CHECK_THROWS_AS(split_dataset(s, {s[6].timestamp, s[3].timestamp}), ConfigError);
}

TEST_CASE("split is a disjoint partition") {
    auto s = hourly(500);
    for (std::size_t a = 1; a < 498; a += 37) {
        for (std::size_t b = a + 1; b < 499; b += 53) {
            auto d = split_dataset(s, {s[a].timestamp, s[b].timestamp});
            CHECK(d.train.size() + d.validation.size() + d.test.size() == s.size());
            std::set<Timestamp> seen;
            for (const auto* part : {&d.train, &d.validation, &d.test})
                for (auto& c : part->candles()) CHECK(seen.insert(c.timestamp).second);
        }
    }
}

TEST_CASE("study-period boundaries give the documented proportions") {
    const Timestamp start = parse_iso8601("2017-09-08");
    const Timestamp end = parse_iso8601("2023-06-02");
    const auto n = static_cast<std::size_t>((end - start) / 3600 + 1);
    auto s = hourly(n, start);
    auto d = split_dataset(s, {parse_iso8601("2019-08-17"), parse_iso8601("2020-01-31")});
    CHECK(std::abs(static_cast<double>(d.train.size()) - 17000) < 500);
    CHECK(std::abs(static_cast<double>(d.validation.size()) - 4000) < 500);
    CHECK(std::abs(static_cast<double>(d.test.size()) - 29000) < 500);
}

TEST_CASE("ISO-8601 parsing") {
    CHECK(parse_iso8601("2017-08-17") == 1502928000);
    CHECK(parse_iso8601("2017-08-17T04:00:00") == 1502942400);
    CHECK(parse_iso8601("2017-08-17T04:00:00Z") == 1502942400);
    CHECK(parse_iso8601("1502942400") == 1502942400);
    CHECK(format_iso8601(1502942400) == "2017-08-17T04:00:00Z");
    CHECK_THROWS(parse_iso8601("2017-13-40"));
    CHECK_THROWS(parse_iso8601("yesterday"));
}

TEST_CASE("synthetic: degenerate walk and determinism") {
    SyntheticSpec spec;
    spec.n = 100;
    spec.volatility = 0;
    auto flat = generate_synthetic_series(spec);
    for (auto& c : flat.candles()) CHECK(c.close == spec.start_price);

    spec.volatility = 0.01;
    spec.seed = 42;
    auto a = generate_synthetic_series(spec), b = generate_synthetic_series(spec);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    spec.seed = 43;
    CHECK_FALSE(generate_synthetic_series(spec)[50] == a[50]);
}

TEST_CASE("synthetic: drift recovered within three standard errors") {
    SyntheticSpec spec;
    spec.seed = 7;
    spec.n = 10000;
    spec.drift = 0.001;
    spec.volatility = 0.01;
    auto s = generate_synthetic_series(spec);
    std::vector<double> r;
    for (std::size_t i = 1; i < s.size(); ++i) r.push_back(std::log(s[i].close / s[i - 1].close));
    double mean = 0;
    for (double x : r) mean += x;
    mean /= r.size();
    double var = 0;
    for (double x : r) var += (x - mean) * (x - mean);
    const double se = std::sqrt(var / (r.size() - 1) / r.size());
    CHECK(std::abs(mean - 0.001) < 3 * se);
}

TEST_CASE("synthetic: candle invariants for many seeds") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SyntheticSpec spec;
        spec.seed = seed;
        spec.n = 500;
        spec.vol_of_vol = seed % 2 ? 1.0 : 0.0;
        auto s = generate_synthetic_series(spec);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto& c = s[i];
            CHECK(c.low <= std::min(c.open, c.close));
            CHECK(c.high >= std::max(c.open, c.close));
            CHECK(c.low > 0);
            CHECK(c.volume >= 0);
            if (i > 0) CHECK(c.open == s[i - 1].close);
        }
        CHECK(s.gaps().empty());
    }
}

TEST_CASE("synthetic: preconditions") {
    SyntheticSpec spec;
    spec.n = 0;
    CHECK_THROWS_AS(generate_synthetic_series(spec), ConfigError);
    spec.n = 10;
    spec.volatility = -1;
    CHECK_THROWS_AS(generate_synthetic_series(spec), ConfigError);
    spec.volatility = 0.01;
    spec.start_price = 0;
    CHECK_THROWS_AS(generate_synthetic_series(spec), ConfigError);
}

TEST_CASE("index_of and slice") {
    auto s = hourly(10);
    CHECK(s.index_of(s[7].timestamp) == 7u);
    CHECK_FALSE(s.index_of(s[7].timestamp + 1).has_value());
    auto sl = s.slice(2, 5);
    CHECK(sl.size() == 3);
    CHECK(sl[0] == s[2]);
}

}
