#include "kellybet/market_data.hpp"

#include "kellybet/csv.hpp"
#include "kellybet/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

namespace kellybet {

void validate_candle(const Candle& c) {
    auto fail = [&](const std::string& why) {
        throw DataError("candle at " + std::to_string(c.timestamp) + ": " + why);
    };
    if (!(c.open > 0 && c.high > 0 && c.low > 0 && c.close > 0)) fail("prices must be positive");
    if (!(c.volume >= 0)) fail("volume must be non-negative");
    if (!(c.low <= c.high)) fail("high < low");
    if (!(c.low <= std::min(c.open, c.close))) fail("low above open/close");
    if (!(c.high >= std::max(c.open, c.close))) fail("high below open/close");
}

CandleSeries::CandleSeries(std::string symbol, std::vector<Candle> candles, std::int64_t interval)
    : symbol_(std::move(symbol)), interval_(interval), candles_(std::move(candles)) {
    if (interval_ <= 0) throw ConfigError("interval must be positive");
    for (std::size_t i = 0; i < candles_.size(); ++i) {
        const auto& c = candles_[i];
        validate_candle(c);
        if (c.timestamp % interval_ != 0) {
            throw DataError("timestamp " + std::to_string(c.timestamp) + " not aligned to interval");
        }
        if (i == 0) continue;
        auto prev = candles_[i - 1].timestamp;
        if (c.timestamp == prev) {
            throw DataError("duplicate timestamp " + std::to_string(c.timestamp));
        }
        if (c.timestamp < prev) {
            throw DataError("non-monotonic timestamp " + std::to_string(c.timestamp));
        }
        if (c.timestamp - prev != interval_) gaps_.push_back(i);
    }
}

std::vector<Timestamp> CandleSeries::timestamps() const {
    std::vector<Timestamp> out;
    out.reserve(candles_.size());
    for (const auto& c : candles_) out.push_back(c.timestamp);
    return out;
}

std::vector<double> CandleSeries::closes() const {
    std::vector<double> out;
    out.reserve(candles_.size());
    for (const auto& c : candles_) out.push_back(c.close);
    return out;
}

std::optional<std::size_t> CandleSeries::index_of(Timestamp ts) const {
    auto it = std::lower_bound(candles_.begin(), candles_.end(), ts,
                               [](const Candle& c, Timestamp t) { return c.timestamp < t; });
    if (it == candles_.end() || it->timestamp != ts) return std::nullopt;
    return static_cast<std::size_t>(it - candles_.begin());
}

CandleSeries CandleSeries::slice(std::size_t begin, std::size_t end) const {
    end = std::min(end, candles_.size());
    begin = std::min(begin, end);
    return CandleSeries(symbol_, std::vector<Candle>(candles_.begin() + begin, candles_.begin() + end),
                        interval_);
}

CandleSeries parse_candles(std::istream& in, const ParseOptions& opts) {
    auto lines = csv::read_lines(in);
    if (lines.empty()) throw DataError("empty input: header row required");

    auto header = csv::split(lines.front().text, opts.delimiter);
    auto column = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw DataError("missing column '" + name + "'", lines.front().number);
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto& m = opts.columns;
    const std::size_t ci[6] = {column(m.timestamp), column(m.open),  column(m.high),
                               column(m.low),       column(m.close), column(m.volume)};
    const std::size_t width = *std::max_element(std::begin(ci), std::end(ci)) + 1;

    std::vector<std::pair<Candle, std::size_t>> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& line = lines[k];
        auto f = csv::split(line.text, opts.delimiter);
        if (f.size() < width) {
            throw DataError("expected at least " + std::to_string(width) + " fields, got " +
                                std::to_string(f.size()),
                            line.number);
        }
        Candle c;
        c.timestamp = csv::parse_int(f[ci[0]], line.number);
        if (opts.timestamps_in_millis) c.timestamp /= 1000;
        c.open = csv::parse_double(f[ci[1]], line.number);
        c.high = csv::parse_double(f[ci[2]], line.number);
        c.low = csv::parse_double(f[ci[3]], line.number);
        c.close = csv::parse_double(f[ci[4]], line.number);
        c.volume = csv::parse_double(f[ci[5]], line.number);
        try {
            validate_candle(c);
        } catch (const DataError& e) {
            throw DataError(e.what(), line.number);
        }
        if (opts.strict_order && !rows.empty() && c.timestamp <= rows.back().first.timestamp) {
            throw DataError(std::string(c.timestamp == rows.back().first.timestamp ? "duplicate"
                                                                                  : "non-monotonic") +
                                " timestamp " + std::to_string(c.timestamp),
                            line.number);
        }
        rows.emplace_back(c, line.number);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first.timestamp < b.first.timestamp; });
    std::vector<Candle> candles;
    candles.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].first.timestamp == rows[i - 1].first.timestamp) {
            throw DataError("duplicate timestamp " + std::to_string(rows[i].first.timestamp),
                            rows[i].second);
        }
        candles.push_back(rows[i].first);
    }
    return CandleSeries(opts.symbol, std::move(candles), opts.interval);
}

void write_candles(std::ostream& out, const CandleSeries& series) {
    out << "timestamp,open,high,low,close,volume\n";
    for (const auto& c : series.candles()) {
        out << c.timestamp << ',' << csv::format_double(c.open) << ',' << csv::format_double(c.high)
            << ',' << csv::format_double(c.low) << ',' << csv::format_double(c.close) << ','
            << csv::format_double(c.volume) << '\n';
    }
}

DatasetSplit split_dataset(const CandleSeries& series, const SplitSpec& spec) {
    if (series.size() < 3) throw ConfigError("series too short to split");
    const auto start = series.front().timestamp;
    const auto end = series.back().timestamp;
    if (!(start < spec.train_end)) throw ConfigError("train_end must lie after the series start (empty train set)");
    if (!(spec.train_end < spec.validation_end)) throw ConfigError("validation_end must follow train_end");
    if (!(spec.validation_end < end)) throw ConfigError("validation_end must lie before the series end");

    auto upper = [&](Timestamp ts) {
        auto c = series.candles();
        return static_cast<std::size_t>(
            std::upper_bound(c.begin(), c.end(), ts,
                             [](Timestamp t, const Candle& k) { return t < k.timestamp; }) -
            c.begin());
    };
    const auto a = upper(spec.train_end);
    const auto b = upper(spec.validation_end);
    DatasetSplit out{series.slice(0, a), series.slice(a, b), series.slice(b, series.size())};
    if (out.validation.empty()) throw ConfigError("validation split is empty");
    return out;
}

Timestamp parse_iso8601(const std::string& text) {
    if (!text.empty() && text.find('-') == std::string::npos) {
        return csv::parse_int(text, 0);
    }
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
    char tail[8] = {};
    int got = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%7s", &y, &mo, &d, &hh, &mm, &ss, tail);
    if (got < 3 || got == 4) {
        got = std::sscanf(text.c_str(), "%4d-%2d-%2d %2d:%2d:%2d", &y, &mo, &d, &hh, &mm, &ss);
        if (got < 3) throw ConfigError("not an ISO-8601 date: '" + text + "'");
    }
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) throw ConfigError("invalid date: '" + text + "'");
    auto t = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
    return t.time_since_epoch().count();
}

std::string format_iso8601(Timestamp ts) {
    using namespace std::chrono;
    sys_seconds s{seconds{ts}};
    auto dp = floor<days>(s);
    year_month_day ymd{dp};
    hh_mm_ss hms{s - dp};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                  int(hms.minutes().count()), int(hms.seconds().count()));
    return buf;
}

CandleSeries generate_synthetic_series(const SyntheticSpec& spec) {
    if (spec.n < 1) throw ConfigError("n must be >= 1");
    if (!(spec.volatility >= 0)) throw ConfigError("volatility must be >= 0");
    if (!(spec.start_price > 0)) throw ConfigError("start_price must be positive");
    if (!(spec.vol_of_vol >= 0)) throw ConfigError("vol_of_vol must be >= 0");
    if (!(spec.vol_persistence >= 0 && spec.vol_persistence < 1)) {
        throw ConfigError("vol_persistence must lie in [0, 1)");
    }
    if (spec.interval <= 0 || spec.start_timestamp % spec.interval != 0) {
        throw ConfigError("start_timestamp must be aligned to a positive interval");
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double innovation = spec.vol_of_vol * std::sqrt(1.0 - spec.vol_persistence * spec.vol_persistence);

    std::vector<Candle> candles;
    candles.reserve(spec.n);
    double prev_close = spec.start_price;
    double log_vol_factor = spec.vol_of_vol * normal(rng);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double shock = normal(rng);
        const double up_excursion = std::abs(normal(rng));
        const double down_excursion = std::abs(normal(rng));
        const double volume_noise = normal(rng);
        const double vol_noise = normal(rng);

        const double sigma = spec.volatility * std::exp(log_vol_factor);
        Candle c;
        c.timestamp = spec.start_timestamp + static_cast<Timestamp>(i) * spec.interval;
        c.open = prev_close;
        c.close = prev_close * std::exp(spec.drift + sigma * shock);
        c.high = std::max(c.open, c.close) * std::exp(0.5 * sigma * up_excursion);
        c.low = std::min(c.open, c.close) * std::exp(-0.5 * sigma * down_excursion);
        c.volume = 100.0 * std::exp(0.5 * volume_noise);
        candles.push_back(c);

        prev_close = c.close;
        log_vol_factor = spec.vol_persistence * log_vol_factor + innovation * vol_noise;
    }
    return CandleSeries(spec.symbol, std::move(candles), spec.interval);
}

}  // namespace kellybet
