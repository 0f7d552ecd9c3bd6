#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace kellybet {

using Timestamp = std::int64_t;  // epoch seconds, UTC

inline constexpr std::int64_t kHourSeconds = 3600;

struct Candle {
    Timestamp timestamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    bool operator==(const Candle&) const = default;
};

/// Throws DataError naming the timestamp if the OHLCV invariants do not hold.
void validate_candle(const Candle& c);

/// Ordered, validated candle sequence. Immutable after construction.
///
/// Timestamps are strictly increasing and aligned to `interval`. Missing bars are
/// not filled; every index `i` whose timestamp differs from the previous one by
/// more than one interval is recorded in gaps().
class CandleSeries {
public:
    CandleSeries() = default;
    CandleSeries(std::string symbol, std::vector<Candle> candles,
                 std::int64_t interval = kHourSeconds);

    const std::string& symbol() const noexcept { return symbol_; }
    std::int64_t interval() const noexcept { return interval_; }
    std::span<const Candle> candles() const noexcept { return candles_; }
    const Candle& operator[](std::size_t i) const { return candles_[i]; }
    std::size_t size() const noexcept { return candles_.size(); }
    bool empty() const noexcept { return candles_.empty(); }
    const Candle& front() const { return candles_.front(); }
    const Candle& back() const { return candles_.back(); }

    /// Indices i (i >= 1) where timestamp[i] - timestamp[i-1] != interval.
    const std::vector<std::size_t>& gaps() const noexcept { return gaps_; }

    std::vector<Timestamp> timestamps() const;
    std::vector<double> closes() const;

    /// Index of the candle with exactly this timestamp.
    std::optional<std::size_t> index_of(Timestamp ts) const;

    /// Sub-series [begin, end).
    CandleSeries slice(std::size_t begin, std::size_t end) const;

private:
    std::string symbol_;
    std::int64_t interval_ = kHourSeconds;
    std::vector<Candle> candles_;
    std::vector<std::size_t> gaps_;
};

/// Column names for delimiter-separated candle input.
struct ColumnMapping {
    std::string timestamp = "timestamp";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
    std::string volume = "volume";
};

struct ParseOptions {
    ColumnMapping columns;
    char delimiter = ',';
    std::string symbol = "BTCUSDT";
    std::int64_t interval = kHourSeconds;
    bool timestamps_in_millis = false;
    /// Reject out-of-order rows instead of sorting them.
    bool strict_order = false;
};

CandleSeries parse_candles(std::istream& in, const ParseOptions& opts = {});

/// Canonical CSV: header `timestamp,open,high,low,close,volume`, shortest round-trip decimals.
void write_candles(std::ostream& out, const CandleSeries& series);

/// Split boundaries. Candles with timestamp <= train_end go to train,
/// train_end < ts <= validation_end to validation, the rest to test.
struct SplitSpec {
    Timestamp train_end = 0;
    Timestamp validation_end = 0;
};

struct DatasetSplit {
    CandleSeries train;
    CandleSeries validation;
    CandleSeries test;
};

DatasetSplit split_dataset(const CandleSeries& series, const SplitSpec& spec);

/// Parses `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM[:SS][Z]` or a plain integer epoch.
Timestamp parse_iso8601(const std::string& text);
std::string format_iso8601(Timestamp ts);

struct SyntheticSpec {
    std::uint64_t seed = 0;
    std::size_t n = 5000;
    double drift = 0.0;         // per-bar mean log-return
    double volatility = 0.006;  // per-bar log-return stddev
    double start_price = 10000.0;
    Timestamp start_timestamp = 1502942400;  // 2017-08-17T04:00:00Z
    std::int64_t interval = kHourSeconds;
    /// Stationary stddev of the AR(1) log-volatility factor; 0 gives a constant-volatility walk.
    double vol_of_vol = 0.0;
    double vol_persistence = 0.999;
    std::string symbol = "SYNTH";
};

/// Seeded geometric random walk. open = previous close, and high/low envelope
/// the bar with a random intrabar excursion scaled by the bar's volatility.
CandleSeries generate_synthetic_series(const SyntheticSpec& spec);

}  // namespace kellybet
