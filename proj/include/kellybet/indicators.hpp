#pragma once

#include "kellybet/market_data.hpp"

#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kellybet {

/// A named series aligned to candle timestamps; warm-up entries are std::nullopt.
struct ValueSeries {
    std::string name;
    std::vector<Timestamp> timestamps;
    std::vector<std::optional<double>> values;

    std::size_t size() const noexcept { return values.size(); }
    std::size_t defined_count() const;
    /// Index of the first defined value, or size() when none is defined.
    std::size_t first_defined() const;
};

enum class SmoothKind { Sma, Ema };

/// Incremental simple moving average over the last n defined inputs.
/// Undefined inputs are skipped and produce an undefined output.
class SmaState {
public:
    explicit SmaState(int n);
    std::optional<double> push(std::optional<double> x);

private:
    int n_;
    std::deque<double> window_;
};

/// Incremental EMA with alpha = 2/(n+1), seeded by the SMA of the first n defined inputs.
class EmaState {
public:
    explicit EmaState(int n);
    std::optional<double> push(std::optional<double> x);
    std::optional<double> value() const { return value_; }

private:
    int n_;
    double alpha_;
    int seen_ = 0;
    double seed_sum_ = 0.0;
    std::optional<double> value_;
};

ValueSeries smooth(const ValueSeries& values, SmoothKind kind, int n);

enum class IndicatorKind {
    Trix,
    Macd,
    Ppo,
    Roc,
    EfiRatio,     // Force / Volume with Force = Δclose · Δvolume over n bars
    EfiStandard,  // EMA((close_t - close_{t-1}) · volume_t, n)
    Cmo,
    Rsi,
    Cci,
    WilliamsR,
    Cmf,
};

std::string_view to_string(IndicatorKind kind);
/// Accepts the canonical names (TRIX, MACD, PPO, ROC, EFI_RATIO, EFI_STANDARD, CMO,
/// RSI, CCI, WILLIAMS_R, CMF) case-insensitively, plus the alias EFI for EFI_RATIO.
IndicatorKind parse_indicator_kind(std::string_view name);

/// Indicator kind plus its periods. MACD and PPO take (fast, slow); the rest take one period.
class IndicatorSpec {
public:
    IndicatorSpec(IndicatorKind kind, std::vector<int> periods);

    static IndicatorSpec macd() { return {IndicatorKind::Macd, {12, 26}}; }
    static IndicatorSpec ppo() { return {IndicatorKind::Ppo, {12, 26}}; }

    IndicatorKind kind() const noexcept { return kind_; }
    const std::vector<int>& periods() const noexcept { return periods_; }
    int period(std::size_t i = 0) const { return periods_.at(i); }

    /// Column name, e.g. "RSI_14" or "MACD_12_26".
    std::string name() const;
    /// Number of leading bars with undefined output.
    std::size_t warmup() const;

    bool operator==(const IndicatorSpec&) const = default;

private:
    IndicatorKind kind_;
    std::vector<int> periods_;
};

/// Streaming evaluator: push candles in order, get the indicator value for the latest bar.
class IndicatorStream {
public:
    explicit IndicatorStream(IndicatorSpec spec);
    std::optional<double> push(const Candle& c);
    const IndicatorSpec& spec() const noexcept { return spec_; }

private:
    IndicatorSpec spec_;
    std::size_t capacity_;
    std::deque<Candle> history_;
    EmaState ema_a_;
    EmaState ema_b_;
    EmaState ema_c_;
    std::optional<double> prev_trix_;
};

ValueSeries compute_indicator(const CandleSeries& series, const IndicatorSpec& spec);

/// Default feature grid: every kind over a small set of periods.
std::vector<IndicatorSpec> default_indicator_grid();

}  // namespace kellybet
