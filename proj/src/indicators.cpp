#include "kellybet/indicators.hpp"

#include "kellybet/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace kellybet {

std::size_t ValueSeries::defined_count() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

std::size_t ValueSeries::first_defined() const {
    auto it = std::find_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
    return static_cast<std::size_t>(it - values.begin());
}

SmaState::SmaState(int n) : n_(n) {
    if (n < 1) throw ConfigError("period must be >= 1");
}

std::optional<double> SmaState::push(std::optional<double> x) {
    if (!x) return std::nullopt;
    window_.push_back(*x);
    if (static_cast<int>(window_.size()) > n_) window_.pop_front();
    if (static_cast<int>(window_.size()) < n_) return std::nullopt;
    double sum = 0.0;
    for (double v : window_) sum += v;
    return sum / n_;
}

EmaState::EmaState(int n) : n_(n), alpha_(2.0 / (n + 1.0)) {
    if (n < 1) throw ConfigError("period must be >= 1");
}

std::optional<double> EmaState::push(std::optional<double> x) {
    if (!x) return std::nullopt;
    if (value_) {
        value_ = alpha_ * *x + (1.0 - alpha_) * *value_;
        return value_;
    }
    seed_sum_ += *x;
    if (++seen_ == n_) value_ = seed_sum_ / n_;
    return value_;
}

ValueSeries smooth(const ValueSeries& values, SmoothKind kind, int n) {
    ValueSeries out;
    out.name = std::string(kind == SmoothKind::Sma ? "SMA_" : "EMA_") + std::to_string(n) + "(" +
               values.name + ")";
    out.timestamps = values.timestamps;
    out.values.reserve(values.size());
    if (kind == SmoothKind::Sma) {
        SmaState s(n);
        for (const auto& v : values.values) out.values.push_back(s.push(v));
    } else {
        EmaState s(n);
        for (const auto& v : values.values) out.values.push_back(v ? s.push(v) : std::nullopt);
    }
    return out;
}

namespace {

struct KindName {
    IndicatorKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {IndicatorKind::Trix, "TRIX"},          {IndicatorKind::Macd, "MACD"},
    {IndicatorKind::Ppo, "PPO"},            {IndicatorKind::Roc, "ROC"},
    {IndicatorKind::EfiRatio, "EFI_RATIO"}, {IndicatorKind::EfiStandard, "EFI_STANDARD"},
    {IndicatorKind::Cmo, "CMO"},            {IndicatorKind::Rsi, "RSI"},
    {IndicatorKind::Cci, "CCI"},            {IndicatorKind::WilliamsR, "WILLIAMS_R"},
    {IndicatorKind::Cmf, "CMF"},
};

bool two_period(IndicatorKind k) { return k == IndicatorKind::Macd || k == IndicatorKind::Ppo; }

}  // namespace

std::string_view to_string(IndicatorKind kind) {
    for (const auto& kn : kKindNames) {
        if (kn.kind == kind) return kn.name;
    }
    return "UNKNOWN";
}

IndicatorKind parse_indicator_kind(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (upper == "EFI") return IndicatorKind::EfiRatio;
    if (upper == "WILLIAMSR" || upper == "WILLR") return IndicatorKind::WilliamsR;
    for (const auto& kn : kKindNames) {
        if (kn.name == upper) return kn.kind;
    }
    throw ConfigError("unknown indicator kind '" + std::string(name) + "'");
}

IndicatorSpec::IndicatorSpec(IndicatorKind kind, std::vector<int> periods)
    : kind_(kind), periods_(std::move(periods)) {
    const std::size_t arity = two_period(kind_) ? 2 : 1;
    if (periods_.size() != arity) {
        throw ConfigError(std::string(to_string(kind_)) + " takes " + std::to_string(arity) +
                          " period(s)");
    }
    for (int p : periods_) {
        if (p < 1) throw ConfigError("indicator periods must be >= 1");
    }
    if (arity == 2 && periods_[0] >= periods_[1]) {
        throw ConfigError(std::string(to_string(kind_)) + " fast period must be below slow period");
    }
}

std::string IndicatorSpec::name() const {
    std::string out(to_string(kind_));
    for (int p : periods_) out += "_" + std::to_string(p);
    return out;
}

std::size_t IndicatorSpec::warmup() const {
    const auto n = static_cast<std::size_t>(periods_.back());
    switch (kind_) {
        case IndicatorKind::Trix: return 3 * n - 2;
        case IndicatorKind::Macd:
        case IndicatorKind::Ppo: return n - 1;
        case IndicatorKind::Roc:
        case IndicatorKind::EfiRatio:
        case IndicatorKind::EfiStandard:
        case IndicatorKind::Cmo:
        case IndicatorKind::Rsi: return n;
        case IndicatorKind::Cci:
        case IndicatorKind::WilliamsR:
        case IndicatorKind::Cmf: return n - 1;
    }
    return n;
}

IndicatorStream::IndicatorStream(IndicatorSpec spec)
    : spec_(std::move(spec)),
      capacity_(static_cast<std::size_t>(spec_.periods().back()) + 1),
      ema_a_(spec_.period(0)),
      ema_b_(spec_.periods().back()),
      ema_c_(spec_.period(0)) {}

std::optional<double> IndicatorStream::push(const Candle& c) {
    history_.push_back(c);
    if (history_.size() > capacity_) history_.pop_front();
    const auto size = history_.size();
    const int n = spec_.periods().back();
    const auto window = static_cast<std::size_t>(n);

    switch (spec_.kind()) {
        case IndicatorKind::Trix: {
            auto e3 = ema_c_.push(ema_b_.push(ema_a_.push(c.close)));
            std::optional<double> out;
            if (e3 && prev_trix_) out = (*e3 - *prev_trix_) / *prev_trix_ * 100.0;
            if (e3) prev_trix_ = e3;
            return out;
        }
        case IndicatorKind::Macd:
        case IndicatorKind::Ppo: {
            auto fast = ema_a_.push(c.close);
            auto slow = ema_b_.push(c.close);
            if (!fast || !slow) return std::nullopt;
            if (spec_.kind() == IndicatorKind::Macd) return *fast - *slow;
            if (*slow == 0.0) return std::nullopt;
            return (*fast - *slow) / *slow * 100.0;
        }
        case IndicatorKind::Roc: {
            if (size <= window) return std::nullopt;
            const double past = history_.front().close;
            return (c.close - past) / past * 100.0;
        }
        case IndicatorKind::EfiRatio: {
            if (size <= window) return std::nullopt;
            if (c.volume == 0.0) return std::nullopt;
            const auto& past = history_.front();
            return (c.close - past.close) * (c.volume - past.volume) / c.volume;
        }
        case IndicatorKind::EfiStandard: {
            if (size < 2) return std::nullopt;
            const double force = (c.close - history_[size - 2].close) * c.volume;
            return ema_b_.push(force);
        }
        case IndicatorKind::Cmo:
        case IndicatorKind::Rsi: {
            if (size <= window) return std::nullopt;
            double gains = 0.0, losses = 0.0;
            for (std::size_t i = 1; i < size; ++i) {
                const double d = history_[i].close - history_[i - 1].close;
                if (d > 0) gains += d;
                else losses -= d;
            }
            if (spec_.kind() == IndicatorKind::Cmo) {
                if (gains + losses == 0.0) return 0.0;
                return (gains - losses) / (gains + losses) * 100.0;
            }
            const double avg_up = gains / n;
            const double avg_down = losses / n;
            if (avg_down == 0.0) return 100.0;
            return 100.0 - 100.0 / (1.0 + avg_up / avg_down);
        }
        case IndicatorKind::Cci: {
            if (size < window) return std::nullopt;
            const std::size_t first = size - window;
            auto typical = [&](std::size_t i) {
                return (history_[i].high + history_[i].low + history_[i].close) / 3.0;
            };
            double mean = 0.0;
            for (std::size_t i = first; i < size; ++i) mean += typical(i);
            mean /= n;
            double dev = 0.0;
            for (std::size_t i = first; i < size; ++i) dev += std::abs(typical(i) - mean);
            dev /= n;
            if (dev == 0.0) return 0.0;
            return (typical(size - 1) - mean) / (0.015 * dev);
        }
        case IndicatorKind::WilliamsR: {
            if (size < window) return std::nullopt;
            double hi = history_[size - window].high, lo = history_[size - window].low;
            for (std::size_t i = size - window; i < size; ++i) {
                hi = std::max(hi, history_[i].high);
                lo = std::min(lo, history_[i].low);
            }
            if (hi == lo) return std::nullopt;
            return (hi - c.close) / (hi - lo) * -100.0;
        }
        case IndicatorKind::Cmf: {
            if (size < window) return std::nullopt;
            double flow = 0.0, volume = 0.0;
            for (std::size_t i = size - window; i < size; ++i) {
                const auto& k = history_[i];
                if (k.high == k.low) return std::nullopt;
                const double mfm = ((k.close - k.low) - (k.high - k.close)) / (k.high - k.low);
                flow += mfm * k.volume;
                volume += k.volume;
            }
            if (volume == 0.0) return std::nullopt;
            return flow / volume;
        }
    }
    return std::nullopt;
}

ValueSeries compute_indicator(const CandleSeries& series, const IndicatorSpec& spec) {
    ValueSeries out;
    out.name = spec.name();
    out.timestamps = series.timestamps();
    out.values.reserve(series.size());
    IndicatorStream stream(spec);
    for (const auto& c : series.candles()) out.values.push_back(stream.push(c));
    return out;
}

std::vector<IndicatorSpec> default_indicator_grid() {
    std::vector<IndicatorSpec> grid;
    grid.push_back(IndicatorSpec::macd());
    grid.push_back(IndicatorSpec::ppo());
    for (int n : {7, 14, 28}) {
        for (auto kind : {IndicatorKind::Trix, IndicatorKind::Roc, IndicatorKind::EfiRatio,
                          IndicatorKind::Cmo, IndicatorKind::Rsi, IndicatorKind::Cci,
                          IndicatorKind::WilliamsR, IndicatorKind::Cmf}) {
            grid.emplace_back(kind, std::vector<int>{n});
        }
    }
    return grid;
}

}  // namespace kellybet
