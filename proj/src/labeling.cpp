#include "kellybet/labeling.hpp"

#include "kellybet/error.hpp"

#include <cmath>

namespace kellybet {

void BarrierConfig::validate() const {
    if (!(up_pct > 0) || !(down_pct > 0)) throw ConfigError("barrier distances must be positive");
    if (!(down_pct < 1)) throw ConfigError("down_pct must be below 1");
    if (horizon < 1) throw ConfigError("barrier horizon must be >= 1");
}

std::string_view to_string(HitKind kind) {
    switch (kind) {
        case HitKind::Upper: return "UPPER";
        case HitKind::Lower: return "LOWER";
        case HitKind::Vertical: return "VERTICAL";
    }
    return "?";
}

std::string_view to_string(VerticalRule rule) { return rule == VerticalRule::Zero ? "ZERO" : "SIGN"; }

VerticalRule parse_vertical_rule(std::string_view text) {
    if (text == "zero" || text == "ZERO") return VerticalRule::Zero;
    if (text == "sign" || text == "SIGN") return VerticalRule::Sign;
    throw ConfigError("vertical rule must be zero or sign");
}

BarrierLabel triple_barrier_label(const CandleSeries& series, std::size_t entry, const BarrierConfig& cfg) {
    cfg.validate();
    if (entry + cfg.horizon >= series.size()) {
        throw ConfigError("barrier horizon extends past the end of the series");
    }
    const double entry_price = series[entry].close;
    const double upper = entry_price * (1.0 + cfg.up_pct);
    const double lower = entry_price * (1.0 - cfg.down_pct);

    for (std::size_t k = 1; k <= cfg.horizon; ++k) {
        const auto& bar = series[entry + k];
        const bool hit_up = bar.high >= upper;
        const bool hit_down = bar.low <= lower;
        if (hit_up && hit_down) {
            bool up_first = false;
            if (!cfg.pessimistic_ambiguous) {
                up_first = std::abs(bar.open - upper) < std::abs(bar.open - lower);
            }
            return up_first ? BarrierLabel{1, k, HitKind::Upper, true}
                            : BarrierLabel{-1, k, HitKind::Lower, true};
        }
        if (hit_up) return {1, k, HitKind::Upper, false};
        if (hit_down) return {-1, k, HitKind::Lower, false};
    }

    int label = 0;
    if (cfg.vertical_rule == VerticalRule::Sign) {
        label = series[entry + cfg.horizon].close > entry_price ? 1 : -1;
    }
    return {label, cfg.horizon, HitKind::Vertical, false};
}

std::vector<IndexedLabel> label_series(const CandleSeries& series, const BarrierConfig& cfg,
                                       std::size_t stride) {
    if (stride < 1) throw ConfigError("stride must be >= 1");
    cfg.validate();
    std::vector<IndexedLabel> out;
    for (std::size_t i = 0; i + cfg.horizon < series.size(); i += stride) {
        out.push_back({i, triple_barrier_label(series, i, cfg)});
    }
    return out;
}

}  // namespace kellybet
