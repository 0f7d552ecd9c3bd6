#pragma once

#include "kellybet/market_data.hpp"

#include <string_view>
#include <vector>

namespace kellybet {

enum class VerticalRule { Zero, Sign };
enum class HitKind { Upper, Lower, Vertical };

struct BarrierConfig {
    double up_pct = 0.02;
    double down_pct = 0.02;
    std::size_t horizon = 5;
    VerticalRule vertical_rule = VerticalRule::Sign;
    /// When one bar spans both barriers: false resolves to the barrier nearer the
    /// bar's open, true always resolves to the lower barrier.
    bool pessimistic_ambiguous = false;

    void validate() const;
};

struct BarrierLabel {
    int label = 0;            // -1, 0, +1
    std::size_t hit_bar = 0;  // offset from the entry bar
    HitKind hit_kind = HitKind::Vertical;
    /// Both barriers fell inside the deciding bar; hit_kind holds the resolution.
    bool ambiguous = false;

    bool operator==(const BarrierLabel&) const = default;
};

std::string_view to_string(HitKind kind);
std::string_view to_string(VerticalRule rule);
VerticalRule parse_vertical_rule(std::string_view text);

/// First-touch barrier label for an entry at `entry` (close price). Throws ConfigError
/// if entry + horizon is past the end of the series.
BarrierLabel triple_barrier_label(const CandleSeries& series, std::size_t entry, const BarrierConfig& cfg);

struct IndexedLabel {
    std::size_t index;
    BarrierLabel label;
};

/// Labels every stride-th entry (starting at 0) whose full horizon lies inside the series.
std::vector<IndexedLabel> label_series(const CandleSeries& series, const BarrierConfig& cfg,
                                       std::size_t stride);

}  // namespace kellybet
