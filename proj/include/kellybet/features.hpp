#pragma once

#include "kellybet/indicators.hpp"
#include "kellybet/market_data.hpp"

#include <string>
#include <vector>

namespace kellybet {

inline constexpr std::size_t kDefaultHorizon = 5;

struct NormStats {
    std::vector<std::string> columns;
    std::vector<double> mean;
    std::vector<double> stddev;  // sample stddev (n - 1)
    std::vector<bool> zero_variance;
};

/// Normalized (or raw) features, one row per timestamp, no undefined cells.
struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::vector<Timestamp> timestamps;
    std::vector<std::vector<double>> rows;
    std::optional<NormStats> norm_stats;  // set once normalized
    /// Rows dropped after warm-up because some column was undefined (e.g. flat bars).
    std::size_t interior_rows_dropped = 0;

    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t column_count() const noexcept { return column_names.size(); }
    std::size_t column_index(const std::string& name) const;
};

struct PriceModelOptions {
    bool enabled = false;
    std::size_t horizon = kDefaultHorizon;
    std::size_t lags = 5;
};

inline constexpr const char* kMarketDirectionColumn = "market_direction";

/// One column per spec. With the price-model option, appends `lags` trailing
/// horizon-bar fractional price changes (non-overlapping blocks ending at t, t-h, ...)
/// and a market-direction column initialised to 0 and filled per scenario with
/// set_market_direction().
FeatureMatrix build_feature_matrix(const CandleSeries& series, const std::vector<IndicatorSpec>& grid,
                                   const PriceModelOptions& price_model = {});

/// Sets the market-direction column of every row to `direction` (+1 or -1).
FeatureMatrix set_market_direction(FeatureMatrix m, int direction);

/// Per-column mean and sample stddev over rows with train_begin <= ts <= train_end.
NormStats fit_normalizer(const FeatureMatrix& m, Timestamp train_begin, Timestamp train_end);

/// (x - mean) / stddev per column; zero-variance columns become 0.
FeatureMatrix apply_normalizer(FeatureMatrix m, const NormStats& stats);

struct LabelSet {
    std::size_t horizon = kDefaultHorizon;
    std::vector<Timestamp> timestamps;
    std::vector<int> direction;        // +1 / -1; zero change maps to -1
    std::vector<double> price_change;  // (close_{t+h} - close_t) / close_t
    std::vector<double> weight;        // |price_change|

    std::size_t size() const noexcept { return timestamps.size(); }
};

LabelSet make_labels(const CandleSeries& series, std::size_t horizon = kDefaultHorizon);

/// Rescales weights to mean 1 (no-op when every weight is 0).
LabelSet normalize_weights(LabelSet labels);

}  // namespace kellybet
