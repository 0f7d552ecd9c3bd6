#pragma once

#include "kellybet/backtest.hpp"
#include "kellybet/features.hpp"
#include "kellybet/indicators.hpp"
#include "kellybet/labeling.hpp"
#include "kellybet/metrics.hpp"
#include "kellybet/predictors.hpp"

#include <json.hpp>

#include <istream>
#include <optional>
#include <ostream>
#include <vector>

namespace kellybet::io {

using nlohmann::json;

void write_value_series(std::ostream& out, const std::vector<ValueSeries>& columns);
void write_feature_matrix(std::ostream& out, const FeatureMatrix& m);
void write_labels(std::ostream& out, const LabelSet& labels);
/// `timestamp,label,hit_kind,hit_bar`; hit_kind is AMBIGUOUS when one bar spanned both barriers.
void write_barrier_labels(std::ostream& out, const CandleSeries& series, const std::vector<IndexedLabel>& labels);
void write_predictions(std::ostream& out, const std::vector<DirectionPrediction>& predictions,
                       const std::vector<ScenarioEstimate>* estimates = nullptr);
void write_trades(std::ostream& out, const std::vector<Trade>& trades);
void write_equity(std::ostream& out, const EquityCurve& curve);
EquityCurve read_equity(std::istream& in);

void write_reports_csv(std::ostream& out, const std::vector<BacktestReport>& reports);
/// Columns: Strategy, Cumulative Return, Max Drawdown, Sharpe Ratio, RoMaD.
void write_performance_table(std::ostream& out, const std::vector<BacktestReport>& reports);

json to_json(const NormStats& stats);
NormStats norm_stats_from_json(const json& j);
json to_json(const BacktestReport& report);
json to_json(const ClassificationReport& report);
json to_json(const RegressionReport& report);
json to_json(const SizingPolicy& policy);
json to_json(const BacktestConfig& cfg);

void write_confusion_matrix(std::ostream& out, const ClassificationReport& report);
void write_pr_curve(std::ostream& out, const std::vector<PrPoint>& points);

/// `[{"kind": "RSI", "periods": [14]}, ...]`
std::vector<IndicatorSpec> indicator_grid_from_json(const json& j);
json to_json(const std::vector<IndicatorSpec>& grid);

}  // namespace kellybet::io
