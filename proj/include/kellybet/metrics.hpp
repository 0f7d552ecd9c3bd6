#pragma once

#include "kellybet/features.hpp"
#include "kellybet/market_data.hpp"
#include "kellybet/predictors.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kellybet {

struct EquityPoint {
    Timestamp timestamp = 0;
    double bankroll = 0.0;

    bool operator==(const EquityPoint&) const = default;
};

struct EquityCurve {
    std::vector<EquityPoint> points;

    bool empty() const noexcept { return points.empty(); }
    std::size_t size() const noexcept { return points.size(); }
};

/// (V_end - V_start) / V_start * 100.
double cumulative_return(const EquityCurve& curve);

/// Largest peak-to-trough decline, in percent (>= 0).
double max_drawdown(const EquityCurve& curve);

struct MonthlyReturn {
    int year = 0;
    unsigned month = 0;
    double value = 0.0;  // fractional return over the calendar month
};

/// Calendar-month returns. Each month ends at its last curve point; the first
/// month is measured from the first point, so partial months are included.
std::vector<MonthlyReturn> monthly_returns(const EquityCurve& curve);

struct SharpeResult {
    std::optional<double> value;  // nullopt when the monthly returns have zero variance
    std::size_t months = 0;
};

/// (mean - rf) / sample stddev over the given periodic returns. Throws InsufficientData
/// for fewer than two returns.
SharpeResult sharpe_ratio(std::span<const double> returns, double rf = 0.0);

/// Monthly Sharpe ratio of the curve (not annualised).
SharpeResult sharpe_monthly(const EquityCurve& curve, double rf_monthly = 0.0);

/// Mean monthly return / max drawdown, both as fractions; nullopt when drawdown is 0.
std::optional<double> romad(const EquityCurve& curve);

struct BacktestReport {
    std::string strategy;
    std::optional<std::uint64_t> seed;
    double cumulative_return_pct = 0.0;
    double max_drawdown_pct = 0.0;
    std::optional<double> sharpe;
    std::optional<double> romad;
    std::size_t months = 0;
    std::size_t trade_count = 0;
    double win_rate = 0.0;
    bool ruin = false;
    bool romad_na = false;
    bool sharpe_undefined = false;
};

/// Fills the curve-based fields of a report; Sharpe is flagged undefined (not thrown)
/// when the curve spans fewer than two months or has zero variance.
BacktestReport report_from_curve(const EquityCurve& curve, std::string strategy, double rf_monthly = 0.0);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct ClassificationReport {
    std::size_t n = 0;
    double logloss = 0.0;
    double accuracy = 0.0;
    ClassMetrics down;  // class 0 (label -1)
    ClassMetrics up;    // class 1 (label +1)
    ClassMetrics macro_avg;
    ClassMetrics weighted_avg;
    // Confusion matrix, rows = actual, columns = predicted.
    std::size_t true_down = 0, false_up = 0, false_down = 0, true_up = 0;
};

/// Predictions and labels are joined on timestamp; predicted class is up iff p_up > threshold.
/// Precision/recall with an empty denominator are reported as 0.
ClassificationReport classification_report(const std::vector<DirectionPrediction>& predictions,
                                           const LabelSet& labels, double threshold = 0.5);

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Precision-recall points for the up class at every distinct p_up threshold (descending).
std::vector<PrPoint> precision_recall_curve(const std::vector<DirectionPrediction>& predictions,
                                            const LabelSet& labels);

struct RegressionReport {
    std::size_t n = 0;
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    std::optional<double> r2;  // nullopt when the actuals have zero variance
};

RegressionReport regression_report(std::span<const double> estimates, std::span<const double> actuals);

}  // namespace kellybet
