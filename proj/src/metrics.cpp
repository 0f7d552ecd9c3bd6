#include "kellybet/metrics.hpp"

#include "kellybet/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace kellybet {

namespace {

void require_points(const EquityCurve& curve) {
    if (curve.empty()) throw InsufficientData("equity curve is empty");
}

std::pair<int, unsigned> calendar_month(Timestamp ts) {
    using namespace std::chrono;
    const std::chrono::year_month_day ymd{floor<days>(sys_seconds{seconds{ts}})};
    return {int(ymd.year()), unsigned(ymd.month())};
}

}  // namespace

double cumulative_return(const EquityCurve& curve) {
    require_points(curve);
    const double start = curve.points.front().bankroll;
    return (curve.points.back().bankroll - start) / start * 100.0;
}

double max_drawdown(const EquityCurve& curve) {
    require_points(curve);
    double peak = curve.points.front().bankroll;
    double worst = 0.0;
    for (const auto& p : curve.points) {
        peak = std::max(peak, p.bankroll);
        worst = std::max(worst, (peak - p.bankroll) / peak);
    }
    return worst * 100.0;
}

std::vector<MonthlyReturn> monthly_returns(const EquityCurve& curve) {
    require_points(curve);
    std::vector<MonthlyReturn> out;
    double base = curve.points.front().bankroll;
    auto current = calendar_month(curve.points.front().timestamp);
    double last = base;
    for (const auto& p : curve.points) {
        const auto month = calendar_month(p.timestamp);
        if (month != current) {
            out.push_back({current.first, current.second, last / base - 1.0});
            base = last;
            current = month;
        }
        last = p.bankroll;
    }
    out.push_back({current.first, current.second, last / base - 1.0});
    return out;
}

SharpeResult sharpe_ratio(std::span<const double> returns, double rf) {
    if (returns.size() < 2) throw InsufficientData("Sharpe ratio needs at least two periods");
    const double n = static_cast<double>(returns.size());
    double sum = 0.0;
    for (double r : returns) sum += r;
    const double mean = sum / n;
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    SharpeResult out;
    out.months = returns.size();
    // Relative threshold: identical returns can still leave rounding residue.
    if (sd == 0.0 || sd <= 1e-12 * std::abs(mean)) return out;
    out.value = (mean - rf) / sd;
    return out;
}

SharpeResult sharpe_monthly(const EquityCurve& curve, double rf_monthly) {
    const auto months = monthly_returns(curve);
    std::vector<double> values;
    values.reserve(months.size());
    for (const auto& m : months) values.push_back(m.value);
    return sharpe_ratio(values, rf_monthly);
}

std::optional<double> romad(const EquityCurve& curve) {
    const double dd = max_drawdown(curve) / 100.0;
    if (dd == 0.0) return std::nullopt;
    const auto months = monthly_returns(curve);
    double sum = 0.0;
    for (const auto& m : months) sum += m.value;
    return sum / static_cast<double>(months.size()) / dd;
}

BacktestReport report_from_curve(const EquityCurve& curve, std::string strategy, double rf_monthly) {
    BacktestReport r;
    r.strategy = std::move(strategy);
    r.cumulative_return_pct = cumulative_return(curve);
    r.max_drawdown_pct = max_drawdown(curve);
    r.months = monthly_returns(curve).size();
    if (r.months >= 2) {
        auto s = sharpe_monthly(curve, rf_monthly);
        r.sharpe = s.value;
    }
    r.sharpe_undefined = !r.sharpe.has_value();
    r.romad = romad(curve);
    r.romad_na = !r.romad.has_value();
    return r;
}

namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
    ClassMetrics m;
    m.support = tp + fn;
    m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

std::vector<std::pair<double, int>> join_on_timestamp(const std::vector<DirectionPrediction>& predictions,
                                                      const LabelSet& labels) {
    std::unordered_map<Timestamp, int> by_ts;
    by_ts.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) by_ts.emplace(labels.timestamps[i], labels.direction[i]);
    std::vector<std::pair<double, int>> out;
    for (const auto& p : predictions) {
        auto it = by_ts.find(p.timestamp);
        if (it != by_ts.end()) out.emplace_back(p.p_up, it->second);
    }
    if (out.empty()) throw InsufficientData("predictions and labels share no timestamps");
    return out;
}

}  // namespace

ClassificationReport classification_report(const std::vector<DirectionPrediction>& predictions,
                                           const LabelSet& labels, double threshold) {
    const auto joined = join_on_timestamp(predictions, labels);
    ClassificationReport r;
    r.n = joined.size();
    double ll = 0.0;
    for (const auto& [p, label] : joined) {
        const bool actual_up = label > 0;
        const bool predicted_up = p > threshold;
        ll += actual_up ? std::log(p) : std::log1p(-p);
        if (actual_up && predicted_up) ++r.true_up;
        else if (actual_up) ++r.false_down;
        else if (predicted_up) ++r.false_up;
        else ++r.true_down;
    }
    const double n = static_cast<double>(r.n);
    r.logloss = -ll / n;
    r.accuracy = static_cast<double>(r.true_up + r.true_down) / n;
    r.up = class_metrics(r.true_up, r.false_up, r.false_down);
    r.down = class_metrics(r.true_down, r.false_down, r.false_up);
    r.macro_avg.precision = (r.up.precision + r.down.precision) / 2.0;
    r.macro_avg.recall = (r.up.recall + r.down.recall) / 2.0;
    r.macro_avg.f1 = (r.up.f1 + r.down.f1) / 2.0;
    r.macro_avg.support = r.n;
    const double wu = static_cast<double>(r.up.support) / n;
    const double wd = static_cast<double>(r.down.support) / n;
    r.weighted_avg.precision = wu * r.up.precision + wd * r.down.precision;
    r.weighted_avg.recall = wu * r.up.recall + wd * r.down.recall;
    r.weighted_avg.f1 = wu * r.up.f1 + wd * r.down.f1;
    r.weighted_avg.support = r.n;
    return r;
}

std::vector<PrPoint> precision_recall_curve(const std::vector<DirectionPrediction>& predictions,
                                            const LabelSet& labels) {
    auto joined = join_on_timestamp(predictions, labels);
    std::sort(joined.begin(), joined.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t positives = 0;
    for (const auto& j : joined) positives += j.second > 0;
    std::vector<PrPoint> out;
    std::size_t tp = 0, taken = 0;
    for (std::size_t i = 0; i < joined.size(); ++i) {
        ++taken;
        tp += joined[i].second > 0;
        if (i + 1 < joined.size() && joined[i + 1].first == joined[i].first) continue;
        out.push_back({joined[i].first, static_cast<double>(tp) / static_cast<double>(taken),
                       positives ? static_cast<double>(tp) / static_cast<double>(positives) : 0.0});
    }
    return out;
}

RegressionReport regression_report(std::span<const double> estimates, std::span<const double> actuals) {
    if (estimates.size() != actuals.size()) throw ConfigError("estimates and actuals differ in length");
    if (estimates.empty()) throw InsufficientData("regression report needs at least one sample");
    RegressionReport r;
    r.n = estimates.size();
    const double n = static_cast<double>(r.n);
    double abs_sum = 0.0, sq_sum = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) {
        const double e = estimates[i] - actuals[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
        mean += actuals[i];
    }
    mean /= n;
    double sst = 0.0;
    for (double a : actuals) sst += (a - mean) * (a - mean);
    r.mae = abs_sum / n;
    r.mse = sq_sum / n;
    r.rmse = std::sqrt(r.mse);
    if (sst > 0.0) r.r2 = 1.0 - sq_sum / sst;
    return r;
}

}  // namespace kellybet
