#include "kellybet/features.hpp"

#include "kellybet/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace kellybet {

std::size_t FeatureMatrix::column_index(const std::string& name) const {
    auto it = std::find(column_names.begin(), column_names.end(), name);
    if (it == column_names.end()) throw ConfigError("no feature column '" + name + "'");
    return static_cast<std::size_t>(it - column_names.begin());
}

FeatureMatrix build_feature_matrix(const CandleSeries& series, const std::vector<IndicatorSpec>& grid,
                                   const PriceModelOptions& price_model) {
    if (grid.empty()) throw ConfigError("indicator grid is empty");

    std::vector<ValueSeries> columns;
    columns.reserve(grid.size() + price_model.lags + 1);
    for (const auto& spec : grid) columns.push_back(compute_indicator(series, spec));

    if (price_model.enabled) {
        const auto h = price_model.horizon;
        if (h < 1) throw ConfigError("price-model horizon must be >= 1");
        const auto ts = series.timestamps();
        for (std::size_t lag = 0; lag < price_model.lags; ++lag) {
            ValueSeries col;
            col.name = "price_change_" + std::to_string(h) + "h_lag" + std::to_string(lag);
            col.timestamps = ts;
            col.values.resize(series.size());
            const auto end_offset = lag * h;
            for (std::size_t t = end_offset + h; t < series.size(); ++t) {
                const double now = series[t - end_offset].close;
                const double then = series[t - end_offset - h].close;
                col.values[t] = (now - then) / then;
            }
            columns.push_back(std::move(col));
        }
        ValueSeries dir;
        dir.name = kMarketDirectionColumn;
        dir.timestamps = ts;
        dir.values.assign(series.size(), 0.0);
        columns.push_back(std::move(dir));
    }

    FeatureMatrix m;
    for (const auto& c : columns) m.column_names.push_back(c.name);
    bool started = false;
    for (std::size_t t = 0; t < series.size(); ++t) {
        std::vector<double> row;
        row.reserve(columns.size());
        for (const auto& c : columns) {
            if (!c.values[t]) break;
            row.push_back(*c.values[t]);
        }
        if (row.size() != columns.size()) {
            if (started) ++m.interior_rows_dropped;
            continue;
        }
        started = true;
        m.timestamps.push_back(series[t].timestamp);
        m.rows.push_back(std::move(row));
    }
    if (m.rows.empty()) throw InsufficientData("feature matrix is empty after warm-up truncation");
    return m;
}

FeatureMatrix set_market_direction(FeatureMatrix m, int direction) {
    if (direction != 1 && direction != -1) throw ConfigError("market direction must be +1 or -1");
    const auto col = m.column_index(kMarketDirectionColumn);
    for (auto& row : m.rows) row[col] = direction;
    return m;
}

NormStats fit_normalizer(const FeatureMatrix& m, Timestamp train_begin, Timestamp train_end) {
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        if (m.timestamps[i] >= train_begin && m.timestamps[i] <= train_end) train.push_back(i);
    }
    if (train.size() < 2) throw InsufficientData("normalizer needs at least 2 training rows");

    const auto cols = m.column_count();
    NormStats s;
    s.columns = m.column_names;
    s.mean.assign(cols, 0.0);
    s.stddev.assign(cols, 0.0);
    s.zero_variance.assign(cols, false);
    const double n = static_cast<double>(train.size());
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0;
        for (auto i : train) sum += m.rows[i][j];
        const double mean = sum / n;
        double ss = 0.0;
        for (auto i : train) ss += (m.rows[i][j] - mean) * (m.rows[i][j] - mean);
        s.mean[j] = mean;
        s.stddev[j] = std::sqrt(ss / (n - 1.0));
        s.zero_variance[j] = s.stddev[j] == 0.0;
    }
    return s;
}

FeatureMatrix apply_normalizer(FeatureMatrix m, const NormStats& stats) {
    if (stats.columns != m.column_names) throw ConfigError("normalizer columns do not match the matrix");
    for (auto& row : m.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] = stats.zero_variance[j] ? 0.0 : (row[j] - stats.mean[j]) / stats.stddev[j];
        }
    }
    m.norm_stats = stats;
    return m;
}

LabelSet make_labels(const CandleSeries& series, std::size_t horizon) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (series.size() <= horizon) throw InsufficientData("series shorter than the label horizon");
    LabelSet out;
    out.horizon = horizon;
    const auto n = series.size() - horizon;
    out.timestamps.reserve(n);
    out.direction.reserve(n);
    out.price_change.reserve(n);
    out.weight.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double now = series[t].close;
        const double change = (series[t + horizon].close - now) / now;
        out.timestamps.push_back(series[t].timestamp);
        out.price_change.push_back(change);
        out.direction.push_back(change > 0 ? 1 : -1);
        out.weight.push_back(std::abs(change));
    }
    return out;
}

LabelSet normalize_weights(LabelSet labels) {
    if (labels.weight.empty()) return labels;
    double sum = 0.0;
    for (double w : labels.weight) sum += w;
    if (sum == 0.0) return labels;
    const double scale = static_cast<double>(labels.weight.size()) / sum;
    for (double& w : labels.weight) w *= scale;
    return labels;
}

}  // namespace kellybet
