#include "kellybet/io.hpp"

#include "kellybet/csv.hpp"
#include "kellybet/error.hpp"

#include <cmath>
#include <cstdio>

namespace kellybet::io {

namespace {

using csv::format_double;

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

void write_value_series(std::ostream& out, const std::vector<ValueSeries>& columns) {
    if (columns.empty()) return;
    out << "timestamp";
    for (const auto& c : columns) out << ',' << c.name;
    out << '\n';
    for (std::size_t i = 0; i < columns.front().size(); ++i) {
        out << columns.front().timestamps[i];
        for (const auto& c : columns) out << ',' << optional_cell(c.values[i]);
        out << '\n';
    }
}

void write_feature_matrix(std::ostream& out, const FeatureMatrix& m) {
    out << "timestamp";
    for (const auto& name : m.column_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        out << m.timestamps[i];
        for (double v : m.rows[i]) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_labels(std::ostream& out, const LabelSet& labels) {
    out << "timestamp,direction,price_change,weight\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << labels.timestamps[i] << ',' << labels.direction[i] << ',' << format_double(labels.price_change[i])
            << ',' << format_double(labels.weight[i]) << '\n';
    }
}

void write_barrier_labels(std::ostream& out, const CandleSeries& series, const std::vector<IndexedLabel>& labels) {
    out << "timestamp,label,hit_kind,hit_bar\n";
    for (const auto& l : labels) {
        out << series[l.index].timestamp << ',' << l.label.label << ','
            << (l.label.ambiguous ? std::string_view("AMBIGUOUS") : to_string(l.label.hit_kind)) << ','
            << l.label.hit_bar << '\n';
    }
}

void write_predictions(std::ostream& out, const std::vector<DirectionPrediction>& predictions,
                       const std::vector<ScenarioEstimate>* estimates) {
    if (estimates && estimates->size() != predictions.size()) {
        throw ConfigError("predictions and estimates differ in length");
    }
    out << (estimates ? "timestamp,p_up,direction,a,b\n" : "timestamp,p_up,direction\n");
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        out << predictions[i].timestamp << ',' << format_double(predictions[i].p_up) << ',' << predictions[i].direction;
        if (estimates) out << ',' << format_double((*estimates)[i].up) << ',' << format_double((*estimates)[i].down);
        out << '\n';
    }
}

void write_trades(std::ostream& out, const std::vector<Trade>& trades) {
    out << "entry_ts,exit_ts,side,fraction,entry_price,exit_price,realized_return,pnl_fraction,bankroll\n";
    for (const auto& t : trades) {
        out << t.entry_ts << ',' << t.exit_ts << ',' << to_string(t.side) << ',' << format_double(t.fraction) << ','
            << format_double(t.entry_price) << ',' << format_double(t.exit_price) << ','
            << format_double(t.realized_return) << ',' << format_double(t.pnl_fraction) << ','
            << format_double(t.bankroll_after) << '\n';
    }
}

void write_equity(std::ostream& out, const EquityCurve& curve) {
    out << "timestamp,bankroll\n";
    for (const auto& p : curve.points) out << p.timestamp << ',' << format_double(p.bankroll) << '\n';
}

EquityCurve read_equity(std::istream& in) {
    auto lines = csv::read_lines(in);
    if (lines.empty()) throw DataError("empty equity file");
    auto header = csv::split(lines.front().text);
    if (header.size() < 2 || header[0] != "timestamp" || header[1] != "bankroll") {
        throw DataError("equity file needs header 'timestamp,bankroll'", lines.front().number);
    }
    EquityCurve curve;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto f = csv::split(lines[k].text);
        if (f.size() < 2) throw DataError("expected 2 fields", lines[k].number);
        const double v = csv::parse_double(f[1], lines[k].number);
        if (!(v > 0)) throw DataError("bankroll must be positive", lines[k].number);
        curve.points.push_back({csv::parse_int(f[0], lines[k].number), v});
    }
    return curve;
}

void write_reports_csv(std::ostream& out, const std::vector<BacktestReport>& reports) {
    out << "strategy,seed,cumulative_return_pct,max_drawdown_pct,sharpe_monthly,romad,months,trade_count,"
           "win_rate,flags\n";
    for (const auto& r : reports) {
        std::string flags;
        auto flag = [&](bool on, const char* name) {
            if (!on) return;
            if (!flags.empty()) flags += '|';
            flags += name;
        };
        flag(r.ruin, "RUIN");
        flag(r.romad_na, "ROMAD_NA");
        flag(r.sharpe_undefined, "SHARPE_UNDEFINED");
        out << r.strategy << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
            << format_double(r.cumulative_return_pct) << ',' << format_double(r.max_drawdown_pct) << ','
            << optional_cell(r.sharpe) << ',' << optional_cell(r.romad) << ',' << r.months << ',' << r.trade_count
            << ',' << format_double(r.win_rate) << ',' << flags << '\n';
    }
}

void write_performance_table(std::ostream& out, const std::vector<BacktestReport>& reports) {
    out << "Strategy,Cumulative Return,Max Drawdown,Sharpe Ratio,RoMaD\n";
    for (const auto& r : reports) {
        out << r.strategy << ',' << fixed(r.cumulative_return_pct, 2) << "%,"
            << (r.max_drawdown_pct > 0 ? "-" : "") << fixed(r.max_drawdown_pct, 2) << "%,"
            << (r.sharpe ? fixed(*r.sharpe, 2) : "N/A") << ',' << (r.romad ? fixed(*r.romad, 2) : "N/A") << '\n';
    }
}

json to_json(const NormStats& stats) {
    json j;
    j["columns"] = stats.columns;
    j["mean"] = stats.mean;
    j["stddev"] = stats.stddev;
    std::vector<bool> flags(stats.zero_variance.begin(), stats.zero_variance.end());
    j["zero_variance"] = flags;
    j["stddev_convention"] = "sample (n-1)";
    return j;
}

NormStats norm_stats_from_json(const json& j) {
    NormStats s;
    s.columns = j.at("columns").get<std::vector<std::string>>();
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("stddev").get<std::vector<double>>();
    s.zero_variance = j.at("zero_variance").get<std::vector<bool>>();
    const auto n = s.columns.size();
    if (s.mean.size() != n || s.stddev.size() != n || s.zero_variance.size() != n) {
        throw DataError("norm_stats arrays differ in length");
    }
    return s;
}

json to_json(const BacktestReport& r) {
    json j;
    j["strategy"] = r.strategy;
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    j["cumulative_return_pct"] = r.cumulative_return_pct;
    j["max_drawdown_pct"] = r.max_drawdown_pct;
    j["sharpe_monthly"] = optional_json(r.sharpe);
    j["romad"] = optional_json(r.romad);
    j["months"] = r.months;
    j["trade_count"] = r.trade_count;
    j["win_rate"] = r.win_rate;
    j["flags"] = {{"ruin", r.ruin}, {"romad_na", r.romad_na}, {"sharpe_undefined", r.sharpe_undefined}};
    return j;
}

namespace {
json class_json(const ClassMetrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}
}  // namespace

json to_json(const ClassificationReport& r) {
    json j;
    j["n"] = r.n;
    j["logloss"] = r.logloss;
    j["accuracy"] = r.accuracy;
    j["down"] = class_json(r.down);
    j["up"] = class_json(r.up);
    j["macro_avg"] = class_json(r.macro_avg);
    j["weighted_avg"] = class_json(r.weighted_avg);
    j["confusion"] = {{"true_down", r.true_down}, {"false_up", r.false_up},
                      {"false_down", r.false_down}, {"true_up", r.true_up}};
    return j;
}

json to_json(const RegressionReport& r) {
    return {{"n", r.n}, {"mae", r.mae}, {"mse", r.mse}, {"rmse", r.rmse}, {"r2", optional_json(r.r2)}};
}

json to_json(const SizingPolicy& p) {
    return {{"kind", std::string(to_string(p.kind))},
            {"kelly_fraction", p.kelly_fraction},
            {"max_leverage", p.max_leverage},
            {"expected", p.expected},
            {"modifier", p.modifier},
            {"kelly_formula", std::string(to_string(p.kelly_formula))}};
}

json to_json(const BacktestConfig& c) {
    return {{"horizon", c.horizon},         {"stride", c.stride},
            {"fee_rate", c.fee_rate},       {"initial_bankroll", c.initial_bankroll},
            {"ruin_floor", c.ruin_floor},   {"rf_monthly", c.rf_monthly}};
}

void write_confusion_matrix(std::ostream& out, const ClassificationReport& r) {
    out << "actual,predicted_down,predicted_up\n";
    out << "down," << r.true_down << ',' << r.false_up << '\n';
    out << "up," << r.false_down << ',' << r.true_up << '\n';
}

void write_pr_curve(std::ostream& out, const std::vector<PrPoint>& points) {
    out << "threshold,precision,recall\n";
    for (const auto& p : points) {
        out << format_double(p.threshold) << ',' << format_double(p.precision) << ',' << format_double(p.recall)
            << '\n';
    }
}

std::vector<IndicatorSpec> indicator_grid_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("indicator grid must be a JSON array");
    std::vector<IndicatorSpec> grid;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("kind") || !e.contains("periods")) {
            throw ConfigError("indicator grid entries need 'kind' and 'periods'");
        }
        try {
            grid.emplace_back(parse_indicator_kind(e["kind"].get<std::string>()),
                              e["periods"].get<std::vector<int>>());
        } catch (const json::exception& ex) {
            throw ConfigError(std::string("indicator grid entry: ") + ex.what());
        }
    }
    return grid;
}

json to_json(const std::vector<IndicatorSpec>& grid) {
    json j = json::array();
    for (const auto& s : grid) j.push_back({{"kind", std::string(to_string(s.kind()))}, {"periods", s.periods()}});
    return j;
}

}  // namespace kellybet::io
