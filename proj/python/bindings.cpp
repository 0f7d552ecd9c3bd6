#include "kellybet/backtest.hpp"
#include "kellybet/error.hpp"
#include "kellybet/features.hpp"
#include "kellybet/indicators.hpp"
#include "kellybet/labeling.hpp"
#include "kellybet/metrics.hpp"
#include "kellybet/predictors.hpp"
#include "kellybet/sizing.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

namespace py = pybind11;
using namespace kellybet;

namespace {

CandleSeries read_candles(const std::string& path, const std::string& symbol, bool millis, bool strict_order) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ParseOptions opts;
    opts.symbol = symbol;
    opts.timestamps_in_millis = millis;
    opts.strict_order = strict_order;
    return parse_candles(in, opts);
}

EquityCurve curve_from(const std::vector<std::pair<Timestamp, double>>& points) {
    EquityCurve c;
    for (const auto& [t, v] : points) c.points.push_back({t, v});
    return c;
}

std::vector<std::pair<Timestamp, double>> curve_points(const EquityCurve& c) {
    std::vector<std::pair<Timestamp, double>> out;
    for (const auto& p : c.points) out.emplace_back(p.timestamp, p.bankroll);
    return out;
}

}  // namespace

PYBIND11_MODULE(_kellybet, m) {
    m.doc() = "Direction-prediction bet sizing and backtesting";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_ValueError);

    py::class_<Candle>(m, "Candle")
        .def(py::init<Timestamp, double, double, double, double, double>(), py::arg("timestamp"), py::arg("open"),
             py::arg("high"), py::arg("low"), py::arg("close"), py::arg("volume"))
        .def_readonly("timestamp", &Candle::timestamp)
        .def_readonly("open", &Candle::open)
        .def_readonly("high", &Candle::high)
        .def_readonly("low", &Candle::low)
        .def_readonly("close", &Candle::close)
        .def_readonly("volume", &Candle::volume)
        .def("__repr__", [](const Candle& c) {
            return "Candle(" + format_iso8601(c.timestamp) + ", close=" + std::to_string(c.close) + ")";
        });

    py::class_<CandleSeries>(m, "CandleSeries")
        .def(py::init<std::string, std::vector<Candle>, std::int64_t>(), py::arg("symbol"), py::arg("candles"),
             py::arg("interval") = kHourSeconds)
        .def_property_readonly("symbol", &CandleSeries::symbol)
        .def_property_readonly("interval", &CandleSeries::interval)
        .def_property_readonly("gaps", &CandleSeries::gaps)
        .def("__len__", &CandleSeries::size)
        .def("__getitem__", [](const CandleSeries& s, std::size_t i) {
            if (i >= s.size()) throw py::index_error();
            return s[i];
        })
        .def("timestamps", &CandleSeries::timestamps)
        .def("closes", &CandleSeries::closes)
        .def("slice", &CandleSeries::slice);

    m.def("read_candles", &read_candles, py::arg("path"), py::arg("symbol") = "BTCUSDT", py::arg("millis") = false,
          py::arg("strict_order") = false);
    m.def(
        "write_candles",
        [](const CandleSeries& s, const std::string& path) {
            std::ofstream out(path);
            write_candles(out, s);
        },
        py::arg("series"), py::arg("path"));
    m.def(
        "synthetic_series",
        [](std::uint64_t seed, std::size_t n, double drift, double volatility, double vol_of_vol,
           double vol_persistence) {
            SyntheticSpec spec;
            spec.seed = seed;
            spec.n = n;
            spec.drift = drift;
            spec.volatility = volatility;
            spec.vol_of_vol = vol_of_vol;
            spec.vol_persistence = vol_persistence;
            return generate_synthetic_series(spec);
        },
        py::arg("seed") = 0, py::arg("n") = 5000, py::arg("drift") = 0.0, py::arg("volatility") = 0.006,
        py::arg("vol_of_vol") = 0.0, py::arg("vol_persistence") = 0.999);
    m.def("parse_iso8601", &parse_iso8601);
    m.def("format_iso8601", &format_iso8601);

    m.def(
        "indicator",
        [](const CandleSeries& s, const std::string& kind, std::vector<int> periods) {
            return compute_indicator(s, IndicatorSpec(parse_indicator_kind(kind), std::move(periods))).values;
        },
        py::arg("series"), py::arg("kind"), py::arg("periods"),
        "Indicator values aligned to the series; None during warm-up.");

    py::class_<LabelSet>(m, "LabelSet")
        .def_readonly("horizon", &LabelSet::horizon)
        .def_readonly("timestamps", &LabelSet::timestamps)
        .def_readonly("direction", &LabelSet::direction)
        .def_readonly("price_change", &LabelSet::price_change)
        .def("__len__", &LabelSet::size);
    m.def("make_labels", &make_labels, py::arg("series"), py::arg("horizon") = kDefaultHorizon);

    m.def(
        "triple_barrier_label",
        [](const CandleSeries& s, std::size_t entry, double up_pct, double down_pct, std::size_t horizon,
           const std::string& vertical_rule, bool pessimistic) {
            BarrierConfig cfg{up_pct, down_pct, horizon, parse_vertical_rule(vertical_rule), pessimistic};
            cfg.validate();
            const auto l = triple_barrier_label(s, entry, cfg);
            py::dict d;
            d["label"] = l.label;
            d["hit_bar"] = l.hit_bar;
            d["hit_kind"] = std::string(to_string(l.hit_kind));
            d["ambiguous"] = l.ambiguous;
            return d;
        },
        py::arg("series"), py::arg("entry"), py::arg("up_pct") = 0.02, py::arg("down_pct") = 0.02,
        py::arg("horizon") = 5, py::arg("vertical_rule") = "sign", py::arg("pessimistic") = false);

    py::class_<DirectionPrediction>(m, "DirectionPrediction")
        .def(py::init<Timestamp, double, int>(), py::arg("timestamp"), py::arg("p_up"), py::arg("direction"))
        .def_readonly("timestamp", &DirectionPrediction::timestamp)
        .def_readonly("p_up", &DirectionPrediction::p_up)
        .def_readonly("direction", &DirectionPrediction::direction);
    py::class_<ScenarioEstimate>(m, "ScenarioEstimate")
        .def(py::init<Timestamp, double, double>(), py::arg("timestamp"), py::arg("up"), py::arg("down"))
        .def_readonly("timestamp", &ScenarioEstimate::timestamp)
        .def_readonly("up", &ScenarioEstimate::up)
        .def_readonly("down", &ScenarioEstimate::down);

    m.def(
        "simulate",
        [](const LabelSet& labels, const std::string& sim, std::uint64_t seed, double hit_rate, double p_const,
           double sigma) {
            SimulationSpec spec;
            spec.simulator = parse_simulator(sim);
            spec.hit_rate = hit_rate;
            spec.p_const = p_const;
            spec.gaussian.sigma = sigma;
            spec.gaussian.hit_rate = hit_rate;
            return simulate(labels, spec, seed);
        },
        py::arg("labels"), py::arg("sim") = "balanced", py::arg("seed") = 0, py::arg("hit_rate") = 0.6,
        py::arg("p_const") = 0.6, py::arg("sigma") = 0.1);
    m.def("estimate_scenarios", &estimate_scenarios, py::arg("series"), py::arg("horizon") = kDefaultHorizon,
          py::arg("window") = 200);

    m.def("kelly_fraction", &kelly_fraction, py::arg("p"), py::arg("up"), py::arg("down"));
    m.def("log_optimal_kelly_fraction", &log_optimal_kelly_fraction, py::arg("p"), py::arg("up"), py::arg("down"));
    m.def("kelly_log_growth", &kelly_log_growth, py::arg("p"), py::arg("up"), py::arg("down"), py::arg("f"));
    m.def("gaussian_bet_size", &gaussian_bet_size, py::arg("p_up"), py::arg("expected") = 0.5);

    py::class_<SizingPolicy>(m, "SizingPolicy")
        .def(py::init([](const std::string& kind, double kelly_fraction, double max_leverage, double expected,
                         double modifier, const std::string& formula) {
                 SizingPolicy p{parse_policy_kind(kind), kelly_fraction, max_leverage, expected, modifier,
                                parse_kelly_formula(formula)};
                 p.validate();
                 return p;
             }),
             py::arg("kind") = "kelly", py::arg("kelly_fraction") = 1.0, py::arg("max_leverage") = 5.0,
             py::arg("expected") = 0.5, py::arg("modifier") = 1.0, py::arg("formula") = "reference")
        .def_property_readonly("label", &SizingPolicy::label)
        .def(
            "decide",
            [](const SizingPolicy& p, double p_up, double up, double down) {
                return decide({0, p_up, p_up > 0.5 ? 1 : -1}, {0, up, down}, p).fraction;
            },
            py::arg("p_up"), py::arg("up"), py::arg("down"), "Signed position fraction for one bet.");

    py::class_<BacktestReport>(m, "BacktestReport")
        .def_readonly("strategy", &BacktestReport::strategy)
        .def_readonly("cumulative_return_pct", &BacktestReport::cumulative_return_pct)
        .def_readonly("max_drawdown_pct", &BacktestReport::max_drawdown_pct)
        .def_readonly("sharpe", &BacktestReport::sharpe)
        .def_readonly("romad", &BacktestReport::romad)
        .def_readonly("months", &BacktestReport::months)
        .def_readonly("trade_count", &BacktestReport::trade_count)
        .def_readonly("win_rate", &BacktestReport::win_rate)
        .def_readonly("ruin", &BacktestReport::ruin);

    m.def(
        "backtest",
        [](const CandleSeries& s, const std::vector<DirectionPrediction>& preds,
           const std::vector<ScenarioEstimate>& estimates, const SizingPolicy& policy, std::size_t horizon,
           std::size_t stride, double fee) {
            BacktestConfig cfg;
            cfg.horizon = horizon;
            cfg.stride = stride ? stride : horizon;
            cfg.fee_rate = fee;
            cfg.validate();
            const auto result = run_backtest(s, preds, estimates, policy, cfg);
            return py::make_tuple(make_report(result, cfg), curve_points(result.curve));
        },
        py::arg("series"), py::arg("predictions"), py::arg("estimates"), py::arg("policy"),
        py::arg("horizon") = kDefaultHorizon, py::arg("stride") = 0, py::arg("fee") = 0.0,
        "Returns (report, [(timestamp, bankroll), ...]).");

    m.def(
        "max_drawdown", [](const std::vector<std::pair<Timestamp, double>>& pts) { return max_drawdown(curve_from(pts)); },
        py::arg("curve"));
    m.def(
        "cumulative_return",
        [](const std::vector<std::pair<Timestamp, double>>& pts) { return cumulative_return(curve_from(pts)); },
        py::arg("curve"));
    m.def(
        "sharpe_ratio", [](const std::vector<double>& r, double rf) { return sharpe_ratio(r, rf).value; },
        py::arg("returns"), py::arg("rf") = 0.0);
}
