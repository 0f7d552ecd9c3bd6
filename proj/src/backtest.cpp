#include "kellybet/backtest.hpp"

#include "kellybet/error.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <unordered_map>

namespace kellybet {

void BacktestConfig::validate() const {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (!(fee_rate >= 0)) throw ConfigError("fee_rate must be non-negative");
    if (!(initial_bankroll > 0)) throw ConfigError("initial_bankroll must be positive");
    if (!(ruin_floor >= 0 && ruin_floor < 1)) throw ConfigError("ruin_floor must lie in [0, 1)");
}

namespace {

template <typename T>
std::vector<std::optional<T>> align(const CandleSeries& series, const std::vector<T>& items, const char* what) {
    std::vector<std::optional<T>> out(series.size());
    for (const auto& item : items) {
        auto idx = series.index_of(item.timestamp);
        if (!idx) {
            throw DataError(std::string(what) + " timestamp " + std::to_string(item.timestamp) +
                            " is not a bar of the series");
        }
        out[*idx] = item;
    }
    return out;
}

/// Applies one trade's pnl to the bankroll; returns true once ruin is reached.
bool compound(double& bankroll, Trade& t, const BacktestConfig& cfg) {
    bankroll = std::max(0.0, bankroll * (1.0 + t.pnl_fraction));
    t.bankroll_after = bankroll;
    return bankroll <= cfg.ruin_floor * cfg.initial_bankroll;
}

}  // namespace

BacktestResult run_backtest(const CandleSeries& series, const std::vector<DirectionPrediction>& predictions,
                            const std::vector<ScenarioEstimate>& estimates, const SizingPolicy& policy,
                            const BacktestConfig& cfg) {
    cfg.validate();
    policy.validate();
    const auto preds = align(series, predictions, "prediction");
    const auto ests = align(series, estimates, "estimate");

    std::size_t first = series.size();
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (preds[i] && ests[i]) {
            first = i;
            break;
        }
    }

    BacktestResult out;
    out.strategy = policy.label();
    const double exposure_scale = 1.0 / static_cast<double>(cfg.concurrency());
    double bankroll = cfg.initial_bankroll;
    for (std::size_t i = first; i + cfg.horizon < series.size(); i += cfg.stride) {
        if (!preds[i] || !ests[i]) continue;
        const auto decision = decide(*preds[i], *ests[i], policy);
        Trade t;
        t.entry_ts = series[i].timestamp;
        t.exit_ts = series[i + cfg.horizon].timestamp;
        t.fraction = decision.fraction * exposure_scale;
        t.side = decision.side;
        t.entry_price = series[i].close;
        t.exit_price = series[i + cfg.horizon].close;
        t.realized_return = (t.exit_price - t.entry_price) / t.entry_price;
        t.pnl_fraction = t.fraction * t.realized_return - 2.0 * cfg.fee_rate * std::abs(t.fraction);
        if (out.curve.empty()) out.curve.points.push_back({t.entry_ts, bankroll});
        const bool ruined = compound(bankroll, t, cfg);
        out.curve.points.push_back({t.exit_ts, bankroll});
        out.trades.push_back(t);
        if (ruined) {
            out.ruined = true;
            break;
        }
    }
    if (out.trades.empty()) throw InsufficientData("no usable decisions: predictions/estimates do not cover the series");
    return out;
}

BacktestReport make_report(const BacktestResult& result, const BacktestConfig& cfg) {
    auto r = report_from_curve(result.curve, result.strategy, cfg.rf_monthly);
    r.trade_count = result.trades.size();
    std::size_t active = 0, wins = 0;
    for (const auto& t : result.trades) {
        if (t.side == Side::Flat) continue;
        ++active;
        wins += t.pnl_fraction > 0;
    }
    r.win_rate = active ? static_cast<double>(wins) / static_cast<double>(active) : 0.0;
    r.ruin = result.ruined;
    return r;
}

std::vector<PolicyRun> compare_strategies(const CandleSeries& series,
                                          const std::vector<DirectionPrediction>& predictions,
                                          const std::vector<ScenarioEstimate>& estimates,
                                          const std::vector<SizingPolicy>& policies, const BacktestConfig& cfg) {
    if (policies.empty()) throw ConfigError("at least one policy is required");
    std::vector<PolicyRun> out;
    out.reserve(policies.size());
    for (const auto& policy : policies) {
        auto result = run_backtest(series, predictions, estimates, policy, cfg);
        auto report = make_report(result, cfg);
        out.push_back({policy, std::move(result), std::move(report)});
    }
    return out;
}

std::string_view to_string(Simulator sim) {
    switch (sim) {
        case Simulator::Balanced: return "balanced";
        case Simulator::Optimal: return "optimal";
        case Simulator::Gaussian: return "gaussian";
    }
    return "?";
}

Simulator parse_simulator(std::string_view text) {
    if (text == "balanced") return Simulator::Balanced;
    if (text == "optimal") return Simulator::Optimal;
    if (text == "gaussian") return Simulator::Gaussian;
    throw ConfigError("simulator must be one of balanced, optimal, gaussian");
}

std::vector<DirectionPrediction> simulate(const LabelSet& labels, const SimulationSpec& spec, std::uint64_t seed) {
    switch (spec.simulator) {
        case Simulator::Balanced: return simulate_balanced(labels, seed, spec.hit_rate, spec.p_const);
        case Simulator::Optimal: return simulate_optimal(labels);
        case Simulator::Gaussian: {
            auto params = spec.gaussian;
            params.hit_rate = spec.hit_rate;
            return simulate_gaussian(labels, seed, params);
        }
    }
    throw ConfigError("unknown simulator");
}

std::vector<BatchRow> run_simulation_batch(const CandleSeries& series, const LabelSet& labels,
                                           const std::vector<ScenarioEstimate>& estimates,
                                           const SimulationSpec& spec, const std::vector<std::uint64_t>& seeds,
                                           const std::vector<SizingPolicy>& policies,
                                           const BacktestConfig& cfg) {
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    std::vector<std::future<std::vector<PolicyRun>>> jobs;
    jobs.reserve(seeds.size());
    for (auto seed : seeds) {
        jobs.push_back(std::async(std::launch::async, [&, seed] {
            const auto predictions = simulate(labels, spec, seed);
            return compare_strategies(series, predictions, estimates, policies, cfg);
        }));
    }
    std::vector<std::vector<PolicyRun>> per_seed;
    per_seed.reserve(seeds.size());
    for (auto& job : jobs) per_seed.push_back(job.get());

    std::vector<BatchRow> rows;
    rows.reserve(seeds.size() * policies.size());
    for (std::size_t p = 0; p < policies.size(); ++p) {
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            BatchRow row{seeds[s], std::move(per_seed[s][p])};
            row.run.report.seed = seeds[s];
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

BacktestResult buy_and_hold(const CandleSeries& series, const BacktestConfig& cfg) {
    cfg.validate();
    if (series.size() < 2) throw InsufficientData("buy-and-hold needs at least two bars");
    BacktestResult out;
    out.strategy = "buy_and_hold";
    const double first = series.front().close;
    for (const auto& c : series.candles()) {
        out.curve.points.push_back({c.timestamp, cfg.initial_bankroll * c.close / first});
    }
    Trade t;
    t.entry_ts = series.front().timestamp;
    t.exit_ts = series.back().timestamp;
    t.side = Side::Long;
    t.fraction = 1.0;
    t.entry_price = first;
    t.exit_price = series.back().close;
    t.realized_return = (t.exit_price - first) / first;
    t.pnl_fraction = t.realized_return - 2.0 * cfg.fee_rate;
    t.bankroll_after = out.curve.points.back().bankroll;
    out.trades.push_back(t);
    return out;
}

BacktestResult barrier_benchmark(const CandleSeries& series, const std::vector<DirectionPrediction>& predictions,
                                 const BarrierConfig& barriers, double size, const BacktestConfig& cfg) {
    cfg.validate();
    barriers.validate();
    if (!(size >= 0)) throw ConfigError("position size must be non-negative");
    const auto preds = align(series, predictions, "prediction");

    BacktestResult out;
    out.strategy = "triple_barrier";
    double bankroll = cfg.initial_bankroll;
    std::size_t next_free = 0;
    for (std::size_t i = 0; i + barriers.horizon < series.size(); i += cfg.stride) {
        if (i < next_free || !preds[i]) continue;
        const double p = preds[i]->p_up;
        if (p == 0.5) continue;
        const auto label = triple_barrier_label(series, i, barriers);
        const auto& exit_bar = series[i + label.hit_bar];
        const double entry = series[i].close;
        double exit = exit_bar.close;
        if (label.hit_kind == HitKind::Upper) {
            exit = std::max(entry * (1.0 + barriers.up_pct), exit_bar.open);
        } else if (label.hit_kind == HitKind::Lower) {
            exit = std::min(entry * (1.0 - barriers.down_pct), exit_bar.open);
        }
        Trade t;
        t.entry_ts = series[i].timestamp;
        t.exit_ts = exit_bar.timestamp;
        t.fraction = p > 0.5 ? size : -size;
        t.side = t.fraction > 0 ? Side::Long : (t.fraction < 0 ? Side::Short : Side::Flat);
        t.entry_price = entry;
        t.exit_price = exit;
        t.realized_return = (exit - entry) / entry;
        t.pnl_fraction = t.fraction * t.realized_return - 2.0 * cfg.fee_rate * std::abs(t.fraction);
        if (out.curve.empty()) out.curve.points.push_back({t.entry_ts, bankroll});
        const bool ruined = compound(bankroll, t, cfg);
        out.curve.points.push_back({t.exit_ts, bankroll});
        out.trades.push_back(t);
        next_free = i + label.hit_bar;
        if (ruined) {
            out.ruined = true;
            break;
        }
    }
    if (out.trades.empty()) throw InsufficientData("barrier benchmark made no trades");
    return out;
}

}  // namespace kellybet
