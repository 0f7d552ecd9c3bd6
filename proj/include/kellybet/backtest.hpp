#pragma once

#include "kellybet/features.hpp"
#include "kellybet/labeling.hpp"
#include "kellybet/market_data.hpp"
#include "kellybet/metrics.hpp"
#include "kellybet/predictors.hpp"
#include "kellybet/sizing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kellybet {

struct BacktestConfig {
    std::size_t horizon = kDefaultHorizon;
    std::size_t stride = kDefaultHorizon;  // stride < horizon opens overlapping positions
    double fee_rate = 0.0;                 // per side, on notional
    double initial_bankroll = 1.0;
    double ruin_floor = 0.01;  // fraction of the initial bankroll
    double rf_monthly = 0.0;

    void validate() const;
    /// Positions open at the same time; each one's exposure is divided by this.
    std::size_t concurrency() const { return (horizon + stride - 1) / stride; }
};

struct Trade {
    Timestamp entry_ts = 0;
    Timestamp exit_ts = 0;
    Side side = Side::Flat;
    double fraction = 0.0;
    double entry_price = 0.0;
    double exit_price = 0.0;
    double realized_return = 0.0;  // (exit - entry) / entry
    double pnl_fraction = 0.0;     // fraction * realized_return - 2 * fee_rate * |fraction|
    double bankroll_after = 0.0;

    bool operator==(const Trade&) const = default;
};

struct BacktestResult {
    std::string strategy;
    EquityCurve curve;
    std::vector<Trade> trades;
    bool ruined = false;
};

/// Decisions are taken on a fixed grid: every `stride` bars starting at the first bar
/// that has both a prediction and an estimate. Grid bars without inputs are skipped.
/// Each position is entered at the decision bar's close and exited at the close
/// `horizon` bars later; the bankroll compounds at each exit.
BacktestResult run_backtest(const CandleSeries& series, const std::vector<DirectionPrediction>& predictions,
                            const std::vector<ScenarioEstimate>& estimates, const SizingPolicy& policy,
                            const BacktestConfig& cfg);

/// Trade statistics plus curve metrics.
BacktestReport make_report(const BacktestResult& result, const BacktestConfig& cfg);

struct PolicyRun {
    SizingPolicy policy;
    BacktestResult result;
    BacktestReport report;
};

/// Runs every policy on the same inputs (and therefore the same decision grid).
std::vector<PolicyRun> compare_strategies(const CandleSeries& series,
                                          const std::vector<DirectionPrediction>& predictions,
                                          const std::vector<ScenarioEstimate>& estimates,
                                          const std::vector<SizingPolicy>& policies, const BacktestConfig& cfg);

enum class Simulator { Balanced, Optimal, Gaussian };
std::string_view to_string(Simulator sim);
Simulator parse_simulator(std::string_view text);

struct SimulationSpec {
    Simulator simulator = Simulator::Balanced;
    double hit_rate = 0.6;
    double p_const = 0.6;
    GaussianSimParams gaussian;
};

std::vector<DirectionPrediction> simulate(const LabelSet& labels, const SimulationSpec& spec,
                                          std::uint64_t seed);

struct BatchRow {
    std::uint64_t seed = 0;
    PolicyRun run;
};

/// One compare_strategies call per seed, run concurrently. Rows are ordered by
/// policy (in the given order) and then by seed.
std::vector<BatchRow> run_simulation_batch(const CandleSeries& series, const LabelSet& labels,
                                           const std::vector<ScenarioEstimate>& estimates,
                                           const SimulationSpec& spec, const std::vector<std::uint64_t>& seeds,
                                           const std::vector<SizingPolicy>& policies,
                                           const BacktestConfig& cfg);

/// Passive benchmark: bankroll tracks close / first close.
BacktestResult buy_and_hold(const CandleSeries& series, const BacktestConfig& cfg);

/// Barrier-exit benchmark: takes the predicted side with a constant `size`, exits at the
/// first barrier touch (take-profit on the favourable side, stop-loss on the other) or at
/// the vertical barrier. Positions do not overlap.
BacktestResult barrier_benchmark(const CandleSeries& series, const std::vector<DirectionPrediction>& predictions,
                                 const BarrierConfig& barriers, double size, const BacktestConfig& cfg);

}  // namespace kellybet
