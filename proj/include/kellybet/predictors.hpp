#pragma once

#include "kellybet/features.hpp"
#include "kellybet/market_data.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <vector>

namespace kellybet {

inline constexpr double kMinProbability = 0.01;
inline constexpr double kMaxProbability = 0.99;
inline constexpr double kMinMoveEstimate = 0.001;

struct DirectionPrediction {
    Timestamp timestamp = 0;
    double p_up = 0.5;  // probability of an upward move over the horizon
    /// The predictor's directional call (+1 / -1). Simulators record the call they
    /// assigned; for loaded predictions it is +1 iff p_up > 0.5.
    int direction = 1;

    bool operator==(const DirectionPrediction&) const = default;
};

/// Dual-scenario move estimates: `up` is the expected fractional rise if the market
/// goes up, `down` the magnitude of the expected fall if it goes down.
struct ScenarioEstimate {
    Timestamp timestamp = 0;
    double up = kMinMoveEstimate;
    double down = kMinMoveEstimate;

    bool operator==(const ScenarioEstimate&) const = default;
};

double clip_probability(double p);

/// Exactly round(hit_rate * n) calls agree with the label (chosen by a seeded
/// shuffle). Predicted-up calls get p_up = p_const, predicted-down calls 1 - p_const.
std::vector<DirectionPrediction> simulate_balanced(const LabelSet& labels, std::uint64_t seed,
                                                   double hit_rate = 0.6, double p_const = 0.6);

/// Always-correct calls: p_up = 0.8 on up labels, 0.2 on down labels.
std::vector<DirectionPrediction> simulate_optimal(const LabelSet& labels);

struct GaussianSimParams {
    double mu_long = 0.6;
    double mu_short = 0.4;
    double sigma = 0.1;
    double hit_rate = 0.6;
};

/// Same exact-count correctness assignment as simulate_balanced for a given seed;
/// p_up drawn from Normal(mu_long, sigma) for up calls and Normal(mu_short, sigma)
/// for down calls, clipped to [0.01, 0.99].
std::vector<DirectionPrediction> simulate_gaussian(const LabelSet& labels, std::uint64_t seed,
                                                   const GaussianSimParams& params = {});

struct LoadedPredictions {
    std::vector<DirectionPrediction> predictions;
    std::optional<std::vector<ScenarioEstimate>> estimates;  // present iff both a and b columns exist
};

/// CSV `timestamp,p_up[,direction][,a,b]`; direction defaults to +1 iff p_up > 0.5.
/// When `series` is given every timestamp must be one of its bars.
LoadedPredictions load_predictions(std::istream& in, const CandleSeries* series = nullptr);

/// Causal volatility-based estimate: at bar t, over the horizon-bar forward returns
/// that start and end inside the trailing window [t - window + 1, t], `up` is the mean
/// positive return and `down` the magnitude of the mean negative return, floored at 0.001.
/// Bars without a full trailing window are omitted.
std::vector<ScenarioEstimate> estimate_scenarios(const CandleSeries& series, std::size_t horizon,
                                                 std::size_t window);

/// Constant estimates for every bar (config override for the volatility stand-in).
std::vector<ScenarioEstimate> constant_scenarios(const CandleSeries& series, double up, double down);

/// Number of predictions whose call matches the label at the same position.
std::size_t count_correct(const std::vector<DirectionPrediction>& predictions, const LabelSet& labels);

}  // namespace kellybet
