#pragma once

#include "kellybet/predictors.hpp"

#include <string>
#include <string_view>

namespace kellybet {

enum class PolicyKind { None, Kelly, Gaussian };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view text);

/// REFERENCE: p/up - q/down (default).
/// LOG_OPTIMAL: p/down - q/up, the stationary point of kelly_log_growth.
/// The two coincide when up == down.
enum class KellyFormula { Reference, LogOptimal };

std::string_view to_string(KellyFormula formula);
KellyFormula parse_kelly_formula(std::string_view text);

struct SizingPolicy {
    PolicyKind kind = PolicyKind::Kelly;
    double kelly_fraction = 1.0;  // 1 = full Kelly, 0.5 = half Kelly
    double max_leverage = 5.0;
    double expected = 0.5;  // baseline probability for Gaussian sizing
    double modifier = 1.0;  // constant scalar applied to every position
    KellyFormula kelly_formula = KellyFormula::Reference;

    void validate() const;
    /// "none", "gaussian", "kelly" ("kelly-logopt" for the log-optimal formula,
    /// "@0.5" suffix for fractional Kelly).
    std::string label() const;
};

enum class Side { Flat, Long, Short };
std::string_view to_string(Side side);

struct BetDecision {
    Timestamp timestamp = 0;
    double raw_fraction = 0.0;  // before scaling and clamping
    double fraction = 0.0;      // signed bankroll fraction actually held
    Side side = Side::Flat;
};

/// Kelly fraction p/up - (1-p)/down; positive means long, negative short.
double kelly_fraction(double p, double up, double down);

/// Maximiser of kelly_log_growth: p/down - (1-p)/up.
double log_optimal_kelly_fraction(double p, double up, double down);

/// Expected log growth p ln(1 + up f) + (1-p) ln(1 - down f).
double kelly_log_growth(double p, double up, double down, double f);

/// Standard normal CDF.
double normal_cdf(double z);

/// 2 Phi(z) - 1 with z = (p - e) / sqrt(p (1 - p)) for p above `expected`;
/// mirrored on 1 - p (and negated) for p below it; 0 at p == expected.
double gaussian_bet_size(double p_up, double expected = 0.5);

/// KELLY: clamp(kelly_fraction * f*, +-max_leverage) * modifier, f* per kelly_formula.
/// GAUSSIAN: gaussian_bet_size(p_up, expected) * modifier.
/// NONE: modifier * sign(p_up - 0.5).
BetDecision decide(const DirectionPrediction& prediction, const ScenarioEstimate& estimate,
                   const SizingPolicy& policy);

}  // namespace kellybet
