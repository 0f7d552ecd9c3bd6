#include "kellybet/sizing.hpp"

#include "kellybet/error.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>

namespace kellybet {

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::None: return "none";
        case PolicyKind::Kelly: return "kelly";
        case PolicyKind::Gaussian: return "gaussian";
    }
    return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
    std::string text(name);
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text == "none") return PolicyKind::None;
    if (text == "kelly") return PolicyKind::Kelly;
    if (text == "gaussian") return PolicyKind::Gaussian;
    throw ConfigError("policy must be one of none, gaussian, kelly");
}

std::string_view to_string(Side side) {
    switch (side) {
        case Side::Flat: return "FLAT";
        case Side::Long: return "LONG";
        case Side::Short: return "SHORT";
    }
    return "?";
}

std::string_view to_string(KellyFormula formula) {
    return formula == KellyFormula::Reference ? "reference" : "log_optimal";
}

KellyFormula parse_kelly_formula(std::string_view name) {
    std::string text(name);
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text == "reference") return KellyFormula::Reference;
    if (text == "log_optimal" || text == "log-optimal") return KellyFormula::LogOptimal;
    throw ConfigError("kelly formula must be reference or log_optimal");
}

void SizingPolicy::validate() const {
    if (!(kelly_fraction > 0 && kelly_fraction <= 1)) throw ConfigError("kelly_fraction must lie in (0, 1]");
    if (!(max_leverage > 0)) throw ConfigError("max_leverage must be positive");
    if (!(expected > 0 && expected < 1)) throw ConfigError("expected must lie in (0, 1)");
    if (!(modifier >= 0) || !std::isfinite(modifier)) throw ConfigError("modifier must be non-negative");
}

std::string SizingPolicy::label() const {
    std::string out(to_string(kind));
    if (kind == PolicyKind::Kelly && kelly_formula == KellyFormula::LogOptimal) out += "-logopt";
    if (kind == PolicyKind::Kelly && kelly_fraction != 1.0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "@%g", kelly_fraction);
        out += buf;
    }
    return out;
}

double kelly_fraction(double p, double up, double down) {
    if (!(p > 0 && p < 1)) throw ConfigError("p must lie in (0, 1)");
    if (!(up > 0) || !(down > 0)) throw ConfigError("Kelly move estimates must be positive");
    return p / up - (1.0 - p) / down;
}

double log_optimal_kelly_fraction(double p, double up, double down) {
    if (!(p > 0 && p < 1)) throw ConfigError("p must lie in (0, 1)");
    if (!(up > 0) || !(down > 0)) throw ConfigError("Kelly move estimates must be positive");
    return p / down - (1.0 - p) / up;
}

double kelly_log_growth(double p, double up, double down, double f) {
    return p * std::log1p(up * f) + (1.0 - p) * std::log1p(-down * f);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double gaussian_bet_size(double p_up, double expected) {
    if (!(p_up > 0 && p_up < 1)) throw ConfigError("p_up must lie in (0, 1)");
    if (!(expected > 0 && expected < 1)) throw ConfigError("expected must lie in (0, 1)");
    if (p_up == expected) return 0.0;
    const bool long_side = p_up > expected;
    // Short side mirrors the long-side formula on q = 1 - p_up.
    const double p = long_side ? p_up : 1.0 - p_up;
    const double z = (p - expected) / std::sqrt(p * (1.0 - p));
    const double m = std::max(0.0, 2.0 * normal_cdf(z) - 1.0);
    return long_side ? m : -m;
}

BetDecision decide(const DirectionPrediction& prediction, const ScenarioEstimate& estimate,
                   const SizingPolicy& policy) {
    if (prediction.timestamp != estimate.timestamp) {
        throw ConfigError("prediction and estimate timestamps differ");
    }
    BetDecision d;
    d.timestamp = prediction.timestamp;
    switch (policy.kind) {
        case PolicyKind::Kelly: {
            d.raw_fraction = policy.kelly_formula == KellyFormula::Reference
                                 ? kelly_fraction(prediction.p_up, estimate.up, estimate.down)
                                 : log_optimal_kelly_fraction(prediction.p_up, estimate.up, estimate.down);
            const double scaled = policy.kelly_fraction * d.raw_fraction;
            d.fraction = std::clamp(scaled, -policy.max_leverage, policy.max_leverage) * policy.modifier;
            break;
        }
        case PolicyKind::Gaussian: {
            d.raw_fraction = gaussian_bet_size(prediction.p_up, policy.expected);
            d.fraction = std::clamp(d.raw_fraction, -policy.max_leverage, policy.max_leverage) *
                         policy.modifier;
            break;
        }
        case PolicyKind::None: {
            const double p = prediction.p_up;
            d.raw_fraction = p > 0.5 ? 1.0 : (p < 0.5 ? -1.0 : 0.0);
            d.fraction = std::clamp(d.raw_fraction, -policy.max_leverage, policy.max_leverage) *
                         policy.modifier;
            break;
        }
    }
    d.side = d.fraction > 0 ? Side::Long : (d.fraction < 0 ? Side::Short : Side::Flat);
    return d;
}

}  // namespace kellybet
