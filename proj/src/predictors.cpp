#include "kellybet/predictors.hpp"

#include "kellybet/csv.hpp"
#include "kellybet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace kellybet {

double clip_probability(double p) { return std::clamp(p, kMinProbability, kMaxProbability); }

namespace {

/// correct[i] is true for exactly round(hit_rate * n) positions chosen by a seeded shuffle.
std::vector<bool> assign_correctness(std::size_t n, double hit_rate, std::mt19937_64& rng) {
    const auto n_correct = static_cast<std::size_t>(std::llround(hit_rate * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> correct(n, false);
    for (std::size_t k = 0; k < n_correct; ++k) correct[order[k]] = true;
    return correct;
}

void require_labels(const LabelSet& labels) {
    if (labels.size() == 0) throw ConfigError("label set is empty");
}

void require_open_unit(double x, const char* what) {
    if (!(x > 0 && x <= 1)) throw ConfigError(std::string(what) + " must lie in (0, 1]");
}

}  // namespace

std::vector<DirectionPrediction> simulate_balanced(const LabelSet& labels, std::uint64_t seed,
                                                   double hit_rate, double p_const) {
    require_labels(labels);
    require_open_unit(hit_rate, "hit_rate");
    if (!(p_const > 0 && p_const < 1)) throw ConfigError("p_const must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    const auto correct = assign_correctness(labels.size(), hit_rate, rng);
    std::vector<DirectionPrediction> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int call = correct[i] ? labels.direction[i] : -labels.direction[i];
        out.push_back({labels.timestamps[i], call > 0 ? p_const : 1.0 - p_const, call});
    }
    return out;
}

std::vector<DirectionPrediction> simulate_optimal(const LabelSet& labels) {
    require_labels(labels);
    std::vector<DirectionPrediction> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int call = labels.direction[i];
        out.push_back({labels.timestamps[i], call > 0 ? 0.8 : 0.2, call});
    }
    return out;
}

std::vector<DirectionPrediction> simulate_gaussian(const LabelSet& labels, std::uint64_t seed,
                                                   const GaussianSimParams& params) {
    require_labels(labels);
    require_open_unit(params.hit_rate, "hit_rate");
    if (!(0 < params.mu_short && params.mu_short < 0.5 && 0.5 < params.mu_long && params.mu_long < 1)) {
        throw ConfigError("gaussian simulator needs 0 < mu_short < 0.5 < mu_long < 1");
    }
    if (!(params.sigma > 0)) throw ConfigError("sigma must be positive");
    std::mt19937_64 rng(seed);
    const auto correct = assign_correctness(labels.size(), params.hit_rate, rng);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<DirectionPrediction> out;
    out.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int call = correct[i] ? labels.direction[i] : -labels.direction[i];
        const double mu = call > 0 ? params.mu_long : params.mu_short;
        out.push_back({labels.timestamps[i], clip_probability(mu + params.sigma * noise(rng)), call});
    }
    return out;
}

LoadedPredictions load_predictions(std::istream& in, const CandleSeries* series) {
    auto lines = csv::read_lines(in);
    if (lines.empty()) throw DataError("empty prediction file: header row required");
    auto header = csv::split(lines.front().text);
    auto find = [&](std::string_view name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto ts_col = find("timestamp");
    const auto p_col = find("p_up");
    if (!ts_col || !p_col) throw DataError("prediction file needs 'timestamp' and 'p_up' columns", 1);
    const auto a_col = find("a");
    const auto b_col = find("b");
    const bool with_estimates = a_col && b_col;
    const auto dir_col = find("direction");

    LoadedPredictions out;
    if (with_estimates) out.estimates.emplace();
    Timestamp last = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& line = lines[k];
        auto f = csv::split(line.text);
        auto field = [&](std::size_t col) {
            if (col >= f.size()) throw DataError("missing field", line.number);
            return f[col];
        };
        const auto ts = csv::parse_int(field(*ts_col), line.number);
        const double p = csv::parse_double(field(*p_col), line.number);
        if (!(p > 0 && p < 1)) throw DataError("p_up must lie in (0, 1)", line.number);
        if (k > 1 && ts <= last) throw DataError("timestamps must be strictly increasing", line.number);
        if (series && !series->index_of(ts)) {
            throw DataError("timestamp " + std::to_string(ts) + " not present in the candle series",
                            line.number);
        }
        last = ts;
        int direction = p > 0.5 ? 1 : -1;
        if (dir_col) {
            direction = static_cast<int>(csv::parse_int(field(*dir_col), line.number));
            if (direction != 1 && direction != -1) throw DataError("direction must be 1 or -1", line.number);
        }
        out.predictions.push_back({ts, p, direction});
        if (with_estimates) {
            const double a = csv::parse_double(field(*a_col), line.number);
            const double b = csv::parse_double(field(*b_col), line.number);
            if (!(a > 0) || !(b > 0)) throw DataError("a and b must be positive", line.number);
            out.estimates->push_back({ts, a, b});
        }
    }
    return out;
}

std::vector<ScenarioEstimate> estimate_scenarios(const CandleSeries& series, std::size_t horizon,
                                                 std::size_t window) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (window < 10 * horizon) throw ConfigError("window must be at least 10 * horizon");
    std::vector<ScenarioEstimate> out;
    if (series.size() < window) return out;

    // returns[s] = forward return starting at s, realised at s + horizon.
    std::vector<double> returns(series.size() - horizon);
    for (std::size_t s = 0; s < returns.size(); ++s) {
        returns[s] = (series[s + horizon].close - series[s].close) / series[s].close;
    }

    out.reserve(series.size() - window + 1);
    for (std::size_t t = window - 1; t < series.size(); ++t) {
        // Starts s in [t - window + 1, t - horizon]: realised by t, inside the window.
        double pos_sum = 0.0, neg_sum = 0.0;
        std::size_t pos_n = 0, neg_n = 0;
        for (std::size_t s = t + 1 - window; s + horizon <= t; ++s) {
            if (returns[s] > 0) {
                pos_sum += returns[s];
                ++pos_n;
            } else if (returns[s] < 0) {
                neg_sum += returns[s];
                ++neg_n;
            }
        }
        const double up = pos_n ? pos_sum / static_cast<double>(pos_n) : 0.0;
        const double down = neg_n ? -neg_sum / static_cast<double>(neg_n) : 0.0;
        out.push_back({series[t].timestamp, std::max(up, kMinMoveEstimate),
                       std::max(down, kMinMoveEstimate)});
    }
    return out;
}

std::vector<ScenarioEstimate> constant_scenarios(const CandleSeries& series, double up, double down) {
    if (!(up > 0) || !(down > 0)) throw ConfigError("constant estimates must be positive");
    std::vector<ScenarioEstimate> out;
    out.reserve(series.size());
    for (const auto& c : series.candles()) out.push_back({c.timestamp, up, down});
    return out;
}

std::size_t count_correct(const std::vector<DirectionPrediction>& predictions, const LabelSet& labels) {
    const auto n = std::min(predictions.size(), labels.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (predictions[i].direction == labels.direction[i]) ++hits;
    }
    return hits;
}

}  // namespace kellybet
