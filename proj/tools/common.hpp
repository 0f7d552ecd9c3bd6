#pragma once

#include "kellybet/backtest.hpp"
#include "kellybet/market_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kellybet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kMissingInput = 3,
    kConfig = 4,
    kData = 5,
};

struct MissingInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Relative paths that do not exist are looked up under $KELLYBET_DATA_DIR.
fs::path resolve_input(const std::string& path);

std::string sha256_file(const fs::path& path);

/// Raw command line, kept so the manifest can tell flag values from config-file values.
void remember_argv(int argc, const char* const* argv);

/// One output directory: collects inputs, seeds and artifacts, then writes manifest.json.
class Run {
public:
    Run(const CLI::App& command, const std::string& out_dir);

    const fs::path& dir() const { return dir_; }
    void add_input(const std::string& role, const fs::path& path);
    void add_seed(std::uint64_t seed) { seeds_.push_back(seed); }
    void note(const std::string& key, json value) { notes_[key] = std::move(value); }
    void write(const std::string& name, const std::function<void(std::ostream&)>& body);
    void write_manifest() const;

private:
    const CLI::App& command_;
    fs::path dir_;
    json inputs_ = json::array();
    std::vector<std::uint64_t> seeds_;
    std::vector<std::string> artifacts_;
    json notes_ = json::object();
};

struct ParseFlags {
    std::string symbol = "BTCUSDT";
    std::string delimiter = ",";
    bool millis = false;
    bool strict_order = false;
};
void add_parse_flags(CLI::App& app, ParseFlags& f);
CandleSeries load_series(Run& run, const std::string& input, const ParseFlags& f);

struct SplitFlags {
    std::string train_end;
    std::string val_end;
    bool given() const { return !train_end.empty() || !val_end.empty(); }
};
void add_split_flags(CLI::App& app, SplitFlags& f);
SplitSpec to_split(const SplitFlags& f);

struct MarketFlags {
    std::string input;
    ParseFlags parse;
    SyntheticSpec synthetic;
};
/// --input, or a synthetic series when no input is given.
void add_market_flags(CLI::App& app, MarketFlags& f);
void add_synthetic_flags(CLI::App& app, SyntheticSpec& s, const std::string& seed_flag);
CandleSeries load_market(Run& run, const MarketFlags& f);

struct PolicyFlags {
    std::vector<std::string> policies{"none", "gaussian", "kelly"};
    double kelly_fraction = 1.0;
    double max_leverage = 5.0;
    double modifier = 1.0;
    double expected = 0.5;
    std::string kelly_formula = "reference";
};
void add_policy_flags(CLI::App& app, PolicyFlags& f, std::vector<std::string> default_policies);
std::vector<SizingPolicy> to_policies(const PolicyFlags& f);
SizingPolicy make_policy(const PolicyFlags& f, PolicyKind kind);

struct BacktestFlags {
    std::size_t horizon = 5;
    std::size_t stride = 0;  // 0 = horizon
    double fee = 0.0;
    double initial_bankroll = 1.0;
    double ruin_floor = 0.01;
    double rf = 0.0;
};
void add_backtest_flags(CLI::App& app, BacktestFlags& f);
BacktestConfig to_config(const BacktestFlags& f);

struct EstimateFlags {
    std::size_t window = 200;
    double const_a = 0.0;
    double const_b = 0.0;
};
void add_estimate_flags(CLI::App& app, EstimateFlags& f);
std::vector<ScenarioEstimate> make_estimates(const CandleSeries& series, std::size_t horizon, const EstimateFlags& f);

struct SimFlags {
    std::string sim = "balanced";
    std::uint64_t seed = 0;
    double sigma = 0.1;
    double hit_rate = 0.6;
    double p_const = 0.6;
    double mu_long = 0.6;
    double mu_short = 0.4;
};
void add_sim_flags(CLI::App& app, SimFlags& f);
SimulationSpec to_simulation(const SimFlags& f);

/// Keeps the entries whose timestamp lies inside the series' test segment.
template <typename T>
std::vector<T> restrict_to(const std::vector<T>& items, Timestamp after) {
    std::vector<T> out;
    for (const auto& x : items)
        if (x.timestamp > after) out.push_back(x);
    return out;
}

void print_table(const std::vector<BacktestReport>& reports);

void register_data_commands(CLI::App& app);
void register_trading_commands(CLI::App& app);

}  // namespace kellybet::cli
