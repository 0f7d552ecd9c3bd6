#include "common.hpp"

#include "kellybet/csv.hpp"
#include "kellybet/error.hpp"
#include "kellybet/predictors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace kellybet::cli {

fs::path resolve_input(const std::string& path) {
    fs::path p(path);
    if (fs::is_regular_file(p)) return p;
    if (p.is_relative()) {
        if (const char* root = std::getenv("KELLYBET_DATA_DIR")) {
            fs::path q = fs::path(root) / p;
            if (fs::is_regular_file(q)) return q;
        }
    }
    throw MissingInput("input file not found: " + path);
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof(byte), "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

namespace {
std::vector<std::string> g_argv;
}

void remember_argv(int argc, const char* const* argv) { g_argv.assign(argv, argv + argc); }

Run::Run(const CLI::App& command, const std::string& out_dir)
    : command_(command), dir_(out_dir.empty() ? fs::path("out") / command.get_name() : fs::path(out_dir)) {
    fs::create_directories(dir_);
    if (const CLI::App* root = command.get_parent()) {
        const CLI::Option* cfg = root->get_option_no_throw("--config");
        if (cfg && cfg->count() > 0) add_input("config", cfg->as<std::string>());
    }
}

void Run::add_input(const std::string& role, const fs::path& path) {
    inputs_.push_back({{"role", role}, {"path", path.string()}, {"sha256", sha256_file(path)}});
}

void Run::write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
    artifacts_.push_back(name);
}

namespace {

bool is_flag(const CLI::Option* opt) { return opt->get_type_size() == 0; }

bool on_command_line(const std::string& name) {
    const std::string flag = "--" + name;
    return std::any_of(g_argv.begin(), g_argv.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string quote(const std::string& s) {
    if (!s.empty() && s.find_first_of(" \t\"'\\$") == std::string::npos) return s;
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

}  // namespace

void Run::write_manifest() const {
    // config[name] = {value, source}; source is cli, config or default.
    json config = json::object();
    json argv = json::array({"kellybet", command_.get_name()});
    for (const CLI::Option* opt : command_.get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string& name = opt->get_lnames().front();
        if (name == "help") continue;
        if (opt->count() == 0) {
            config[name] = {{"value", opt->get_default_str()}, {"source", "default"}};
            continue;
        }
        const std::string source = on_command_line(name) ? "cli" : "config";
        const auto& values = opt->results();
        if (is_flag(opt)) {
            const bool on = values.empty() || (values.back() != "false" && values.back() != "0");
            config[name] = {{"value", on}, {"source", source}};
            if (on) argv.push_back("--" + name);
            continue;
        }
        config[name] = {{"value", values.size() == 1 ? json(values.front()) : json(values)}, {"source", source}};
        for (const auto& v : values) {
            argv.push_back("--" + name);
            argv.push_back(v);
        }
    }
    std::string replay;
    for (const auto& a : argv) replay += (replay.empty() ? "" : " ") + quote(a.get<std::string>());

    json artifacts = json::array();
    for (const auto& a : artifacts_) artifacts.push_back({{"path", a}, {"sha256", sha256_file(dir_ / a)}});

    json m;
    m["tool"] = "kellybet";
    m["version"] = KELLYBET_VERSION;
    m["command"] = command_.get_name();
    m["config"] = config;
    m["replay"] = replay;
    m["replay_argv"] = argv;
    m["inputs"] = inputs_;
    m["seeds"] = seeds_;
    m["artifacts"] = artifacts;
    for (auto it = notes_.begin(); it != notes_.end(); ++it) m[it.key()] = it.value();
    std::ofstream out(dir_ / "manifest.json");
    out << m.dump(2) << '\n';
}

void add_parse_flags(CLI::App& app, ParseFlags& f) {
    app.add_option("--symbol", f.symbol, "Symbol recorded on the series");
    app.add_option("--delimiter", f.delimiter, "Field delimiter of the candle file")
        ->check([](const std::string& s) { return s.size() == 1 ? std::string() : std::string("one character"); });
    app.add_flag("--millis", f.millis, "Input timestamps are epoch milliseconds");
    app.add_flag("--strict-order", f.strict_order, "Reject out-of-order rows instead of sorting");
}

CandleSeries load_series(Run& run, const std::string& input, const ParseFlags& f) {
    const auto path = resolve_input(input);
    run.add_input("candles", path);
    std::ifstream in(path);
    ParseOptions opts;
    opts.symbol = f.symbol;
    opts.delimiter = f.delimiter.front();
    opts.timestamps_in_millis = f.millis;
    opts.strict_order = f.strict_order;
    return parse_candles(in, opts);
}

void add_split_flags(CLI::App& app, SplitFlags& f) {
    app.add_option("--train-end", f.train_end, "Last training timestamp (ISO-8601 or epoch seconds)");
    app.add_option("--val-end", f.val_end, "Last validation timestamp (ISO-8601 or epoch seconds)");
}

SplitSpec to_split(const SplitFlags& f) {
    if (f.train_end.empty() || f.val_end.empty()) throw ConfigError("--train-end and --val-end go together");
    return {parse_iso8601(f.train_end), parse_iso8601(f.val_end)};
}

void add_synthetic_flags(CLI::App& app, SyntheticSpec& s, const std::string& seed_flag) {
    app.add_option(seed_flag, s.seed, "Seed of the synthetic series");
    app.add_option("--n", s.n, "Number of synthetic candles")->check(CLI::PositiveNumber);
    app.add_option("--drift", s.drift, "Per-bar mean log-return");
    app.add_option("--volatility", s.volatility, "Per-bar log-return stddev")->check(CLI::NonNegativeNumber);
    app.add_option("--start-price", s.start_price, "First open price")->check(CLI::PositiveNumber);
    app.add_option("--vol-of-vol", s.vol_of_vol, "Stationary stddev of the log-volatility factor (0 = constant)");
    app.add_option("--vol-persistence", s.vol_persistence, "AR(1) coefficient of the log-volatility factor");
}

void add_market_flags(CLI::App& app, MarketFlags& f) {
    app.add_option("--input", f.input, "Candle CSV; a synthetic series is generated when omitted");
    add_parse_flags(app, f.parse);
    add_synthetic_flags(app, f.synthetic, "--market-seed");
}

CandleSeries load_market(Run& run, const MarketFlags& f) {
    if (!f.input.empty()) return load_series(run, f.input, f.parse);
    run.note("synthetic_market_seed", f.synthetic.seed);
    return generate_synthetic_series(f.synthetic);
}

void add_policy_flags(CLI::App& app, PolicyFlags& f, std::vector<std::string> default_policies) {
    f.policies = std::move(default_policies);
    app.add_option("--policy", f.policies, "Sizing policies: none, gaussian, kelly (repeatable)");
    app.add_option("--kelly-fraction", f.kelly_fraction, "Fractional Kelly scalar in (0, 1]");
    app.add_option("--max-leverage", f.max_leverage, "Leverage clamp applied before the modifier");
    app.add_option("--modifier", f.modifier, "Constant position scalar");
    app.add_option("--expected", f.expected, "Baseline probability for Gaussian sizing");
    app.add_option("--kelly-formula", f.kelly_formula, "reference (p/a - q/b) or log_optimal (p/b - q/a)");
}

SizingPolicy make_policy(const PolicyFlags& f, PolicyKind kind) {
    SizingPolicy p;
    p.kind = kind;
    p.kelly_fraction = f.kelly_fraction;
    p.max_leverage = f.max_leverage;
    p.modifier = f.modifier;
    p.expected = f.expected;
    p.kelly_formula = parse_kelly_formula(f.kelly_formula);
    p.validate();
    return p;
}

std::vector<SizingPolicy> to_policies(const PolicyFlags& f) {
    if (f.policies.empty()) throw ConfigError("at least one --policy is required");
    std::vector<SizingPolicy> out;
    for (const auto& name : f.policies) out.push_back(make_policy(f, parse_policy_kind(name)));
    return out;
}

void add_backtest_flags(CLI::App& app, BacktestFlags& f) {
    app.add_option("--horizon", f.horizon, "Holding period in bars")->check(CLI::PositiveNumber);
    app.add_option("--stride", f.stride, "Bars between decisions (default: horizon)");
    app.add_option("--fee", f.fee, "Fee per side on notional");
    app.add_option("--initial-bankroll", f.initial_bankroll, "Starting bankroll");
    app.add_option("--ruin-floor", f.ruin_floor, "Ruin threshold as a fraction of the initial bankroll");
    app.add_option("--rf", f.rf, "Monthly risk-free rate for the Sharpe ratio");
}

BacktestConfig to_config(const BacktestFlags& f) {
    BacktestConfig c;
    c.horizon = f.horizon;
    c.stride = f.stride ? f.stride : f.horizon;
    c.fee_rate = f.fee;
    c.initial_bankroll = f.initial_bankroll;
    c.ruin_floor = f.ruin_floor;
    c.rf_monthly = f.rf;
    c.validate();
    return c;
}

void add_estimate_flags(CLI::App& app, EstimateFlags& f) {
    app.add_option("--window", f.window, "Trailing window of the volatility-based (a, b) estimate");
    app.add_option("--const-a", f.const_a, "Constant up-move estimate (overrides --window with --const-b)");
    app.add_option("--const-b", f.const_b, "Constant down-move estimate");
}

std::vector<ScenarioEstimate> make_estimates(const CandleSeries& series, std::size_t horizon, const EstimateFlags& f) {
    if (f.const_a > 0 || f.const_b > 0) return constant_scenarios(series, f.const_a, f.const_b);
    return estimate_scenarios(series, horizon, f.window);
}

void add_sim_flags(CLI::App& app, SimFlags& f) {
    app.add_option("--sim", f.sim, "Probability model: balanced, optimal, gaussian");
    app.add_option("--seed", f.seed, "Simulator seed");
    app.add_option("--sigma", f.sigma, "Stddev of the Gaussian model");
    app.add_option("--hit-rate", f.hit_rate, "Fraction of correct directional calls");
    app.add_option("--p-const", f.p_const, "Probability assigned by the balanced model");
    app.add_option("--mu-long", f.mu_long, "Mean p_up of up calls in the Gaussian model");
    app.add_option("--mu-short", f.mu_short, "Mean p_up of down calls in the Gaussian model");
}

SimulationSpec to_simulation(const SimFlags& f) {
    SimulationSpec s;
    s.simulator = parse_simulator(f.sim);
    s.hit_rate = f.hit_rate;
    s.p_const = f.p_const;
    s.gaussian = {f.mu_long, f.mu_short, f.sigma, f.hit_rate};
    return s;
}

void print_table(const std::vector<BacktestReport>& reports) {
    std::printf("%-24s %12s %12s %10s %10s %8s\n", "strategy", "return %", "max dd %", "sharpe", "romad", "trades");
    for (const auto& r : reports) {
        auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(std::round(*v * 1e4) / 1e4) : "N/A"; };
        std::printf("%-24s %12.2f %12.2f %10s %10s %8zu%s\n", r.strategy.c_str(), r.cumulative_return_pct,
                    r.max_drawdown_pct, opt(r.sharpe).c_str(), opt(r.romad).c_str(), r.trade_count, r.ruin ? "  RUIN" : "");
    }
}

}  // namespace kellybet::cli
