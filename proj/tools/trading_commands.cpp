#include "chart.hpp"
#include "common.hpp"

#include "kellybet/csv.hpp"
#include "kellybet/error.hpp"
#include "kellybet/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

namespace kellybet::cli {

namespace {

struct Aligned {
    std::vector<DirectionPrediction> predictions;
    std::vector<ScenarioEstimate> estimates;
};

/// Inner join on timestamp; both inputs are sorted by timestamp.
Aligned align(const std::vector<DirectionPrediction>& preds, const std::vector<ScenarioEstimate>& est) {
    Aligned out;
    std::size_t j = 0;
    for (const auto& p : preds) {
        while (j < est.size() && est[j].timestamp < p.timestamp) ++j;
        if (j < est.size() && est[j].timestamp == p.timestamp) {
            out.predictions.push_back(p);
            out.estimates.push_back(est[j]);
        }
    }
    return out;
}

/// Lower-case [a-z0-9_] name with runs of other characters collapsed to one '_'.
std::string file_stem(const std::string& name) {
    std::string out;
    for (unsigned char c : name) {
        if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

void emit_chart(Run& run, const std::vector<NamedCurve>& curves, const std::string& title) {
    run.write("equity.svg", [&](std::ostream& f) { write_equity_svg(f, curves, title); });
    run.write("equity_chart.csv", [&](std::ostream& f) { write_equity_chart_csv(f, curves); });
}

void emit_reports(Run& run, const std::vector<BacktestReport>& reports) {
    run.write("performance.csv", [&](std::ostream& f) { io::write_performance_table(f, reports); });
    run.write("reports.csv", [&](std::ostream& f) { io::write_reports_csv(f, reports); });
    json j = json::array();
    for (const auto& r : reports) j.push_back(io::to_json(r));
    run.write("reports.json", [&](std::ostream& f) { f << j.dump(2) << '\n'; });
}

/// Test-segment cut-off when a split is configured.
std::optional<Timestamp> test_start(const SplitFlags& split) {
    if (!split.given()) return std::nullopt;
    return to_split(split).validation_end;
}

struct TradingFlags {
    std::string out;
    MarketFlags market;
    SplitFlags split;
    BacktestFlags backtest;
    EstimateFlags estimate;
    SimFlags sim;
    PolicyFlags policy;
};

void add_trading_flags(CLI::App& cmd, TradingFlags& f, std::vector<std::string> default_policies) {
    cmd.add_option("--out", f.out, "Output directory");
    add_market_flags(cmd, f.market);
    add_split_flags(cmd, f.split);
    add_backtest_flags(cmd, f.backtest);
    add_estimate_flags(cmd, f.estimate);
    add_policy_flags(cmd, f.policy, std::move(default_policies));
}

void add_simulate(CLI::App& app) {
    auto o = std::make_shared<TradingFlags>();
    auto* cmd = app.add_subcommand("simulate", "Backtest sizing policies on simulated direction predictions");
    add_trading_flags(*cmd, *o, {"none", "gaussian", "kelly"});
    add_sim_flags(*cmd, o->sim);
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        run.add_seed(o->sim.seed);
        const auto series = load_market(run, o->market);
        const auto cfg = to_config(o->backtest);
        const auto policies = to_policies(o->policy);
        const auto labels = make_labels(series, cfg.horizon);
        auto preds = simulate(labels, to_simulation(o->sim), o->sim.seed);
        if (auto cut = test_start(o->split)) preds = restrict_to(preds, *cut);
        const auto inputs = align(preds, make_estimates(series, cfg.horizon, o->estimate));
        if (inputs.predictions.empty()) throw InsufficientData("no bar has both a prediction and an estimate");

        const auto runs = compare_strategies(series, inputs.predictions, inputs.estimates, policies, cfg);
        std::vector<BacktestReport> reports;
        std::vector<NamedCurve> curves;
        for (const auto& r : runs) {
            const auto name = r.policy.label();
            reports.push_back(r.report);
            reports.back().strategy = name;
            curves.push_back({name, r.result.curve});
            run.write("equity_" + file_stem(name) + ".csv", [&](std::ostream& f) { io::write_equity(f, r.result.curve); });
            run.write("trades_" + file_stem(name) + ".csv", [&](std::ostream& f) { io::write_trades(f, r.result.trades); });
        }
        run.write("predictions.csv",
                  [&](std::ostream& f) { io::write_predictions(f, inputs.predictions, &inputs.estimates); });
        emit_reports(run, reports);
        emit_chart(run, curves, "Simulated " + o->sim.sim + " predictions, seed " + std::to_string(o->sim.seed));
        run.note("correct_calls", count_correct(simulate(labels, to_simulation(o->sim), o->sim.seed), labels));
        run.write_manifest();
        print_table(reports);
    });
}

void add_backtest(CLI::App& app) {
    struct Opts : TradingFlags {
        std::string predictions;
        double benchmark_size = 0.0;
        BarrierConfig barrier;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("backtest", "Backtest external (or simulated) predictions against the benchmarks");
    add_trading_flags(*cmd, *o, {"kelly"});
    cmd->add_option("--predictions", o->predictions, "CSV timestamp,p_up[,direction][,a,b]; simulated when omitted");
    add_sim_flags(*cmd, o->sim);
    cmd->add_option("--benchmark-size", o->benchmark_size, "Barrier benchmark position size (default: --modifier)");
    cmd->add_option("--up-pct", o->barrier.up_pct, "Barrier benchmark take-profit distance");
    cmd->add_option("--down-pct", o->barrier.down_pct, "Barrier benchmark stop-loss distance");
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        const auto series = load_market(run, o->market);
        const auto cfg = to_config(o->backtest);
        const auto policies = to_policies(o->policy);

        std::vector<DirectionPrediction> preds;
        std::optional<std::vector<ScenarioEstimate>> file_estimates;
        if (!o->predictions.empty()) {
            const auto path = resolve_input(o->predictions);
            run.add_input("predictions", path);
            std::ifstream in(path);
            auto loaded = load_predictions(in, &series);
            preds = std::move(loaded.predictions);
            file_estimates = std::move(loaded.estimates);
        } else {
            run.add_seed(o->sim.seed);
            preds = simulate(make_labels(series, cfg.horizon), to_simulation(o->sim), o->sim.seed);
        }
        const auto cut = test_start(o->split);
        if (cut) preds = restrict_to(preds, *cut);
        const auto inputs =
            align(preds, file_estimates ? *file_estimates : make_estimates(series, cfg.horizon, o->estimate));
        if (inputs.predictions.empty()) throw InsufficientData("no bar has both a prediction and an estimate");

        std::vector<BacktestReport> reports;
        std::vector<NamedCurve> curves;
        auto add = [&](const BacktestResult& r, const std::string& name) {
            auto rep = make_report(r, cfg);
            rep.strategy = name;
            reports.push_back(rep);
            curves.push_back({name, r.curve});
            run.write("equity_" + file_stem(name) + ".csv", [&](std::ostream& f) { io::write_equity(f, r.curve); });
            run.write("trades_" + file_stem(name) + ".csv", [&](std::ostream& f) { io::write_trades(f, r.trades); });
        };
        for (const auto& p : policies)
            add(run_backtest(series, inputs.predictions, inputs.estimates, p, cfg), "Proposed (" + p.label() + ")");

        BarrierConfig barrier = o->barrier;
        barrier.horizon = cfg.horizon;
        barrier.validate();
        const double size = o->benchmark_size > 0 ? o->benchmark_size : o->policy.modifier;
        add(barrier_benchmark(series, inputs.predictions, barrier, size, cfg), "Triple Barrier");
        add(run_backtest(series, inputs.predictions, inputs.estimates, make_policy(o->policy, PolicyKind::None), cfg),
            "Side Learning");
        const auto held = cut ? split_dataset(series, to_split(o->split)).test : series;
        add(buy_and_hold(held, cfg), "Buy and Hold");

        emit_reports(run, reports);
        emit_chart(run, curves, "Backtest, " + series.symbol());
        run.write_manifest();
        print_table(reports);
    });
}

void add_compare(CLI::App& app) {
    struct Opts : TradingFlags {
        std::size_t seeds = 20;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("compare", "Multi-seed comparison of sizing policies on simulated predictions");
    add_trading_flags(*cmd, *o, {"none", "gaussian", "kelly"});
    add_sim_flags(*cmd, o->sim);
    cmd->add_option("--seeds", o->seeds, "Number of simulator seeds, starting at --seed")->check(CLI::PositiveNumber);
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        const auto series = load_market(run, o->market);
        const auto cfg = to_config(o->backtest);
        const auto policies = to_policies(o->policy);
        auto labels = make_labels(series, cfg.horizon);
        auto estimates = make_estimates(series, cfg.horizon, o->estimate);
        if (auto cut = test_start(o->split)) estimates = restrict_to(estimates, *cut);
        std::vector<std::uint64_t> seeds;
        for (std::size_t k = 0; k < o->seeds; ++k) {
            seeds.push_back(o->sim.seed + k);
            run.add_seed(seeds.back());
        }
        const auto rows = run_simulation_batch(series, labels, estimates, to_simulation(o->sim), seeds, policies, cfg);

        // Per-policy aggregates; rows arrive grouped by policy in the given order.
        struct Agg {
            std::vector<double> returns, drawdowns;
            std::size_t ruins = 0;
            std::map<Timestamp, std::pair<double, std::size_t>> equity;
        };
        std::vector<std::string> order;
        std::map<std::string, Agg> agg;
        std::vector<BacktestReport> reports;
        for (const auto& row : rows) {
            const auto name = row.run.policy.label();
            if (!agg.count(name)) order.push_back(name);
            auto& a = agg[name];
            a.returns.push_back(row.run.report.cumulative_return_pct);
            a.drawdowns.push_back(row.run.report.max_drawdown_pct);
            a.ruins += row.run.report.ruin;
            for (const auto& p : row.run.result.curve.points) {
                auto& cell = a.equity[p.timestamp];
                cell.first += p.bankroll;
                ++cell.second;
            }
            auto rep = row.run.report;
            rep.strategy = name;
            rep.seed = row.seed;
            reports.push_back(rep);
            const std::string dir = "runs/" + file_stem(name) + "/seed_" + std::to_string(row.seed) + "/";
            run.write(dir + "equity.csv", [&](std::ostream& f) { io::write_equity(f, row.run.result.curve); });
            run.write(dir + "trades.csv", [&](std::ostream& f) { io::write_trades(f, row.run.result.trades); });
            run.write(dir + "report.json", [&](std::ostream& f) { f << io::to_json(rep).dump(2) << '\n'; });
        }
        run.write("runs.csv", [&](std::ostream& f) { io::write_reports_csv(f, reports); });

        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            const auto n = v.size();
            return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        };
        auto mean = [](const std::vector<double>& v) {
            double s = 0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        std::vector<NamedCurve> curves;
        json summary = json::array();
        std::printf("%-24s %8s %14s %14s %14s %6s\n", "policy", "runs", "mean ret %", "median ret %", "mean dd %", "ruins");
        for (const auto& name : order) {
            const auto& a = agg[name];
            summary.push_back({{"policy", name},
                               {"runs", a.returns.size()},
                               {"mean_return_pct", mean(a.returns)},
                               {"median_return_pct", median(a.returns)},
                               {"mean_max_drawdown_pct", mean(a.drawdowns)},
                               {"ruins", a.ruins}});
            std::printf("%-24s %8zu %14.2f %14.2f %14.2f %6zu\n", name.c_str(), a.returns.size(), mean(a.returns),
                        median(a.returns), mean(a.drawdowns), a.ruins);
            NamedCurve c{name + " (mean)", {}};
            for (const auto& [ts, cell] : a.equity) c.curve.points.push_back({ts, cell.first / static_cast<double>(cell.second)});
            curves.push_back(std::move(c));
        }
        run.write("summary.json", [&](std::ostream& f) { f << summary.dump(2) << '\n'; });
        run.write("summary.csv", [&](std::ostream& f) {
            f << "policy,runs,mean_return_pct,median_return_pct,mean_max_drawdown_pct,ruins\n";
            for (const auto& s : summary)
                f << s["policy"].get<std::string>() << ',' << s["runs"].get<std::size_t>() << ','
                  << csv::format_double(s["mean_return_pct"]) << ',' << csv::format_double(s["median_return_pct"])
                  << ',' << csv::format_double(s["mean_max_drawdown_pct"]) << ',' << s["ruins"].get<std::size_t>()
                  << '\n';
        });
        emit_chart(run, curves, "Mean bankroll over " + std::to_string(seeds.size()) + " seeds");
        run.write_manifest();
    });
}

void add_report(CLI::App& app) {
    struct Opts {
        std::string out, predictions, input;
        std::vector<std::string> equity;
        std::size_t horizon = kDefaultHorizon;
        double threshold = 0.5;
        double rf = 0.0;
        ParseFlags parse;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("report", "Performance tables from equity curves; classification metrics from predictions");
    cmd->add_option("--out", o->out, "Output directory");
    cmd->add_option("--equity", o->equity, "NAME=PATH equity curve CSV (repeatable)");
    cmd->add_option("--predictions", o->predictions, "Prediction CSV to score against --input");
    cmd->add_option("--input", o->input, "Candle CSV the predictions refer to");
    add_parse_flags(*cmd, o->parse);
    cmd->add_option("--horizon", o->horizon, "Label horizon in bars")->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", o->threshold, "Up-class threshold on p_up");
    cmd->add_option("--rf", o->rf, "Monthly risk-free rate for the Sharpe ratio");
    cmd->callback([o, cmd] {
        if (o->equity.empty() && o->predictions.empty()) throw ConfigError("nothing to report: give --equity or --predictions");
        if (!o->predictions.empty() && o->input.empty()) throw ConfigError("--predictions needs --input");
        Run run(*cmd, o->out);
        if (!o->equity.empty()) {
            std::vector<BacktestReport> reports;
            std::vector<NamedCurve> curves;
            for (const auto& spec : o->equity) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos || eq == 0) throw ConfigError("--equity expects NAME=PATH, got " + spec);
                const auto name = spec.substr(0, eq);
                const auto path = resolve_input(spec.substr(eq + 1));
                run.add_input("equity:" + name, path);
                std::ifstream in(path);
                auto curve = io::read_equity(in);
                reports.push_back(report_from_curve(curve, name, o->rf));
                curves.push_back({name, std::move(curve)});
            }
            emit_reports(run, reports);
            emit_chart(run, curves, "Equity curves");
            print_table(reports);
        }
        if (!o->predictions.empty()) {
            const auto series = load_series(run, o->input, o->parse);
            const auto path = resolve_input(o->predictions);
            run.add_input("predictions", path);
            std::ifstream in(path);
            const auto loaded = load_predictions(in, &series);
            const auto labels = make_labels(series, o->horizon);
            const auto cls = classification_report(loaded.predictions, labels, o->threshold);
            run.write("classification.json", [&](std::ostream& f) { f << io::to_json(cls).dump(2) << '\n'; });
            run.write("confusion_matrix.csv", [&](std::ostream& f) { io::write_confusion_matrix(f, cls); });
            run.write("pr_curve.csv", [&](std::ostream& f) {
                io::write_pr_curve(f, precision_recall_curve(loaded.predictions, labels));
            });
            if (loaded.estimates) {
                // Expected move p a - q b against the realised horizon change.
                std::map<Timestamp, double> actual;
                for (std::size_t i = 0; i < labels.size(); ++i) actual[labels.timestamps[i]] = labels.price_change[i];
                std::vector<double> est, act;
                for (std::size_t i = 0; i < loaded.predictions.size(); ++i) {
                    const auto it = actual.find(loaded.predictions[i].timestamp);
                    if (it == actual.end()) continue;
                    const double p = loaded.predictions[i].p_up;
                    const auto& e = (*loaded.estimates)[i];
                    est.push_back(p * e.up - (1 - p) * e.down);
                    act.push_back(it->second);
                }
                if (!est.empty()) {
                    const auto reg = regression_report(est, act);
                    run.write("regression.json", [&](std::ostream& f) { f << io::to_json(reg).dump(2) << '\n'; });
                }
            }
            std::printf("n=%zu accuracy=%.4f logloss=%.4f\n", cls.n, cls.accuracy, cls.logloss);
        }
        run.write_manifest();
    });
}

void add_kelly_surface(CLI::App& app) {
    struct Opts {
        std::string out, formula = "reference";
        double p = 0.6;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("kelly-surface", "Grid data for Kelly fraction surfaces");
    cmd->add_option("--out", o->out, "Output directory");
    cmd->add_option("--p", o->p, "Win probability of the fixed-p (a, b) grid");
    cmd->add_option("--formula", o->formula, "reference (p/a - q/b) or log_optimal (p/b - q/a)");
    cmd->callback([o, cmd] {
        if (!(o->p > 0 && o->p < 1)) throw ConfigError("--p must lie in (0, 1)");
        const auto formula = parse_kelly_formula(o->formula);
        auto fstar = [&](double p, double a, double b) {
            return formula == KellyFormula::Reference ? kelly_fraction(p, a, b) : log_optimal_kelly_fraction(p, a, b);
        };
        Run run(*cmd, o->out);
        // Whole-stake bets at net odds b: f = p - q / b.
        run.write("odds_surface.csv", [&](std::ostream& f) {
            f << "p,b,f\n";
            for (int i = 1; i <= 99; ++i)
                for (int j = 1; j <= 40; ++j) {
                    const double p = i / 100.0, b = j / 10.0;
                    f << csv::format_double(p) << ',' << csv::format_double(b) << ','
                      << csv::format_double(p - (1 - p) / b) << '\n';
                }
        });
        run.write("symmetric_surface.csv", [&](std::ostream& f) {
            f << "p,a,b,f_star\n";
            for (int i = 1; i <= 99; ++i)
                for (int j = 1; j <= 10; ++j) {
                    const double p = i / 100.0, ab = j / 10.0;
                    f << csv::format_double(p) << ',' << csv::format_double(ab) << ',' << csv::format_double(ab) << ','
                      << csv::format_double(fstar(p, ab, ab)) << '\n';
                }
        });
        run.write("fixed_p_surface.csv", [&](std::ostream& f) {
            f << "p,a,b,f_star\n";
            for (int i = 1; i <= 10; ++i)
                for (int j = 1; j <= 10; ++j) {
                    const double a = i / 100.0, b = j / 100.0;
                    f << csv::format_double(o->p) << ',' << csv::format_double(a) << ',' << csv::format_double(b)
                      << ',' << csv::format_double(fstar(o->p, a, b)) << '\n';
                }
        });
        run.write_manifest();
        std::printf("f*(p=%g, a=0.05, b=0.04) = %.6f [%s]\n", o->p, fstar(o->p, 0.05, 0.04),
                    std::string(to_string(formula)).c_str());
    });
}

}  // namespace

void register_trading_commands(CLI::App& app) {
    add_simulate(app);
    add_backtest(app);
    add_compare(app);
    add_report(app);
    add_kelly_surface(app);
}

}  // namespace kellybet::cli
