#include "common.hpp"

#include "kellybet/error.hpp"
#include "kellybet/features.hpp"
#include "kellybet/io.hpp"
#include "kellybet/labeling.hpp"

#include <fstream>
#include <iostream>
#include <memory>

namespace kellybet::cli {

namespace {

json series_summary(const CandleSeries& s) {
    json j{{"symbol", s.symbol()}, {"bars", s.size()}, {"gaps", s.gaps().size()}};
    if (!s.empty()) {
        j["first"] = format_iso8601(s.front().timestamp);
        j["last"] = format_iso8601(s.back().timestamp);
    }
    return j;
}

void add_ingest(CLI::App& app) {
    struct Opts {
        std::string input, out;
        ParseFlags parse;
        SplitFlags split;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("ingest", "Validate a candle CSV and write the canonical form and splits");
    cmd->add_option("--input", o->input, "Candle CSV (relative paths also searched in $KELLYBET_DATA_DIR)")->required();
    cmd->add_option("--out", o->out, "Output directory");
    add_parse_flags(*cmd, o->parse);
    add_split_flags(*cmd, o->split);
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        const auto series = load_series(run, o->input, o->parse);
        json summary = series_summary(series);
        run.write("candles.csv", [&](std::ostream& f) { write_candles(f, series); });
        if (o->split.given()) {
            const auto parts = split_dataset(series, to_split(o->split));
            run.write("train.csv", [&](std::ostream& f) { write_candles(f, parts.train); });
            run.write("validation.csv", [&](std::ostream& f) { write_candles(f, parts.validation); });
            run.write("test.csv", [&](std::ostream& f) { write_candles(f, parts.test); });
            summary["split"] = {{"train", parts.train.size()},
                                {"validation", parts.validation.size()},
                                {"test", parts.test.size()}};
        }
        run.write("summary.json", [&](std::ostream& f) { f << summary.dump(2) << '\n'; });
        run.write_manifest();
        std::cout << summary.dump(2) << '\n';
    });
}

void add_synth(CLI::App& app) {
    struct Opts {
        std::string out;
        SyntheticSpec spec;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("synth", "Generate a seeded synthetic hourly candle series");
    cmd->add_option("--out", o->out, "Output directory");
    cmd->add_option("--symbol", o->spec.symbol, "Symbol recorded on the series");
    add_synthetic_flags(*cmd, o->spec, "--seed");
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        run.add_seed(o->spec.seed);
        const auto series = generate_synthetic_series(o->spec);
        run.write("candles.csv", [&](std::ostream& f) { write_candles(f, series); });
        run.write_manifest();
        std::cout << series_summary(series).dump(2) << '\n';
    });
}

void add_features(CLI::App& app) {
    struct Opts {
        std::string out, grid;
        MarketFlags market;
        SplitFlags split;
        PriceModelOptions price_model;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("features", "Compute the indicator feature matrix");
    cmd->add_option("--out", o->out, "Output directory");
    add_market_flags(*cmd, o->market);
    cmd->add_option("--grid", o->grid, "JSON indicator grid [{\"kind\": \"RSI\", \"periods\": [14]}, ...]");
    cmd->add_flag("--price-model", o->price_model.enabled, "Append lagged price changes and a market-direction column");
    cmd->add_option("--horizon", o->price_model.horizon, "Bars per lagged price change")->check(CLI::PositiveNumber);
    cmd->add_option("--lags", o->price_model.lags, "Number of lagged price changes");
    add_split_flags(*cmd, o->split);
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        const auto series = load_market(run, o->market);
        auto grid = default_indicator_grid();
        if (!o->grid.empty()) {
            const auto path = resolve_input(o->grid);
            run.add_input("grid", path);
            std::ifstream in(path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("grid file: ") + e.what());
            }
            grid = io::indicator_grid_from_json(j);
        }
        auto m = build_feature_matrix(series, grid, o->price_model);
        if (o->split.given()) {
            const auto split = to_split(o->split);
            const auto stats = fit_normalizer(m, series.front().timestamp, split.train_end);
            m = apply_normalizer(std::move(m), stats);
            run.write("norm_stats.json", [&](std::ostream& f) { f << io::to_json(stats).dump(2) << '\n'; });
        }
        run.write("features.csv", [&](std::ostream& f) { io::write_feature_matrix(f, m); });
        run.write("grid.json", [&](std::ostream& f) { f << io::to_json(grid).dump(2) << '\n'; });
        run.note("rows", m.row_count());
        run.note("interior_rows_dropped", m.interior_rows_dropped);
        run.write_manifest();
        std::cout << m.row_count() << " rows x " << m.column_count() << " columns -> "
                  << (run.dir() / "features.csv").string() << '\n';
    });
}

void add_label(CLI::App& app) {
    struct Opts {
        std::string out, scheme = "barrier", vertical = "sign";
        MarketFlags market;
        BarrierConfig barrier;
        std::size_t stride = 1;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("label", "Label a series with the triple-barrier or direction scheme");
    cmd->add_option("--out", o->out, "Output directory");
    add_market_flags(*cmd, o->market);
    cmd->add_option("--scheme", o->scheme, "barrier or direction")
        ->check(CLI::IsMember({"barrier", "direction"}));
    cmd->add_option("--horizon", o->barrier.horizon, "Vertical barrier / direction horizon in bars")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--up-pct", o->barrier.up_pct, "Upper barrier as a fraction of the entry close");
    cmd->add_option("--down-pct", o->barrier.down_pct, "Lower barrier as a fraction of the entry close");
    cmd->add_option("--vertical-rule", o->vertical, "zero or sign");
    cmd->add_flag("--pessimistic", o->barrier.pessimistic_ambiguous, "Resolve bars spanning both barriers to the lower one");
    cmd->add_option("--stride", o->stride, "Bars between labelled entries")->check(CLI::PositiveNumber);
    cmd->callback([o, cmd] {
        Run run(*cmd, o->out);
        const auto series = load_market(run, o->market);
        json counts = json::object();
        if (o->scheme == "barrier") {
            BarrierConfig cfg = o->barrier;
            cfg.vertical_rule = parse_vertical_rule(o->vertical);
            cfg.validate();
            const auto labels = label_series(series, cfg, o->stride);
            std::size_t up = 0, down = 0, flat = 0, ambiguous = 0;
            for (const auto& l : labels) {
                (l.label.label > 0 ? up : l.label.label < 0 ? down : flat)++;
                ambiguous += l.label.ambiguous;
            }
            counts = {{"up", up}, {"down", down}, {"zero", flat}, {"ambiguous", ambiguous}};
            run.write("labels.csv", [&](std::ostream& f) { io::write_barrier_labels(f, series, labels); });
        } else {
            const auto labels = make_labels(series, o->barrier.horizon);
            std::size_t up = 0;
            for (int d : labels.direction) up += d > 0;
            counts = {{"up", up}, {"down", labels.size() - up}};
            run.write("labels.csv", [&](std::ostream& f) { io::write_labels(f, labels); });
        }
        run.note("counts", counts);
        run.write_manifest();
        std::cout << counts.dump() << '\n';
    });
}

}  // namespace

void register_data_commands(CLI::App& app) {
    add_ingest(app);
    add_synth(app);
    add_features(app);
    add_label(app);
}

}  // namespace kellybet::cli
