#include "common.hpp"

#include "kellybet/error.hpp"

#include <iostream>

using namespace kellybet;
using namespace kellybet::cli;

namespace {

int report(int code, const char* kind, const std::string& message) {
    std::cerr << json{{"error", {{"kind", kind}, {"code", code}, {"message", message}}}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Direction-prediction bet sizing: data, simulation and backtest tools", "kellybet"};
    app.set_version_flag("--version", KELLYBET_VERSION);
    app.set_config("--config", "", "TOML config file; [<command>] sections hold per-command keys");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1, 1);
    app.fallthrough();
    register_data_commands(app);
    register_trading_commands(app);
    remember_argv(argc, argv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        return report(kMissingInput, "missing_input", e.what());
    } catch (const CLI::ConfigError& e) {
        return report(kConfig, "config", e.what());
    } catch (const CLI::ValidationError& e) {
        return report(kConfig, "config", e.what());
    } catch (const CLI::ConversionError& e) {
        return report(kConfig, "config", e.what());
    } catch (const CLI::ParseError& e) {
        return report(kUsage, "usage", e.what());
    } catch (const MissingInput& e) {
        return report(kMissingInput, "missing_input", e.what());
    } catch (const kellybet::ConfigError& e) {
        return report(kConfig, "config", e.what());
    } catch (const DataError& e) {
        return report(kData, "data", e.what());
    } catch (const InsufficientData& e) {
        return report(kData, "data", e.what());
    } catch (const std::exception& e) {
        return report(kFailure, "failure", e.what());
    }
    return kOk;
}
