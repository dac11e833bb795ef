#include "slowlight/cli_runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>

using namespace slowlight;

namespace {

int fail(int code, const char* kind, const std::string& msg) {
    fmt::print(stderr, "slowlight: {}: {}\n", kind, msg);
    return code;
}

// Parse and compute before anything touches the output directory.
int execute(const std::function<ScenarioConfig()>& load, const std::filesystem::path& out_override,
            unsigned workers, bool dry_run) {
    try {
        const ScenarioConfig config = load();
        if (dry_run) {
            fmt::print("{}: {} ok\n", config.name, scenario_name(config.kind));
            return exit_ok;
        }
        const auto tables = run_scenario(config, workers);
        const auto dir = resolve_output_dir(config, out_override);
        for (const auto& p : write_tables(tables, config.name, dir)) fmt::print("{}\n", p.string());
        return exit_ok;
    } catch (const ParseError& e) {
        return fail(exit_parse, "config error", e.what());
    } catch (const ConfigError& e) {
        return fail(exit_validation, "invalid parameters", e.what());
    } catch (const NumericalError& e) {
        return fail(exit_numerical, "numerical failure", e.what());
    } catch (const std::exception& e) {
        return fail(exit_io, "error", e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slow-light propagation through trapped Bose gases"};
    app.require_subcommand(1);

    std::string config_path, preset_name;
    std::string out_dir;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());

    auto* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "JSON scenario file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

    auto* preset = app.add_subcommand("preset", "run a bundled preset");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--out", out_dir, "output directory");
    preset->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    bool show = false;
    preset->add_flag("--show", show, "print the preset config instead of running it");

    auto* list = app.add_subcommand("list-presets", "list presets and their parameter sources");

    auto* validate = app.add_subcommand("validate", "check a scenario config without running it");
    validate->add_option("config", config_path, "JSON scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_parse;
    }

    if (*list) {
        for (const auto& p : presets()) fmt::print("{:<16} {}\n", p.name, p.source);
        return exit_ok;
    }
    if (*preset) {
        if (show) {
            try {
                fmt::print("{}\n", find_preset(preset_name).config);
                return exit_ok;
            } catch (const ParseError& e) {
                return fail(exit_parse, "config error", e.what());
            }
        }
        return execute([&] { return parse_config(find_preset(preset_name).config); }, out_dir, workers, false);
    }
    if (*validate) {
        return execute([&] { return load_config(config_path); }, {}, 1, true);
    }
    return execute([&] { return load_config(config_path); }, out_dir, workers, false);
}
