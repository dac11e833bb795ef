#include "doctest.h"

#include "slowlight/cli_runner.hpp"
#include "slowlight/constants.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace slowlight;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("slowlight_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::size_t file_count(const fs::path& dir) {
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
    return n;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SLOWLIGHT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kOptics = R"("optical": {"lambda_31": {"value": 589, "unit": "nm"},
    "gamma": {"value": 10.01e6, "unit": "Hz"}, "Gamma_31": {"gamma": 0.5},
    "Gamma_21": {"value": 1000, "unit": "Hz"}, "Omega": {"gamma": 0.56}})";

std::string dispersion_config(const std::string& extra = "") {
    return std::string("{\"scenario\": \"dispersion\", ") + kOptics +
           R"(, "medium": {"density": {"value": 3.3e12, "unit": "cm^-3"}},
              "sweep": {"Delta_over_gamma": [-1, 0, 1]})" + extra + "}";
}

}  // namespace

TEST_CASE("quantities and units") {
    const ScenarioConfig c = parse_config(dispersion_config());
    CHECK(c.optical.lambda_31 == doctest::Approx(589e-9).epsilon(1e-15));
    CHECK(c.optical.gamma == doctest::Approx(2.0 * kPi * 10.01e6).epsilon(1e-15));
    CHECK(c.optical.Gamma_31 == doctest::Approx(0.5 * c.optical.gamma).epsilon(1e-15));
    CHECK(c.optical.Omega == doctest::Approx(0.56 * c.optical.gamma).epsilon(1e-15));
    CHECK(c.optical.Gamma_21 == doctest::Approx(2.0 * kPi * 1e3).epsilon(1e-15));
    CHECK(c.optical.Delta == 0.0);
    CHECK(c.density == doctest::Approx(3.3e18).epsilon(1e-15));
    CHECK(c.Delta_over_gamma == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(c.name == "dispersion");

    const ScenarioConfig r = parse_config(std::string("{\"scenario\": \"vgroup_defs\", ") + kOptics +
                                          R"(, "medium": {"density": 3.3e18},
        "sweep": {"Delta_over_gamma": {"start": -2, "stop": 2, "count": 5}}})");
    CHECK(r.Delta_over_gamma == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
}

TEST_CASE("malformed configs are parse errors") {
    CHECK_THROWS_AS(parse_config("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "nope"})"), ParseError);
    CHECK_THROWS_AS(parse_config(dispersion_config(R"(, "colour": 3)")), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "dispersion", "medium": {"density": 1e18},
        "sweep": {"Delta_over_gamma": [0]}})"), ParseError);
    // wrong dimension, unknown unit, gamma multiple for a length, empty sweep
    CHECK_THROWS_AS(parse_config(std::string("{\"scenario\": \"dispersion\", ") + kOptics +
                                 R"(, "medium": {"density": {"value": 3, "unit": "nK"}},
                                 "sweep": {"Delta_over_gamma": [0]}})"), ParseError);
    CHECK_THROWS_AS(parse_config(std::string("{\"scenario\": \"dispersion\", ") + kOptics +
                                 R"(, "medium": {"density": {"value": 3, "unit": "furlong"}},
                                 "sweep": {"Delta_over_gamma": [0]}})"), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "dispersion", "optical": {"lambda_31": {"gamma": 2},
        "gamma": 1e8, "Gamma_31": 1e7, "Gamma_21": 0, "Omega": 1e7}, "medium": {"density": 1e18},
        "sweep": {"Delta_over_gamma": [0]}})"), ParseError);
    CHECK_THROWS_AS(parse_config(std::string("{\"scenario\": \"dispersion\", ") + kOptics +
                                 R"(, "medium": {"density": 1e18}, "sweep": {"Delta_over_gamma": []}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_config(std::string("{\"scenario\": \"density\", ") + kOptics + "}"), ParseError);
}

TEST_CASE("out-of-domain values are validation errors") {
    const std::string neg = std::string("{\"scenario\": \"dispersion\", ") + kOptics +
                            R"(, "medium": {"density": -1}, "sweep": {"Delta_over_gamma": [0]}})";
    try {
        parse_config(neg);
        FAIL("expected a ConfigError");
    } catch (const ParseError&) {
        FAIL("negative density is not a parse error");
    } catch (const ConfigError&) {
    }
    CHECK_THROWS_AS(parse_config(dispersion_config(R"(, "numerics": {"threshold": 2})")), ConfigError);
}

TEST_CASE("presets") {
    const char* expected[] = {"fig1", "fig2", "fig3", "fig4",  "fig5",  "fig6",
                              "fig7", "fig8", "fig9", "fig10", "fig11", "superluminal_cm"};
    REQUIRE(presets().size() == std::size(expected));
    for (std::size_t i = 0; i < presets().size(); ++i) {
        CHECK(presets()[i].name == expected[i]);
        CHECK_FALSE(presets()[i].source.empty());
        const ScenarioConfig c = parse_config(presets()[i].config);
        CHECK(c.name == expected[i]);
    }
    CHECK_THROWS_AS(find_preset("fig12"), ParseError);

    const Preset& f6 = find_preset("fig6");
    for (const char* token : {"N = 8.3e6", "a_sc = 2.75 nm", "(2pi)69 Hz", "(2pi)21 Hz", "R = 15 um"}) {
        CHECK(f6.source.find(token) != std::string::npos);
    }
    const ScenarioConfig c6 = parse_config(f6.config);
    REQUIRE(c6.trap);
    CHECK(c6.trap->N == 8.3e6);
    CHECK(c6.trap->a_sc == doctest::Approx(2.75e-9).epsilon(1e-15));
    CHECK(c6.trap->omega_r == doctest::Approx(2.0 * kPi * 69.0).epsilon(1e-15));
    CHECK(c6.trap->omega_z == doctest::Approx(2.0 * kPi * 21.0).epsilon(1e-15));
    CHECK(c6.trap->M == doctest::Approx(23.0 * kSI.amu).epsilon(1e-15));
    CHECK(c6.pinhole_radius == doctest::Approx(15e-6).epsilon(1e-15));

    const Preset& f5 = find_preset("fig5");
    for (const char* token : {"alpha' = -0.1/um", "N_g'/c = -0.03 s/m", "N_g''/c = 0.03 s/m", "a = 0.44/us^2"}) {
        CHECK(f5.source.find(token) != std::string::npos);
    }
    const ScenarioConfig c5 = parse_config(f5.config);
    CHECK(c5.slab.alpha_prime == doctest::Approx(-0.1e6).epsilon(1e-15));
    CHECK(c5.slab.Ng_real_over_c == -0.03);
    CHECK(c5.slab.Ng_imag_over_c == 0.03);
    CHECK(c5.slab.a == doctest::Approx(0.44e12).epsilon(1e-15));
}

TEST_CASE("every preset except the 2D one runs") {
    for (const auto& p : presets()) {
        if (p.name == "fig11") continue;  // minutes; exercised by the acceptance run
        CAPTURE(p.name);
        const auto tables = run_scenario(parse_config(p.config), 1);
        CHECK_FALSE(tables.empty());
        for (const auto& t : tables) {
            CHECK_FALSE(t.rows.empty());
            CHECK(t.units.size() == t.columns.size());
        }
    }
}

TEST_CASE("fig3 and fig6 columns") {
    const auto t3 = run_scenario(parse_config(find_preset("fig3").config));
    CHECK(t3[0].columns == std::vector<std::string>{"Delta_over_gamma", "refractive_index", "loss_index"});
    const std::string csv = format_csv(t3[0]);
    CHECK(csv.rfind("# units:", 0) == 0);
    CHECK(csv.find("\nDelta_over_gamma,refractive_index,loss_index\n") != std::string::npos);

    const auto t6 = run_scenario(parse_config(find_preset("fig6").config), 1);
    CHECK(t6[0].columns == std::vector<std::string>{"T_nK", "v_avg_interacting", "v_avg_ideal"});
    CHECK(t6[0].units == std::vector<std::string>{"nK", "m/s", "m/s"});
}

TEST_CASE("runs are deterministic and independent of the worker count") {
    for (const char* name : {"fig3", "fig6", "fig10"}) {
        CAPTURE(name);
        const ScenarioConfig c = parse_config(find_preset(name).config);
        const auto a = run_scenario(c, 1);
        const auto b = run_scenario(c, 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(format_csv(a[i]) == format_csv(b[i]));
    }
}

TEST_CASE("writing is all or nothing") {
    const fs::path dir = scratch("atomic");
    CsvTable a{"a", {"x"}, {"1"}, {{1.0}}};
    CsvTable b{"b", {"x"}, {"1"}, {{2.0}}};
    fs::create_directories(dir / "run_b.csv");  // blocks the second target
    CHECK_THROWS(write_tables({a, b}, "run", dir));
    CHECK(file_count(dir) == 1);
    fs::remove(dir / "run_b.csv");

    const auto paths = write_tables({a, b}, "run", dir);
    REQUIRE(paths.size() == 2);
    std::ifstream in(paths[1]);
    std::string units, header, row;
    std::getline(in, units);
    std::getline(in, header);
    std::getline(in, row);
    CHECK(units == "# units: x=1");
    CHECK(header == "x");
    CHECK(row == "2");
    fs::remove_all(dir);
}

TEST_CASE("output directory resolution") {
    ScenarioConfig c = parse_config(dispersion_config());
    setenv("SLOWLIGHT_OUTPUT_DIR", "/tmp/from_env", 1);
    CHECK(resolve_output_dir(c) == fs::path("/tmp/from_env"));
    CHECK(resolve_output_dir(c, "/tmp/flag") == fs::path("/tmp/flag"));
    c.output = "/tmp/from_config";
    CHECK(resolve_output_dir(c) == fs::path("/tmp/from_config"));
    unsetenv("SLOWLIGHT_OUTPUT_DIR");
    c.output.clear();
    CHECK(resolve_output_dir(c) == fs::path("."));
}

TEST_CASE("command line exit codes") {
    const fs::path dir = scratch("cli");
    const fs::path out = dir / "out";
    auto write = [&](const std::string& file, const std::string& text) {
        std::ofstream(dir / file) << text;
        return (dir / file).string();
    };

    CHECK(run_cli("list-presets") == 0);
    CHECK(run_cli("validate " + write("good.json", dispersion_config())) == 0);

    const std::string bad = write("bad.json", "{\"scenario\": \"dispersion\", \"optical\": ");
    CHECK(run_cli("run " + bad + " --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_cli("validate " + bad) == 2);
    CHECK(run_cli("run " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("preset fig99 --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));

    const std::string invalid = write("invalid.json", std::string("{\"scenario\": \"dispersion\", ") + kOptics +
                                      R"(, "medium": {"density": -1}, "sweep": {"Delta_over_gamma": [0]}})");
    CHECK(run_cli("run " + invalid + " --out " + out.string()) == 4);
    CHECK_FALSE(fs::exists(out));

    // The upwind grid cannot march a detuned (complex N_g) cloud and says so.
    const std::string unstable = write("unstable.json", std::string("{\"scenario\": \"propagate1d\", ") +
        R"("optical": {"lambda_31": {"value": 589, "unit": "nm"}, "gamma": {"value": 10.01e6, "unit": "Hz"},
            "Gamma_31": {"gamma": 0.5}, "Gamma_21": {"value": 1000, "unit": "Hz"}, "Omega": {"gamma": 0.56},
            "Delta": {"gamma": 1}},
        "trap": {"N": 8.3e6, "M": {"value": 23, "unit": "amu"}, "a_sc": {"value": 2.75, "unit": "nm"},
            "omega_r": {"value": 69, "unit": "Hz"}, "omega_z": {"value": 21, "unit": "Hz"},
            "T": {"value": 43, "unit": "nK"}},
        "numerics": {"a_bar": 100}})");
    CHECK(run_cli("run " + unstable + " --out " + out.string()) == 3);
    CHECK_FALSE(fs::exists(out));

    CHECK(run_cli("run " + write("ok.json", dispersion_config()) + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "dispersion_indices.csv"));
    CHECK(fs::exists(out / "dispersion_group_index.csv"));
    CHECK(file_count(out) == 2);

    const fs::path again = dir / "again";
    CHECK(run_cli("preset fig3 --out " + again.string()) == 0);
    CHECK(run_cli("preset fig3 --workers 2 --out " + out.string()) == 0);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(again / "fig3_indices.csv") == slurp(out / "fig3_indices.csv"));
    fs::remove_all(dir);
}
