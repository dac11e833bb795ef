#pragma once

#include "slowlight/bec_density.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/params.hpp"
#include "slowlight/propagator_1d.hpp"
#include "slowlight/propagator_2d.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slowlight {

/// Malformed config text: bad JSON, unknown or missing keys, wrong types.
class ParseError : public ConfigError {
public:
    explicit ParseError(const std::string& what) : ConfigError(what) {}
};

enum class ScenarioKind {
    dispersion,
    vgroup_defs,
    density,
    vgroup_sweep,
    propagate1d,
    absorption,
    paraxial,
    superluminal,
};

const char* scenario_name(ScenarioKind kind);

struct SuperluminalSlab {
    double alpha_prime = 0.0;     ///< 1/m, negative for gain
    double alpha_second = 0.0;    ///< 1/m
    double Ng_real_over_c = 0.0;  ///< s/m
    double Ng_imag_over_c = 0.0;  ///< s/m
    double a = 0.0;               ///< 1/s^2
    double length = 0.0;          ///< m, 0: use the critical length
    std::vector<double> lengths_over_critical;  ///< extra slabs propagated numerically
};

struct ScenarioConfig {
    std::string name;
    ScenarioKind kind = ScenarioKind::dispersion;
    OpticalParams optical;
    std::optional<TrapGasParams> trap;
    double T_over_Tc = 0.0;  ///< > 0 when the trap temperature is given relative to T_C
    double density = 0.0;    ///< m^-3, uniform media

    std::vector<double> Delta_over_gamma;
    std::vector<double> temperatures;  ///< K
    std::vector<double> scattering_lengths;  ///< m
    std::vector<GasModel> models{GasModel::interacting};

    // numerics
    double threshold = 0.01;
    double pinhole_radius = 15e-6;
    double rel_tol = 1e-6;
    double a_bar = 100.0;
    std::size_t profile_points = 401;
    std::size_t max_columns = 256;  ///< subsampling cap for 2D tables
    Grid1D axial;
    bool run_grid = true;
    Scenario2D paraxial;
    bool compare_without_diffraction = true;
    double map_half_width = 0.0;  ///< m, intensity map |x| range (0: full extent)
    SuperluminalSlab slab;

    std::filesystem::path output;  ///< empty: decided by the runner
};

/// Parses a JSON scenario. Throws ParseError for malformed text or schema
/// violations and ConfigError for out-of-domain values.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

struct Preset {
    std::string name;
    std::string source;  ///< parameter provenance
    std::string config;  ///< JSON text
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

struct CsvTable {
    std::string observable;
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
};

/// Fixed "{:.12g}" formatting, a units comment line and a header row.
std::string format_csv(const CsvTable& table);

/// Computes every table of a scenario. Sweep points run on `workers` threads;
/// results do not depend on the worker count.
std::vector<CsvTable> run_scenario(const ScenarioConfig& config, unsigned workers = 1);

/// Writes <name>_<observable>.csv for each table. Nothing is left behind if
/// any write fails: all files go to temporaries first and are renamed at the end.
std::vector<std::filesystem::path> write_tables(const std::vector<CsvTable>& tables,
                                                const std::string& name,
                                                const std::filesystem::path& dir);

/// Output directory: explicit override, else the config's, else
/// $SLOWLIGHT_OUTPUT_DIR, else the working directory.
std::filesystem::path resolve_output_dir(const ScenarioConfig& config,
                                         const std::filesystem::path& override_dir = {});

enum ExitCode : int {
    exit_ok = 0,
    exit_parse = 2,
    exit_numerical = 3,
    exit_validation = 4,
    exit_io = 5,
};

}  // namespace slowlight
