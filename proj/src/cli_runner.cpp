#include "slowlight/cli_runner.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/delay_metrics.hpp"
#include "slowlight/optical_response.hpp"
#include "slowlight/parallel.hpp"
#include "slowlight/units.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace slowlight {
namespace {

using json = nlohmann::json;

enum class Dim { length, temperature, frequency, density, time, mass, inverse_length, slowness, rate2 };

const char* dim_name(Dim d) {
    switch (d) {
        case Dim::length: return "length";
        case Dim::temperature: return "temperature";
        case Dim::frequency: return "frequency";
        case Dim::density: return "density";
        case Dim::time: return "time";
        case Dim::mass: return "mass";
        case Dim::inverse_length: return "inverse length";
        case Dim::slowness: return "s/m";
        case Dim::rate2: return "1/s^2";
    }
    return "?";
}

struct UnitInfo {
    Dim dim;
    double factor;  // to SI
};

UnitInfo unit_info(const std::string& name) {
    static const std::map<std::string, UnitInfo, std::less<>> extra{
        {"kg", {Dim::mass, 1.0}},          {"amu", {Dim::mass, kSI.amu}},
        {"1/m", {Dim::inverse_length, 1.0}}, {"1/cm", {Dim::inverse_length, 1e2}},
        {"1/um", {Dim::inverse_length, 1e6}}, {"s/m", {Dim::slowness, 1.0}},
        {"1/s^2", {Dim::rate2, 1.0}},      {"1/us^2", {Dim::rate2, 1e12}},
    };
    if (auto it = extra.find(name); it != extra.end()) return it->second;
    Unit u;
    try {
        u = parse_unit(name);
    } catch (const ConfigError&) {
        throw ParseError(fmt::format("unknown unit '{}'", name));
    }
    auto to = [&](Dim d, Unit base) { return UnitInfo{d, convert(1.0, u, base)}; };
    switch (u) {
        case Unit::meter:
        case Unit::nanometer:
        case Unit::micrometer: return to(Dim::length, Unit::meter);
        case Unit::kelvin:
        case Unit::nanokelvin: return to(Dim::temperature, Unit::kelvin);
        case Unit::hertz:
        case Unit::rad_per_s: return to(Dim::frequency, Unit::rad_per_s);
        case Unit::per_cm3:
        case Unit::per_m3: return to(Dim::density, Unit::per_m3);
        case Unit::second:
        case Unit::microsecond: return to(Dim::time, Unit::second);
    }
    throw ParseError(fmt::format("unknown unit '{}'", name));
}

// Strict object access: every key must be known and required keys present.
class Section {
public:
    Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
        : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ParseError(fmt::format("'{}' must be an object", path_));
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, v] : j_.items()) {
            if (!ok.count(k)) throw ParseError(fmt::format("unknown key '{}{}'", prefix(), k));
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) const {
        if (!j_.contains(key)) throw ParseError(fmt::format("missing key '{}{}'", prefix(), key));
        return j_.at(key);
    }
    std::string where(const char* key) const { return prefix() + key; }

    double number(const char* key) const {
        const json& v = at(key);
        if (!v.is_number()) throw ParseError(fmt::format("'{}' must be a number", where(key)));
        return v.get<double>();
    }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::size_t count(const char* key, std::size_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ParseError(fmt::format("'{}' must be a non-negative integer", where(key)));
        }
        return v.get<std::size_t>();
    }

    bool flag(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_boolean()) throw ParseError(fmt::format("'{}' must be true or false", where(key)));
        return v.get<bool>();
    }

    std::string text(const char* key) const {
        const json& v = at(key);
        if (!v.is_string()) throw ParseError(fmt::format("'{}' must be a string", where(key)));
        return v.get<std::string>();
    }

    /// SI number, {"value": x, "unit": u}, or {"gamma": x} for frequencies when gamma > 0.
    double quantity(const char* key, Dim dim, double gamma = 0.0) const {
        return parse_quantity(at(key), where(key), dim, gamma);
    }
    double quantity(const char* key, Dim dim, double gamma, double fallback) const {
        return has(key) ? quantity(key, dim, gamma) : fallback;
    }

    static double parse_quantity(const json& v, const std::string& where, Dim dim, double gamma) {
        if (v.is_number()) return v.get<double>();
        if (!v.is_object()) throw ParseError(fmt::format("'{}' must be a number or an object", where));
        if (v.contains("gamma")) {
            if (v.size() != 1 || !v.at("gamma").is_number()) {
                throw ParseError(fmt::format("'{}' must be {{\"gamma\": number}}", where));
            }
            if (dim != Dim::frequency || !(gamma > 0.0)) {
                throw ParseError(fmt::format("'{}' cannot be given in units of gamma", where));
            }
            return v.at("gamma").get<double>() * gamma;
        }
        if (v.size() != 2 || !v.contains("value") || !v.contains("unit") ||
            !v.at("value").is_number() || !v.at("unit").is_string()) {
            throw ParseError(fmt::format("'{}' must be {{\"value\": number, \"unit\": string}}", where));
        }
        const UnitInfo u = unit_info(v.at("unit").get<std::string>());
        if (u.dim != dim) {
            throw ParseError(fmt::format("'{}' expects a {} unit, got '{}'", where, dim_name(dim),
                                         v.at("unit").get<std::string>()));
        }
        return v.at("value").get<double>() * u.factor;
    }

private:
    std::string prefix() const { return path_.empty() ? "" : path_ + "."; }
    const json& j_;
    std::string path_;
};

// [..], {"values": [..], "unit": u} or {"start", "stop", "count", "unit"}; unit optional.
std::vector<double> parse_list(const json& v, const std::string& where, std::optional<Dim> dim) {
    auto scale_of = [&](const json& obj) {
        if (!obj.contains("unit")) return 1.0;
        if (!obj.at("unit").is_string()) throw ParseError(fmt::format("'{}.unit' must be a string", where));
        if (!dim) throw ParseError(fmt::format("'{}' is dimensionless and takes no unit", where));
        const UnitInfo u = unit_info(obj.at("unit").get<std::string>());
        if (u.dim != *dim) throw ParseError(fmt::format("'{}' expects a {} unit", where, dim_name(*dim)));
        return u.factor;
    };
    auto numbers = [&](const json& arr, double scale) {
        std::vector<double> out;
        for (const auto& x : arr) {
            if (!x.is_number()) throw ParseError(fmt::format("'{}' must contain numbers only", where));
            out.push_back(x.get<double>() * scale);
        }
        return out;
    };
    std::vector<double> out;
    if (v.is_array()) {
        out = numbers(v, 1.0);
    } else if (v.is_object() && v.contains("values")) {
        Section s(v, where, {"values", "unit"});
        if (!v.at("values").is_array()) throw ParseError(fmt::format("'{}.values' must be an array", where));
        out = numbers(v.at("values"), scale_of(v));
    } else if (v.is_object()) {
        Section s(v, where, {"start", "stop", "count", "unit"});
        const double a = s.number("start"), b = s.number("stop");
        const std::size_t n = s.count("count", 0);
        if (n == 0) throw ParseError(fmt::format("'{}.count' must be positive", where));
        const double scale = scale_of(v);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(x * scale);
        }
    } else {
        throw ParseError(fmt::format("'{}' must be a list or a range object", where));
    }
    if (out.empty()) throw ParseError(fmt::format("'{}' must not be empty", where));
    return out;
}

ScenarioKind parse_kind(const std::string& s) {
    static const std::map<std::string, ScenarioKind, std::less<>> kinds{
        {"dispersion", ScenarioKind::dispersion},     {"vgroup_defs", ScenarioKind::vgroup_defs},
        {"density", ScenarioKind::density},           {"vgroup_sweep", ScenarioKind::vgroup_sweep},
        {"propagate1d", ScenarioKind::propagate1d},   {"absorption", ScenarioKind::absorption},
        {"paraxial", ScenarioKind::paraxial},         {"superluminal", ScenarioKind::superluminal},
    };
    auto it = kinds.find(s);
    if (it == kinds.end()) throw ParseError(fmt::format("unknown scenario '{}'", s));
    return it->second;
}

GasModel parse_model(const json& v) {
    if (v == "interacting") return GasModel::interacting;
    if (v == "ideal") return GasModel::ideal;
    throw ParseError(fmt::format("unknown gas model {}", v.dump()));
}

OpticalParams parse_optical(const json& j) {
    Section s(j, "optical", {"lambda_31", "gamma", "Gamma_31", "Gamma_21", "Omega", "Delta"});
    OpticalParams p;
    p.lambda_31 = s.quantity("lambda_31", Dim::length);
    p.gamma = s.quantity("gamma", Dim::frequency);
    p.Gamma_31 = s.quantity("Gamma_31", Dim::frequency, p.gamma);
    p.Gamma_21 = s.quantity("Gamma_21", Dim::frequency, p.gamma);
    p.Omega = s.quantity("Omega", Dim::frequency, p.gamma);
    p.Delta = s.quantity("Delta", Dim::frequency, p.gamma, 0.0);
    return p;
}

void parse_trap(const json& j, ScenarioConfig& c) {
    Section s(j, "trap", {"N", "M", "a_sc", "omega_r", "omega_z", "T", "T_over_Tc"});
    TrapGasParams t;
    t.N = s.number("N");
    t.M = s.quantity("M", Dim::mass);
    t.a_sc = s.quantity("a_sc", Dim::length);
    t.omega_r = s.quantity("omega_r", Dim::frequency);
    t.omega_z = s.quantity("omega_z", Dim::frequency);
    if (s.has("T") && s.has("T_over_Tc")) throw ParseError("give either trap.T or trap.T_over_Tc");
    t.T = s.quantity("T", Dim::temperature, 0.0, 0.0);
    c.T_over_Tc = s.number("T_over_Tc", 0.0);
    if (s.has("T_over_Tc") && !(c.T_over_Tc > 0.0)) throw ConfigError("trap.T_over_Tc must be positive");
    c.trap = t;
}

void parse_axial(const json& j, const std::string& where, Grid1D& g) {
    Section s(j, where, {"z_min", "z_max", "nz", "auto_time", "t_min", "t_max", "nt", "store_every",
                         "cfl_margin"});
    g.z_min = s.number("z_min", g.z_min);
    g.z_max = s.number("z_max", g.z_max);
    g.nz = s.count("nz", g.nz);
    g.auto_time = s.flag("auto_time", g.auto_time);
    g.t_min = s.number("t_min", g.t_min);
    g.t_max = s.number("t_max", g.t_max);
    g.nt = s.count("nt", g.nt);
    g.store_every = s.count("store_every", g.store_every);
    g.cfl_margin = s.number("cfl_margin", g.cfl_margin);
}

void parse_numerics(const json& j, ScenarioConfig& c) {
    Section s(j, "numerics", {"threshold", "pinhole_radius", "rel_tol", "a_bar", "profile_points",
                              "max_columns", "scheme", "axial"});
    c.threshold = s.number("threshold", c.threshold);
    c.pinhole_radius = s.quantity("pinhole_radius", Dim::length, 0.0, c.pinhole_radius);
    c.rel_tol = s.number("rel_tol", c.rel_tol);
    c.a_bar = s.number("a_bar", c.a_bar);
    c.profile_points = s.count("profile_points", c.profile_points);
    c.max_columns = s.count("max_columns", c.max_columns);
    if (s.has("scheme")) {
        const std::string scheme = s.text("scheme");
        if (scheme == "grid") c.run_grid = true;
        else if (scheme == "characteristics") c.run_grid = false;
        else throw ParseError(fmt::format("unknown scheme '{}'", scheme));
    }
    if (s.has("axial")) parse_axial(s.at("axial"), "numerics.axial", c.axial);
}

void parse_paraxial(const json& j, ScenarioConfig& c) {
    Section s(j, "paraxial", {"beam_radius", "extent", "points", "axial", "compare_without_diffraction",
                              "map_half_width"});
    Scenario2D& p = c.paraxial;
    p.beam_radius = s.quantity("beam_radius", Dim::length, 0.0, p.beam_radius);
    p.transverse.extent = s.quantity("extent", Dim::length, 0.0, p.transverse.extent);
    p.transverse.points = s.count("points", p.transverse.points);
    if (s.has("axial")) parse_axial(s.at("axial"), "paraxial.axial", p.axial);
    c.compare_without_diffraction = s.flag("compare_without_diffraction", c.compare_without_diffraction);
    c.map_half_width = s.quantity("map_half_width", Dim::length, 0.0, 0.0);
}

void parse_slab(const json& j, SuperluminalSlab& b) {
    Section s(j, "slab", {"alpha_prime", "alpha_second", "Ng_real_over_c", "Ng_imag_over_c", "a", "length",
                          "lengths_over_critical"});
    b.alpha_prime = s.quantity("alpha_prime", Dim::inverse_length);
    b.alpha_second = s.quantity("alpha_second", Dim::inverse_length, 0.0, 0.0);
    b.Ng_real_over_c = s.quantity("Ng_real_over_c", Dim::slowness);
    b.Ng_imag_over_c = s.quantity("Ng_imag_over_c", Dim::slowness);
    b.a = s.quantity("a", Dim::rate2);
    b.length = s.quantity("length", Dim::length, 0.0, 0.0);
    if (s.has("lengths_over_critical")) {
        b.lengths_over_critical = parse_list(s.at("lengths_over_critical"), s.where("lengths_over_critical"),
                                             std::nullopt);
    }
}

void require_value(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void validate(ScenarioConfig& c) {
    using K = ScenarioKind;
    const bool needs_optical = c.kind != K::superluminal;
    if (needs_optical) c.optical.validate();
    const bool needs_trap = c.kind == K::density || c.kind == K::vgroup_sweep || c.kind == K::propagate1d ||
                            c.kind == K::absorption || c.kind == K::paraxial;
    if (needs_trap && !c.trap) throw ParseError(fmt::format("scenario '{}' needs a 'trap' section", scenario_name(c.kind)));
    if (c.trap) {
        if (c.T_over_Tc > 0.0) {
            TrapGasParams t = *c.trap;
            t.T = 0.0;
            c.trap->T = c.T_over_Tc * critical_temperature(t);
        }
        c.trap->validate();
    }
    const bool needs_T = c.kind == K::density || c.kind == K::propagate1d || c.kind == K::absorption ||
                         c.kind == K::paraxial;
    if (needs_T && !(c.trap->T > 0.0)) {
        throw ParseError(fmt::format("scenario '{}' needs trap.T or trap.T_over_Tc", scenario_name(c.kind)));
    }
    if (c.kind == K::dispersion || c.kind == K::vgroup_defs) {
        require_value(c.density > 0.0, "medium.density must be positive");
        if (c.Delta_over_gamma.empty()) {
            throw ParseError(fmt::format("scenario '{}' needs sweep.Delta_over_gamma", scenario_name(c.kind)));
        }
    }
    if (c.kind == K::vgroup_sweep && c.temperatures.empty()) {
        throw ParseError("scenario 'vgroup_sweep' needs sweep.T or sweep.T_over_Tc");
    }
    for (double T : c.temperatures) require_value(T > 0.0 && std::isfinite(T), "sweep temperatures must be positive");
    for (double a : c.scattering_lengths) require_value(a > 0.0 && std::isfinite(a), "sweep.a_sc must be positive");
    require_value(c.threshold > 0.0 && c.threshold < 1.0, "numerics.threshold must lie in (0, 1)");
    require_value(c.pinhole_radius >= 0.0, "numerics.pinhole_radius must be non-negative");
    require_value(c.rel_tol > 0.0, "numerics.rel_tol must be positive");
    require_value(c.a_bar > 0.0, "numerics.a_bar must be positive");
    require_value(c.profile_points >= 3, "numerics.profile_points must be at least 3");
    require_value(c.max_columns >= 3, "numerics.max_columns must be at least 3");
    if (c.kind == K::superluminal) {
        const SuperluminalSlab& b = c.slab;
        require_value(b.alpha_prime < 0.0, "slab.alpha_prime must be negative");
        require_value(b.Ng_imag_over_c != 0.0, "slab.Ng_imag_over_c must be non-zero");
        require_value(b.Ng_real_over_c != 0.0, "slab.Ng_real_over_c must be non-zero");
        require_value(b.a > 0.0, "slab.a must be positive");
        require_value(b.length >= 0.0, "slab.length must be non-negative");
        for (double r : b.lengths_over_critical) require_value(r > 0.0, "slab.lengths_over_critical must be positive");
    }
}

// Column/row helpers -------------------------------------------------------

std::string number_tag(double x) {
    std::string s = fmt::format("{:.12g}", x);
    std::replace(s.begin(), s.end(), '.', 'p');
    std::replace(s.begin(), s.end(), '-', 'm');
    return s;
}

std::vector<std::size_t> subsample(std::size_t n, std::size_t cap) {
    const std::size_t stride = std::max<std::size_t>(1, (n + cap - 1) / cap);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

double row_peak(const FieldMatrix& m, std::size_t row) {
    return m.row(static_cast<Eigen::Index>(row)).cwiseAbs().maxCoeff();
}

// Scenarios ------------------------------------------------------------------

std::vector<CsvTable> run_dispersion(const ScenarioConfig& c) {
    CsvTable idx{"indices", {"Delta_over_gamma", "refractive_index", "loss_index"}, {"1", "1", "1"}, {}};
    CsvTable ng{"group_index",
                {"Delta_over_gamma", "Ng_real_over_c", "Ng_imag_over_c", "alpha_real", "alpha_imag"},
                {"1", "s/m", "s/m", "1/m", "1/m"},
                {}};
    for (double d : c.Delta_over_gamma) {
        const IndexBundle b = index_bundle(c.density, c.optical.with_detuning(d * c.optical.gamma));
        idx.rows.push_back({d, b.refractive_index, b.loss_index});
        const cplx n = b.N_g_over_c();
        ng.rows.push_back({d, n.real(), n.imag(), b.alpha.real(), b.alpha.imag()});
    }
    return {idx, ng};
}

std::vector<CsvTable> run_vgroup_defs(const ScenarioConfig& c) {
    std::vector<double> grid;
    for (double d : c.Delta_over_gamma) grid.push_back(d * c.optical.gamma);
    const GroupVelocityCurves g = group_velocity_curves(c.density, c.optical, grid);
    CsvTable v{"group_velocity",
               {"Delta_over_gamma", "v_re_c_over_Ng", "v_c_over_re_Ng", "singular"},
               {"1", "m/s", "m/s", "flag"},
               {}};
    for (const auto& s : g.samples) {
        v.rows.push_back({s.Delta / c.optical.gamma, s.v_def1, s.v_def2, s.singular ? 1.0 : 0.0});
    }
    CsvTable sing{"singularities", {"Delta_over_gamma"}, {"1"}, {}};
    for (double d : g.singular_detunings) sing.rows.push_back({d / c.optical.gamma});
    return {v, sing};
}

std::vector<CsvTable> run_density(const ScenarioConfig& c) {
    const DensityModel model(*c.trap);
    const double L = cloud_length(model, c.threshold);
    const std::size_t n = c.profile_points;
    auto indices = [&](double rho) { return index_bundle(rho, c.optical).N_g_over_c(); };

    CsvTable axial{"axial_profile",
                   {"z_um", "density", "normalized", "condensate", "thermal", "Ng_real_over_c", "Ng_imag_over_c"},
                   {"um", "m^-3", "1", "m^-3", "m^-3", "s/m", "s/m"},
                   {}};
    for (std::size_t i = 0; i < n; ++i) {
        const double z = -1.5 * L + 3.0 * L * static_cast<double>(i) / static_cast<double>(n - 1);
        const double rho = model.density(0.0, z);
        const cplx ng = indices(rho);
        axial.rows.push_back({z * 1e6, rho, model.normalized(0.0, z), model.condensate_density(0.0, z),
                              model.thermal_density(0.0, z), ng.real(), ng.imag()});
    }
    const double r_max = 1.5 * L * c.trap->aspect_ratio();
    CsvTable radial{"radial_profile",
                    {"r_um", "density", "normalized", "Ng_real_over_c", "Ng_imag_over_c"},
                    {"um", "m^-3", "1", "s/m", "s/m"},
                    {}};
    for (std::size_t i = 0; i < n; ++i) {
        const double r = r_max * static_cast<double>(i) / static_cast<double>(n - 1);
        const double rho = model.density(r, 0.0);
        const cplx ng = indices(rho);
        radial.rows.push_back({r * 1e6, rho, model.normalized(r, 0.0), ng.real(), ng.imag()});
    }
    const ThermoState& s = model.state();
    CsvTable thermo{"thermo",
                    {"T_nK", "T_C_nK", "T_over_Tc", "mu_over_kB_nK", "condensate_fraction", "s",
                     "center_density", "half_length_um", "tf_radius_r_um", "tf_radius_z_um", "v_g_center"},
                    {"nK", "nK", "1", "nK", "1", "1", "m^-3", "um", "um", "um", "m/s"},
                    {}};
    const double T = c.trap->T;
    thermo.rows.push_back({T * 1e9, s.T_C * 1e9, T / s.T_C, s.mu / kSI.k_B * 1e9, s.cond_frac, s.s,
                           model.center_density(), L * 1e6, model.tf_radius_r() * 1e6,
                           model.tf_radius_z() * 1e6, local_group_velocity(model.center_density(), c.optical)});
    return {axial, radial, thermo};
}

std::vector<CsvTable> run_vgroup_sweep(const ScenarioConfig& c, unsigned workers) {
    const bool swept = !c.scattering_lengths.empty();
    const std::vector<double> lengths = swept ? c.scattering_lengths : std::vector<double>{c.trap->a_sc};
    DelayOptions opts;
    opts.threshold = c.threshold;
    opts.rel_tol = c.rel_tol;

    CsvTable v{"group_velocity", {"T_nK"}, {"nK"}, {}};
    CsvTable d{"delay", {"T_nK"}, {"nK"}, {}};
    std::vector<std::vector<DelayResult>> series;
    for (double a : lengths) {
        TrapGasParams trap = *c.trap;
        trap.a_sc = a;
        for (GasModel m : c.models) {
            const std::string tag = swept ? fmt::format("{}_a{}nm", gas_model_name(m), number_tag(a * 1e9))
                                          : std::string(gas_model_name(m));
            v.columns.push_back("v_avg_" + tag);
            v.units.push_back("m/s");
            d.columns.push_back("t_d_" + tag);
            d.units.push_back("us");
            d.columns.push_back("L_" + tag);
            d.units.push_back("um");
            series.push_back(vgroup_vs_temperature(trap, c.optical, c.pinhole_radius, c.temperatures, m, opts,
                                                   workers));
        }
    }
    for (std::size_t i = 0; i < c.temperatures.size(); ++i) {
        std::vector<double> vr{c.temperatures[i] * 1e9}, dr{c.temperatures[i] * 1e9};
        for (const auto& s : series) {
            vr.push_back(s[i].v_avg);
            dr.push_back(s[i].t_d * 1e6);
            dr.push_back(s[i].L * 1e6);
        }
        v.rows.push_back(std::move(vr));
        d.rows.push_back(std::move(dr));
    }
    std::vector<CsvTable> out{v, d};
    if (swept) {
        CsvTable s{"scaling", {"a_sc_nm", "s", "T_C_nK"}, {"nm", "1", "nK"}, {}};
        for (double a : lengths) {
            TrapGasParams trap = *c.trap;
            trap.a_sc = a;
            s.rows.push_back({a * 1e9, scaling_s(trap), critical_temperature(trap) * 1e9});
        }
        out.push_back(s);
    }
    return out;
}

CsvTable field_table(const EnvelopeField& f, const FieldMatrix& m, std::size_t max_columns) {
    CsvTable t{"field", {"z_bar", "t_bar", "intensity"}, {"1", "1", "1"}, {}};
    const auto cols = subsample(f.t.size(), max_columns);
    for (std::size_t s = 0; s < f.z.size(); ++s) {
        for (std::size_t j : cols) {
            t.rows.push_back({f.z[s], f.t[j], std::norm(m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)))});
        }
    }
    return t;
}

std::vector<CsvTable> run_propagate1d(const ScenarioConfig& c) {
    const DensityModel model(*c.trap);
    const ScaledMedium medium = ScaledMedium::cloud(model, c.optical, c.threshold);
    Propagate1DOptions opts;
    opts.run_grid = c.run_grid;
    const EnvelopeField f = propagate_1d(c.a_bar, medium, c.axial, opts);
    const FieldScheme main = c.run_grid ? FieldScheme::grid : FieldScheme::characteristics;

    const double z_exit = f.z.back();
    const double estimate = uniform_delay_estimate(model, c.optical, 0.5 * f.L);
    const double delay = measure_delay(f, z_exit, main);
    const double delay_ref = measure_delay(f, z_exit, FieldScheme::characteristics);
    CsvTable summary{"summary",
                     {"T_nK", "L_um", "v_g0", "delay_us", "delay_characteristics_us", "uniform_estimate_us",
                      "edge_ratio", "v_avg", "exit_peak_amplitude"},
                     {"nK", "um", "m/s", "us", "us", "us", "1", "m/s", "1"},
                     {{c.trap->T * 1e9, f.L * 1e6, f.v_g0, delay * 1e6, delay_ref * 1e6, estimate * 1e6,
                       delay / estimate, f.L / delay, row_peak(f.scheme(main), f.z.size() - 1)}}};

    CsvTable energy{"energy", {"z_bar", "energy_characteristics"}, {"1", "1"}, {}};
    if (c.run_grid) {
        energy.columns.push_back("energy_grid");
        energy.units.push_back("1");
    }
    for (std::size_t k = 0; k < f.z_nodes.size(); ++k) {
        std::vector<double> row{f.z_nodes[k], f.energy_reference[k] / f.energy_reference.front()};
        if (c.run_grid) row.push_back(f.energy[k] / f.energy.front());
        energy.rows.push_back(std::move(row));
    }
    return {field_table(f, f.scheme(main), c.max_columns), energy, summary};
}

std::vector<CsvTable> run_absorption(const ScenarioConfig& c, unsigned workers) {
    const std::vector<double> detunings =
        c.Delta_over_gamma.empty() ? std::vector<double>{c.optical.Delta / c.optical.gamma} : c.Delta_over_gamma;
    const DensityModel model(*c.trap);
    Propagate1DOptions opts;
    opts.run_grid = false;
    std::vector<EnvelopeField> fields(detunings.size());
    parallel_for(detunings.size(), workers, [&](std::size_t i) {
        const ScaledMedium medium =
            ScaledMedium::cloud(model, c.optical.with_detuning(detunings[i] * c.optical.gamma), c.threshold);
        fields[i] = propagate_1d(c.a_bar, medium, c.axial, opts);
    });
    CsvTable summary{"summary", {"Delta_over_gamma", "penetration_fraction"}, {"1", "1"}, {}};
    CsvTable energy{"energy", {"Delta_over_gamma", "z_bar", "energy"}, {"1", "1", "1"}, {}};
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        const EnvelopeField& f = fields[i];
        summary.rows.push_back({detunings[i], absorption_depth(f, FieldScheme::characteristics)});
        for (std::size_t k = 0; k < f.z_nodes.size(); ++k) {
            energy.rows.push_back({detunings[i], f.z_nodes[k], f.energy_reference[k] / f.energy_reference.front()});
        }
    }
    std::vector<CsvTable> out;
    if (detunings.size() == 1) out.push_back(field_table(fields[0], fields[0].reference, c.max_columns));
    out.push_back(energy);
    out.push_back(summary);
    return out;
}

std::vector<CsvTable> run_paraxial(const ScenarioConfig& c, unsigned workers) {
    const DensityModel model(*c.trap);
    const RadialMedium medium = RadialMedium::cloud(model, c.optical, c.threshold);
    const Scenario2D& p = c.paraxial;
    std::vector<ParaxialOptions> runs(1);
    if (c.compare_without_diffraction) {
        runs.emplace_back();
        runs.back().diffraction = false;
    }
    std::vector<ParaxialField> fields(runs.size());
    parallel_for(runs.size(), workers, [&](std::size_t i) {
        fields[i] = propagate_paraxial(c.a_bar, p.beam_radius, medium, p.transverse, p.axial, runs[i]);
    });
    const ParaxialField& f = fields[0];

    const IntensityMap map = time_averaged_intensity(f);
    const double half = c.map_half_width > 0.0 ? c.map_half_width : p.transverse.extent;
    std::vector<std::size_t> inside;
    for (std::size_t j = 0; j < map.x.size(); ++j) {
        if (std::abs(map.x[j]) <= half) inside.push_back(j);
    }
    CsvTable image{"intensity_map", {"x_um", "z_bar", "intensity"}, {"um", "1", "1"}, {}};
    const auto pick = subsample(inside.size(), c.max_columns);
    for (std::size_t s = 0; s < map.z.size(); ++s) {
        for (std::size_t q : pick) {
            const std::size_t j = inside[q];
            image.rows.push_back({map.x[j] * 1e6, map.z[s], map.I(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j))});
        }
    }

    CsvTable axis{"axis", {"z_bar", "axis_intensity", "power"}, {"1", "1", "1"}, {}};
    if (fields.size() > 1) {
        axis.columns.insert(axis.columns.end(), {"axis_intensity_no_diffraction", "power_no_diffraction"});
        axis.units.insert(axis.units.end(), {"1", "1"});
    }
    for (std::size_t s = 0; s < f.z.size(); ++s) {
        std::vector<double> row{f.z[s], f.axis_intensity[s], f.power[s]};
        if (fields.size() > 1) {
            row.push_back(fields[1].axis_intensity[s]);
            row.push_back(fields[1].power[s]);
        }
        axis.rows.push_back(std::move(row));
    }

    const std::size_t last = f.z.size() - 1;
    CsvTable summary{"summary",
                     {"T_nK", "pinhole_um", "transmission", "axis_exit", "delay_us", "max_alias_fraction"},
                     {"nK", "um", "1", "1", "us", "1"},
                     {}};
    std::vector<double> row{c.trap->T * 1e9, c.pinhole_radius * 1e6, pinhole_transmission(f, c.pinhole_radius),
                            f.axis_intensity[last], axis_delay(f, last) * 1e6, f.max_alias_fraction};
    if (fields.size() > 1) {
        const ParaxialField& g = fields[1];
        summary.columns.insert(summary.columns.end(),
                               {"transmission_no_diffraction", "axis_exit_no_diffraction", "delay_no_diffraction_us"});
        summary.units.insert(summary.units.end(), {"1", "1", "us"});
        row.push_back(pinhole_transmission(g, c.pinhole_radius));
        row.push_back(g.axis_intensity[last]);
        row.push_back(axis_delay(g, last) * 1e6);
    }
    summary.rows.push_back(std::move(row));
    return {image, axis, summary};
}

std::vector<CsvTable> run_superluminal(const ScenarioConfig& c, unsigned workers) {
    const SuperluminalSlab& b = c.slab;
    const cplx Ng(b.Ng_real_over_c * kSI.c, b.Ng_imag_over_c * kSI.c);
    const cplx alpha(b.alpha_prime, b.alpha_second);
    const double Lc = critical_superluminal_length(b.alpha_prime, b.a, b.Ng_imag_over_c);
    const double L = b.length > 0.0 ? b.length : Lc;
    PulseSpec pulse;
    pulse.a = b.a;

    // Peak retardation L Re(N_g)/c; the window spans it with 6 widths of margin.
    const double width = 1.0 / std::sqrt(b.a);
    const double t0 = L * b.Ng_real_over_c;
    const double lo = std::min(0.0, t0) - 6.0 * width, hi = std::max(0.0, t0) + 6.0 * width;
    const std::size_t nt = 8001;
    std::vector<double> t(nt);
    std::vector<cplx> exit(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        t[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(nt - 1);
        const UniformSolution u = analytic_uniform_solution(pulse, Ng, alpha, L, t[j]);
        exit[j] = std::polar(u.U, u.phi);
    }
    const double t_peak = peak_time(t, exit.data(), nt);
    const UniformSolution top = analytic_uniform_solution(pulse, Ng, alpha, L, t_peak);

    CsvTable field{"field", {"z_um", "t_us", "intensity"}, {"um", "us", "1"}, {}};
    const std::size_t nz = 101;
    const auto cols = subsample(nt, c.max_columns);
    for (std::size_t k = 0; k < nz; ++k) {
        const double z = L * static_cast<double>(k) / static_cast<double>(nz - 1);
        for (std::size_t j : cols) {
            const double U = analytic_uniform_solution(pulse, Ng, alpha, z, t[j]).U;
            field.rows.push_back({z * 1e6, t[j] * 1e6, U * U});
        }
    }
    CsvTable summary{"summary",
                     {"L_c_um", "L_um", "peak_time_us", "peak_amplitude", "net_exponent"},
                     {"um", "um", "us", "1", "1"},
                     {{Lc * 1e6, L * 1e6, t_peak * 1e6, top.U,
                       b.a * std::pow(b.Ng_imag_over_c * L, 2) + b.alpha_prime * L}}};
    std::vector<CsvTable> out{field, summary};

    if (!b.lengths_over_critical.empty()) {
        const auto& ratios = b.lengths_over_critical;
        const double v_ref = kSI.c / std::abs(Ng.real());
        std::vector<std::vector<double>> rows(ratios.size());
        parallel_for(ratios.size(), workers, [&](std::size_t i) {
            const double Li = ratios[i] * Lc;
            const ScaledMedium slab = ScaledMedium::uniform_indices(Ng, alpha, Li, v_ref);
            Grid1D g;
            g.z_min = -1.0;
            g.z_max = 1.0;
            g.nz = 401;
            g.store_every = 400;
            Propagate1DOptions opts;
            opts.run_grid = false;
            const EnvelopeField f = propagate_1d(b.a * std::pow(Li / v_ref, 2), slab, g, opts);
            const double peak = row_peak(f.reference, f.z.size() - 1);
            rows[i] = {ratios[i], Li * 1e6, peak, measure_delay(f, 1.0, FieldScheme::characteristics) * 1e6,
                       peak > 1.0 ? 1.0 : 0.0};
        });
        out.push_back(CsvTable{"threshold",
                               {"L_over_Lc", "L_um", "exit_peak_amplitude", "delay_us", "superluminal"},
                               {"1", "um", "1", "us", "flag"},
                               rows});
    }
    return out;
}

json sodium_optical_json(double Delta_over_gamma = 0.0) {
    return {{"lambda_31", {{"value", 589}, {"unit", "nm"}}},
            {"gamma", {{"value", 10.01e6}, {"unit", "Hz"}}},
            {"Gamma_31", {{"gamma", 0.5}}},
            {"Gamma_21", {{"value", 1e3}, {"unit", "Hz"}}},
            {"Omega", {{"gamma", 0.56}}},
            {"Delta", {{"gamma", Delta_over_gamma}}}};
}

json sodium_trap_json() {
    return {{"N", 8.3e6},
            {"M", {{"value", 23}, {"unit", "amu"}}},
            {"a_sc", {{"value", 2.75}, {"unit", "nm"}}},
            {"omega_r", {{"value", 69}, {"unit", "Hz"}}},
            {"omega_z", {{"value", 21}, {"unit", "Hz"}}}};
}

json range(double start, double stop, int count, const char* unit = nullptr) {
    json r{{"start", start}, {"stop", stop}, {"count", count}};
    if (unit) r["unit"] = unit;
    return r;
}

std::vector<Preset> build_presets() {
    const std::string optics =
        "lambda = 589 nm, Gamma_31 = 0.5 gamma, Gamma_21 = (2pi)10^3 Hz, Omega = 0.56 gamma, "
        "gamma = (2pi)10.01 MHz";
    const std::string trap_src =
        "N = 8.3e6, a_sc = 2.75 nm, omega_r = (2pi)69 Hz, omega_z = (2pi)21 Hz, M = 23 amu, R = 15 um";
    const json rho{{"density", {{"value", 3.3e12}, {"unit", "cm^-3"}}}};
    std::vector<Preset> out;
    auto add = [&](std::string name, std::string source, json cfg) {
        cfg["name"] = name;
        out.push_back({std::move(name), std::move(source), cfg.dump(2)});
    };

    json defs{{"scenario", "vgroup_defs"}, {"optical", sodium_optical_json()}, {"medium", rho},
              {"sweep", {{"Delta_over_gamma", range(-3.0, 3.0, 601)}}}};
    add("fig1", "Fig. 1 caption: v_g = Re(c/N_g), uniform density 3.3e12 cm^-3, " + optics, defs);
    add("fig2", "Fig. 2 caption: v_g = c/Re(N_g), same medium as fig1", defs);

    json disp{{"scenario", "dispersion"}, {"optical", sodium_optical_json()}, {"medium", rho},
              {"sweep", {{"Delta_over_gamma", range(-1.5, 1.5, 601)}}}};
    add("fig3", "Fig. 3 caption: refractive and loss index at 3.3e12 cm^-3 (T ~ 450 nK), " + optics, disp);
    add("fig4", "Fig. 4 caption: group and phase-correlation index over c, same conditions as fig3", disp);

    add("fig5",
        "superluminal example values: alpha' = -0.1/um, N_g'/c = -0.03 s/m, N_g''/c = 0.03 s/m, "
        "a = 0.44/us^2, slab 250 um",
        {{"scenario", "superluminal"},
         {"slab",
          {{"alpha_prime", {{"value", -0.1}, {"unit", "1/um"}}},
           {"Ng_real_over_c", -0.03},
           {"Ng_imag_over_c", 0.03},
           {"a", {{"value", 0.44}, {"unit", "1/us^2"}}},
           {"length", {{"value", 250}, {"unit", "um"}}},
           {"lengths_over_critical", json::array({0.8, 1.2})}}}});

    json fig6{{"scenario", "vgroup_sweep"},
              {"optical", sodium_optical_json()},
              {"trap", sodium_trap_json()},
              {"models", json::array({"interacting", "ideal"})},
              {"sweep", {{"T", range(20, 600, 59, "nK")}}},
              {"numerics", {{"pinhole_radius", {{"value", 15}, {"unit", "um"}}}}}};
    add("fig6", "Fig. 6 caption: " + trap_src + "; optics as fig3", fig6);

    json fig7 = fig6;
    fig7["models"] = json::array({"interacting"});
    fig7["sweep"]["a_sc"] = {{"values", json::array({7, 5.75, 3.75, 1})}, {"unit", "nm"}};
    add("fig7", "Fig. 7 caption: a_sc = 7, 5.75, 3.75, 1 nm, interacting cloud; other parameters as fig6", fig7);

    json cold = sodium_trap_json();
    cold["T"] = {{"value", 43}, {"unit", "nK"}};
    add("fig8", "Fig. 8 caption: axial N_g'/c profile at T = 43 nK, Delta = 0; parameters as fig6",
        {{"scenario", "density"}, {"optical", sodium_optical_json()}, {"trap", cold}});
    add("fig9", "Fig. 9 caption: resonant pulse exp(-100 t^2), T = 43 nK; parameters as fig6",
        {{"scenario", "propagate1d"},
         {"optical", sodium_optical_json()},
         {"trap", cold},
         {"numerics", {{"a_bar", 100.0}}}});
    add("fig10", "Fig. 10 caption: detuning 3 gamma, T = 43 nK; parameters as fig6",
        {{"scenario", "absorption"},
         {"optical", sodium_optical_json(3.0)},
         {"trap", cold},
         {"numerics", {{"a_bar", 100.0}}}});

    json warm = sodium_trap_json();
    warm["T_over_Tc"] = 0.3;
    add("fig11",
        "Fig. 11 caption: beam radius 0.5 mm through the cloud at T = 0.3 T_C, pinhole 15 um; "
        "parameters as fig6",
        {{"scenario", "paraxial"},
         {"optical", sodium_optical_json()},
         {"trap", warm},
         {"numerics",
          {{"a_bar", 100.0}, {"pinhole_radius", {{"value", 15}, {"unit", "um"}}}, {"max_columns", 401}}},
         {"paraxial",
          {{"beam_radius", {{"value", 0.5e-3}, {"unit", "m"}}},
           {"extent", {{"value", 2e-3}, {"unit", "m"}}},
           {"points", 4096},
           {"map_half_width", {{"value", 100}, {"unit", "um"}}},
           {"axial", {{"z_min", -2.5}, {"z_max", 2.5}, {"nz", 201}, {"store_every", 4}}}}}});

    add("superluminal_cm",
        "dilute-vapor example: rho = 3.3e10 cm^-3, N_g'/c = -3e-4 s/m, N_g''/c = 3e-4 s/m, "
        "alpha' = -10/cm (the denser value scaled by 1/100), a = 0.44/us^2; threshold near 2 cm",
        {{"scenario", "superluminal"},
         {"slab",
          {{"alpha_prime", {{"value", -10}, {"unit", "1/cm"}}},
           {"Ng_real_over_c", -3e-4},
           {"Ng_imag_over_c", 3e-4},
           {"a", {{"value", 0.44}, {"unit", "1/us^2"}}},
           {"lengths_over_critical", json::array({0.8, 1.2})}}}});
    return out;
}

}  // namespace

const char* scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::dispersion: return "dispersion";
        case ScenarioKind::vgroup_defs: return "vgroup_defs";
        case ScenarioKind::density: return "density";
        case ScenarioKind::vgroup_sweep: return "vgroup_sweep";
        case ScenarioKind::propagate1d: return "propagate1d";
        case ScenarioKind::absorption: return "absorption";
        case ScenarioKind::paraxial: return "paraxial";
        case ScenarioKind::superluminal: return "superluminal";
    }
    return "?";
}

ScenarioConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("invalid JSON: {}", e.what()));
    }
    Section top(j, "", {"name", "scenario", "optical", "trap", "medium", "sweep", "models", "numerics",
                        "paraxial", "slab", "output"});
    ScenarioConfig c;
    c.kind = parse_kind(top.text("scenario"));
    c.name = top.has("name") ? top.text("name") : std::string(scenario_name(c.kind));
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
        throw ParseError("name must be a non-empty file-name stem");
    }
    if (top.has("optical")) {
        c.optical = parse_optical(top.at("optical"));
    } else if (c.kind != ScenarioKind::superluminal) {
        throw ParseError("missing key 'optical'");
    }
    if (top.has("trap")) parse_trap(top.at("trap"), c);
    if (top.has("medium")) {
        Section m(top.at("medium"), "medium", {"density"});
        c.density = m.quantity("density", Dim::density);
    }
    if (top.has("sweep")) {
        Section s(top.at("sweep"), "sweep", {"Delta_over_gamma", "T", "T_over_Tc", "a_sc"});
        if (s.has("Delta_over_gamma")) {
            c.Delta_over_gamma = parse_list(s.at("Delta_over_gamma"), s.where("Delta_over_gamma"), std::nullopt);
        }
        if (s.has("T") && s.has("T_over_Tc")) throw ParseError("give either sweep.T or sweep.T_over_Tc");
        if (s.has("T")) c.temperatures = parse_list(s.at("T"), s.where("T"), Dim::temperature);
        if (s.has("T_over_Tc")) {
            if (!c.trap) throw ParseError("sweep.T_over_Tc needs a 'trap' section");
            TrapGasParams t = *c.trap;
            t.T = 0.0;
            const double Tc = critical_temperature(t);
            for (double r : parse_list(s.at("T_over_Tc"), s.where("T_over_Tc"), std::nullopt)) {
                c.temperatures.push_back(r * Tc);
            }
        }
        if (s.has("a_sc")) c.scattering_lengths = parse_list(s.at("a_sc"), s.where("a_sc"), Dim::length);
    }
    if (top.has("models")) {
        const json& m = top.at("models");
        if (!m.is_array() || m.empty()) throw ParseError("'models' must be a non-empty list");
        c.models.clear();
        for (const auto& x : m) c.models.push_back(parse_model(x));
    }
    if (top.has("numerics")) parse_numerics(top.at("numerics"), c);
    if (top.has("paraxial")) parse_paraxial(top.at("paraxial"), c);
    if (top.has("slab")) {
        parse_slab(top.at("slab"), c.slab);
    } else if (c.kind == ScenarioKind::superluminal) {
        throw ParseError("missing key 'slab'");
    }
    if (top.has("output")) c.output = top.text("output");
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot read config '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build_presets();
    return all;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw ParseError(fmt::format("unknown preset '{}'", name));
}

std::string format_csv(const CsvTable& table) {
    std::string out = "# units:";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += fmt::format(" {}={}", table.columns[i], table.units[i]);
    }
    out += '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += fmt::format("{:.12g}", row[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<CsvTable> run_scenario(const ScenarioConfig& c, unsigned workers) {
    std::vector<CsvTable> tables;
    switch (c.kind) {
        case ScenarioKind::dispersion: tables = run_dispersion(c); break;
        case ScenarioKind::vgroup_defs: tables = run_vgroup_defs(c); break;
        case ScenarioKind::density: tables = run_density(c); break;
        case ScenarioKind::vgroup_sweep: tables = run_vgroup_sweep(c, workers); break;
        case ScenarioKind::propagate1d: tables = run_propagate1d(c); break;
        case ScenarioKind::absorption: tables = run_absorption(c, workers); break;
        case ScenarioKind::paraxial: tables = run_paraxial(c, workers); break;
        case ScenarioKind::superluminal: tables = run_superluminal(c, workers); break;
    }
    for (const auto& t : tables) {
        for (const auto& row : t.rows) {
            if (row.size() != t.columns.size()) {
                throw NumericalError(fmt::format("table '{}' has a ragged row", t.observable));
            }
        }
    }
    return tables;
}

std::vector<std::filesystem::path> write_tables(const std::vector<CsvTable>& tables, const std::string& name,
                                                const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    std::vector<fs::path> finals, temps;
    std::size_t renamed = 0;
    auto cleanup = [&] {
        for (const auto& t : temps) fs::remove(t, ec);
        for (std::size_t i = 0; i < renamed; ++i) fs::remove(finals[i], ec);
    };
    try {
        for (const auto& t : tables) {
            const fs::path target = dir / fmt::format("{}_{}.csv", name, t.observable);
            const fs::path tmp = dir / fmt::format(".{}_{}.csv.tmp", name, t.observable);
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << format_csv(t);
            out.close();
            if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
            finals.push_back(target);
        }
        for (const auto& f : finals) {
            if (fs::exists(f) && !fs::is_regular_file(f)) {
                throw std::runtime_error(fmt::format("'{}' exists and is not a regular file", f.string()));
            }
        }
        for (; renamed < temps.size(); ++renamed) fs::rename(temps[renamed], finals[renamed]);
    } catch (...) {
        cleanup();
        throw;
    }
    return finals;
}

std::filesystem::path resolve_output_dir(const ScenarioConfig& config, const std::filesystem::path& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (!config.output.empty()) return config.output;
    if (const char* env = std::getenv("SLOWLIGHT_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

}  // namespace slowlight
