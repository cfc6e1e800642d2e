#include "polariton/cli.hpp"
#include "polariton/errors.hpp"
#include "polariton/units.hpp"

#include <cmath>
#include <numbers>

namespace polariton::cli {

namespace {

constexpr double pi = std::numbers::pi;

Json field_defaults(const std::string& type) {
    if (type == "gaussian") {
        return {{"type", "gaussian"}, {"A0", pi / 4},          {"bandwidth_over_g", 0.1},
                {"detuning_over_omega01", 0.0}, {"phi0", 0.0}, {"half_window", default_window}};
    }
    if (type == "composite") {
        return {{"type", "composite"}, {"bandwidth_over_g", 0.1}, {"A1", design_area},
                {"phi_plus", "design"}, {"phi_minus", 0.0}};
    }
    if (type == "zero") return {{"type", "zero"}, {"duration_tau", 10.0}};
    if (type == "sampled") return {{"type", "sampled"}, {"times", Json::array()}, {"values", Json::array()}};
    throw InvalidParams("field.type must be gaussian, composite, zero or sampled (got '" + type + "')");
}

// Rejects keys of `user` that do not appear in `reference`, recursively for objects.
void check_keys(const Json& user, const Json& reference, const std::string& path) {
    if (!user.is_object()) throw InvalidParams(path + " must be an object");
    for (const auto& [key, value] : user.items()) {
        const std::string where = path.empty() ? key : path + "." + key;
        if (!reference.contains(key)) throw InvalidParams("unknown config key '" + where + "'");
        const Json& ref = reference.at(key);
        const bool grid = ref.is_object() && (ref.contains("points") || ref.contains("values"));
        if (ref.is_object() && !grid && where != "field" && !(ref.contains("value") && ref.contains("unit"))) {
            check_keys(value, ref, where);
        }
    }
}

void check_grid(const Json& grid, const std::string& path) {
    if (!grid.is_object()) throw InvalidParams(path + " must be an object");
    for (const auto& [key, value] : grid.items()) {
        if (key != "min" && key != "max" && key != "points" && key != "spacing" && key != "values") {
            throw InvalidParams("unknown config key '" + path + "." + key + "'");
        }
    }
}

double quantity(const Json& q, const std::string& path) {
    if (q.is_number()) return q.get<double>();
    if (!q.is_object() || !q.contains("value")) throw InvalidParams(path + " must be a number or {value, unit}");
    const double v = q.at("value").get<double>();
    const std::string unit = q.value("unit", std::string("internal"));
    return units::convert(v, units::parse_unit(unit), units::Unit::internal);
}

double positive(const Json& j, const std::string& key, const std::string& path) {
    const double v = j.at(key).get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParams(path + "." + key + " must be positive");
    return v;
}

}  // namespace

Json default_config() {
    return {
        {"system",
         {{"B", {{"value", 0.20286}, {"unit", "cm-1"}}},
          {"mu", {{"value", 0.715}, {"unit", "D"}}},
          {"g_over_omega01", 0.1},
          {"omega_c_over_omega01", 1.0},
          {"J_max", 8},
          {"n_max", 4}}},
        {"model", "dressed"},
        {"field", field_defaults("gaussian")},
        {"observation",
         {{"horizon_tau", 40.0},
          {"samples_per_tau", 100.0},
          {"snapshot_tau", 6.75},
          {"trajectory_samples", 201},
          {"spectrum_omega_max_over_omega01", 2.0},
          {"spectrum_oversample", 1},
          {"spectrum_window", "rectangular"},
          {"peak_threshold", 0.01},
          {"heatmap_samples", 800}}},
        {"integrator",
         {{"method", "cfet4"}, {"steps_per_period", 40.0}, {"tol", 1e-8}, {"max_refinements", 6}, {"norm_tol", 1e-10}}},
        {"scan",
         {{"kind", "detuning"},
          {"detuning_over_omega01", {{"min", -0.2}, {"max", 0.2}, {"points", 81}, {"spacing", "linear"}}},
          {"bandwidths_over_g", {{"values", {0.1, 0.5, 1.0}}}},
          {"cavity", {true}},
          {"composite_bandwidths_over_g", {{"min", 0.05}, {"max", 1.5}, {"points", 25}, {"spacing", "log"}}}}},
        {"design", {{"bandwidth_over_g", 0.1}, {"A1", design_area}, {"enforce_validity", true}}},
        {"oracle",
         {{"subspace", {"0;0", "+;0", "-;0"}}, {"amplitude_points", 101}, {"phase_points", 64}, {"time_points", 2048}}},
        {"threads", 1},
        {"seed", 0}};
}

std::vector<std::string> preset_names() { return {"bare", "fig2", "fig3", "fig4", "fig5"}; }

Json preset(const std::string& name) {
    if (name == "bare") {
        return {{"model", "bare"}, {"field", {{"type", "gaussian"}, {"A0", pi / 4}, {"bandwidth_over_g", 0.1}}}};
    }
    if (name == "fig2") {
        return {{"scan", {{"kind", "detuning"}, {"cavity", {false, true}}}}, {"observation", {{"horizon_tau", 40.0}}}};
    }
    if (name == "fig3") {
        return {{"scan", {{"kind", "detuning"}, {"cavity", {false, true}}}},
                {"observation", {{"horizon_tau", 80.0}, {"spectrum_oversample", 4}, {"spectrum_window", "hann"}}}};
    }
    if (name == "fig4" || name == "fig5") {
        return {{"scan", {{"kind", "composite"}}},
                {"field", {{"type", "composite"}, {"bandwidth_over_g", 0.1}}},
                {"observation", {{"horizon_tau", 40.0}}}};
    }
    throw InvalidParams("unknown preset '" + name + "'");
}

Json resolve_config(const Json& user, const std::optional<std::string>& preset_name) {
    try {
        const Json defaults = default_config();
        if (!user.is_object()) throw InvalidParams("config must be a JSON object");

        Json config = defaults;
        Json field_patch = Json::object();
        auto apply = [&](const Json& patch, const std::string& origin) {
            check_keys(patch, defaults, origin);
            Json p = patch;
            if (p.contains("field")) {
                if (!p["field"].is_object()) throw InvalidParams("field must be an object");
                // A new field type discards the fields of the previous one.
                if (p["field"].contains("type")) field_patch = Json::object();
                field_patch.merge_patch(p["field"]);
                p.erase("field");
            }
            config.merge_patch(p);
            // Grids are replaced whole so that {values} and {min, max, points} never mix.
            if (p.contains("scan")) {
                for (const auto& [key, value] : p["scan"].items()) {
                    if (value.is_object()) config["scan"][key] = value;
                }
            }
        };
        if (preset_name) apply(preset(*preset_name), "");
        apply(user, "");

        const std::string type = field_patch.value("type", std::string("gaussian"));
        Json field = field_defaults(type);
        for (const auto& [key, value] : field_patch.items()) {
            if (!field.contains(key)) throw InvalidParams("unknown config key 'field." + key + "'");
            field[key] = value;
        }
        config["field"] = field;

        for (const char* g : {"detuning_over_omega01", "bandwidths_over_g", "composite_bandwidths_over_g"}) {
            check_grid(config["scan"][g], std::string("scan.") + g);
        }

        // Type and range checks, by parsing every section once.
        params_from_config(config);
        propagation_from_config(config);
        scan_settings_from_config(config);
        model_from_config(config);
        if (!config["threads"].is_number_integer() || config["threads"].get<long long>() < 1) {
            throw InvalidParams("threads must be a positive integer");
        }
        if (!config["seed"].is_number_integer() || config["seed"].get<long long>() < 0) throw InvalidParams("seed must be a non-negative integer");
        const std::string kind = config["scan"]["kind"];
        if (kind != "detuning" && kind != "composite") throw InvalidParams("scan.kind must be detuning or composite");
        if (!config["scan"]["cavity"].is_array()) throw InvalidParams("scan.cavity must be a list of booleans");
        for (const auto& c : config["scan"]["cavity"]) {
            if (!c.is_boolean()) throw InvalidParams("scan.cavity must be a list of booleans");
        }
        return config;
    } catch (const Json::exception& e) {
        throw InvalidParams(std::string("config: ") + e.what());
    }
}

SystemParams params_from_config(const Json& config) {
    const Json& s = config.at("system");
    SystemParams p;
    p.B = quantity(s.at("B"), "system.B");
    p.mu = quantity(s.at("mu"), "system.mu");
    const double g_rel = s.at("g_over_omega01").get<double>();
    const double wc_rel = s.at("omega_c_over_omega01").get<double>();
    if (!(g_rel >= 0.0)) throw InvalidParams("system.g_over_omega01 must be non-negative");
    if (!(wc_rel > 0.0)) throw InvalidParams("system.omega_c_over_omega01 must be positive");
    p.g = g_rel * p.omega01();
    p.omega_c = wc_rel * p.omega01();
    p.J_max = s.at("J_max").get<int>();
    p.n_max = s.at("n_max").get<int>();
    p.validate();
    return p;
}

PropagationSettings propagation_from_config(const Json& config) {
    const Json& i = config.at("integrator");
    PropagationSettings s;
    const std::string method = i.at("method");
    if (method == "cfet4") {
        s.integrator = Integrator::cfet4;
    } else if (method == "midpoint") {
        s.integrator = Integrator::midpoint;
    } else {
        throw InvalidParams("integrator.method must be cfet4 or midpoint");
    }
    s.steps_per_period = positive(i, "steps_per_period", "integrator");
    s.tol = positive(i, "tol", "integrator");
    s.max_refinements = i.at("max_refinements").get<int>();
    if (s.max_refinements < 0) throw InvalidParams("integrator.max_refinements must be >= 0");
    s.norm_tol = positive(i, "norm_tol", "integrator");
    return s;
}

ScanSettings scan_settings_from_config(const Json& config) {
    const Json& o = config.at("observation");
    const SystemParams p = params_from_config(config);
    const double tau = p.revival_period();
    ScanSettings s;
    s.horizon = positive(o, "horizon_tau", "observation") * tau;
    s.sample_dt = tau / positive(o, "samples_per_tau", "observation");
    s.snapshot_time = positive(o, "snapshot_tau", "observation") * tau;
    s.spectrum_omega_max = positive(o, "spectrum_omega_max_over_omega01", "observation") * p.omega01();
    s.spectrum.oversample = o.at("spectrum_oversample").get<int>();
    if (s.spectrum.oversample < 1) throw InvalidParams("observation.spectrum_oversample must be >= 1");
    const std::string window = o.at("spectrum_window");
    if (window == "rectangular") {
        s.spectrum.window = SpectrumWindow::rectangular;
    } else if (window == "hann") {
        s.spectrum.window = SpectrumWindow::hann;
    } else {
        throw InvalidParams("observation.spectrum_window must be rectangular or hann");
    }
    s.peak_threshold = o.at("peak_threshold").get<double>();
    if (o.at("trajectory_samples").get<int>() < 2) throw InvalidParams("observation.trajectory_samples must be >= 2");
    if (o.at("heatmap_samples").get<int>() < 2) throw InvalidParams("observation.heatmap_samples must be >= 2");
    s.propagation = propagation_from_config(config);
    s.cavity_basis = model_from_config(config);
    if (s.cavity_basis == ModelBasis::bare) s.cavity_basis = ModelBasis::dressed;
    s.threads = config.at("threads").get<unsigned>();
    return s;
}

ModelBasis model_from_config(const Json& config) { return parse_model_basis(config.at("model").get<std::string>()); }

std::vector<double> grid_from_config(const Json& grid) {
    if (grid.contains("values")) {
        if (grid.size() != 1) throw InvalidParams("grid: 'values' cannot be combined with min/max/points");
        return grid.at("values").get<std::vector<double>>();
    }
    const int n = grid.at("points").get<int>();
    if (n < 0) throw InvalidParams("grid points must be >= 0");
    const double lo = grid.at("min").get<double>();
    const double hi = grid.at("max").get<double>();
    const std::string spacing = grid.value("spacing", std::string("linear"));
    if (spacing == "linear") return linspace(lo, hi, static_cast<std::size_t>(n));
    if (spacing == "log") {
        if (!(lo > 0.0 && hi > 0.0)) throw InvalidParams("log grid needs positive bounds");
        return logspace(lo, hi, static_cast<std::size_t>(n));
    }
    throw InvalidParams("grid spacing must be linear or log");
}

FieldSpec field_from_config(const Json& config) {
    const Json& f = config.at("field");
    const SystemParams p = params_from_config(config);
    const std::string type = f.at("type");
    if (type == "gaussian") {
        if (!(p.g > 0.0)) throw InvalidParams("field.bandwidth_over_g needs g > 0");
        const double tau0 = 1.0 / (positive(f, "bandwidth_over_g", "field") * p.g);
        return gaussian_pulse(f.at("A0").get<double>(), tau0,
                              p.omega01() * (1.0 + f.at("detuning_over_omega01").get<double>()),
                              f.at("phi0").get<double>(), p.mu01(), positive(f, "half_window", "field"));
    }
    if (type == "composite") {
        if (!(p.g > 0.0)) throw InvalidParams("composite fields need g > 0");
        const double tau0 = 1.0 / (positive(f, "bandwidth_over_g", "field") * p.g);
        const double A1 = f.at("A1").get<double>();
        if (f.at("phi_plus").is_string()) {
            if (f.at("phi_plus") != "design") throw InvalidParams("field.phi_plus must be a number or \"design\"");
            DesignOptions opts;
            opts.A1 = A1;
            opts.enforce_validity = false;
            return design_composite(p, tau0, opts).field;
        }
        return make_composite(p, tau0, f.at("phi_plus").get<double>(), f.at("phi_minus").get<double>(), A1);
    }
    if (type == "zero") return zero_field(0.0, positive(f, "duration_tau", "field") * p.revival_period());
    return sampled_field(f.at("times").get<std::vector<double>>(), f.at("values").get<std::vector<double>>());
}

Json to_json(const FieldSpec& spec) {
    Json j = std::visit(
        [](const auto& s) -> Json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSingle>) {
                return {{"type", "gaussian"}, {"A0", s.A0}, {"tau0", s.tau0}, {"omega0", s.omega0},
                        {"phi0", s.phi0}, {"E0", s.E0}};
            } else if constexpr (std::is_same_v<T, CompositeTwoColor>) {
                Json comps = Json::array();
                for (const auto& c : s.components) comps.push_back({{"omega", c.omega}, {"phi", c.phi}});
                return {{"type", "composite"}, {"A1", s.A1}, {"tau0", s.tau0}, {"components", comps}, {"E0", s.E0}};
            } else {
                return {{"type", "sampled"}, {"times", s.times}, {"values", s.values}};
            }
        },
        spec.shape);
    j["t_start"] = spec.t_start;
    j["t_end"] = spec.t_end;
    j["units"] = "atomic";
    return j;
}

FieldSpec field_from_json(const Json& j) {
    try {
        FieldSpec spec;
        const std::string type = j.at("type");
        if (type == "gaussian") {
            spec.shape = GaussianSingle{j.at("A0"), j.at("tau0"), j.at("omega0"), j.at("phi0"), j.at("E0")};
        } else if (type == "composite") {
            CompositeTwoColor c{j.at("A1"), j.at("tau0"), {}, j.at("E0")};
            for (const auto& comp : j.at("components")) c.components.push_back({comp.at("omega"), comp.at("phi")});
            spec.shape = c;
        } else if (type == "sampled") {
            spec.shape = SampledField{j.at("times").get<std::vector<double>>(), j.at("values").get<std::vector<double>>()};
        } else {
            throw InvalidParams("unknown field type '" + type + "'");
        }
        spec.t_start = j.at("t_start");
        spec.t_end = j.at("t_end");
        return spec;
    } catch (const Json::exception& e) {
        throw InvalidParams(std::string("field: ") + e.what());
    }
}

Json to_json(const SystemParams& p) {
    return {{"B", p.B},         {"mu", p.mu},           {"omega_c", p.omega_c},
            {"g", p.g},         {"J_max", p.J_max},     {"n_max", p.n_max},
            {"omega01", p.omega01()}, {"tau", p.revival_period()}, {"units", "atomic"}};
}

Json to_json(const ConditionReport& r) {
    auto pair = [](const std::array<double, 2>& a) { return Json::array({a[0], a[1]}); };
    return {{"amp_residuals", pair(r.amp_residuals)},
            {"phase_value", r.phase_value},
            {"phase_residual_plus_g_pi", r.phase_residual_plus},
            {"phase_residual_minus_g_pi", r.phase_residual_minus},
            {"phase_residual_2g_pi", r.phase_residual_2g},
            {"phase_units", "radians, frequencies in units of omega01"},
            {"coefficient_relation_residual", r.coefficient_relation_residual},
            {"blockade_residuals", pair(r.blockade_residuals)},
            {"predicted_orientation_max", r.predicted_orientation_max},
            {"theta_plus_0", {r.areas.theta_p0.real(), r.areas.theta_p0.imag()}},
            {"theta_minus_0", {r.areas.theta_m0.real(), r.areas.theta_m0.imag()}}};
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string code_version() { return POLARITON_VERSION; }

}  // namespace polariton::cli
