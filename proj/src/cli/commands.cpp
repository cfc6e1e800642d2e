#include "polariton/cli.hpp"
#include "polariton/errors.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace polariton::cli {

namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    std::ofstream table(const std::string& name, const std::vector<std::string>& columns) {
        std::ofstream f(dir_ / name);
        if (!f) throw Error("cannot write " + (dir_ / name).string());
        f << std::setprecision(12) << '#';
        for (std::size_t i = 0; i < columns.size(); ++i) f << (i ? "\t" : " ") << columns[i];
        f << '\n';
        files_.push_back(name);
        return f;
    }

    void json(const std::string& name, const Json& j) {
        std::ofstream f(dir_ / name);
        if (!f) throw Error("cannot write " + (dir_ / name).string());
        f << j.dump(2) << '\n';
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::string hex(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

void write_manifest(Writer& w, const std::string& command, const Json& config) {
    Json m{{"command", command},
           {"code_version", code_version()},
           {"params_hash", hex(fnv1a(config.dump()))},
           {"hash", "fnv1a-64 of the compact JSON dump of config"},
           {"config", config}};
    m["outputs"] = w.files();
    w.json("manifest.json", m);
}

Json peaks_json(const std::vector<Peak>& peaks, double omega01) {
    Json out = Json::array();
    for (const auto& p : peaks) out.push_back({{"omega_over_omega01", p.omega / omega01}, {"magnitude", p.magnitude}});
    return out;
}

Json populations_json(const std::vector<PopulationPhase>& pops) {
    Json out = Json::array();
    for (const auto& p : pops) out.push_back({{"state", p.label}, {"population", p.population}, {"phase", p.phase}});
    return out;
}

Json nan_to_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// Every k-th sample so that at most n samples remain.
std::size_t stride(std::size_t size, std::size_t n) { return std::max<std::size_t>(1, (size + n - 1) / n); }

int cmd_simulate(const Json& config, Writer& w, std::ostream& out) {
    SimulationSetup setup;
    setup.params = params_from_config(config);
    setup.basis = model_from_config(config);
    setup.field = field_from_config(config);
    const ScanSettings ss = scan_settings_from_config(config);
    setup.settings = ss.propagation;
    setup.horizon = ss.horizon;
    setup.sample_dt = ss.sample_dt;
    setup.trajectory_samples = config["observation"]["trajectory_samples"].get<std::size_t>();

    const auto sim = simulate(setup);
    const SystemParams p = effective_params(setup.params, setup.basis);
    const double tau = p.revival_period();

    {
        auto f = w.table("trajectory.tsv", [&] {
            std::vector<std::string> cols{"t_au", "t_tau", "field_au", "cos_theta"};
            for (Eigen::Index i = 0; i < sim.final_state.dim(); ++i) cols.push_back("pop_" + std::to_string(i));
            return cols;
        }());
        const auto during = orientation_trace(sim.trajectory, sim.cos_theta);
        for (std::size_t k = 0; k < sim.trajectory.times.size(); ++k) {
            const double t = sim.trajectory.times[k];
            f << t << '\t' << t / tau << '\t' << field_value(setup.field, t) << '\t' << during.values[k];
            for (Eigen::Index i = 0; i < sim.final_state.dim(); ++i) {
                f << '\t' << std::norm(sim.trajectory.states[k].amplitudes(i));
            }
            f << '\n';
        }
    }
    {
        auto f = w.table("orientation.tsv", {"t_au", "t_after_pulse_tau", "cos_theta"});
        for (std::size_t k = 0; k < sim.trace.size(); ++k) {
            f << sim.trace.times[k] << '\t' << (sim.trace.times[k] - setup.field.t_end) / tau << '\t'
              << sim.trace.values[k] << '\n';
        }
    }

    ScanPoint summary;
    SpectrumOptions opts = ss.spectrum;
    opts.omega_max = ss.spectrum_omega_max;
    const double min_window = 40.0 * tau * (1.0 - 1e-9);
    if (sim.trace.length() >= min_window) {
        summary.spectrum = spectrum(sim.trace, min_window, opts);
        summary.peaks = find_peaks(summary.spectrum, ss.peak_threshold);
    }
    {
        auto f = w.table("spectrum.tsv", {"omega_au", "omega_over_omega01", "S"});
        for (std::size_t k = 0; k < summary.spectrum.omegas.size(); ++k) {
            f << summary.spectrum.omegas[k] << '\t' << summary.spectrum.omegas[k] / p.omega01() << '\t'
              << summary.spectrum.magnitudes[k] << '\n';
        }
    }

    std::vector<PopulationPhase> pops;
    if (sim.dressed) {
        pops = dressed_populations_phases(*sim.dressed);
    } else {
        const ProductBasis basis(p.J_max, p.n_max);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const cplx c = sim.final_state.amplitudes(static_cast<Eigen::Index>(i));
            pops.push_back({"J=" + std::to_string(basis.state(i).J) + ",n=" + std::to_string(basis.state(i).n),
                            std::norm(c), std::arg(c)});
        }
    }
    {
        auto f = w.table("populations.tsv", {"state", "population", "phase"});
        for (const auto& pp : pops) f << pp.label << '\t' << pp.population << '\t' << pp.phase << '\n';
    }

    double revival = std::numeric_limits<double>::quiet_NaN();
    if (max_abs(sim.trace) > 1e-8) {
        try {
            revival = revival_period(sim.trace);
        } catch (const NoRevivalFound&) {
        }
    }
    const auto snap = static_cast<std::size_t>(std::llround(ss.snapshot_time / sim.trace.step()));
    double lo = 0.0, hi = 0.0;
    for (double v : sim.trace.values) lo = std::min(lo, v), hi = std::max(hi, v);
    const auto& meta = sim.trajectory.meta;
    Json summary_json{{"model", to_string(setup.basis)},
                      {"params", to_json(p)},
                      {"field", to_json(setup.field)},
                      {"orientation_max_abs", max_abs(sim.trace)},
                      {"orientation_max", hi},
                      {"orientation_min", lo},
                      {"snapshot", snap < sim.trace.size() ? Json(sim.trace.values[snap]) : Json(nullptr)},
                      {"revival_period_tau", nan_to_null(revival / tau)},
                      {"spectrum_peaks", peaks_json(summary.peaks, p.omega01())},
                      {"populations", populations_json(pops)},
                      {"final_norm", sim.final_state.norm()},
                      {"propagation",
                       {{"integrator", meta.integrator == Integrator::cfet4 ? "cfet4" : "midpoint"},
                        {"step_au", meta.step},
                        {"steps", meta.steps},
                        {"halving_error", meta.halving_error},
                        {"max_norm_drift", meta.max_norm_drift},
                        {"refinements", meta.refinements}}}};
    w.json("summary.json", summary_json);
    out << "orientation max |<cos>| = " << max_abs(sim.trace) << '\n';
    return ok;
}

void write_detuning_scan(const ScanResult& r, const std::string& label, const Json& config, Writer& w) {
    const double tau = r.params.revival_period();
    const double omega01 = r.params.omega01();
    const double g = r.params.g;
    const auto heat = config["observation"]["heatmap_samples"].get<std::size_t>();

    {
        auto f = w.table(label + "_points.tsv",
                         {"bandwidth_over_g", "detuning_over_omega01", "converged", "orientation_max", "snapshot",
                          "oscillation_period_tau", "revival_period_tau", "dominant_omega_over_omega01", "error"});
        for (const auto& pt : r.points) {
            f << pt.bandwidth / g << '\t' << pt.detuning / omega01 << '\t' << pt.converged << '\t' << pt.orientation_max
              << '\t' << pt.snapshot << '\t' << pt.oscillation_period / tau << '\t' << pt.period / tau << '\t'
              << pt.dominant_omega / omega01 << '\t' << (pt.error.empty() ? "-" : pt.error) << '\n';
        }
    }
    {
        std::vector<std::string> cols{"detuning_over_omega01"};
        for (double bw : r.bandwidths) cols.push_back("bw_" + std::to_string(bw / g) + "g");
        auto f = w.table(label + "_snapshot.tsv", cols);
        for (std::size_t d = 0; d < r.detunings.size(); ++d) {
            f << r.detunings[d] / omega01;
            for (std::size_t b = 0; b < r.bandwidths.size(); ++b) f << '\t' << r.at(b, d).snapshot;
            f << '\n';
        }
    }
    for (std::size_t b = 0; b < r.bandwidths.size(); ++b) {
        auto fo = w.table(label + "_orientation_bw" + std::to_string(b) + ".tsv",
                          {"detuning_over_omega01", "t_after_pulse_tau", "cos_theta"});
        auto fs_ = w.table(label + "_spectrum_bw" + std::to_string(b) + ".tsv",
                           {"detuning_over_omega01", "omega_over_omega01", "S"});
        for (std::size_t d = 0; d < r.detunings.size(); ++d) {
            const auto& pt = r.at(b, d);
            const auto& tr = pt.trace;
            for (std::size_t k = 0; k < tr.size(); k += stride(tr.size(), heat)) {
                fo << pt.detuning / omega01 << '\t' << (tr.times[k] - tr.times.front()) / tau << '\t' << tr.values[k]
                   << '\n';
            }
            fo << '\n';
            for (std::size_t k = 0; k < pt.spectrum.omegas.size(); ++k) {
                fs_ << pt.detuning / omega01 << '\t' << pt.spectrum.omegas[k] / omega01 << '\t'
                    << pt.spectrum.magnitudes[k] << '\n';
            }
            fs_ << '\n';
        }
    }
    {
        auto f = w.table(label + "_peaks.tsv", {"bandwidth_over_g", "detuning_over_omega01", "omega_over_omega01", "S"});
        for (const auto& pt : r.points) {
            for (const auto& pk : pt.peaks) {
                f << pt.bandwidth / g << '\t' << pt.detuning / omega01 << '\t' << pk.omega / omega01 << '\t'
                  << pk.magnitude << '\n';
            }
        }
    }
    {
        auto f = w.table(label + "_populations.tsv",
                         {"bandwidth_over_g", "detuning_over_omega01", "state", "population", "phase"});
        for (const auto& pt : r.points) {
            for (const auto& pp : pt.populations) {
                f << pt.bandwidth / g << '\t' << pt.detuning / omega01 << '\t' << pp.label << '\t' << pp.population
                  << '\t' << pp.phase << '\n';
            }
        }
    }
}

void write_composite_scan(const ScanResult& r, const Json& config, Writer& w) {
    const double tau = r.params.revival_period();
    const double g = r.params.g;
    const auto heat = config["observation"]["heatmap_samples"].get<std::size_t>();
    {
        auto f = w.table("points.tsv", {"bandwidth_over_g", "converged", "phi_plus", "orientation_max",
                                        "revival_period_tau", "magnus_deviation", "blockade", "error"});
        for (const auto& pt : r.points) {
            f << pt.bandwidth / g << '\t' << pt.converged << '\t' << pt.phi_plus << '\t' << pt.orientation_max << '\t'
              << pt.period / tau << '\t' << pt.magnus_deviation << '\t' << pt.blockade << '\t'
              << (pt.error.empty() ? "-" : pt.error) << '\n';
        }
    }
    {
        auto f = w.table("orientation.tsv", {"bandwidth_over_g", "t_after_pulse_tau", "cos_theta"});
        for (const auto& pt : r.points) {
            const auto& tr = pt.trace;
            for (std::size_t k = 0; k < tr.size(); k += stride(tr.size(), heat)) {
                f << pt.bandwidth / g << '\t' << (tr.times[k] - tr.times.front()) / tau << '\t' << tr.values[k] << '\n';
            }
            f << '\n';
        }
    }
    {
        auto f = w.table("populations.tsv", {"bandwidth_over_g", "state", "exact_population", "exact_phase",
                                             "magnus_population", "magnus_phase"});
        for (const auto& pt : r.points) {
            for (std::size_t k = 0; k < pt.magnus.size() && k < pt.populations.size(); ++k) {
                f << pt.bandwidth / g << '\t' << pt.populations[k].label << '\t' << pt.populations[k].population << '\t'
                  << pt.populations[k].phase << '\t' << pt.magnus[k].population << '\t' << pt.magnus[k].phase << '\n';
            }
        }
    }
}

Json scan_summary(const ScanResult& r) {
    std::size_t failed = 0;
    Json failures = Json::array();
    for (const auto& pt : r.points) {
        if (!pt.converged) {
            ++failed;
            failures.push_back({{"bandwidth", pt.bandwidth}, {"detuning", pt.detuning}, {"error", pt.error}});
        }
    }
    return {{"kind", r.kind},
            {"cavity", r.cavity},
            {"params", to_json(r.params)},
            {"area", r.area},
            {"detunings_au", r.detunings},
            {"bandwidths_au", r.bandwidths},
            {"points", r.points.size()},
            {"failed", failed},
            {"failures", failures}};
}

int cmd_scan(const Json& config, Writer& w, std::ostream& out) {
    const SystemParams p = params_from_config(config);
    const ScanSettings settings = scan_settings_from_config(config);
    const Json& scan = config["scan"];
    Json summary = Json::array();
    bool all_converged = true;

    if (scan["kind"] == "detuning") {
        auto detunings = grid_from_config(scan["detuning_over_omega01"]);
        for (auto& d : detunings) d *= p.omega01();
        auto bandwidths = grid_from_config(scan["bandwidths_over_g"]);
        for (auto& b : bandwidths) b *= p.g;
        const double A0 = config["field"].value("A0", pi / 4);
        if (scan["cavity"].empty()) throw InvalidParams("scan.cavity is empty");
        for (const bool cavity : scan["cavity"].get<std::vector<bool>>()) {
            const auto r = scan_detuning_bandwidth(p, A0, detunings, bandwidths, cavity, settings);
            write_detuning_scan(r, cavity ? "cavity" : "bare", config, w);
            summary.push_back(scan_summary(r));
            all_converged = all_converged && summary.back()["failed"] == 0;
        }
    } else {
        auto bandwidths = grid_from_config(scan["composite_bandwidths_over_g"]);
        for (auto& b : bandwidths) b *= p.g;
        const auto r = scan_composite_bandwidth(p, bandwidths, settings);
        write_composite_scan(r, config, w);
        summary.push_back(scan_summary(r));
        all_converged = summary.back()["failed"] == 0;
    }
    w.json("summary.json", summary);
    out << "scan finished: " << (all_converged ? "all points converged" : "some points failed") << '\n';
    return all_converged ? ok : convergence_failure;
}

int cmd_design(const Json& config, Writer& w, std::ostream& out) {
    const SystemParams p = params_from_config(config);
    const Json& d = config["design"];
    DesignOptions opts;
    opts.A1 = d["A1"].get<double>();
    opts.enforce_validity = d["enforce_validity"].get<bool>();
    const double bw = d["bandwidth_over_g"].get<double>();
    if (!(bw > 0.0) || !(p.g > 0.0)) throw InvalidParams("design needs a positive bandwidth and g > 0");
    const auto design = design_composite(p, 1.0 / (bw * p.g), opts);
    w.json("field.json", to_json(design.field));
    Json report = to_json(design.report);
    report["phi_plus"] = design.phi_plus;
    report["phi_plus_over_pi"] = design.phi_plus / pi;
    report["phi_minus"] = 0.0;
    report["branch"] = design.branch == PhaseBranch::plus ? "+g pi" : "-g pi";
    report["root_counts"] = {{"+g pi", design.root_counts[0]}, {"-g pi", design.root_counts[1]}};
    report["branch_orientation_max"] = {{"+g pi", nan_to_null(design.branch_orientation_max[0])},
                                        {"-g pi", nan_to_null(design.branch_orientation_max[1])}};
    report["certified"] = design.certified;
    w.json("report.json", report);
    out << "phi_plus = " << design.phi_plus << " rad (" << design.phi_plus / pi << " pi), certified = "
        << (design.certified ? "yes" : "no") << '\n';
    return ok;
}

DressedState parse_state(const std::string& label) {
    if (label == "0;0") return {Branch::ground, 0};
    if (label.size() >= 3 && (label[0] == '+' || label[0] == '-') && label[1] == ';') {
        return {label[0] == '+' ? Branch::plus : Branch::minus, std::stoi(label.substr(2))};
    }
    throw InvalidParams("unknown dressed state '" + label + "'");
}

int cmd_oracle(const Json& config, Writer& w, std::ostream& out) {
    const SystemParams p = params_from_config(config);
    const Json& o = config["oracle"];
    std::vector<DressedState> subspace;
    for (const auto& s : o["subspace"]) subspace.push_back(parse_state(s.get<std::string>()));
    const OracleGrid grid{o["amplitude_points"].get<int>(), o["phase_points"].get<int>(), o["time_points"].get<int>()};
    const auto r = orientation_max_oracle(p, subspace, grid);
    Json states = Json::array();
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        states.push_back({{"state", r.states[i].label()},
                          {"population", r.populations[i]},
                          {"re", r.coefficients[i].real()},
                          {"im", r.coefficients[i].imag()}});
    }
    w.json("oracle.json", {{"grid_max", r.grid_max},
                           {"max", r.max},
                           {"time_au", r.time},
                           {"states", states},
                           {"phase_relation_residual", nan_to_null(r.phase_relation_residual)}});
    out << "orientation maximum = " << r.max << '\n';
    return ok;
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        Json user = Json::object();
        if (inv.config) {
            std::ifstream f(*inv.config);
            if (!f) throw InvalidParams("cannot read config " + inv.config->string());
            user = Json::parse(f);
        }
        if (inv.threads) user["threads"] = *inv.threads;
        if (inv.seed) user["seed"] = *inv.seed;
        const Json config = resolve_config(user, inv.preset);

        Writer w(inv.out);
        int code = ok;
        if (inv.command == "simulate") {
            code = cmd_simulate(config, w, out);
        } else if (inv.command == "scan") {
            code = cmd_scan(config, w, out);
        } else if (inv.command == "design") {
            code = cmd_design(config, w, out);
        } else if (inv.command == "oracle") {
            code = cmd_oracle(config, w, out);
        } else {
            throw InvalidParams("unknown command '" + inv.command + "'");
        }
        write_manifest(w, inv.command, config);
        return code;
    } catch (const Json::exception& e) {
        err << "invalid config: " << e.what() << '\n';
        return invalid_config;
    } catch (const InvalidParams& e) {
        err << "invalid config: " << e.what() << '\n';
        return invalid_config;
    } catch (const UnknownUnit& e) {
        err << "invalid config: " << e.what() << '\n';
        return invalid_config;
    } catch (const DimensionMismatch& e) {
        err << "invalid config: " << e.what() << '\n';
        return invalid_config;
    } catch (const NonResonantCavity& e) {
        err << "invalid config: " << e.what() << '\n';
        return invalid_config;
    } catch (const NotConverged& e) {
        err << "convergence failure: " << e.what() << '\n';
        return convergence_failure;
    } catch (const QuadratureNotConverged& e) {
        err << "convergence failure: " << e.what() << '\n';
        return convergence_failure;
    } catch (const DesignInfeasible& e) {
        err << "design infeasible: " << e.what() << '\n';
        return design_infeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Pulse-driven rotational polariton: simulation, scans, composite-pulse design"};
    app.require_subcommand(1, 1);

    Invocation inv;
    std::string config, out = "out", preset_name;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    const std::pair<const char*, const char*> subcommands[] = {
        {"simulate", "propagate one field and write the trajectory, orientation, spectrum and populations"},
        {"scan", "detuning x bandwidth scan of single pulses, or bandwidth scan of designed composite pulses"},
        {"design", "solve the composite-pulse phase and report the condition residuals"},
        {"oracle", "brute-force orientation maximum over a subspace of dressed states"}};
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON run configuration");
        sub->add_option("--out", out, "output directory")->capture_default_str();
        sub->add_option("--preset", preset_name, "named preset (bare, fig2, fig3, fig4, fig5)");
        sub->add_option("--threads", threads, "worker threads for scans");
        sub->add_option("--seed", seed, "recorded in the manifest; all computations are deterministic");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid_config;
    }
    inv.command = app.get_subcommands().front()->get_name();
    const auto* sub = app.get_subcommands().front();
    if (!config.empty()) inv.config = config;
    if (!preset_name.empty()) inv.preset = preset_name;
    inv.out = out;
    if (sub->count("--threads")) inv.threads = threads;
    if (sub->count("--seed")) inv.seed = seed;
    return run(inv, std::cout, std::cerr);
}

}  // namespace polariton::cli
