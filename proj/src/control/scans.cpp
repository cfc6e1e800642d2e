#include "polariton/control.hpp"
#include "polariton/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace polariton {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<PopulationPhase> product_populations(const StateVector& psi, const SystemParams& p) {
    const ProductBasis basis(p.J_max, p.n_max);
    std::vector<PopulationPhase> out;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& s = basis.state(i);
        const cplx c = psi.amplitudes(static_cast<Eigen::Index>(i));
        out.push_back({"J=" + std::to_string(s.J) + ",n=" + std::to_string(s.n), std::norm(c), std::arg(c)});
    }
    return out;
}

// Trace statistics shared by both scans.
void summarize(ScanPoint& pt, const SimulationResult& sim, const SystemParams& p, const ScanSettings& settings) {
    pt.trace = sim.trace;
    pt.orientation_max = max_abs(sim.trace);

    const double dt = sim.trace.step();
    const double snap = settings.snapshot_time > 0.0 ? settings.snapshot_time : 6.75 * p.revival_period();
    const auto k = static_cast<std::size_t>(std::llround(snap / dt));
    pt.snapshot = k < sim.trace.size() ? sim.trace.values[k] : std::numeric_limits<double>::quiet_NaN();

    SpectrumOptions opts = settings.spectrum;
    if (opts.omega_max <= 0.0) {
        opts.omega_max = settings.spectrum_omega_max > 0.0 ? settings.spectrum_omega_max : 2.0 * p.omega01();
    }
    // Below 40 tau the +-g doublet is not resolved; the spectrum is left empty.
    const double min_window = 40.0 * p.revival_period() * (1.0 - 1e-9);
    if (sim.trace.length() >= min_window) {
        pt.spectrum = spectrum(sim.trace, min_window, opts);
        pt.peaks = find_peaks(pt.spectrum, settings.peak_threshold);
    }
    double best = 0.0;
    for (const auto& pk : pt.peaks) {
        if (pk.omega > 0.0 && pk.magnitude > best) {
            best = pk.magnitude;
            pt.dominant_omega = pk.omega;
        }
    }
    if (best > 0.0) pt.oscillation_period = 2.0 * pi / pt.dominant_omega;

    if (pt.orientation_max > 1e-8) {
        try {
            pt.period = revival_period(sim.trace);
        } catch (const NoRevivalFound&) {
        }
    }

    if (sim.dressed) {
        pt.populations = dressed_populations_phases(*sim.dressed);
    } else {
        pt.populations = product_populations(sim.final_state, p);
    }
}

SimulationSetup base_setup(const SystemParams& params, const ScanSettings& settings, ModelBasis basis) {
    SimulationSetup s;
    s.params = params;
    s.basis = basis;
    s.settings = settings.propagation;
    s.horizon = settings.horizon;
    s.sample_dt = settings.sample_dt;
    return s;
}

void require_grid(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw InvalidParams(std::string("empty ") + name + " grid");
    for (double v : grid) {
        if (!std::isfinite(v)) throw InvalidParams(std::string("non-finite value in ") + name + " grid");
    }
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    auto v = linspace(std::log(lo), std::log(hi), n);
    for (auto& x : v) x = std::exp(x);
    return v;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ScanResult scan_detuning_bandwidth(const SystemParams& params, double A0, const std::vector<double>& detunings,
                                   const std::vector<double>& bandwidths, bool cavity, const ScanSettings& settings) {
    params.validate();
    require_grid(detunings, "detuning");
    require_grid(bandwidths, "bandwidth");

    ScanResult result;
    result.kind = "detuning_bandwidth";
    result.params = params;
    result.cavity = cavity;
    result.area = A0;
    result.detunings = detunings;
    result.bandwidths = bandwidths;
    result.points.resize(detunings.size() * bandwidths.size());

    const ModelBasis basis = cavity ? settings.cavity_basis : ModelBasis::bare;
    const SystemParams p = effective_params(params, basis);

    parallel_for(result.points.size(), settings.threads, [&](std::size_t i) {
        ScanPoint& pt = result.points[i];
        pt.bandwidth = bandwidths[i / detunings.size()];
        pt.detuning = detunings[i % detunings.size()];
        try {
            if (!(pt.bandwidth > 0.0)) throw InvalidParams("bandwidth must be positive");
            auto setup = base_setup(params, settings, basis);
            setup.field = gaussian_pulse(A0, 1.0 / pt.bandwidth, params.omega01() + pt.detuning, 0.0, params.mu01());
            summarize(pt, simulate(setup), p, settings);
            pt.converged = true;
        } catch (const Error& e) {
            pt.error = e.what();
        }
    });
    return result;
}

ScanResult scan_composite_bandwidth(const SystemParams& params, const std::vector<double>& bandwidths,
                                    const ScanSettings& settings) {
    params.validate();
    require_grid(bandwidths, "bandwidth");

    ScanResult result;
    result.kind = "composite_bandwidth";
    result.params = params;
    result.cavity = true;
    result.area = design_area;
    result.detunings = {0.0};
    result.bandwidths = bandwidths;
    result.points.resize(bandwidths.size());

    parallel_for(result.points.size(), settings.threads, [&](std::size_t i) {
        ScanPoint& pt = result.points[i];
        pt.bandwidth = bandwidths[i];
        try {
            if (!(pt.bandwidth > 0.0)) throw InvalidParams("bandwidth must be positive");
            DesignOptions opts;
            opts.enforce_validity = false;
            const auto design = design_composite(params, 1.0 / pt.bandwidth, opts);
            pt.phi_plus = design.phi_plus;
            pt.blockade = std::max(design.report.blockade_residuals[0], design.report.blockade_residuals[1]);

            auto setup = base_setup(params, settings, ModelBasis::dressed);
            setup.field = design.field;
            const auto sim = simulate(setup);
            summarize(pt, sim, params, settings);

            const auto magnus = magnus_wavefunction(design.report.areas, design.field.t_end);
            pt.magnus = dressed_populations_phases(magnus);
            double dev = 0.0;
            for (Eigen::Index k = 0; k < magnus.amplitudes.size(); ++k) {
                dev = std::max(dev, std::abs(sim.dressed->amplitudes(k) - magnus.amplitudes(k)));
            }
            pt.magnus_deviation = dev;
            pt.converged = true;
        } catch (const Error& e) {
            pt.error = e.what();
        }
    });
    return result;
}

}  // namespace polariton
