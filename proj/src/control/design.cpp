#include "polariton/control.hpp"
#include "polariton/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>

namespace polariton {

namespace {

constexpr double pi = std::numbers::pi;

struct Ladder {
    std::array<double, 2> omega{};  // omega_{+,0}, omega_{-,0}
    std::array<double, 2> mu{};     // signed <l;0| mu cos |0;0>
    double omega01{};
    double g{};
};

Ladder ladder(const SystemParams& params) {
    SystemParams p = params;
    p.n_max = std::max(p.n_max, 2);
    const DressedBasis basis(p);
    const auto H = build_dressed_hamiltonian(p);
    const auto ip = static_cast<Eigen::Index>(basis.index(Branch::plus));
    const auto im = static_cast<Eigen::Index>(basis.index(Branch::minus));
    return {{basis.energy(Branch::plus), basis.energy(Branch::minus)},
            {H.V.m(ip, 0).real(), H.V.m(im, 0).real()},
            p.omega01(),
            p.g};
}

// omega_{-,0} arg P+ - omega_{+,0} arg P-, in units of omega01, where P_l = conj(Theta_l) sign(mu_l).
double phase_value(const std::array<std::complex<double>, 2>& theta, const Ladder& L) {
    const double arg_p = std::arg(std::conj(theta[0]) * (L.mu[0] < 0 ? -1.0 : 1.0));
    const double arg_m = std::arg(std::conj(theta[1]) * (L.mu[1] < 0 ? -1.0 : 1.0));
    return (L.omega[1] * arg_p - L.omega[0] * arg_m) / L.omega01;
}

double wrap(double x, double period) {
    double r = std::remainder(x, period);
    if (r <= -period / 2) r += period;
    return r;
}

double predicted_max(const PulseAreaSet& areas, const SystemParams& params, double t_f) {
    SystemParams p = params;
    p.n_max = std::max(p.n_max, 2);
    const auto H = build_dressed_hamiltonian(p);
    const DressedBasis basis(p);
    const FreeEvolution evolution(H.H0);
    const auto ladder_state = magnus_wavefunction(areas, t_f);
    const auto psi = evolution.to_schrodinger(embed_ladder(ladder_state, basis.size()));
    const double period = p.g > 0.0 ? 2.0 * pi / p.g : 2.0 * pi / p.omega01();
    const auto trace = orientation_trace(psi, evolution, dressed_cos_theta(basis), period, period / 4000.0);
    return max_abs(trace);
}

}  // namespace

ConditionReport check_conditions(const FieldSpec& spec, const SystemParams& params) {
    const Ladder L = ladder(params);
    ConditionReport r;
    r.areas = compute_pulse_areas(spec, params, spec.t_end);
    const std::array<std::complex<double>, 2> theta{r.areas.theta_p0, r.areas.theta_m0};

    for (int l = 0; l < 2; ++l) r.amp_residuals[l] = std::abs(std::abs(theta[l]) - design_area);
    const double gpi = L.g * pi / L.omega01;
    r.phase_value = phase_value(theta, L);
    r.phase_residual_plus = r.phase_value - gpi;
    r.phase_residual_minus = r.phase_value + gpi;
    r.phase_residual_2g = r.phase_value - 2.0 * gpi;
    r.blockade_residuals = r.areas.theta_l1;

    const auto c = magnus_wavefunction(r.areas, spec.t_end).amplitudes;
    if (std::abs(c(1)) > 0.0 && std::abs(c(2)) > 0.0 && L.g > 0.0) {
        const double a_p = std::arg(c(1) * (L.mu[0] < 0 ? -1.0 : 1.0));
        const double a_m = std::arg(c(2) * (L.mu[1] < 0 ? -1.0 : 1.0));
        r.coefficient_relation_residual = wrap((L.omega[1] * a_p - L.omega[0] * a_m) / L.omega01 - 2.0 * gpi, 2.0 * gpi);
    } else {
        r.coefficient_relation_residual = std::numeric_limits<double>::quiet_NaN();
    }
    r.predicted_orientation_max = predicted_max(r.areas, params, spec.t_end);
    return r;
}

FieldSpec make_composite(const SystemParams& params, double tau0, double phi_plus, double phi_minus, double A1) {
    const Ladder L = ladder(params);
    return composite_pulse(A1, tau0, {{L.omega[0], phi_plus}, {L.omega[1], phi_minus}}, std::abs(L.mu[0]));
}

CompositeDesign design_composite(const SystemParams& params, double tau0, const DesignOptions& options) {
    params.validate();
    if (!(tau0 > 0.0)) throw InvalidParams("design_composite: tau0 must be positive");
    const Ladder L = ladder(params);
    if (options.enforce_validity && 1.0 / tau0 > 0.2 * L.g * (1.0 + 1e-12)) {
        throw DesignInfeasible("bandwidth 1/tau0 = " + std::to_string(1.0 / (tau0 * L.g)) +
                               " g exceeds the design validity limit 0.2 g");
    }
    if (options.scan_points < 4) throw InvalidParams("design_composite: scan_points too small");

    auto value = [&](double phi) {
        const auto spec = make_composite(params, tau0, phi, 0.0, options.A1);
        return phase_value(pulse_area_ground(spec, L.omega, L.mu, spec.t_end), L);
    };

    const double gpi = L.g * pi / L.omega01;
    const std::array<double, 2> targets{gpi, -gpi};
    const int n = options.scan_points;
    std::vector<double> grid(static_cast<std::size_t>(n) + 1), values(grid.size());
    for (int k = 0; k <= n; ++k) {
        grid[k] = -pi + 2.0 * pi * k / n;
        values[k] = value(grid[k]);
    }

    CompositeDesign best;
    bool found = false;
    for (int b = 0; b < 2; ++b) {
        std::vector<double> roots;
        for (int k = 0; k < n; ++k) {
            const double fa = values[k] - targets[b];
            const double fb = values[k + 1] - targets[b];
            if (fa == 0.0 && k > 0) {
                roots.push_back(grid[k]);
                continue;
            }
            if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
            std::uintmax_t iters = 200;
            const auto [lo, hi] = boost::math::tools::toms748_solve(
                [&](double phi) { return value(phi) - targets[b]; }, grid[k], grid[k + 1], fa, fb,
                boost::math::tools::eps_tolerance<double>(50), iters);
            const double root = 0.5 * (lo + hi);
            // Brackets straddling the arg branch cut are discarded by the residual check.
            if (std::abs(value(root) - targets[b]) <= options.tol * 1e-3) roots.push_back(root);
        }
        best.root_counts[b] = static_cast<int>(roots.size());
        if (roots.empty()) continue;

        // Among several roots of a branch, keep the one nearest zero phase.
        double root = roots.front();
        for (double r : roots) if (std::abs(r) < std::abs(root)) root = r;
        const auto spec = make_composite(params, tau0, root, 0.0, options.A1);
        auto report = check_conditions(spec, params);
        best.branch_orientation_max[b] = report.predicted_orientation_max;
        const bool better = !found || report.predicted_orientation_max > best.report.predicted_orientation_max + 1e-4;
        if (better) {
            best.field = spec;
            best.report = report;
            best.phi_plus = root;
            best.branch = b == 0 ? PhaseBranch::plus : PhaseBranch::minus;
            found = true;
        }
    }
    if (!found) throw DesignInfeasible("no root of the phase condition in (-pi, pi]");

    const double phase_res = best.branch == PhaseBranch::plus ? best.report.phase_residual_plus
                                                              : best.report.phase_residual_minus;
    best.certified = best.report.amp_residuals[0] <= options.tol && best.report.amp_residuals[1] <= options.tol &&
                     std::abs(phase_res) <= options.tol;
    return best;
}

}  // namespace polariton
