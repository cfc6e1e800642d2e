#include "polariton/pulse.hpp"

#include "polariton/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polariton {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double gaussian_envelope(double t, double tau0) { return std::exp(-t * t / (2.0 * tau0 * tau0)); }

double amplitude_for_area(double area, double dipole, double tau0) {
    return std::sqrt(2.0 / std::numbers::pi) * area / (dipole * tau0);
}

double sampled_value(const SampledField& s, double t) {
    if (s.times.empty() || t < s.times.front() || t > s.times.back()) {
        return 0.0;
    }
    auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.end()) {
        return s.values.back();
    }
    const auto hi = static_cast<std::size_t>(it - s.times.begin());
    const auto lo = hi - 1;
    const double w = (t - s.times[lo]) / (s.times[hi] - s.times[lo]);
    return (1.0 - w) * s.values[lo] + w * s.values[hi];
}

}  // namespace

FieldSpec gaussian_pulse(double A0, double tau0, double omega0, double phi0, double mu01, double half_window) {
    if (!(tau0 > 0.0)) throw InvalidParams("gaussian_pulse: tau0 must be positive");
    if (!(mu01 > 0.0)) throw InvalidParams("gaussian_pulse: dipole must be positive");
    if (half_window < default_window) throw InvalidParams("gaussian_pulse: window narrower than 6 tau0");
    GaussianSingle g{A0, tau0, omega0, phi0, amplitude_for_area(A0, mu01, tau0)};
    return {g, -half_window * tau0, half_window * tau0};
}

FieldSpec composite_pulse(double A1, double tau0, std::vector<CarrierComponent> components, double mu_tilde0,
                          double half_window) {
    if (!(tau0 > 0.0)) throw InvalidParams("composite_pulse: tau0 must be positive");
    if (half_window < default_window) throw InvalidParams("composite_pulse: window narrower than 6 tau0");
    const double E0 = amplitude_for_area(A1, std::abs(mu_tilde0), tau0);
    CompositeTwoColor c{A1, tau0, std::move(components), E0};
    return {std::move(c), -half_window * tau0, half_window * tau0};
}

FieldSpec sampled_field(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2) {
        throw InvalidParams("sampled_field: need at least two (time, value) pairs");
    }
    if (!std::is_sorted(times.begin(), times.end()) ||
        std::adjacent_find(times.begin(), times.end()) != times.end()) {
        throw InvalidParams("sampled_field: times must be strictly increasing");
    }
    const double t0 = times.front();
    const double t1 = times.back();
    return {SampledField{std::move(times), std::move(values)}, t0, t1};
}

FieldSpec zero_field(double t_start, double t_end) { return sampled_field({t_start, t_end}, {0.0, 0.0}); }

double field_value(const FieldSpec& spec, double t) {
    if (t < spec.t_start || t > spec.t_end) {
        return 0.0;
    }
    return std::visit(overloaded{
                          [t](const GaussianSingle& g) {
                              return g.E0 * gaussian_envelope(t, g.tau0) * std::cos(g.omega0 * t + g.phi0);
                          },
                          [t](const CompositeTwoColor& c) {
                              double sum = 0.0;
                              for (const auto& k : c.components) {
                                  sum += std::cos(k.omega * t + k.phi);
                              }
                              return c.E0 * gaussian_envelope(t, c.tau0) * sum;
                          },
                          [t](const SampledField& s) { return sampled_value(s, t); },
                      },
                      spec.shape);
}

double peak_amplitude(const FieldSpec& spec) {
    return std::visit(overloaded{
                          [](const GaussianSingle& g) { return std::abs(g.E0); },
                          [](const CompositeTwoColor& c) {
                              return std::abs(c.E0) * static_cast<double>(c.components.size());
                          },
                          [](const SampledField& s) {
                              double m = 0.0;
                              for (double v : s.values) m = std::max(m, std::abs(v));
                              return m;
                          },
                      },
                      spec.shape);
}

double max_carrier_frequency(const FieldSpec& spec) {
    return std::visit(overloaded{
                          [](const GaussianSingle& g) { return std::abs(g.omega0); },
                          [](const CompositeTwoColor& c) {
                              double m = 0.0;
                              for (const auto& k : c.components) m = std::max(m, std::abs(k.omega));
                              return m;
                          },
                          [](const SampledField& s) {
                              double dt_min = s.times.back() - s.times.front();
                              for (std::size_t i = 1; i < s.times.size(); ++i) {
                                  dt_min = std::min(dt_min, s.times[i] - s.times[i - 1]);
                              }
                              return std::numbers::pi / dt_min;
                          },
                      },
                      spec.shape);
}

bool is_zero(const FieldSpec& spec) { return peak_amplitude(spec) == 0.0; }

std::complex<double> pulse_area(const FieldSpec& spec, double omega, double dipole, double t, double abs_tol) {
    const double upper = std::min(t, spec.t_end);
    if (upper <= spec.t_start || dipole == 0.0 || is_zero(spec)) {
        return {0.0, 0.0};
    }

    // Panel boundaries: sample points for sampled fields, then subdivided so that
    // each panel spans at most one period of the fastest integrand component.
    std::vector<double> breaks{spec.t_start};
    if (const auto* s = std::get_if<SampledField>(&spec.shape)) {
        for (double ts : s->times) {
            if (ts > spec.t_start && ts < upper) breaks.push_back(ts);
        }
    }
    breaks.push_back(upper);

    const double fastest = std::abs(omega) + max_carrier_frequency(spec);
    const double max_panel = fastest > 0.0 ? 2.0 * std::numbers::pi / fastest : upper - spec.t_start;

    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    constexpr unsigned max_depth = 12;
    constexpr double rel_tol = 1e-13;

    auto re = [&](double x) { return field_value(spec, x) * std::cos(omega * x); };
    auto im = [&](double x) { return field_value(spec, x) * std::sin(omega * x); };

    double sum_re = 0.0;
    double sum_im = 0.0;
    double err_total = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double a0 = breaks[b];
        const double a1 = breaks[b + 1];
        const auto panels = static_cast<int>(std::max(1.0, std::ceil((a1 - a0) / max_panel)));
        const double h = (a1 - a0) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a0 + p * h;
            const double hi = (p + 1 == panels) ? a1 : lo + h;
            double err_re = 0.0;
            double err_im = 0.0;
            sum_re += GK::integrate(re, lo, hi, max_depth, rel_tol, &err_re);
            sum_im += GK::integrate(im, lo, hi, max_depth, rel_tol, &err_im);
            err_total += std::hypot(err_re, err_im);
        }
    }
    err_total *= std::abs(dipole);
    if (!(err_total <= abs_tol)) {
        throw QuadratureNotConverged("pulse_area: estimated error " + std::to_string(err_total) +
                                     " exceeds tolerance");
    }
    return dipole * std::complex<double>(sum_re, sum_im);
}

std::array<std::complex<double>, 2> pulse_area_ground(const FieldSpec& spec, std::array<double, 2> omega_pm,
                                                      std::array<double, 2> mu_tilde0, double t) {
    return {pulse_area(spec, omega_pm[0], mu_tilde0[0], t), pulse_area(spec, omega_pm[1], mu_tilde0[1], t)};
}

DoubletAreas pulse_area_doublet(const FieldSpec& spec, const DoubletEnergies& energies,
                                std::array<double, 2> mu_tilde_pm, double t) {
    DoubletAreas out{};
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t l = 0; l < 2; ++l) {
            out[s][l] = pulse_area(spec, energies.second[l] - energies.first[s], mu_tilde_pm[l], t);
        }
    }
    return out;
}

PulseAreaSet aggregate_areas(const std::array<std::complex<double>, 2>& ground, const DoubletAreas& doublet) {
    PulseAreaSet a;
    a.theta_p0 = ground[0];
    a.theta_m0 = ground[1];
    a.theta_s_l1 = doublet;
    for (std::size_t l = 0; l < 2; ++l) {
        a.theta_l1[l] = std::sqrt(std::norm(doublet[0][l]) + std::norm(doublet[1][l]));
    }
    a.theta0 = std::sqrt(std::norm(ground[0]) + std::norm(ground[1]));
    a.theta1 = std::hypot(a.theta_l1[0], a.theta_l1[1]);
    a.theta = std::hypot(a.theta0, a.theta1);
    return a;
}

PulseAreaSet compute_pulse_areas(const FieldSpec& spec, const SystemParams& params, double t) {
    SystemParams p = params;
    p.n_max = std::max(p.n_max, 2);
    const auto H = build_dressed_hamiltonian(p);
    const DressedBasis basis(p);
    const auto ip0 = static_cast<Eigen::Index>(basis.index(Branch::plus, 0));
    const auto im0 = static_cast<Eigen::Index>(basis.index(Branch::minus, 0));
    const auto ip1 = static_cast<Eigen::Index>(basis.index(Branch::plus, 1));
    const auto im1 = static_cast<Eigen::Index>(basis.index(Branch::minus, 1));

    const std::array<double, 2> omega_pm{basis.energy(Branch::plus), basis.energy(Branch::minus)};
    const std::array<double, 2> mu0{H.V.m(ip0, 0).real(), H.V.m(im0, 0).real()};
    const DoubletEnergies e{omega_pm, {basis.energy(Branch::plus, 1), basis.energy(Branch::minus, 1)}};
    const std::array<double, 2> mu1{H.V.m(ip1, ip0).real(), H.V.m(im1, ip0).real()};

    return aggregate_areas(pulse_area_ground(spec, omega_pm, mu0, t), pulse_area_doublet(spec, e, mu1, t));
}

}  // namespace polariton
