// pulse.hpp: parametrized terahertz fields and generalized pulse areas

#pragma once

#include "polariton/model.hpp"

#include <array>
#include <complex>
#include <variant>
#include <vector>

namespace polariton {

// E(t) = E0 exp(-t^2 / 2 tau0^2) cos(omega0 t + phi0), E0 = sqrt(2/pi) A0 / (mu01 tau0),
// which gives |mu01 int E exp(i omega0 t) dt| = A0 on resonance.
struct GaussianSingle {
    double A0{};
    double tau0{};
    double omega0{};
    double phi0{};
    double E0{};
};

struct CarrierComponent {
    double omega{};
    double phi{};
};

// E(t) = E0 exp(-t^2 / 2 tau0^2) sum_k cos(omega_k t + phi_k), E0 = sqrt(2/pi) A1 / (|mu~0| tau0).
struct CompositeTwoColor {
    double A1{};
    double tau0{};
    std::vector<CarrierComponent> components;
    double E0{};
};

// Piecewise-linear interpolation of sampled values; zero outside the samples.
struct SampledField {
    std::vector<double> times;
    std::vector<double> values;
};

struct FieldSpec {
    std::variant<GaussianSingle, CompositeTwoColor, SampledField> shape;
    double t_start{};
    double t_end{};
};

inline constexpr double default_window = 6.0;  // half-width in units of tau0

FieldSpec gaussian_pulse(double A0, double tau0, double omega0, double phi0, double mu01,
                         double half_window = default_window);
FieldSpec composite_pulse(double A1, double tau0, std::vector<CarrierComponent> components,
                          double mu_tilde0, double half_window = default_window);
FieldSpec sampled_field(std::vector<double> times, std::vector<double> values);
FieldSpec zero_field(double t_start, double t_end);

double field_value(const FieldSpec& spec, double t);
double peak_amplitude(const FieldSpec& spec);
// Highest carrier angular frequency (Nyquist frequency for sampled fields).
double max_carrier_frequency(const FieldSpec& spec);
bool is_zero(const FieldSpec& spec);

// dipole * int_{t_start}^{t} E(t') exp(i omega t') dt'
//
// The +i omega sign makes the result the matrix element <upper| Omega |lower> of the
// first-order Magnus generator Omega = int E(t) V_I(t) dt for an upward transition of
// frequency omega, so that amplitudes evolve as exp(i Omega). Areas written with
// exp(-i omega t') are the complex conjugates of these.
std::complex<double> pulse_area(const FieldSpec& spec, double omega, double dipole, double t,
                                double abs_tol = 1e-10);

// (Theta_{+,0}, Theta_{-,0}) for |0;0> -> |+-;0>.
std::array<std::complex<double>, 2> pulse_area_ground(const FieldSpec& spec,
                                                      std::array<double, 2> omega_pm,
                                                      std::array<double, 2> mu_tilde0, double t);

struct DoubletEnergies {
    std::array<double, 2> first{};   // omega_{+,0}, omega_{-,0}
    std::array<double, 2> second{};  // omega_{+,1}, omega_{-,1}
};

// Theta_{s,l,1} for |s;0> -> |l;1>, indexed [s][l] with 0 = '+', 1 = '-'.
// mu_tilde_pm[l] is the coupling into the upper state l.
using DoubletAreas = std::array<std::array<std::complex<double>, 2>, 2>;
DoubletAreas pulse_area_doublet(const FieldSpec& spec, const DoubletEnergies& energies,
                                std::array<double, 2> mu_tilde_pm, double t);

struct PulseAreaSet {
    std::complex<double> theta_p0{};
    std::complex<double> theta_m0{};
    DoubletAreas theta_s_l1{};
    std::array<double, 2> theta_l1{};  // sqrt(|Theta_{+,l,1}|^2 + |Theta_{-,l,1}|^2)
    double theta0{};
    double theta1{};
    double theta{};
};

PulseAreaSet aggregate_areas(const std::array<std::complex<double>, 2>& ground, const DoubletAreas& doublet);

// All areas of the five-state ladder at time t, with energies and signed couplings
// taken from the dressed Hamiltonian.
PulseAreaSet compute_pulse_areas(const FieldSpec& spec, const SystemParams& params, double t);

}  // namespace polariton
