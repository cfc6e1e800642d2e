// observables.hpp: orientation, spectra, dressed populations, revivals, and the
// brute-force orientation-maximum search

#pragma once

#include "polariton/dynamics.hpp"
#include "polariton/model.hpp"

#include <string>
#include <vector>

namespace polariton {

struct TimeSeries {
    std::vector<double> times;   // uniform grid
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double step() const;
    double length() const { return times.back() - times.front(); }
};

enum class SpectrumWindow { rectangular, hann };

struct SpectrumOptions {
    double omega_max{};       // highest frequency evaluated; 0 selects the Nyquist frequency
    int oversample{1};        // frequency samples per resolution bin
    SpectrumWindow window{SpectrumWindow::rectangular};
};

struct Spectrum {
    std::vector<double> omegas;
    std::vector<double> magnitudes;
    double window_start{};
    double window_length{};
    double resolution{};  // 2 pi / window_length
    SpectrumWindow window{SpectrumWindow::rectangular};
};

struct Peak {
    double omega{};
    double magnitude{};
    std::size_t index{};
};

// <psi| cos(theta) (x) 1 |psi> for a Schrodinger-picture state in the operator's basis.
double orientation(const StateVector& psi, const OperatorMatrix& cos_matrix);

// <cos(theta)>(t) at t = psi.time + k dt for k = 0 .. floor(horizon / dt), field-free.
TimeSeries orientation_trace(const StateVector& psi, const FreeEvolution& evolution, const OperatorMatrix& cos_matrix,
                             double horizon, double dt);

// <cos(theta)> at each recorded state of a trajectory.
TimeSeries orientation_trace(const Trajectory& trajectory, const OperatorMatrix& cos_matrix);

// S(omega) = | int dt <cos>(t) exp(i omega t) | over the series, trapezoid rule, on
// omega_k = k * resolution / oversample. Throws WindowTooShort below min_window.
Spectrum spectrum(const TimeSeries& series, double min_window, const SpectrumOptions& options = {});

// Local maxima with magnitude >= rel_threshold * global maximum, ordered by frequency.
std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold = 0.0);

struct PopulationPhase {
    std::string label;
    double population{};
    double phase{};  // arg C in (-pi, pi]
};

// Populations and phases of the interaction-picture dressed coefficients.
std::vector<PopulationPhase> dressed_populations_phases(const StateVector& psi);

// Smallest lag whose normalized autocorrelation exceeds threshold, after the
// zero-lag peak has decayed below it; refined by a parabola through the local maximum.
double revival_period(const TimeSeries& series, double threshold = 0.999);

// ---------------------------------------------------------------------------

struct OracleGrid {
    int amplitude_points{101};  // per population simplex axis
    int phase_points{64};
    int time_points{2048};
};

struct OracleResult {
    double grid_max{};
    double max{};                       // after local refinement
    std::vector<DressedState> states;
    std::vector<double> populations;
    std::vector<cplx> coefficients;     // interaction picture, ground coefficient real
    double time{};                      // free-evolution time of the maximum
    // omega_{-,0} arg C+ - omega_{+,0} arg C- - 2 g pi, reduced modulo 2 g pi into
    // (-g pi, g pi], frequencies in units of omega01. C is taken with the sign of
    // <0;0|cos|l;0> so that both coherences enter the orientation with the same sign.
    // NaN unless both |+;0> and |-;0> are present.
    double phase_relation_residual{};
};

// Exhaustive grid search for max <cos(theta)> over states confined to a subset of
// {|0;0>, |+;0>, |-;0>}, over populations, relative phases and free-evolution time
// within one period, followed by coordinate-wise refinement.
OracleResult orientation_max_oracle(const SystemParams& params, const std::vector<DressedState>& subspace,
                                    const OracleGrid& grid = {});

}  // namespace polariton
