// control.hpp: composite-pulse design, condition checks, and the scan drivers

#pragma once

#include "polariton/dynamics.hpp"
#include "polariton/model.hpp"
#include "polariton/observables.hpp"
#include "polariton/pulse.hpp"

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace polariton {

// ---------------------------------------------------------------- simulation

enum class ModelBasis {
    dressed,     // driven Hamiltonian in the dressed states (rotating-wave cavity coupling)
    full,        // product basis, dipole-gauge coupling with counter-rotating terms
    jc_product,  // product basis, rotating-wave cavity coupling
    bare         // molecule alone: product basis with g = 0 and no photons
};

std::string to_string(ModelBasis basis);
ModelBasis parse_model_basis(const std::string& name);

struct SimulationSetup {
    SystemParams params;
    FieldSpec field;
    ModelBasis basis{ModelBasis::dressed};
    PropagationSettings settings{};
    std::size_t trajectory_samples{2};
    double horizon{};    // post-pulse trace length; 0 selects 40 pi / B
    double sample_dt{};  // post-pulse sampling step; 0 selects (pi / B) / 100
};

struct SimulationResult {
    Hamiltonian hamiltonian;
    OperatorMatrix cos_theta;
    Trajectory trajectory;
    StateVector final_state;                  // Schrodinger picture, model basis
    std::optional<StateVector> dressed;       // interaction-picture dressed coefficients
    TimeSeries trace;                         // post-pulse <cos(theta)>
};

SimulationResult simulate(const SimulationSetup& setup);

// Parameters actually used by a model basis (g = 0 and n_max = 0 for bare).
SystemParams effective_params(const SystemParams& params, ModelBasis basis);

double max_abs(const TimeSeries& series);

// ------------------------------------------------------------------ design

inline constexpr double design_area = 0.5553603672697958;  // sqrt(2) pi / 8

struct ConditionReport {
    std::array<double, 2> amp_residuals{};       // | |Theta_{+-,0}(t_f)| - sqrt(2) pi / 8 |
    double phase_value{};                         // omega_{-,0} arg P+ - omega_{+,0} arg P-
    double phase_residual_plus{};                 // phase_value - g pi
    double phase_residual_minus{};                // phase_value + g pi
    double phase_residual_2g{};                   // phase_value - 2 g pi
    double coefficient_relation_residual{};       // on the Magnus C, against 2 g pi, mod 2 g pi
    std::array<double, 2> blockade_residuals{};   // |Theta_{+-,1}(t_f)|
    double predicted_orientation_max{};
    PulseAreaSet areas;
};

// Evaluates amplitude, phase and blockade conditions at the end of the field window.
// The phase condition is evaluated on P_l = |mu~0| int E exp(-i omega_{l,0} t) dt,
// i.e. the conjugated areas with the dressed-state sign divided out.
ConditionReport check_conditions(const FieldSpec& spec, const SystemParams& params);

enum class PhaseBranch { plus, minus };

struct DesignOptions {
    double A1{design_area};
    bool enforce_validity{true};   // bandwidth 1 / tau0 <= 0.2 g
    double tol{1e-6};
    int scan_points{72};
};

struct CompositeDesign {
    FieldSpec field;
    ConditionReport report;
    double phi_plus{};
    PhaseBranch branch{PhaseBranch::plus};
    std::array<int, 2> root_counts{};   // roots per branch (+ g pi, - g pi) in (-pi, pi]
    std::array<double, 2> branch_orientation_max{
        std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    bool certified{false};
};

// Two-colour field at omega_{+-,0} with phi_{-,0} = 0 and phi_{+,0} solved from the phase
// condition. Throws DesignInfeasible outside the validity regime or without a root.
CompositeDesign design_composite(const SystemParams& params, double tau0, const DesignOptions& options = {});

// Two-colour field with explicit phases.
FieldSpec make_composite(const SystemParams& params, double tau0, double phi_plus, double phi_minus = 0.0,
                         double A1 = design_area);

// -------------------------------------------------------------------- scans

struct ScanPoint {
    double detuning{};    // omega0 - omega01 (scan 1) or 0
    double bandwidth{};   // 1 / tau0
    bool converged{false};
    std::string error;

    double orientation_max{};  // max |<cos>| after the pulse
    double snapshot{};         // <cos> at the snapshot time after the pulse
    double period{std::numeric_limits<double>::quiet_NaN()};              // autocorrelation revival
    double oscillation_period{std::numeric_limits<double>::quiet_NaN()};  // 2 pi / dominant_omega
    double dominant_omega{std::numeric_limits<double>::quiet_NaN()};
    std::vector<Peak> peaks;
    std::vector<PopulationPhase> populations;
    std::vector<PopulationPhase> magnus;
    double magnus_deviation{std::numeric_limits<double>::quiet_NaN()};
    double phi_plus{std::numeric_limits<double>::quiet_NaN()};
    double blockade{std::numeric_limits<double>::quiet_NaN()};
    TimeSeries trace;
    Spectrum spectrum;
};

struct ScanSettings {
    double horizon{};             // 0 selects 40 pi / B
    double sample_dt{};           // 0 selects (pi / B) / 100
    double snapshot_time{};       // after the pulse; 0 selects 6.75 pi / B
    double spectrum_omega_max{};  // 0 selects 2 omega01
    double peak_threshold{0.01};
    SpectrumOptions spectrum{};
    PropagationSettings propagation{};
    ModelBasis cavity_basis{ModelBasis::dressed};
    unsigned threads{1};
};

struct ScanResult {
    std::string kind;  // "detuning_bandwidth" or "composite_bandwidth"
    SystemParams params;
    bool cavity{true};
    double area{};
    std::vector<double> detunings;
    std::vector<double> bandwidths;
    std::vector<ScanPoint> points;  // row-major: bandwidth index, then detuning index

    const ScanPoint& at(std::size_t bandwidth, std::size_t detuning = 0) const {
        return points.at(bandwidth * std::max<std::size_t>(1, detunings.size()) + detuning);
    }
};

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

// Single Gaussian pulses of area A0 and phase 0 over the detuning x bandwidth grid.
ScanResult scan_detuning_bandwidth(const SystemParams& params, double A0, const std::vector<double>& detunings,
                                   const std::vector<double>& bandwidths, bool cavity, const ScanSettings& settings = {});

// Designed composite pulses over a bandwidth grid, exact and first-order Magnus.
ScanResult scan_composite_bandwidth(const SystemParams& params, const std::vector<double>& bandwidths,
                                    const ScanSettings& settings = {});

// Runs fn(i) for i in [0, n) over a fixed number of worker threads.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// Largest change of the post-pulse <cos> trace when J_max and n_max are both raised by 2.
double truncation_sensitivity(const SimulationSetup& setup);

}  // namespace polariton
