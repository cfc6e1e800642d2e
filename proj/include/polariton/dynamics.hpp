// dynamics.hpp: exact propagation, first-order Magnus wavefunction, free evolution

#pragma once

#include "polariton/model.hpp"
#include "polariton/pulse.hpp"

#include <cstddef>
#include <vector>

namespace polariton {

enum class Picture { schrodinger, interaction };

struct StateVector {
    Vector amplitudes;
    BasisKind basis{BasisKind::product};
    Picture picture{Picture::schrodinger};
    double time{0.0};

    double norm() const { return amplitudes.norm(); }
    Eigen::Index dim() const { return amplitudes.size(); }
};

// Basis state |index> at time t.
StateVector basis_state(std::size_t dim, std::size_t index, BasisKind basis, double t = 0.0,
                        Picture picture = Picture::schrodinger);

// exp(-i H0 t) generated from the eigen-decomposition of a time-independent H0.
class FreeEvolution {
public:
    explicit FreeEvolution(const OperatorMatrix& H0);

    BasisKind basis() const noexcept { return basis_; }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }
    const Matrix& eigenvectors() const noexcept { return vectors_; }
    bool diagonal() const noexcept { return diagonal_; }

    // Schrodinger picture: psi -> exp(-i H0 dt) psi. Interaction picture: unchanged
    // amplitudes. In both cases the time stamp advances by dt.
    StateVector evolve(const StateVector& psi, double dt) const;

    StateVector to_interaction(const StateVector& psi) const;
    StateVector to_schrodinger(const StateVector& psi) const;

private:
    Vector phase_apply(const Vector& v, double t) const;

    BasisKind basis_;
    Eigen::VectorXd energies_;
    Matrix vectors_;
    bool diagonal_{false};
};

StateVector free_evolve(const StateVector& psi, double dt, const FreeEvolution& evolution);

struct TimeGrid {
    double t_start{};
    double t_end{};
    std::size_t samples{2};

    std::vector<double> times() const;
};

enum class Integrator {
    cfet4,    // fourth-order commutator-free exponential, two exponentials per step
    midpoint  // exponential midpoint rule
};

struct PropagationSettings {
    Integrator integrator{Integrator::cfet4};
    double steps_per_period{40.0};  // initial step = 1 / (steps_per_period * omega_ref)
    double tol{1e-8};               // step-halving acceptance on every recorded amplitude
    int max_refinements{6};
    double norm_tol{1e-10};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;

    struct Metadata {
        Integrator integrator{Integrator::cfet4};
        double step{};
        std::size_t steps{};
        double halving_error{};
        double max_norm_drift{};
        int refinements{};
    } meta;

    const StateVector& final_state() const { return states.back(); }
};

// Solves i d/dt psi = (H0 - E(t) V) psi in the Schrodinger picture and records the
// state at every grid time. The step is halved until two successive step sizes agree
// to settings.tol; throws NotConverged otherwise.
Trajectory propagate(const Hamiltonian& H, const FieldSpec& field, const StateVector& psi0, const TimeGrid& grid,
                     const PropagationSettings& settings = {});

// exp(-i A dt) v for Hermitian A, by scaled Taylor series summed to round-off.
Vector expm_apply(const Matrix& A, double dt, const Vector& v);

// Interaction-picture amplitudes on |0;0>, |+;0>, |-;0>, |+;1>, |-;1> from the
// first-order Magnus propagator acting on |0;0>. Basis tag is dressed with n_max = 2.
StateVector magnus_wavefunction(const PulseAreaSet& areas, double t);

// Embeds a five-state ladder amplitude vector into a dressed basis of size 1 + 2 n_max.
StateVector embed_ladder(const StateVector& ladder, std::size_t dressed_dim);

}  // namespace polariton
