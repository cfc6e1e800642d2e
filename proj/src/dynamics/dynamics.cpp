#include "polariton/dynamics.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace polariton {

StateVector basis_state(std::size_t dim, std::size_t index, BasisKind basis, double t, Picture picture) {
    if (index >= dim) throw std::out_of_range("basis_state: index outside basis");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return {v, basis, picture, t};
}

// ---------------------------------------------------------------------------

FreeEvolution::FreeEvolution(const OperatorMatrix& H0) : basis_(H0.basis) {
    if (H0.m.rows() != H0.m.cols() || H0.m.rows() == 0) {
        throw InvalidParams("FreeEvolution: H0 must be square and non-empty");
    }
    const double scale = std::max(1.0, H0.m.cwiseAbs().maxCoeff());
    Matrix off = H0.m;
    off.diagonal().setZero();
    diagonal_ = off.cwiseAbs().maxCoeff() <= 1e-15 * scale;
    if (diagonal_) {
        energies_ = H0.m.diagonal().real();
        vectors_ = Matrix::Identity(H0.m.rows(), H0.m.cols());
        return;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H0.m);
    if (solver.info() != Eigen::Success) {
        throw NotConverged("FreeEvolution: eigen-decomposition of H0 failed");
    }
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

Vector FreeEvolution::phase_apply(const Vector& v, double t) const {
    if (v.size() != energies_.size()) {
        throw BasisMismatch("FreeEvolution: state dimension does not match H0");
    }
    Vector phases(energies_.size());
    for (Eigen::Index i = 0; i < energies_.size(); ++i) {
        phases(i) = std::polar(1.0, -energies_(i) * t);
    }
    if (diagonal_) {
        return phases.cwiseProduct(v);
    }
    return vectors_ * phases.cwiseProduct(vectors_.adjoint() * v);
}

StateVector FreeEvolution::evolve(const StateVector& psi, double dt) const {
    if (psi.basis != basis_) throw BasisMismatch("free_evolve: basis mismatch");
    StateVector out = psi;
    out.time = psi.time + dt;
    if (psi.picture == Picture::schrodinger) {
        out.amplitudes = phase_apply(psi.amplitudes, dt);
    }
    return out;
}

StateVector FreeEvolution::to_interaction(const StateVector& psi) const {
    if (psi.basis != basis_) throw BasisMismatch("to_interaction: basis mismatch");
    if (psi.picture == Picture::interaction) return psi;
    StateVector out = psi;
    out.amplitudes = phase_apply(psi.amplitudes, -psi.time);
    out.picture = Picture::interaction;
    return out;
}

StateVector FreeEvolution::to_schrodinger(const StateVector& psi) const {
    if (psi.basis != basis_) throw BasisMismatch("to_schrodinger: basis mismatch");
    if (psi.picture == Picture::schrodinger) return psi;
    StateVector out = psi;
    out.amplitudes = phase_apply(psi.amplitudes, psi.time);
    out.picture = Picture::schrodinger;
    return out;
}

StateVector free_evolve(const StateVector& psi, double dt, const FreeEvolution& evolution) {
    return evolution.evolve(psi, dt);
}

std::vector<double> TimeGrid::times() const {
    if (samples < 2 || !(t_end > t_start)) {
        throw InvalidParams("TimeGrid: need at least two samples over a non-empty interval");
    }
    std::vector<double> t(samples);
    const double h = (t_end - t_start) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        t[i] = t_start + h * static_cast<double>(i);
    }
    t.back() = t_end;
    return t;
}

// ---------------------------------------------------------------------------

Vector expm_apply(const Matrix& A, double dt, const Vector& v) {
    const Eigen::Index n = A.rows();
    const double shift = A.diagonal().real().sum() / static_cast<double>(n);
    Matrix B = A;
    B.diagonal().array() -= shift;
    const double norm1 = B.cwiseAbs().colwise().sum().maxCoeff();
    const auto substeps = static_cast<int>(std::max(1.0, std::ceil(norm1 * std::abs(dt))));
    const double h = dt / substeps;

    Vector out = v;
    Vector term(n);
    for (int s = 0; s < substeps; ++s) {
        term = out;
        Vector sum = out;
        for (int k = 1; k < 64; ++k) {
            term = (B * term) * cplx(0.0, -h / k);
            sum += term;
            if (term.norm() <= 1e-17 * sum.norm()) break;
        }
        out = sum;
    }
    return out * std::polar(1.0, -shift * dt);
}

namespace {

struct RunResult {
    std::vector<Vector> samples;
    std::size_t steps{};
    double max_drift{};
};

RunResult run_fixed(const Hamiltonian& H, const FieldSpec& field, const Vector& psi0, const std::vector<double>& times,
                    double dt, Integrator integrator) {
    constexpr double c1 = 0.5 - std::numbers::sqrt3 / 6.0;
    constexpr double c2 = 0.5 + std::numbers::sqrt3 / 6.0;
    constexpr double a1 = (3.0 - 2.0 * std::numbers::sqrt3) / 12.0;
    constexpr double a2 = (3.0 + 2.0 * std::numbers::sqrt3) / 12.0;

    const Matrix& h0 = H.H0.m;
    const Matrix& v = H.V.m;
    const Matrix half_h0 = 0.5 * h0;

    RunResult r;
    r.samples.reserve(times.size());
    Vector psi = psi0;
    r.samples.push_back(psi);
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double t0 = times[k];
        const double span = times[k + 1] - t0;
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
        const double h = span / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = t0 + h * static_cast<double>(j);
            if (integrator == Integrator::midpoint) {
                psi = expm_apply(h0 - field_value(field, t + 0.5 * h) * v, h, psi);
            } else {
                const double e1 = field_value(field, t + c1 * h);
                const double e2 = field_value(field, t + c2 * h);
                psi = expm_apply(half_h0 - (a2 * e1 + a1 * e2) * v, h, psi);
                psi = expm_apply(half_h0 - (a1 * e1 + a2 * e2) * v, h, psi);
            }
        }
        r.steps += n;
        r.max_drift = std::max(r.max_drift, std::abs(psi.norm() - 1.0));
        r.samples.push_back(psi);
    }
    return r;
}

double max_difference(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
    }
    return m;
}

}  // namespace

Trajectory propagate(const Hamiltonian& H, const FieldSpec& field, const StateVector& psi0, const TimeGrid& grid,
                     const PropagationSettings& settings) {
    if (psi0.basis != H.H0.basis || psi0.dim() != H.H0.dim() || H.V.dim() != H.H0.dim()) {
        throw BasisMismatch("propagate: state and Hamiltonian bases differ");
    }
    if (psi0.picture != Picture::schrodinger) {
        throw BasisMismatch("propagate: initial state must be in the Schrodinger picture");
    }
    if (std::abs(psi0.norm() - 1.0) > settings.norm_tol) {
        throw InvalidParams("propagate: initial state is not normalized");
    }
    const auto times = grid.times();
    if (!is_zero(field) && (grid.t_start > field.t_start || grid.t_end < field.t_end)) {
        throw InvalidParams("propagate: time grid does not cover the field window");
    }

    double dt = grid.t_end - grid.t_start;
    const double omega_ref = max_carrier_frequency(field);
    if (!is_zero(field) && omega_ref > 0.0) {
        dt = 1.0 / (settings.steps_per_period * omega_ref);
    }

    RunResult coarse = run_fixed(H, field, psi0.amplitudes, times, dt, settings.integrator);
    RunResult fine = run_fixed(H, field, psi0.amplitudes, times, 0.5 * dt, settings.integrator);
    double err = max_difference(coarse.samples, fine.samples);
    int refinements = 0;
    while (err > settings.tol) {
        if (refinements >= settings.max_refinements) {
            throw NotConverged("propagate: step halving error " + std::to_string(err) + " exceeds tolerance after " +
                               std::to_string(refinements) + " refinements");
        }
        ++refinements;
        dt *= 0.5;
        coarse = std::move(fine);
        fine = run_fixed(H, field, psi0.amplitudes, times, 0.5 * dt, settings.integrator);
        err = max_difference(coarse.samples, fine.samples);
    }
    if (fine.max_drift > settings.norm_tol) {
        throw NotConverged("propagate: norm drift " + std::to_string(fine.max_drift) + " exceeds tolerance");
    }

    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        traj.states.push_back({fine.samples[i], psi0.basis, Picture::schrodinger, times[i]});
    }
    traj.meta = {settings.integrator, 0.5 * dt, fine.steps, err, fine.max_drift, refinements};
    return traj;
}

// ---------------------------------------------------------------------------

StateVector magnus_wavefunction(const PulseAreaSet& a, double t) {
    const double th = a.theta;
    double sinc = 0.0;     // sin(Theta) / Theta
    double cosm1 = 0.0;    // (cos(Theta) - 1) / Theta^2
    if (th < 1e-6) {
        const double th2 = th * th;
        sinc = 1.0 - th2 / 6.0;
        cosm1 = -0.5 + th2 / 24.0;
    } else {
        sinc = std::sin(th) / th;
        cosm1 = (std::cos(th) - 1.0) / (th * th);
    }
    const cplx i(0.0, 1.0);
    Vector c(5);
    // (|Theta1|^2 + |Theta0|^2 cos Theta) / Theta^2, written to stay finite as Theta -> 0.
    c(0) = 1.0 + a.theta0 * a.theta0 * cosm1;
    c(1) = i * sinc * a.theta_p0;
    c(2) = i * sinc * a.theta_m0;
    for (std::size_t l = 0; l < 2; ++l) {
        const cplx sum = a.theta_p0 * a.theta_s_l1[0][l] + a.theta_m0 * a.theta_s_l1[1][l];
        c(static_cast<Eigen::Index>(3 + l)) = cosm1 * sum;
    }
    return {c, BasisKind::dressed, Picture::interaction, t};
}

StateVector embed_ladder(const StateVector& ladder, std::size_t dressed_dim) {
    if (ladder.basis != BasisKind::dressed || ladder.dim() != 5) {
        throw BasisMismatch("embed_ladder: expected a five-state dressed ladder");
    }
    if (dressed_dim < 5) throw BasisMismatch("embed_ladder: target basis smaller than the ladder");
    StateVector out = ladder;
    out.amplitudes = Vector::Zero(static_cast<Eigen::Index>(dressed_dim));
    out.amplitudes.head(5) = ladder.amplitudes;
    return out;
}

}  // namespace polariton
