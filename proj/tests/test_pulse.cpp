#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "polariton/errors.hpp"
#include "polariton/pulse.hpp"

#include <cmath>
#include <numbers>

using namespace polariton;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
const double A1 = std::sqrt(2.0) * pi / 8.0;

struct Ladder {
    SystemParams p = SystemParams::ocs();
    std::array<double, 2> omega{2.2 * p.B, 1.8 * p.B};
    double mu0 = p.mu01() / std::sqrt(2.0);
};

}  // namespace

TEST_CASE("field values") {
    const Ladder L;
    const double tau0 = 1.0 / (0.1 * L.p.g);
    const auto f = gaussian_pulse(pi / 4, tau0, L.p.omega01(), 0.0, L.p.mu01());
    const double E0 = std::sqrt(2.0 / pi) * (pi / 4) / (L.p.mu01() * tau0);
    CHECK(field_value(f, 0.0) == Approx(E0).epsilon(1e-14));
    CHECK(peak_amplitude(f) == Approx(E0).epsilon(1e-14));
    CHECK(std::abs(field_value(f, f.t_end)) <= 1e-7 * E0);
    CHECK(std::abs(field_value(f, f.t_start)) <= 1e-7 * E0);
    CHECK(field_value(f, f.t_end * 1.5) == 0.0);
    CHECK(f.t_end == Approx(6.0 * tau0));

    const double phi = 0.3;
    const auto c = composite_pulse(A1, tau0, {{L.omega[0], phi}, {L.omega[1], phi}}, L.mu0);
    const double E1 = std::sqrt(2.0 / pi) * A1 / (L.mu0 * tau0);
    CHECK(field_value(c, 0.0) == Approx(2.0 * E1 * std::cos(phi)).epsilon(1e-14));
    CHECK(max_carrier_frequency(c) == Approx(L.omega[0]));

    const auto s = sampled_field({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(field_value(s, 0.5) == Approx(1.0));
    CHECK(field_value(s, 3.0) == 0.0);
    CHECK(is_zero(zero_field(0.0, 10.0)));
}

TEST_CASE("pulse areas match the closed-form Gaussian integral") {
    const Ladder L;
    const double g = L.p.g;
    for (double bw : {0.1, 0.5, 1.0}) {
        for (double phi : {0.0, 0.7, -2.1}) {
            for (double detune : {-1.0, 0.0, 0.4}) {
                const double tau0 = 1.0 / (bw * g);
                const double omega0 = L.p.omega01() + detune * g;
                const auto f = gaussian_pulse(pi / 4, tau0, omega0, phi, L.p.mu01());
                const auto& gs = std::get<GaussianSingle>(f.shape);
                for (double omega : {L.omega[0], L.omega[1], L.p.omega01()}) {
                    const auto area = pulse_area(f, omega, L.p.mu01(), f.t_end);
                    const auto expected = L.p.mu01() * gs.E0 * oracle::gaussian_area(tau0, omega0, phi, omega);
                    CHECK(std::abs(area - expected) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("ground areas") {
    const Ladder L;
    const double tau0 = 1.0 / (0.1 * L.p.g);
    const auto f = gaussian_pulse(A1, tau0, L.omega[1], 0.0, L.mu0);
    const auto th = pulse_area_ground(f, L.omega, {L.mu0, -L.mu0}, f.t_end);
    CHECK(std::abs(th[1]) == Approx(A1).epsilon(1e-8));
    CHECK(std::abs(th[1]) == Approx(0.5554).epsilon(1e-4));
    CHECK(std::abs(th[0]) <= 1e-9);

    const auto z = pulse_area_ground(zero_field(-10.0, 10.0), L.omega, {L.mu0, -L.mu0}, 10.0);
    CHECK(std::abs(z[0]) == 0.0);
    CHECK(std::abs(z[1]) == 0.0);

    // Detuned by delta: magnitude falls as exp(-tau0^2 delta^2 / 2).
    for (double delta : {0.5 / tau0, 1.0 / tau0, 2.0 / tau0}) {
        const auto fd = gaussian_pulse(A1, tau0, L.omega[1] + delta, 0.0, L.mu0);
        const double ratio = std::abs(pulse_area_ground(fd, L.omega, {L.mu0, -L.mu0}, fd.t_end)[1]) / A1;
        CHECK(ratio == Approx(std::exp(-tau0 * tau0 * delta * delta / 2.0)).epsilon(1e-2));
    }
}

TEST_CASE("doublet areas") {
    const Ladder L;
    const auto z = pulse_area_doublet(zero_field(-5.0, 5.0), {L.omega, {4.0 * L.p.B + std::sqrt(2.0) * L.p.g,
                                                                        4.0 * L.p.B - std::sqrt(2.0) * L.p.g}},
                                      {0.5 * L.p.mu01(), -0.5 * L.p.mu01()}, 5.0);
    for (const auto& row : z) for (const auto& v : row) CHECK(std::abs(v) == 0.0);

    SUBCASE("narrowband composite is blockaded") {
        const double tau0 = 1.0 / (0.1 * L.p.g);
        const auto f = composite_pulse(A1, tau0, {{L.omega[0], pi / 9}, {L.omega[1], 0.0}}, L.mu0);
        const auto a = compute_pulse_areas(f, L.p, f.t_end);
        for (const auto& row : a.theta_s_l1) for (const auto& v : row) CHECK(std::abs(v) <= 0.02 * A1);
    }
    SUBCASE("broadband composite leaks") {
        const double tau0 = 1.0 / (1.0 * L.p.g);
        const auto f = composite_pulse(A1, tau0, {{L.omega[0], pi / 9}, {L.omega[1], 0.0}}, L.mu0);
        const auto a = compute_pulse_areas(f, L.p, f.t_end);
        double biggest = 0.0;
        for (const auto& row : a.theta_s_l1) for (const auto& v : row) biggest = std::max(biggest, std::abs(v));
        CHECK(biggest > 0.1 * A1);
    }
}

TEST_CASE("aggregate areas") {
    const DoubletAreas none{};
    CHECK(aggregate_areas({0.0, 0.0}, none).theta == 0.0);
    const std::complex<double> x{0.3, -0.4};
    CHECK(aggregate_areas({x, x}, none).theta == Approx(std::sqrt(2.0) * std::abs(x)).epsilon(1e-15));
    CHECK(aggregate_areas({A1, A1}, none).theta0 == Approx(pi / 4).epsilon(1e-15));

    DoubletAreas d{};
    d[0][0] = {0.1, 0.0};
    d[1][0] = {0.0, 0.2};
    d[0][1] = {0.3, 0.0};
    const auto a = aggregate_areas({x, 0.0}, d);
    CHECK(a.theta_l1[0] == Approx(std::sqrt(0.05)));
    CHECK(a.theta_l1[1] == Approx(0.3));
    CHECK(a.theta1 == Approx(std::sqrt(0.05 + 0.09)));
    CHECK(a.theta == Approx(std::sqrt(a.theta0 * a.theta0 + a.theta1 * a.theta1)));
}

TEST_CASE("areas are linear in the field") {
    const Ladder L;
    const double tau0 = 1.0 / (0.5 * L.p.g);
    const auto both = composite_pulse(A1, tau0, {{L.omega[0], 0.4}, {L.omega[1], -1.0}}, L.mu0);
    const auto first = composite_pulse(A1, tau0, {{L.omega[0], 0.4}}, L.mu0);
    const auto second = composite_pulse(A1, tau0, {{L.omega[1], -1.0}}, L.mu0);
    for (double omega : {L.omega[0], L.omega[1], 0.3 * L.p.B}) {
        const auto s = pulse_area(both, omega, L.mu0, both.t_end);
        const auto parts = pulse_area(first, omega, L.mu0, first.t_end) + pulse_area(second, omega, L.mu0, second.t_end);
        CHECK(std::abs(s - parts) <= 1e-10);
    }
}

TEST_CASE("even envelope with zero phase gives a real area") {
    const Ladder L;
    const double tau0 = 1.0 / (0.3 * L.p.g);
    const auto f = gaussian_pulse(pi / 4, tau0, L.p.omega01(), 0.0, L.p.mu01());
    for (double omega : {L.omega[0], L.omega[1]}) {
        const auto a = pulse_area(f, omega, L.p.mu01(), f.t_end);
        CHECK(std::abs(a.imag()) <= 1e-10);
        const auto& gs = std::get<GaussianSingle>(f.shape);
        CHECK(a.real() == Approx((L.p.mu01() * gs.E0 * oracle::gaussian_area(tau0, L.p.omega01(), 0.0, omega)).real())
                              .epsilon(1e-8));
    }
}

TEST_CASE("partial areas and quadrature failure") {
    const Ladder L;
    const double tau0 = 1.0 / (0.5 * L.p.g);
    const auto f = gaussian_pulse(pi / 4, tau0, L.p.omega01(), 0.0, L.p.mu01());
    CHECK(std::abs(pulse_area(f, L.p.omega01(), L.p.mu01(), f.t_start)) == 0.0);
    const auto half = pulse_area(f, L.p.omega01(), L.p.mu01(), 0.0);
    CHECK(half.real() == Approx(pi / 8).epsilon(1e-6));
    CHECK_THROWS_AS(pulse_area(f, L.p.omega01(), L.p.mu01(), f.t_end, 1e-300), QuadratureNotConverged);
}
