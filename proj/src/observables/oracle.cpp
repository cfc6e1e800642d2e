#include "polariton/errors.hpp"
#include "polariton/observables.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace polariton {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Coordinates: populations parametrized by angles (a, b), phases of the excited
// coefficients, and the free-evolution time.
struct Point {
    double a{};
    double b{};
    std::array<double, 2> phi{};
    double t{};
};

struct Problem {
    std::size_t excited{};               // number of excited states (0, 1 or 2)
    std::array<double, 2> omega{};       // their energies
    Matrix k;                            // cos(theta) on (ground, excited...)

    std::vector<cplx> coefficients(const Point& p) const {
        std::vector<cplx> c(1 + excited);
        if (excited == 0) {
            c[0] = 1.0;
        } else if (excited == 1) {
            c[0] = std::cos(p.a);
            c[1] = std::polar(std::sin(p.a), p.phi[0]);
        } else {
            c[0] = std::cos(p.a);
            c[1] = std::polar(std::sin(p.a) * std::cos(p.b), p.phi[0]);
            c[2] = std::polar(std::sin(p.a) * std::sin(p.b), p.phi[1]);
        }
        return c;
    }

    // <psi(t)| cos |psi(t)> with psi_j(t) = C_j exp(-i omega_j t), ground energy 0.
    double value(const Point& p) const {
        const auto c = coefficients(p);
        Vector psi(static_cast<Eigen::Index>(c.size()));
        psi(0) = c[0];
        for (std::size_t l = 0; l < excited; ++l) {
            psi(static_cast<Eigen::Index>(l + 1)) = c[l + 1] * std::polar(1.0, -omega[l] * p.t);
        }
        return psi.dot(k * psi).real();
    }
};

double& coordinate(Point& p, int i) {
    switch (i) {
        case 0: return p.a;
        case 1: return p.b;
        case 2: return p.phi[0];
        case 3: return p.phi[1];
        default: return p.t;
    }
}

}  // namespace

OracleResult orientation_max_oracle(const SystemParams& params, const std::vector<DressedState>& subspace,
                                    const OracleGrid& grid) {
    if (grid.amplitude_points < 2 || grid.phase_points < 1 || grid.time_points < 1) {
        throw InvalidParams("orientation_max_oracle: grid too coarse");
    }
    SystemParams p = params;
    p.n_max = std::max(p.n_max, 1);
    const DressedBasis basis(p);
    const OperatorMatrix cos_d = dressed_cos_theta(basis);

    bool has_ground = false;
    std::vector<DressedState> excited;
    for (const auto& s : subspace) {
        if (s.branch == Branch::ground) {
            has_ground = true;
        } else if (s.n == 0) {
            const bool dup = std::any_of(excited.begin(), excited.end(),
                                         [&](const DressedState& e) { return e.branch == s.branch; });
            if (!dup) excited.push_back(s);
        } else {
            throw InvalidParams("orientation_max_oracle: subspace must lie within {|0;0>, |+;0>, |-;0>}");
        }
    }
    std::sort(excited.begin(), excited.end(),
              [](const DressedState& x, const DressedState& y) { return x.sign() > y.sign(); });

    OracleResult result;
    result.phase_relation_residual = std::numeric_limits<double>::quiet_NaN();
    if (!has_ground) {
        // Without the ground state no coherence carries cos(theta); the maximum is 0.
        result.states = excited;
        result.populations.assign(excited.size(), 1.0 / static_cast<double>(std::max<std::size_t>(1, excited.size())));
        for (double pop : result.populations) result.coefficients.emplace_back(std::sqrt(pop), 0.0);
        return result;
    }

    Problem prob;
    prob.excited = excited.size();
    std::vector<std::size_t> idx{basis.index(Branch::ground)};
    for (std::size_t l = 0; l < excited.size(); ++l) {
        idx.push_back(basis.index(excited[l].branch, 0));
        prob.omega[l] = basis.energy(idx.back());
    }
    prob.k.resize(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            prob.k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cos_d.m(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
        }
    }
    // The grid search below separates the two coherences, which needs the diagonal
    // and the |+;0><-;0| element of cos(theta) to vanish (parity, photon number).
    for (Eigen::Index i = 0; i < prob.k.rows(); ++i) {
        for (Eigen::Index j = 0; j < prob.k.cols(); ++j) {
            if ((i == j || (i > 0 && j > 0)) && std::abs(prob.k(i, j)) > 1e-12) {
                throw InvalidParams("orientation_max_oracle: unexpected cos(theta) structure in subspace");
            }
        }
    }

    result.states.push_back({Branch::ground, 0});
    result.states.insert(result.states.end(), excited.begin(), excited.end());

    // Period over which the time grid runs.
    double period = 1.0;
    if (prob.excited == 2) {
        period = two_pi / (0.5 * std::abs(prob.omega[0] - prob.omega[1]));
    } else if (prob.excited == 1) {
        period = two_pi / prob.omega[0];
    }

    Point best;
    double best_value = -std::numeric_limits<double>::infinity();
    if (prob.excited == 0) {
        best_value = prob.value(best);
    } else {
        // For every time sample the best phase of each coherence on the phase grid.
        const int nt = grid.time_points;
        const int nphi = grid.phase_points;
        std::vector<std::array<double, 2>> x_best(static_cast<std::size_t>(nt));
        std::vector<std::array<double, 2>> phi_best(static_cast<std::size_t>(nt));
        for (int it = 0; it < nt; ++it) {
            const double t = period * it / nt;
            for (std::size_t l = 0; l < prob.excited; ++l) {
                const cplx k0l = prob.k(0, static_cast<Eigen::Index>(l + 1));
                double xb = -std::numeric_limits<double>::infinity();
                double pb = 0.0;
                for (int ip = 0; ip < nphi; ++ip) {
                    const double phi = -std::numbers::pi + two_pi * (ip + 1) / nphi;
                    const double x = 2.0 * (k0l * std::polar(1.0, phi - prob.omega[l] * t)).real();
                    if (x > xb) {
                        xb = x;
                        pb = phi;
                    }
                }
                x_best[static_cast<std::size_t>(it)][l] = xb;
                phi_best[static_cast<std::size_t>(it)][l] = pb;
            }
        }

        const int m = grid.amplitude_points - 1;
        for (int i0 = 0; i0 <= m; ++i0) {
            const double c0 = std::sqrt(static_cast<double>(i0) / m);
            const int jmax = (prob.excited == 2) ? m - i0 : 0;
            for (int j = 0; j <= jmax; ++j) {
                double cp = 0.0;
                double cm = 0.0;
                if (prob.excited == 2) {
                    cp = std::sqrt(static_cast<double>(j) / m);
                    cm = std::sqrt(std::max(0.0, static_cast<double>(m - i0 - j) / m));
                } else {
                    cp = std::sqrt(static_cast<double>(m - i0) / m);
                }
                for (int it = 0; it < nt; ++it) {
                    const auto& xb = x_best[static_cast<std::size_t>(it)];
                    const double v = c0 * (cp * xb[0] + (prob.excited == 2 ? cm * xb[1] : 0.0));
                    if (v > best_value) {
                        best_value = v;
                        best.a = std::acos(std::min(1.0, c0));
                        best.b = std::atan2(cm, cp);
                        best.phi = phi_best[static_cast<std::size_t>(it)];
                        best.t = period * it / nt;
                    }
                }
            }
        }
    }
    result.grid_max = best_value;

    // Cyclic one-dimensional Brent refinement of every free coordinate.
    if (prob.excited > 0) {
        const int dims = prob.excited == 2 ? 5 : 3;
        const std::array<int, 5> order2{0, 1, 2, 3, 4};
        const std::array<int, 3> order1{0, 2, 4};
        const double da = std::numbers::pi / grid.amplitude_points;
        const double dphi = two_pi / grid.phase_points;
        const double dtime = period / grid.time_points;
        double current = prob.value(best);
        for (int sweep = 0; sweep < 200; ++sweep) {
            const double before = current;
            for (int d = 0; d < dims; ++d) {
                const int coord = prob.excited == 2 ? order2[static_cast<std::size_t>(d)] : order1[static_cast<std::size_t>(d)];
                const double span = coord <= 1 ? da : (coord <= 3 ? dphi : dtime);
                const double centre = coordinate(best, coord);
                auto f = [&](double x) {
                    Point q = best;
                    coordinate(q, coord) = x;
                    return -prob.value(q);
                };
                const auto r = boost::math::tools::brent_find_minima(f, centre - 2.0 * span, centre + 2.0 * span, 52);
                if (-r.second > current) {
                    coordinate(best, coord) = r.first;
                    current = -r.second;
                }
            }
            if (current - before < 1e-15) break;
        }
        best_value = current;
    }
    result.max = best_value;
    result.time = best.t;
    result.coefficients = prob.coefficients(best);
    for (const auto& c : result.coefficients) result.populations.push_back(std::norm(c));

    if (prob.excited == 2) {
        const double g = 0.5 * std::abs(prob.omega[0] - prob.omega[1]);
        std::array<double, 2> aligned{};
        for (std::size_t l = 0; l < 2; ++l) {
            const cplx k0l = prob.k(0, static_cast<Eigen::Index>(l + 1));
            aligned[l] = std::arg(result.coefficients[l + 1] * k0l / std::abs(k0l));
        }
        const double raw = prob.omega[1] * aligned[0] - prob.omega[0] * aligned[1] - 2.0 * g * std::numbers::pi;
        const double modulus = 2.0 * g * std::numbers::pi;
        double r = std::fmod(raw, modulus);
        if (r > 0.5 * modulus) r -= modulus;
        if (r <= -0.5 * modulus) r += modulus;
        result.phase_relation_residual = r / p.omega01();
    }
    return result;
}

}  // namespace polariton
