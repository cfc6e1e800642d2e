#include "polariton/model.hpp"

#include "polariton/errors.hpp"
#include "polariton/units.hpp"

#include <cmath>
#include <numbers>

namespace polariton {

std::string to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::rotor: return "rotor";
        case BasisKind::product: return "product";
        case BasisKind::dressed: return "dressed";
    }
    return "unknown";
}

double SystemParams::mu01() const noexcept { return mu / std::numbers::sqrt3; }

double SystemParams::revival_period() const noexcept { return std::numbers::pi / B; }

bool SystemParams::resonant(double rel_tol) const noexcept {
    return std::abs(omega_c - omega01()) <= rel_tol * omega01();
}

void SystemParams::validate() const {
    if (!(B > 0.0)) throw InvalidParams("B must be positive");
    if (!(mu > 0.0)) throw InvalidParams("mu must be positive");
    if (!(omega_c > 0.0)) throw InvalidParams("omega_c must be positive");
    if (!(g >= 0.0)) throw InvalidParams("g must be non-negative");
    if (J_max < 1) throw InvalidParams("J_max must be >= 1");
    if (n_max < 0) throw InvalidParams("n_max must be >= 0");
}

SystemParams SystemParams::ocs(double g_over_omega01, int J_max, int n_max) {
    SystemParams p;
    p.B = units::convert(0.20286, units::Unit::inverse_cm, units::Unit::internal);
    p.mu = units::convert(0.715, units::Unit::debye, units::Unit::internal);
    p.omega_c = p.omega01();
    p.g = g_over_omega01 * p.omega01();
    p.J_max = J_max;
    p.n_max = n_max;
    return p;
}

// ---------------------------------------------------------------------------

ProductBasis::ProductBasis(int J_max, int n_max) : J_max_(J_max), n_max_(n_max) {
    if (J_max < 0 || n_max < 0) {
        throw InvalidParams("ProductBasis: negative truncation");
    }
    states_.reserve(static_cast<std::size_t>((J_max + 1) * (n_max + 1)));
    for (int n = 0; n <= n_max; ++n) {
        for (int J = 0; J <= J_max; ++J) {
            states_.push_back({J, n});
        }
    }
}

bool ProductBasis::contains(int J, int n) const noexcept {
    return J >= 0 && J <= J_max_ && n >= 0 && n <= n_max_;
}

std::size_t ProductBasis::index(int J, int n) const {
    if (!contains(J, n)) {
        throw std::out_of_range("ProductBasis: state (" + std::to_string(J) + ", " +
                                std::to_string(n) + ") outside truncation");
    }
    return static_cast<std::size_t>(n * (J_max_ + 1) + J);
}

// ---------------------------------------------------------------------------

std::string DressedState::label() const {
    switch (branch) {
        case Branch::ground: return "0;0";
        case Branch::plus: return "+;" + std::to_string(n);
        case Branch::minus: return "-;" + std::to_string(n);
    }
    return "?";
}

DressedBasis::DressedBasis(const SystemParams& params)
    : n_max_(params.n_max), product_(params.J_max, params.n_max) {
    params.validate();
    if (!params.resonant()) {
        throw NonResonantCavity("dressed states require omega_c = 2B");
    }
    const auto dim = static_cast<std::size_t>(1 + 2 * n_max_);
    states_.reserve(dim);
    states_.push_back({Branch::ground, 0});
    for (int n = 0; n < n_max_; ++n) {
        states_.push_back({Branch::plus, n});
        states_.push_back({Branch::minus, n});
    }

    energies_.resize(static_cast<Eigen::Index>(dim));
    transform_ = Matrix::Zero(static_cast<Eigen::Index>(product_.size()), static_cast<Eigen::Index>(dim));
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (std::size_t i = 0; i < dim; ++i) {
        const auto& s = states_[i];
        const auto col = static_cast<Eigen::Index>(i);
        if (s.branch == Branch::ground) {
            energies_(col) = 0.0;
            transform_(static_cast<Eigen::Index>(product_.index(0, 0)), col) = 1.0;
            continue;
        }
        const double root = std::sqrt(static_cast<double>(s.n + 1));
        energies_(col) = params.omega_c * (s.n + 1) + s.sign() * params.g * root;
        transform_(static_cast<Eigen::Index>(product_.index(0, s.n + 1)), col) = inv_sqrt2;
        transform_(static_cast<Eigen::Index>(product_.index(1, s.n)), col) = s.sign() * inv_sqrt2;
    }
}

std::size_t DressedBasis::index(Branch branch, int n) const {
    if (branch == Branch::ground) {
        if (n != 0) throw std::out_of_range("DressedBasis: ground state has n = 0");
        return 0;
    }
    if (n < 0 || n >= n_max_) {
        throw std::out_of_range("DressedBasis: doublet " + std::to_string(n) + " outside truncation");
    }
    return static_cast<std::size_t>(1 + 2 * n + (branch == Branch::plus ? 0 : 1));
}

Matrix DressedBasis::transform(CavityCoupling coupling) const {
    if (coupling == CavityCoupling::jaynes_cummings) {
        return transform_;
    }
    return photon_parity(product_).m * transform_;
}

Vector DressedBasis::from_product(const Vector& psi, CavityCoupling coupling) const {
    if (psi.size() != static_cast<Eigen::Index>(product_.size())) {
        throw BasisMismatch("from_product: state dimension does not match product basis");
    }
    return transform(coupling).adjoint() * psi;
}

Vector DressedBasis::to_product(const Vector& c, CavityCoupling coupling) const {
    if (c.size() != static_cast<Eigen::Index>(size())) {
        throw BasisMismatch("to_product: state dimension does not match dressed basis");
    }
    return transform(coupling) * c;
}

// ---------------------------------------------------------------------------

double OperatorMatrix::hermiticity_error() const {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix cos_theta_elements(int J_max) {
    if (J_max < 1) throw InvalidParams("cos_theta_elements: J_max must be >= 1");
    const Eigen::Index dim = J_max + 1;
    Matrix c = Matrix::Zero(dim, dim);
    for (int J = 0; J < J_max; ++J) {
        const double v = (J + 1) / std::sqrt(static_cast<double>((2 * J + 1) * (2 * J + 3)));
        c(J, J + 1) = v;
        c(J + 1, J) = v;
    }
    return {c, BasisKind::rotor, "cos_theta"};
}

OperatorMatrix product_cos_theta(const ProductBasis& basis) {
    const auto rot = cos_theta_elements(std::max(basis.J_max(), 1)).m;
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix c = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto& a = basis.state(i);
            const auto& b = basis.state(j);
            if (a.n == b.n) {
                c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rot(a.J, b.J);
            }
        }
    }
    return {c, BasisKind::product, "cos_theta x 1"};
}

OperatorMatrix photon_number(const ProductBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = basis.state(i).n;
    }
    return {m, BasisKind::product, "a^dag a"};
}

OperatorMatrix photon_position(const ProductBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& s = basis.state(i);
        if (basis.contains(s.J, s.n + 1)) {
            const auto j = static_cast<Eigen::Index>(basis.index(s.J, s.n + 1));
            const double v = std::sqrt(static_cast<double>(s.n + 1));
            m(static_cast<Eigen::Index>(i), j) = v;
            m(j, static_cast<Eigen::Index>(i)) = v;
        }
    }
    return {m, BasisKind::product, "a + a^dag"};
}

OperatorMatrix photon_parity(const ProductBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (basis.state(i).n % 2 == 0) ? 1.0 : -1.0;
    }
    return {m, BasisKind::product, "(-1)^n"};
}

Hamiltonian build_full_hamiltonian(const SystemParams& params, CavityCoupling coupling) {
    params.validate();
    const ProductBasis basis(params.J_max, params.n_max);
    const auto dim = static_cast<Eigen::Index>(basis.size());

    const Matrix mu_cos = params.mu * product_cos_theta(basis).m;
    Matrix h0 = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& s = basis.state(i);
        h0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            params.B * s.J * (s.J + 1) + params.omega_c * s.n;
    }

    if (coupling == CavityCoupling::dipole_gauge) {
        h0 -= params.cavity_field() * (mu_cos * photon_position(basis).m);
    } else {
        // g (|00><10| a^dag + a |10><00|)
        for (int n = 0; n < params.n_max; ++n) {
            const auto lo = static_cast<Eigen::Index>(basis.index(1, n));
            const auto hi = static_cast<Eigen::Index>(basis.index(0, n + 1));
            const double v = params.g * std::sqrt(static_cast<double>(n + 1));
            h0(hi, lo) += v;
            h0(lo, hi) += v;
        }
    }

    return {{h0, BasisKind::product, "H0"}, {mu_cos, BasisKind::product, "mu cos_theta x 1"}};
}

DressedBasis build_dressed_basis(const SystemParams& params) { return DressedBasis(params); }

Hamiltonian build_dressed_hamiltonian(const SystemParams& params) {
    const DressedBasis basis(params);
    if (params.n_max < 1) {
        throw InvalidParams("dressed Hamiltonian needs n_max >= 1");
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix h0 = basis.energies().cast<cplx>().asDiagonal();

    // mu~_0 = +-mu01/sqrt(2) between |0;0> and |+-;0>; mu~ = +-mu01/2 between
    // |l';n-1> and |l;n>. The sign is that of the upper state l.
    const double mu01 = params.mu01();
    Matrix v = Matrix::Zero(dim, dim);
    for (std::size_t i = 1; i < basis.size(); ++i) {
        const auto& upper = basis.state(i);
        const auto r = static_cast<Eigen::Index>(i);
        if (upper.n == 0) {
            v(r, 0) = upper.sign() * mu01 / std::numbers::sqrt2;
            v(0, r) = v(r, 0);
            continue;
        }
        for (Branch lower : {Branch::plus, Branch::minus}) {
            const auto c = static_cast<Eigen::Index>(basis.index(lower, upper.n - 1));
            v(r, c) = upper.sign() * mu01 / 2.0;
            v(c, r) = v(r, c);
        }
    }
    return {{h0, BasisKind::dressed, "H0 dressed"}, {v, BasisKind::dressed, "V dressed"}};
}

OperatorMatrix dressed_cos_theta(const DressedBasis& basis) {
    const Matrix u = basis.transform();
    const Matrix c = u.adjoint() * product_cos_theta(basis.product()).m * u;
    return {c, BasisKind::dressed, "cos_theta dressed"};
}

}  // namespace polariton
