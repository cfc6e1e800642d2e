// model.hpp: system parameters, bases, operators and the two Hamiltonian
// representations of a two-level-resolved rigid rotor coupled to one cavity mode.
//
// Product basis states are |J, M=0> (x) |n>, ordered lexicographically in (n, J):
//     index(J, n) = n * (J_max + 1) + J.
// Dressed basis states are |0;0>, |+;0>, |-;0>, |+;1>, |-;1>, ... , |-;n_max-1>
// with |+-;n> = (|0,0>|n+1> +- |1,0>|n>) / sqrt(2).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace polariton {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class BasisKind { rotor, product, dressed };

std::string to_string(BasisKind kind);

// All values in atomic units (hbar = 1).
struct SystemParams {
    double B{};        // rotational constant
    double mu{};       // permanent dipole moment
    double omega_c{};  // cavity angular frequency
    double g{};        // molecule-cavity coupling strength
    int J_max{8};
    int n_max{4};

    double omega01() const noexcept { return 2.0 * B; }
    // <00| mu cos(theta) |10> = mu / sqrt(3)
    double mu01() const noexcept;
    // Field-per-photon prefactor sqrt(omega_c / 2 eps0 V), recovered as g / mu01.
    double cavity_field() const noexcept { return g / mu01(); }
    // Free bare-rotor revival period pi / B.
    double revival_period() const noexcept;
    bool resonant(double rel_tol = 1e-9) const noexcept;

    // Throws InvalidParams on a violated invariant.
    void validate() const;

    // Carbonyl sulfide: B = 0.20286 cm^-1, mu = 0.715 D, cavity resonant with J=0 -> 1.
    static SystemParams ocs(double g_over_omega01 = 0.1, int J_max = 8, int n_max = 4);
};

struct ProductState {
    int J{};
    int n{};
};

class ProductBasis {
public:
    ProductBasis(int J_max, int n_max);

    std::size_t size() const noexcept { return states_.size(); }
    const ProductState& state(std::size_t i) const { return states_.at(i); }
    std::size_t index(int J, int n) const;
    bool contains(int J, int n) const noexcept;
    int J_max() const noexcept { return J_max_; }
    int n_max() const noexcept { return n_max_; }

private:
    int J_max_;
    int n_max_;
    std::vector<ProductState> states_;
};

enum class Branch { ground, plus, minus };

struct DressedState {
    Branch branch{Branch::ground};
    int n{0};

    int sign() const noexcept { return branch == Branch::plus ? 1 : (branch == Branch::minus ? -1 : 0); }
    std::string label() const;
};

// Sign convention of the molecule-cavity term in the product-basis Hamiltonian.
//   dipole_gauge:     -lambda (mu cos) (a + a^dag), counter-rotating terms kept.
//   jaynes_cummings:  +g (|00><10| a^dag + a |10><00|), rotating-wave form.
// The two differ in the sign of g, which is absorbed by the photon parity (-1)^n.
enum class CavityCoupling { dipole_gauge, jaynes_cummings };

class DressedBasis {
public:
    DressedBasis(const SystemParams& params);

    std::size_t size() const noexcept { return states_.size(); }
    int n_max() const noexcept { return n_max_; }
    const DressedState& state(std::size_t i) const { return states_.at(i); }
    std::size_t index(Branch branch, int n = 0) const;
    double energy(std::size_t i) const { return energies_(static_cast<Eigen::Index>(i)); }
    double energy(Branch branch, int n = 0) const { return energy(index(branch, n)); }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }
    const ProductBasis& product() const noexcept { return product_; }

    // Columns are the dressed states expressed in the product basis. U^dag U = 1.
    // For the dipole-gauge product Hamiltonian the photon parity is folded in.
    Matrix transform(CavityCoupling coupling = CavityCoupling::jaynes_cummings) const;

    // Dressed amplitudes of a product-basis state vector.
    Vector from_product(const Vector& psi, CavityCoupling coupling) const;
    Vector to_product(const Vector& c, CavityCoupling coupling) const;

private:
    int n_max_;
    ProductBasis product_;
    std::vector<DressedState> states_;
    Eigen::VectorXd energies_;
    Matrix transform_;
};

struct OperatorMatrix {
    Matrix m;
    BasisKind basis{BasisKind::product};
    std::string label;

    Eigen::Index dim() const noexcept { return m.rows(); }
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }
};

// cos(theta) in the |J, M=0> rotor basis, J = 0..J_max. Only |dJ| = 1 is nonzero.
OperatorMatrix cos_theta_elements(int J_max);

// cos(theta) (x) 1 on the product basis.
OperatorMatrix product_cos_theta(const ProductBasis& basis);

// a^dag a and (a + a^dag) on the product basis.
OperatorMatrix photon_number(const ProductBasis& basis);
OperatorMatrix photon_position(const ProductBasis& basis);
// (-1)^n on the product basis.
OperatorMatrix photon_parity(const ProductBasis& basis);

// H(t) = H0 - E(t) V.
struct Hamiltonian {
    OperatorMatrix H0;
    OperatorMatrix V;
};

Hamiltonian build_full_hamiltonian(const SystemParams& params,
                                   CavityCoupling coupling = CavityCoupling::dipole_gauge);

DressedBasis build_dressed_basis(const SystemParams& params);

// Driven Hamiltonian written in the dressed states: diagonal H0 and the dipole
// couplings between neighbouring manifolds. Requires n_max >= 1.
Hamiltonian build_dressed_hamiltonian(const SystemParams& params);

// cos(theta) (x) 1 conjugated into the dressed basis.
OperatorMatrix dressed_cos_theta(const DressedBasis& basis);

}  // namespace polariton
