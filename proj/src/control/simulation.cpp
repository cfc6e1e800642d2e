#include "polariton/control.hpp"
#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polariton {

std::string to_string(ModelBasis basis) {
    switch (basis) {
        case ModelBasis::dressed: return "dressed";
        case ModelBasis::full: return "full";
        case ModelBasis::jc_product: return "jc_product";
        case ModelBasis::bare: return "bare";
    }
    return "unknown";
}

ModelBasis parse_model_basis(const std::string& name) {
    if (name == "dressed") return ModelBasis::dressed;
    if (name == "full") return ModelBasis::full;
    if (name == "jc_product") return ModelBasis::jc_product;
    if (name == "bare") return ModelBasis::bare;
    throw InvalidParams("unknown model basis '" + name + "'");
}

SystemParams effective_params(const SystemParams& params, ModelBasis basis) {
    SystemParams p = params;
    if (basis == ModelBasis::bare) {
        p.g = 0.0;
        p.n_max = 0;
    }
    return p;
}

double max_abs(const TimeSeries& series) {
    double m = 0.0;
    for (double v : series.values) m = std::max(m, std::abs(v));
    return m;
}

SimulationResult simulate(const SimulationSetup& setup) {
    const SystemParams p = effective_params(setup.params, setup.basis);
    p.validate();

    Hamiltonian H;
    OperatorMatrix cos_m;
    if (setup.basis == ModelBasis::dressed) {
        H = build_dressed_hamiltonian(p);
        cos_m = dressed_cos_theta(DressedBasis(p));
    } else {
        const auto coupling =
            setup.basis == ModelBasis::jc_product ? CavityCoupling::jaynes_cummings : CavityCoupling::dipole_gauge;
        H = build_full_hamiltonian(p, coupling);
        cos_m = product_cos_theta(ProductBasis(p.J_max, p.n_max));
    }

    const auto psi0 = basis_state(static_cast<std::size_t>(H.H0.dim()), 0, H.H0.basis, setup.field.t_start);
    const TimeGrid grid{setup.field.t_start, setup.field.t_end, std::max<std::size_t>(2, setup.trajectory_samples)};
    Trajectory trajectory = propagate(H, setup.field, psi0, grid, setup.settings);
    StateVector final_state = trajectory.final_state();

    const FreeEvolution evolution(H.H0);
    const double horizon = setup.horizon > 0.0 ? setup.horizon : 40.0 * p.revival_period();
    const double dt = setup.sample_dt > 0.0 ? setup.sample_dt : p.revival_period() / 100.0;
    TimeSeries trace = orientation_trace(final_state, evolution, cos_m, horizon, dt);

    std::optional<StateVector> dressed;
    if (setup.basis == ModelBasis::dressed) {
        dressed = evolution.to_interaction(final_state);
    } else if (setup.basis != ModelBasis::bare) {
        const DressedBasis db(p);
        const auto coupling =
            setup.basis == ModelBasis::jc_product ? CavityCoupling::jaynes_cummings : CavityCoupling::dipole_gauge;
        Vector c = db.from_product(final_state.amplitudes, coupling);
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            c(i) *= std::polar(1.0, db.energy(static_cast<std::size_t>(i)) * final_state.time);
        }
        dressed = StateVector{c, BasisKind::dressed, Picture::interaction, final_state.time};
    }

    return {std::move(H), std::move(cos_m), std::move(trajectory), std::move(final_state), std::move(dressed),
            std::move(trace)};
}

double truncation_sensitivity(const SimulationSetup& setup) {
    SimulationSetup larger = setup;
    larger.params.J_max += 2;
    if (setup.basis != ModelBasis::bare) larger.params.n_max += 2;
    const auto a = simulate(setup).trace;
    const auto b = simulate(larger).trace;
    double diff = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    return diff;
}

}  // namespace polariton
