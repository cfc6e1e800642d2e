#include "polariton/observables.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace polariton {

double TimeSeries::step() const {
    if (times.size() < 2) throw InvalidParams("TimeSeries: need at least two samples");
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

double orientation(const StateVector& psi, const OperatorMatrix& cos_matrix) {
    if (psi.basis != cos_matrix.basis || psi.dim() != cos_matrix.dim()) {
        throw BasisMismatch("orientation: state is in " + to_string(psi.basis) + " basis (dim " +
                            std::to_string(psi.dim()) + "), operator in " + to_string(cos_matrix.basis) +
                            " (dim " + std::to_string(cos_matrix.dim()) + ")");
    }
    if (psi.picture != Picture::schrodinger) {
        throw BasisMismatch("orientation: state must be in the Schrodinger picture");
    }
    return psi.amplitudes.dot(cos_matrix.m * psi.amplitudes).real();
}

TimeSeries orientation_trace(const StateVector& psi, const FreeEvolution& evolution, const OperatorMatrix& cos_matrix,
                             double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon >= 0.0)) throw InvalidParams("orientation_trace: invalid horizon or step");
    if (psi.basis != cos_matrix.basis || psi.dim() != cos_matrix.dim()) {
        throw BasisMismatch("orientation_trace: state and operator bases differ");
    }
    const StateVector schr = evolution.to_schrodinger(psi);
    const Matrix& w = evolution.eigenvectors();
    const Vector a = w.adjoint() * schr.amplitudes;
    const Matrix k = w.adjoint() * cos_matrix.m * w;
    const Eigen::VectorXd& e = evolution.energies();

    const auto n = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9)) + 1;
    TimeSeries out;
    out.times.resize(n);
    out.values.resize(n);
    Vector b(a.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = dt * static_cast<double>(i);
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            b(j) = a(j) * std::polar(1.0, -e(j) * tau);
        }
        out.times[i] = psi.time + tau;
        out.values[i] = b.dot(k * b).real();
    }
    return out;
}

TimeSeries orientation_trace(const Trajectory& trajectory, const OperatorMatrix& cos_matrix) {
    TimeSeries out;
    out.times = trajectory.times;
    out.values.reserve(trajectory.states.size());
    for (const auto& s : trajectory.states) {
        out.values.push_back(orientation(s, cos_matrix));
    }
    return out;
}

Spectrum spectrum(const TimeSeries& series, double min_window, const SpectrumOptions& options) {
    const double length = series.length();
    if (length + 1e-9 * length < min_window) {
        throw WindowTooShort("spectrum: window " + std::to_string(length) + " shorter than required " +
                             std::to_string(min_window));
    }
    if (options.oversample < 1) throw InvalidParams("spectrum: oversample must be >= 1");
    const double dt = series.step();
    const std::size_t n = series.size();

    std::vector<double> weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        if (options.window == SpectrumWindow::hann) {
            w *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n - 1)));
        }
        weighted[j] = w * series.values[j] * dt;
    }

    Spectrum s;
    s.window_start = series.times.front();
    s.window_length = length;
    s.resolution = 2.0 * std::numbers::pi / length;
    s.window = options.window;
    const double omega_max = options.omega_max > 0.0 ? options.omega_max : std::numbers::pi / dt;
    const double d_omega = s.resolution / options.oversample;
    const auto bins = static_cast<std::size_t>(std::floor(omega_max / d_omega + 1e-9)) + 1;
    s.omegas.resize(bins);
    s.magnitudes.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double omega = d_omega * static_cast<double>(k);
        const cplx step = std::polar(1.0, omega * dt);
        cplx phase(1.0, 0.0);
        cplx sum(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j % 256 == 0) phase = std::polar(1.0, omega * dt * static_cast<double>(j));
            sum += weighted[j] * phase;
            phase *= step;
        }
        s.omegas[k] = omega;
        s.magnitudes[k] = std::abs(sum);
    }
    return s;
}

std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold) {
    std::vector<Peak> peaks;
    if (s.magnitudes.size() < 3) return peaks;
    const double top = *std::max_element(s.magnitudes.begin(), s.magnitudes.end());
    for (std::size_t i = 1; i + 1 < s.magnitudes.size(); ++i) {
        const double m = s.magnitudes[i];
        if (m > s.magnitudes[i - 1] && m >= s.magnitudes[i + 1] && m >= rel_threshold * top) {
            peaks.push_back({s.omegas[i], m, i});
        }
    }
    return peaks;
}

std::vector<PopulationPhase> dressed_populations_phases(const StateVector& psi) {
    if (psi.basis != BasisKind::dressed || psi.dim() % 2 == 0) {
        throw BasisMismatch("dressed_populations_phases: expected a dressed-basis state");
    }
    if (psi.picture != Picture::interaction) {
        throw BasisMismatch("dressed_populations_phases: expected interaction-picture coefficients");
    }
    std::vector<PopulationPhase> out;
    out.reserve(static_cast<std::size_t>(psi.dim()));
    for (Eigen::Index i = 0; i < psi.dim(); ++i) {
        DressedState s;
        if (i > 0) {
            s = {(i % 2 == 1) ? Branch::plus : Branch::minus, static_cast<int>((i - 1) / 2)};
        }
        const cplx c = psi.amplitudes(i);
        out.push_back({s.label(), std::norm(c), std::arg(c)});
    }
    return out;
}

namespace {

double lag_correlation(const std::vector<double>& x, std::size_t lag) {
    const std::size_t m = x.size() - lag;
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        ma += x[i];
        mb += x[i + lag];
    }
    ma /= static_cast<double>(m);
    mb /= static_cast<double>(m);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = x[i] - ma;
        const double b = x[i + lag] - mb;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
    }
    const double denom = std::sqrt(saa * sbb);
    if (!(denom > 1e-300)) return 0.0;
    return sab / denom;
}

}  // namespace

double revival_period(const TimeSeries& series, double threshold) {
    const std::size_t n = series.size();
    if (n < 8) throw NoRevivalFound("revival_period: series too short");
    const double dt = series.step();
    const std::size_t max_lag = n / 2;
    const auto& x = series.values;

    std::size_t lag = 1;
    while (lag <= max_lag && lag_correlation(x, lag) >= threshold) ++lag;
    while (lag <= max_lag && lag_correlation(x, lag) < threshold) ++lag;
    if (lag > max_lag) {
        throw NoRevivalFound("revival_period: autocorrelation never exceeds " + std::to_string(threshold));
    }
    double current = lag_correlation(x, lag);
    while (lag + 1 <= max_lag) {
        const double next = lag_correlation(x, lag + 1);
        if (next <= current) break;
        current = next;
        ++lag;
    }
    double offset = 0.0;
    if (lag + 1 <= max_lag) {
        const double ym = lag_correlation(x, lag - 1);
        const double yp = lag_correlation(x, lag + 1);
        const double curvature = ym - 2.0 * current + yp;
        if (curvature < 0.0) offset = 0.5 * (ym - yp) / curvature;
    }
    return (static_cast<double>(lag) + offset) * dt;
}

}  // namespace polariton
