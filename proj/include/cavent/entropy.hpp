// Entanglement entropy of one layer: exact von Neumann entropy, its
// short-time expansions, growth rate, layer asymmetry and mutual information.
// All logarithms are natural (nats).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "cavent/density_matrix.hpp"

namespace cavent {

inline constexpr double kEigenClamp = 1e-10;

namespace detail {

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

/// Clamps eigenvalues within `window` of [0, 1]; throws outside.
inline double clamp_probability(double p, double window) {
    if (p < -window || p > 1.0 + window)
        throw InvalidStateError("eigenvalue " + std::to_string(p) + " outside [0, 1]");
    return std::clamp(p, 0.0, 1.0);
}

} // namespace detail

/// -Tr(rho ln rho) from the eigenvalues of rho, with 0 ln 0 = 0.
/// Eigenvalues within `clamp_window` outside [0, 1] are clamped.
inline double entropy_exact(const DensityMatrix& rho, double clamp_window = kEigenClamp) {
    const Eigen::VectorXd ev = rho.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        s -= detail::xlogx(detail::clamp_probability(ev(i), clamp_window));
    return s;
}

/// Eigenvalues p+- = (1 +- sqrt((1 - 2x)^2 + 4 t^4 B^2)) / 2 of
/// [[1 - t^2 L, t^2 B], [t^2 B, t^2 L]], largest first.
inline std::pair<double, double> reduced_eigenvalues(double t, double l, double b) {
    const double x = t * t * l;
    const double y = t * t * b;
    const double root = std::sqrt((1.0 - 2.0 * x) * (1.0 - 2.0 * x) + 4.0 * y * y);
    // p- by the product form avoids cancellation when x is tiny:
    // p+ p- = det = x(1 - x) - y^2.
    const double p_plus = 0.5 * (1.0 + root);
    const double p_minus = (x * (1.0 - x) - y * y) / p_plus;
    return {p_plus, p_minus};
}

struct EntropyExpansion {
    double leading;
    double with_coherence;
};

/// leading        = x (1 - ln x),              x = t^2 L
/// with_coherence = leading + t^4 (L^2/2 + B^2 ln x)
inline EntropyExpansion entropy_expansion(double t, double l, double b) {
    if (t == 0.0)
        return {0.0, 0.0};
    if (!(t > 0.0))
        throw DomainError("entropy_expansion: t must be >= 0");
    const double x = t * t * l;
    if (x == 0.0)
        return {0.0, 0.0};
    if (!(x > 0.0 && x < 1.0))
        throw DomainError("entropy_expansion: t^2 L must lie in (0, 1)");
    const double lead = x * (1.0 - std::log(x));
    const double t4 = t * t * t * t;
    return {lead, lead + t4 * (0.5 * l * l + b * b * std::log(x))};
}

namespace detail {
inline double checked_rate_argument(double t, double l) {
    if (!(t > 0.0))
        throw DomainError("entropy_rate: t must be > 0 (log divergence at t = 0)");
    const double x = t * t * l;
    if (!(x > 0.0 && x < 1.0))
        throw DomainError("entropy_rate: t^2 L must lie in (0, 1)");
    return x;
}
} // namespace detail

/// Growth rate in its published form, 2 t L (1 - ln(t^2 L)).
inline double entropy_rate(double t, double l) {
    const double x = detail::checked_rate_argument(t, l);
    return 2.0 * t * l * (1.0 - std::log(x));
}

/// d/dt of the leading expansion x (1 - ln x): -2 t L ln(t^2 L).
/// Differs from entropy_rate() by exactly 2 t L.
inline double entropy_rate_of_leading_term(double t, double l) {
    const double x = detail::checked_rate_argument(t, l);
    return -2.0 * t * l * std::log(x);
}

struct EntropyAsymmetry {
    double leading; // 2 t^2 (e gamma/hbar)^2 [v1^2 D11 - v2^2 D22]
    double exact;   // S1 - S2 from the exact reduced matrices
};

inline EntropyAsymmetry entropy_asymmetry(const LayerConfig& layer1, const LayerConfig& layer2,
                                          const CavityGeometry& cavity, double t,
                                          const PropagatorMomenta& q = {}, const Coupling& coupling = {},
                                          RhoOptions options = {}) {
    const RhoCoefficients c = compute_coefficients(layer1, layer2, cavity, q, coupling);
    const DensityMatrix rho = rho_total(c, t, options);
    const double z11 = coupling_prefactor(layer1.material.fermi_velocity, layer1.material.fermi_velocity, cavity, coupling);
    const double z22 = coupling_prefactor(layer2.material.fermi_velocity, layer2.material.fermi_velocity, cavity, coupling);
    const double leading = 2.0 * t * t * (z11 * c.delta.delta11 - z22 * c.delta.delta22);
    return {leading, entropy_exact(reduce(rho, 1)) - entropy_exact(reduce(rho, 2))};
}

/// Leading-order mutual information S1 + S2.
inline double mutual_information(double s1, double s2) {
    if (!(s1 >= 0.0) || !(s2 >= 0.0))
        throw DomainError("mutual_information: entropies must be >= 0");
    return s1 + s2;
}

struct EntropyReport {
    double exact = 0.0;
    double expansion_leading = 0.0;
    double expansion_with_coherence = 0.0;
    double rate = 0.0; // published form; 0 at t = 0 where it is undefined
    std::array<double, 2> eigenvalues{1.0, 0.0};
};

/// Entropy of layer `layer` (1 or 2) at time t.
inline EntropyReport entropy_report(const RhoCoefficients& c, double t, int layer, RhoOptions options = {}) {
    const DensityMatrix rho = rho_total(c, t, options);
    const DensityMatrix reduced = reduce(rho, layer);
    const double l = layer == 1 ? c.l1 : c.l2;
    const double b = options.diagonal_approximation ? 0.0 : (layer == 1 ? c.b1 : c.b2);

    EntropyReport r;
    r.exact = entropy_exact(reduced);
    const auto ev = reduced.eigenvalues();
    r.eigenvalues = {std::clamp(ev(1), 0.0, 1.0), std::clamp(ev(0), 0.0, 1.0)};
    const double x = t * t * l;
    if (t > 0.0 && x > 0.0 && x < 1.0) {
        const auto e = entropy_expansion(t, l, b);
        r.expansion_leading = e.leading;
        r.expansion_with_coherence = e.with_coherence;
        r.rate = entropy_rate(t, l);
    }
    return r;
}

} // namespace cavent
