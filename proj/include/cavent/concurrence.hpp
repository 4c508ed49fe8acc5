// Two-qubit concurrence of the band degrees of freedom: the Wootters
// eigenvalue construction, the closed forms built from the coherences
// N and M, and the spin-orbit saturation threshold.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "cavent/density_matrix.hpp"

namespace cavent {

/// sigma_x (x) sigma_x in the 4x4 product basis.
inline Eigen::Matrix4cd spin_flip_operator() {
    Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
    f(0, 3) = f(1, 2) = f(2, 1) = f(3, 0) = 1.0;
    return f;
}

/// R = rho (sx (x) sx) rho* (sx (x) sx).
inline Eigen::Matrix4cd spin_flip_product(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix4cd f = spin_flip_operator();
    return rho * f * rho.conjugate() * f;
}

struct ConcurrenceReport {
    double closed_form = 0.0;
    double oracle = 0.0;
    std::array<double, 4> spin_flip_eigen_sqrts{}; // descending
};

struct WoottersResult {
    double value;
    std::array<double, 4> eigen_sqrts; // descending
};

/// max(0, l1 - l2 - l3 - l4) over the square roots of the eigenvalues of R,
/// taken from a general complex eigensolver.
inline WoottersResult wootters_concurrence(const Eigen::Matrix4cd& rho) {
    constexpr double tol = 1e-8;
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw InvalidStateError("wootters_concurrence: matrix is not Hermitian");
    if (std::abs(rho.trace() - cd(1.0)) > tol)
        throw InvalidStateError("wootters_concurrence: trace differs from 1");

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(spin_flip_product(rho), false);
    if (solver.info() != Eigen::Success)
        throw NumericError("wootters_concurrence: eigensolver did not converge");
    std::array<double, 4> roots{};
    for (int i = 0; i < 4; ++i)
        roots[i] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return {std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]), roots};
}

inline WoottersResult wootters_concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4)
        throw InvalidStateError("wootters_concurrence: expects a 4x4 density matrix");
    return wootters_concurrence(Eigen::Matrix4cd(rho.entries()));
}

struct SpinFlipEigenvalues {
    std::array<double, 4> values; // descending
    /// |N| <= sqrt(L1 L2): the ordering behind C = 2 t^2 (|N| - |M|) holds.
    bool closed_form_valid;
};

/// Eigenvalues of R for the closed-form state with B1 = B2 = 0:
///   (sqrt(L1 L2) + |N|)^2 t^4, (sqrt(L1 L2) - |N|)^2 t^4, |M|^2 t^4, |M|^2 t^4.
inline SpinFlipEigenvalues spin_flip_eigenvalues(const RhoCoefficients& c, double t) {
    const double t4 = t * t * t * t;
    const double g = std::sqrt(c.l1 * c.l2);
    const double n = std::abs(c.n_coef);
    const double m = std::abs(c.m_coef);
    std::array<double, 4> v{(g + n) * (g + n) * t4, (g - n) * (g - n) * t4, m * m * t4, m * m * t4};
    std::sort(v.begin(), v.end(), std::greater<>());
    return {v, n <= g};
}

/// The four values exactly as listed in the closed-form derivation
/// (sqrt(L1L2)t^4 +- |N|t^4, |M|t^4, 0). They do not match the spectrum of R;
/// kept for the discrepancy report only.
inline std::array<double, 4> listed_spin_flip_eigenvalues(const RhoCoefficients& c, double t) {
    const double t4 = t * t * t * t;
    const double g = std::sqrt(c.l1 * c.l2);
    return {g * t4 + std::abs(c.n_coef) * t4, g * t4 - std::abs(c.n_coef) * t4, std::abs(c.m_coef) * t4, 0.0};
}

/// Photon exchange conserves spin and band: only s1 == s2, nu1 == nu2 entangle.
inline bool selection_rule_allows(const LayerConfig& layer1, const LayerConfig& layer2) {
    return layer1.electron.spin == layer2.electron.spin && layer1.electron.band == layer2.electron.band;
}

/// max(0, 2 t^2 (|N| - |M|)).
inline double concurrence_from_coefficients(const RhoCoefficients& c, double t) {
    return std::max(0.0, 2.0 * t * t * (std::abs(c.n_coef) - std::abs(c.m_coef)));
}

/// Closed-form concurrence. Returns 0 (and sets `note`) when the spin/band
/// selection rule forbids entanglement.
inline double concurrence_closed_form(const LayerConfig& layer1, const LayerConfig& layer2,
                                      const CavityGeometry& cavity, double t, const PropagatorMomenta& q = {},
                                      const Coupling& coupling = {}, std::string* note = nullptr) {
    const RhoCoefficients c = compute_coefficients(layer1, layer2, cavity, q, coupling);
    if (admissibility(c, t) == Admissibility::inadmissible)
        throw PerturbativeError("concurrence_closed_form: t^2 max(L1, L2) exceeds 1");
    if (!selection_rule_allows(layer1, layer2)) {
        if (note)
            *note = "selection rule: opposite spins or different bands give zero concurrence";
        return 0.0;
    }
    return concurrence_from_coefficients(c, t);
}

inline double concurrence_closed_form(const LayerConfig& layer1, const LayerConfig& layer2,
                                      const CavityGeometry& cavity, double t, double q,
                                      const Coupling& coupling = {}, std::string* note = nullptr) {
    return concurrence_closed_form(layer1, layer2, cavity, t, PropagatorMomenta::uniform(q), coupling, note);
}

/// Inputs of the explicit square-root concurrence formula. Masses are the
/// signed gaps eta*s*lambda_so of each layer (eV); `scale` is zeta t^2 D12.
struct ConcurrenceFormulaInput {
    double epsilon1;
    double mass1;
    double epsilon2;
    double mass2;
    double delta_phi;
    double scale;
};

namespace detail {

/// scale e1 e2 / (sqrt2 E1 E2) [sqrt(X+ + cos 2dphi) - sqrt(X- + cos 2dphi)]
/// with X+- = a + 2 l1 (e2^2 l1 + 2 l2 (l1 l2 +- E1 E2)) / (e1^2 e2^2).
inline double sqrt_form(const ConcurrenceFormulaInput& in, double l2_weight) {
    const double e1 = in.epsilon1, e2 = in.epsilon2, l1 = in.mass1, l2 = in.mass2;
    const double big1 = std::hypot(e1, l1);
    const double big2 = std::hypot(e2, l2);
    const double den = e1 * e1 * e2 * e2;
    const double base = 1.0 + l2_weight * l2 * l2 / (e2 * e2);
    const double c2 = std::cos(2.0 * in.delta_phi);
    const double xp = base + 2.0 * l1 * (e2 * e2 * l1 + 2.0 * l2 * (l1 * l2 + big1 * big2)) / den;
    const double xm = base + 2.0 * l1 * (e2 * e2 * l1 + 2.0 * l2 * (l1 * l2 - big1 * big2)) / den;
    const double pre = std::abs(in.scale) * e1 * e2 / (std::sqrt(2.0) * big1 * big2);
    return pre * (std::sqrt(std::max(0.0, xp + c2)) - std::sqrt(std::max(0.0, xm + c2)));
}

} // namespace detail

/// Explicit square-root form of 2 t^2 (|N| - |M|) for s1 = s2, nu1 = nu2,
/// clamped at 0. The lambda_2^2/eps_2^2 term carries weight 2; see
/// concurrence_full_formula_as_printed() for the unit-weight variant.
inline double concurrence_full_formula(const ConcurrenceFormulaInput& in) {
    if (!(in.epsilon1 > 0.0) || !(in.epsilon2 > 0.0))
        throw DomainError("concurrence_full_formula: energies must be > 0");
    return std::max(0.0, detail::sqrt_form(in, 2.0));
}

/// The square-root formula with the lambda_2^2/eps_2^2 term at unit weight,
/// as published. Not symmetric under layer exchange; used to document the
/// discrepancy with 2 t^2 (|N| - |M|).
inline double concurrence_full_formula_as_printed(const ConcurrenceFormulaInput& in) {
    if (!(in.epsilon1 > 0.0) || !(in.epsilon2 > 0.0))
        throw DomainError("concurrence_full_formula_as_printed: energies must be > 0");
    return detail::sqrt_form(in, 1.0);
}

/// The gapless limit as published: zeta t^2 D12 |cos dphi|.
inline double concurrence_zero_soi_published(double scale, double delta_phi) {
    return std::abs(scale) * std::abs(std::cos(delta_phi));
}

/// Identical layers (eps, lambda):
///   C = s / (eps^2 + lambda^2) [sqrt(eps^4 cos^2 dphi + 4 lambda^2 (eps^2 + lambda^2)) - eps^2 |cos dphi|]
/// with s = zeta t^2 D12.
inline double concurrence_identical(double epsilon, double lambda, double delta_phi, double zeta_t2_delta12) {
    if (!(epsilon > 0.0))
        throw DomainError("concurrence_identical: epsilon must be > 0");
    const double e2 = epsilon * epsilon;
    const double big2 = e2 + lambda * lambda;
    const double c = std::abs(std::cos(delta_phi));
    const double root = std::sqrt(e2 * e2 * c * c + 4.0 * lambda * lambda * big2);
    return std::abs(zeta_t2_delta12) / big2 * (root - e2 * c);
}

/// SOI of the weak layer at which concurrence stops growing:
/// eps_weak * lambda_strong / eps_strong.
inline double saturation_threshold(const LayerConfig& layer_weak, const LayerConfig& layer_strong) {
    if (!(layer_weak.electron.energy > 0.0) || !(layer_strong.electron.energy > 0.0))
        throw DomainError("saturation_threshold: energies must be > 0");
    return layer_weak.electron.energy * layer_strong.material.soi_strength / layer_strong.electron.energy;
}

/// Full report: closed form next to the Wootters oracle on the same state
/// (coherences B_i dropped, which is the regime of the closed form).
inline ConcurrenceReport concurrence_report(const LayerConfig& layer1, const LayerConfig& layer2,
                                            const CavityGeometry& cavity, double t, const PropagatorMomenta& q = {},
                                            const Coupling& coupling = {}) {
    const RhoCoefficients c = compute_coefficients(layer1, layer2, cavity, q, coupling);
    ConcurrenceReport r;
    r.closed_form = concurrence_closed_form(layer1, layer2, cavity, t, q, coupling);
    const auto w = wootters_concurrence(rho_total(c, t, {.diagonal_approximation = true}));
    r.oracle = w.value;
    r.spin_flip_eigen_sqrts = w.eigen_sqrts;
    return r;
}

} // namespace cavent
