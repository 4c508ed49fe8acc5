// Second-order electronic density matrix of the two layers after tracing out
// the cavity field, its coefficients, partial traces and purity.
//
// 4x4 basis ordering, layer 1 in the first slot, relative to the initial
// band indices (nu1, nu2):
//   0: |nu1, nu2>   1: |nu1, -nu2>   2: |-nu1, nu2>   3: |-nu1, -nu2>
// For the usual conduction-band start (nu1 = nu2 = +1) this is
// (|++>, |+->, |-+>, |-->).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "cavent/band.hpp"
#include "cavent/propagator.hpp"
#include "cavent/types.hpp"

namespace cavent {

/// (e gamma / hbar)^2 v_i v_j with gamma^2 = hbar / (eps0 V). Multiplied by a
/// propagator (seconds) it gives a rate squared (1/s^2).
inline double coupling_prefactor(double v_i, double v_j, const CavityGeometry& cavity, const Coupling& coupling) {
    if (coupling.normalized)
        return 1.0;
    const auto& k = coupling.constants;
    const double e2gamma2_over_hbar2 =
        k.elementary_charge * k.elementary_charge / (k.hbar * k.vacuum_permittivity * cavity.mode_volume);
    return e2gamma2_over_hbar2 * v_i * v_j;
}

struct RhoCoefficients {
    double l1 = 0.0;
    double l2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    cd n_coef{};
    cd m_coef{};
    double zeta = 0.0; // prefactor of the 1-2 pair; zeta * delta12 is a rate squared
    Propagators delta{0.0, 0.0, 0.0};
};

/// L_i = zeta_ii D_ii (1 - 2/dchi_i^2)
/// B_i = nu_i zeta_ii D_ii (chi+ + chi-)/dchi_i^2
/// N   = zeta_12 D_12 [chi_{-nu1} chi_{-nu2} e^{-i dphi} + chi_{nu1} chi_{nu2} e^{i dphi}] / (dchi_1 dchi_2)
/// M   = -zeta_12 D_12 [chi_{nu1} chi_{-nu2} e^{i dphi} + chi_{-nu1} chi_{nu2} e^{-i dphi}] / (dchi_1 dchi_2)
/// with dphi = phi_1 - phi_2 and the sublattice phase convention of
/// sublattice_states().
inline RhoCoefficients compute_coefficients(const LayerConfig& layer1, const LayerConfig& layer2,
                                            const CavityGeometry& cavity, const PropagatorMomenta& q = {},
                                            const Coupling& coupling = {}) {
    layer1.validate();
    layer2.validate();
    cavity.validate();

    const ChiPair c1 = chi_pair(layer1.electron.energy, layer1.mass());
    const ChiPair c2 = chi_pair(layer2.electron.energy, layer2.mass());
    const int nu1 = layer1.electron.band;
    const int nu2 = layer2.electron.band;
    const double v1 = layer1.material.fermi_velocity;
    const double v2 = layer2.material.fermi_velocity;

    RhoCoefficients r;
    r.delta = propagators(cavity, q);
    const double z11 = coupling_prefactor(v1, v1, cavity, coupling);
    const double z22 = coupling_prefactor(v2, v2, cavity, coupling);
    r.zeta = coupling_prefactor(v1, v2, cavity, coupling);

    const double dc1sq = c1.delta_chi * c1.delta_chi;
    const double dc2sq = c2.delta_chi * c2.delta_chi;
    r.l1 = z11 * r.delta.delta11 * (1.0 - 2.0 / dc1sq);
    r.l2 = z22 * r.delta.delta22 * (1.0 - 2.0 / dc2sq);
    r.b1 = nu1 * z11 * r.delta.delta11 * (c1.chi_plus + c1.chi_minus) / dc1sq;
    r.b2 = nu2 * z22 * r.delta.delta22 * (c2.chi_plus + c2.chi_minus) / dc2sq;

    const double dphi = layer1.electron.angle - layer2.electron.angle;
    const cd ep = std::polar(1.0, dphi);
    const cd em = std::conj(ep);
    const double pre = r.zeta * r.delta.delta12 / (c1.delta_chi * c2.delta_chi);
    r.n_coef = pre * (c1.of(-nu1) * c2.of(-nu2) * em + c1.of(nu1) * c2.of(nu2) * ep);
    r.m_coef = -pre * (c1.of(nu1) * c2.of(-nu2) * ep + c1.of(-nu1) * c2.of(nu2) * em);
    return r;
}

inline RhoCoefficients compute_coefficients(const LayerConfig& layer1, const LayerConfig& layer2,
                                            const CavityGeometry& cavity, double q,
                                            const Coupling& coupling = {}) {
    return compute_coefficients(layer1, layer2, cavity, PropagatorMomenta::uniform(q), coupling);
}

/// Dense Hermitian unit-trace matrix, 2x2 (one layer) or 4x4 (both layers).
class DensityMatrix {
public:
    static constexpr double kHermitianTolerance = 1e-12;
    static constexpr double kTraceTolerance = 1e-12;

    explicit DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || (entries_.rows() != 2 && entries_.rows() != 4))
            throw InvalidStateError("density matrix must be 2x2 or 4x4");
        const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
        if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale)
            throw InvalidStateError("density matrix is not Hermitian");
        if (std::abs(entries_.trace() - cd(1.0)) > kTraceTolerance * scale)
            throw InvalidStateError("density matrix trace differs from 1");
    }

    [[nodiscard]] int dim() const { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const Eigen::MatrixXcd& entries() const { return entries_; }
    [[nodiscard]] cd operator()(int i, int j) const { return entries_(i, j); }

    /// Real eigenvalues in ascending order.
    [[nodiscard]] Eigen::VectorXd eigenvalues() const {
        if (dim() == 2) {
            // Closed form; the product form for the small root keeps full
            // relative precision when one population is tiny.
            const double a = entries_(0, 0).real();
            const double d = entries_(1, 1).real();
            const double off = std::norm(entries_(0, 1));
            const double root = std::sqrt((a - d) * (a - d) + 4.0 * off);
            const double big = 0.5 * (a + d + root);
            const double det = a * d - off;
            Eigen::VectorXd ev(2);
            ev << (big != 0.0 ? det / big : 0.0), big;
            return ev;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

private:
    Eigen::MatrixXcd entries_;
};

// ── Perturbative admissibility ──────────────────────────────────────────────

inline constexpr double kAdmissibleWarn = 0.5;
inline constexpr double kAdmissibleMax = 1.0;

enum class Admissibility { ok, warn, inadmissible };

/// Classifies t^2 max(L1, L2) against the warn/error thresholds.
inline Admissibility admissibility(const RhoCoefficients& c, double t) {
    const double x = t * t * std::max(c.l1, c.l2);
    if (x > kAdmissibleMax)
        return Admissibility::inadmissible;
    if (x >= kAdmissibleWarn)
        return Admissibility::warn;
    return Admissibility::ok;
}

inline const char* to_string(Admissibility a) {
    switch (a) {
    case Admissibility::ok: return "ok";
    case Admissibility::warn: return "warn";
    case Admissibility::inadmissible: return "inadmissible";
    }
    return "?";
}

struct RhoOptions {
    /// Drop the local coherences B_i (diagonal reduced matrices).
    bool diagonal_approximation = false;
};

/// The closed-form 4x4 matrix
///   [1 - t^2(L1+L2)   t^2 B2     t^2 B1     t^2 M* ]
///   [t^2 B2           t^2 L2     t^2 N*     0      ]
///   [t^2 B1           t^2 N      t^2 L1     0      ]
///   [t^2 M            0          0          0      ]
inline DensityMatrix rho_total(const RhoCoefficients& c, double t, RhoOptions options = {}) {
    if (!(t >= 0.0))
        throw DomainError("rho_total: t must be >= 0");
    if (admissibility(c, t) == Admissibility::inadmissible)
        throw PerturbativeError("rho_total: t^2 max(L1, L2) exceeds 1; outside the perturbative regime");
    const double t2 = t * t;
    const double b1 = options.diagonal_approximation ? 0.0 : c.b1;
    const double b2 = options.diagonal_approximation ? 0.0 : c.b2;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1.0 - t2 * c.l1 - t2 * c.l2;
    m(1, 1) = t2 * c.l2;
    m(2, 2) = t2 * c.l1;
    m(0, 1) = m(1, 0) = t2 * b2;
    m(0, 2) = m(2, 0) = t2 * b1;
    m(2, 1) = t2 * c.n_coef;
    m(1, 2) = std::conj(m(2, 1));
    m(3, 0) = t2 * c.m_coef;
    m(0, 3) = std::conj(m(3, 0));
    return DensityMatrix(m);
}

/// Partial trace of a 4x4 state, keeping layer `keep` (1 or 2).
inline DensityMatrix reduce(const DensityMatrix& rho, int keep) {
    if (rho.dim() != 4)
        throw DomainError("reduce: expects a 4x4 density matrix");
    if (keep != 1 && keep != 2)
        throw DomainError("reduce: keep must be 1 or 2");
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 2; ++k) {
                // index = 2 * (layer-1 bit) + (layer-2 bit)
                const int row = keep == 1 ? 2 * a + k : 2 * k + a;
                const int col = keep == 1 ? 2 * b + k : 2 * k + b;
                out(a, b) += rho(row, col);
            }
    return DensityMatrix(out);
}

/// Tr(rho^2).
inline double purity(const DensityMatrix& rho) {
    // Tr(rho rho) = sum_ij |rho_ij|^2 for Hermitian rho.
    return rho.entries().cwiseAbs2().sum();
}

} // namespace cavent
