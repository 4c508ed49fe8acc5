// Independent brute-force routes used to check the closed forms: direct
// assembly of the second-order density matrix from operator products,
// numeric eigen-decomposition and finite differences. Nothing here reads
// the closed-form coefficients L, B, N, M.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "cavent/band.hpp"
#include "cavent/density_matrix.hpp"
#include "cavent/propagator.hpp"

namespace cavent {

/// Per-layer ladder operators and the initial band projectors.
struct OperatorAlgebra {
    std::array<BandOperator, 2> sigma_plus;
    std::array<BandOperator, 2> sigma_minus;
    std::array<Eigen::Matrix2cd, 2> initial_projector;

    static OperatorAlgebra build(const LayerConfig& layer1, const LayerConfig& layer2) {
        OperatorAlgebra a;
        const std::array<const LayerConfig*, 2> layers{&layer1, &layer2};
        for (int i = 0; i < 2; ++i) {
            const auto& l = *layers[i];
            const ChiPair chi = chi_pair(l.electron.energy, l.mass());
            a.sigma_plus[i] = sigma_band_operator(Polarity::plus, chi, l.electron.angle);
            a.sigma_minus[i] = sigma_band_operator(Polarity::minus, chi, l.electron.angle);
            Eigen::Vector2cd ket = Eigen::Vector2cd::Zero();
            ket(band_index(l.electron.band)) = 1.0;
            a.initial_projector[i] = ket * ket.adjoint();
        }
        return a;
    }
};

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

namespace detail {

/// Operator on layer `layer` (0 or 1), identity on the other.
inline Eigen::Matrix4cd embed(const Eigen::Matrix2cd& op, int layer) {
    return layer == 0 ? kron(op, Eigen::Matrix2cd::Identity()) : kron(Eigen::Matrix2cd::Identity(), op);
}

/// Reorders a matrix from the absolute (|+>,|->) x (|+>,|->) basis into the
/// basis relative to the initial bands used by rho_total().
inline Eigen::Matrix4cd to_relative_basis(const Eigen::Matrix4cd& abs, int nu1, int nu2) {
    std::array<int, 4> perm{};
    for (int r1 = 0; r1 < 2; ++r1)
        for (int r2 = 0; r2 < 2; ++r2) {
            const int b1 = band_index(r1 == 0 ? nu1 : -nu1);
            const int b2 = band_index(r2 == 0 ? nu2 : -nu2);
            perm[2 * r1 + r2] = 2 * b1 + b2;
        }
    Eigen::Matrix4cd out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = abs(perm[i], perm[j]);
    return out;
}

} // namespace detail

/// rho(t) = rho_s - t^2/2 sum_{i,j,l} w_ij (S^i_{-l} S^j_l rho_s - 2 S^i_{-l} rho_s S^j_l + rho_s S^i_{-l} S^j_l)
/// with w_ij = (e gamma/hbar)^2 v_i v_j D_ij, returned in the relative basis.
/// No symmetry is imposed on the result.
inline Eigen::Matrix4cd dyson_rho_matrix(const LayerConfig& layer1, const LayerConfig& layer2,
                                         const CavityGeometry& cavity, double t, const PropagatorMomenta& q = {},
                                         const Coupling& coupling = {}) {
    layer1.validate();
    layer2.validate();
    cavity.validate();
    const OperatorAlgebra alg = OperatorAlgebra::build(layer1, layer2);
    const std::array<double, 2> v{layer1.material.fermi_velocity, layer2.material.fermi_velocity};
    const std::array<double, 2> z{cavity.z1, cavity.z2};
    const std::array<std::array<double, 2>, 2> qm{{{q.q11, q.q12}, {q.q12, q.q22}}};

    std::array<std::array<Eigen::Matrix4cd, 2>, 2> sig; // [layer][0: sigma+, 1: sigma-]
    for (int i = 0; i < 2; ++i) {
        sig[i][0] = detail::embed(alg.sigma_plus[i].matrix, i);
        sig[i][1] = detail::embed(alg.sigma_minus[i].matrix, i);
    }
    const Eigen::Matrix4cd rho_s = kron(alg.initial_projector[0], alg.initial_projector[1]);

    Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double w =
                coupling_prefactor(v[i], v[j], cavity, coupling) * photon_propagator(cavity, z[i], z[j], qm[i][j]);
            for (int l = 0; l < 2; ++l) {
                const Eigen::Matrix4cd& s_minus_l = sig[i][1 - l];
                const Eigen::Matrix4cd& s_l = sig[j][l];
                const Eigen::Matrix4cd x = s_minus_l * s_l;
                sum += w * (x * rho_s - 2.0 * s_minus_l * rho_s * s_l + rho_s * x);
            }
        }
    const Eigen::Matrix4cd abs = rho_s - 0.5 * t * t * sum;
    return detail::to_relative_basis(abs, layer1.electron.band, layer2.electron.band);
}

inline DensityMatrix dyson_rho(const LayerConfig& layer1, const LayerConfig& layer2, const CavityGeometry& cavity,
                               double t, const PropagatorMomenta& q = {}, const Coupling& coupling = {}) {
    if (!(t >= 0.0))
        throw DomainError("dyson_rho: t must be >= 0");
    const Eigen::Matrix4cd m = dyson_rho_matrix(layer1, layer2, cavity, t, q, coupling);
    if (std::max(m(1, 1).real(), m(2, 2).real()) > kAdmissibleMax)
        throw PerturbativeError("dyson_rho: excitation probability exceeds 1");
    return DensityMatrix(m);
}

// ── Finite differences ──────────────────────────────────────────────────────

struct DerivativeEstimate {
    double central;
    double richardson;
};

/// (f(t0+h) - f(t0-h)) / 2h, plus the Richardson combination (4 D(h/2) - D(h)) / 3.
inline DerivativeEstimate finite_difference_check(const std::function<double(double)>& f, double t0, double h) {
    if (!(h > 0.0) || t0 + 0.5 * h == t0)
        throw NumericError("finite_difference_check: step underflow");
    if (!(t0 - h > 0.0))
        throw DomainError("finite_difference_check: t0 - h must be > 0");
    auto d = [&](double step) { return (f(t0 + step) - f(t0 - step)) / (2.0 * step); };
    const double dh = d(h);
    const double dh2 = d(0.5 * h);
    return {dh, (4.0 * dh2 - dh) / 3.0};
}

// ── Eigenvalues ─────────────────────────────────────────────────────────────

struct EigenOracleResult {
    Eigen::VectorXcd values;
    double max_residual; // max ||A v - l v|| / ||A||
    bool hermitian;
};

/// Eigenvalues of a small dense complex matrix with a residual check on
/// every eigenpair. Hermitian input takes the self-adjoint path.
inline EigenOracleResult eigen_oracle(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols() || a.rows() == 0 || a.rows() > 8)
        throw DomainError("eigen_oracle: expects a square matrix of dimension 1..8");
    const double norm = std::max(a.norm(), std::numeric_limits<double>::min());
    const bool hermitian = (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * norm;

    EigenOracleResult r;
    r.hermitian = hermitian;
    Eigen::MatrixXcd vecs;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(a);
        if (s.info() != Eigen::Success)
            throw NumericError("eigen_oracle: self-adjoint solver did not converge");
        r.values = s.eigenvalues().cast<cd>();
        vecs = s.eigenvectors();
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> s(a);
        if (s.info() != Eigen::Success)
            throw NumericError("eigen_oracle: complex solver did not converge");
        r.values = s.eigenvalues();
        vecs = s.eigenvectors();
    }
    r.max_residual = 0.0;
    for (Eigen::Index k = 0; k < r.values.size(); ++k) {
        const Eigen::VectorXcd v = vecs.col(k);
        const double res = (a * v - r.values(k) * v).norm() / (norm * std::max(v.norm(), 1e-300));
        r.max_residual = std::max(r.max_residual, res);
    }
    if (r.max_residual > 1e-10)
        throw NumericError("eigen_oracle: residual " + std::to_string(r.max_residual) + " exceeds 1e-10 ||A||");
    return r;
}

// ── Random configurations ───────────────────────────────────────────────────

struct SampledConfiguration {
    LayerConfig layer1;
    LayerConfig layer2;
    CavityGeometry cavity;
    double t = 0.0;
};

struct SamplerOptions {
    /// Draw spin, valley and band independently; otherwise all are +1.
    bool random_quantum_numbers = true;
    /// Force s1 == s2 and nu1 == nu2 (the concurrence selection rule).
    bool same_spin_and_band = false;
    /// Admissible fraction: t is drawn so that t^2 max(L1, L2) <= this.
    double max_excitation = 0.45;
};

/// log-uniform eps in [1e-4, 1] eV and lambda_so in [1e-6, 0.1] eV,
/// uniform angles, positions uniform in (0.1 L, 0.9 L), n_max in 1..8,
/// L = 1 um, SI coupling with the default mode volume.
inline SampledConfiguration sample_configuration(std::mt19937_64& rng, const SamplerOptions& opt = {}) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
    auto pm = [&]() { return unit(rng) < 0.5 ? -1 : 1; };

    SampledConfiguration c;
    c.cavity.length = 1.0e-6;
    c.cavity.n_max = 1 + static_cast<int>(unit(rng) * 8.0) % 8;
    c.cavity.z1 = c.cavity.length * (0.1 + 0.8 * unit(rng));
    c.cavity.z2 = c.cavity.length * (0.1 + 0.8 * unit(rng));
    for (LayerConfig* l : {&c.layer1, &c.layer2}) {
        l->material.name = "sampled";
        l->material.fermi_velocity = log_uniform(3.0e5, 1.2e6);
        l->material.soi_strength = log_uniform(1e-6, 0.1);
        l->electron.energy = log_uniform(1e-4, 1.0);
        l->electron.angle = 2.0 * kPi * unit(rng);
        if (opt.random_quantum_numbers) {
            l->electron.spin = pm();
            l->electron.valley = pm();
            l->electron.band = pm();
        }
    }
    if (opt.same_spin_and_band) {
        c.layer2.electron.spin = c.layer1.electron.spin;
        c.layer2.electron.band = c.layer1.electron.band;
    }
    const RhoCoefficients scale = compute_coefficients(c.layer1, c.layer2, c.cavity);
    const double lmax = std::max(scale.l1, scale.l2);
    const double u = 0.01 + 0.99 * unit(rng);
    c.t = lmax > 0.0 ? std::sqrt(opt.max_excitation * u / lmax) : 0.0;
    return c;
}

} // namespace cavent
