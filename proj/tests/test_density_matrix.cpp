#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cavent/density_matrix.hpp"
#include "cavent/oracle.hpp"
#include "cavent/scenario.hpp"

using namespace cavent;

namespace {

LayerConfig layer(double eps, double lambda, double angle = 0.0, double v = 1.0) {
    LayerConfig l;
    l.material = {"test", v, lambda};
    l.electron.energy = eps;
    l.electron.angle = angle;
    return l;
}

CavityGeometry unit_cavity(int n_max = 2) {
    CavityGeometry c;
    c.length = 1.0;
    c.z1 = 0.35;
    c.z2 = 0.6;
    c.light_speed = 1.0;
    c.n_max = n_max;
    return c;
}

const Coupling kNormalized{true, {}};

RhoCoefficients sample_coefficients() {
    return compute_coefficients(layer(0.8, 0.3, 0.4), layer(1.3, 0.9, -0.2), unit_cavity(), {}, kNormalized);
}

} // namespace

TEST(Coefficients, GaplessHasNoLocalCoherence) {
    const auto c = compute_coefficients(layer(1.0, 0.0), layer(2.0, 0.0), unit_cavity(), {}, kNormalized);
    EXPECT_EQ(c.b1, 0.0);
    EXPECT_EQ(c.b2, 0.0);
}

TEST(Coefficients, GaplessNormalizedRateIsHalfThePropagator) {
    const auto c = compute_coefficients(layer(1.0, 0.0), layer(0.5, 0.0), unit_cavity(), {}, kNormalized);
    EXPECT_NEAR(c.l1, c.delta.delta11 / 2.0, 1e-15);
    EXPECT_NEAR(c.l2, c.delta.delta22 / 2.0, 1e-15);
}

TEST(Coefficients, ReferenceGrapheneRateOrderOfMagnitude) {
    // graphene, eps = 1 meV, n_max = 1, L = 1 um, d2/L = 0.6, A = 6.25e-8 m^2
    const Scenario s = reference_scenario();
    const auto c = compute_coefficients(s.layer1, s.layer2, s.cavity, s.q, s.coupling);
    EXPECT_GT(c.l2, 2.3e16);
    EXPECT_LT(c.l2, 2.3e18);
    const double x = 6.6e-10 * 6.6e-10 * c.l2;
    EXPECT_GE(x, 0.01);
    EXPECT_LE(x, 1.0);
}

TEST(Coefficients, ModeVolumeScalesRatesInversely) {
    Scenario s = reference_scenario();
    const auto a = compute_coefficients(s.layer1, s.layer2, s.cavity);
    s.cavity.mode_volume *= 4.0;
    const auto b = compute_coefficients(s.layer1, s.layer2, s.cavity);
    EXPECT_NEAR(b.l2 * 4.0 / a.l2, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(b.n_coef) * 4.0 / std::abs(a.n_coef), 1.0, 1e-14);
}

TEST(RhoTotal, InitialStateAtZeroTime) {
    const auto rho = rho_total(sample_coefficients(), 0.0);
    Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
    expect(0, 0) = 1.0;
    EXPECT_EQ((rho.entries() - Eigen::MatrixXcd(expect)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RhoTotal, LayoutMatchesCoefficients) {
    const auto c = sample_coefficients();
    const double t = 0.4;
    const double t2 = t * t;
    const auto rho = rho_total(c, t);
    EXPECT_DOUBLE_EQ(rho(0, 0).real(), 1.0 - t2 * c.l1 - t2 * c.l2);
    EXPECT_DOUBLE_EQ(rho(1, 1).real(), t2 * c.l2);
    EXPECT_DOUBLE_EQ(rho(2, 2).real(), t2 * c.l1);
    EXPECT_EQ(rho(3, 3), cd(0.0));
    EXPECT_EQ(rho(0, 1), cd(t2 * c.b2));
    EXPECT_EQ(rho(0, 2), cd(t2 * c.b1));
    EXPECT_EQ(rho(2, 1), t2 * c.n_coef);
    EXPECT_EQ(rho(3, 0), t2 * c.m_coef);
    EXPECT_EQ(rho(1, 3), cd(0.0));
    EXPECT_EQ(rho(2, 3), cd(0.0));
    EXPECT_EQ((rho.entries() - rho.entries().adjoint()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_NEAR(std::abs(rho.entries().trace() - cd(1.0)), 0.0, 1e-15);
}

TEST(RhoTotal, DiagonalApproximationDropsCoherences) {
    const auto c = sample_coefficients();
    const auto rho = rho_total(c, 0.3, {.diagonal_approximation = true});
    EXPECT_EQ(rho(0, 1), cd(0.0));
    EXPECT_EQ(rho(0, 2), cd(0.0));
    EXPECT_NE(rho(2, 1), cd(0.0));
}

TEST(RhoTotal, AdmissibilityThresholds) {
    auto c = sample_coefficients();
    const double lmax = std::max(c.l1, c.l2);
    EXPECT_EQ(admissibility(c, std::sqrt(0.4 / lmax)), Admissibility::ok);
    EXPECT_EQ(admissibility(c, std::sqrt(0.5 / lmax)), Admissibility::warn);
    EXPECT_EQ(admissibility(c, std::sqrt(0.99 / lmax)), Admissibility::warn);
    EXPECT_EQ(admissibility(c, std::sqrt(1.01 / lmax)), Admissibility::inadmissible);
    EXPECT_THROW(rho_total(c, std::sqrt(1.01 / lmax)), PerturbativeError);
    EXPECT_THROW(rho_total(c, -1.0), DomainError);
}

TEST(RhoTotal, HasNegativeEigenvalueAtFourthOrder) {
    // The |--> population is zero while its coherence with |++> is t^2 M,
    // so the truncated matrix is not positive semidefinite: the smallest
    // eigenvalue is -t^4 |M|^2 to leading order.
    const auto c = sample_coefficients();
    for (double t : {0.05, 0.1, 0.2}) {
        const auto ev = rho_total(c, t).eigenvalues();
        const double m2t4 = std::norm(c.m_coef) * std::pow(t, 4);
        EXPECT_LT(ev(0), 0.0);
        EXPECT_NEAR(ev(0) / -m2t4, 1.0, 0.05) << t;
    }
}

TEST(Reduce, ClosedFormReducedMatrix) {
    const auto c = sample_coefficients();
    const double t = 0.35, t2 = t * t;
    const auto r2 = reduce(rho_total(c, t), 2);
    EXPECT_NEAR(r2(0, 0).real(), 1.0 - t2 * c.l2, 1e-15);
    EXPECT_NEAR(r2(1, 1).real(), t2 * c.l2, 1e-15);
    EXPECT_NEAR(r2(0, 1).real(), t2 * c.b2, 1e-15);
    EXPECT_NEAR(r2(1, 0).real(), t2 * c.b2, 1e-15);
    const auto r1 = reduce(rho_total(c, t), 1);
    EXPECT_NEAR(r1(1, 1).real(), t2 * c.l1, 1e-15);
    EXPECT_NEAR(r1(0, 1).real(), t2 * c.b1, 1e-15);

    const auto d = reduce(rho_total(c, t, {.diagonal_approximation = true}), 2);
    EXPECT_EQ(d(0, 1), cd(0.0));
    EXPECT_EQ(reduce(rho_total(c, 0.0), 2)(0, 0), cd(1.0));
}

TEST(Reduce, ProductStateAndMaximallyMixed) {
    Eigen::Matrix2cd a, b;
    a << 0.7, cd(0.1, 0.2), cd(0.1, -0.2), 0.3;
    b << 0.4, cd(0.0, 0.1), cd(0.0, -0.1), 0.6;
    const DensityMatrix rho(Eigen::MatrixXcd(kron(a, b)));
    EXPECT_LE((reduce(rho, 1).entries() - Eigen::MatrixXcd(a)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((reduce(rho, 2).entries() - Eigen::MatrixXcd(b)).cwiseAbs().maxCoeff(), 1e-15);

    const DensityMatrix mixed(Eigen::MatrixXcd(Eigen::Matrix4cd::Identity() / 4.0));
    EXPECT_NEAR(reduce(mixed, 1)(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(reduce(mixed, 2)(1, 1).real(), 0.5, 1e-15);
    EXPECT_THROW(reduce(reduce(mixed, 1), 1), DomainError);
    EXPECT_THROW(reduce(mixed, 3), DomainError);
}

TEST(Reduce, RelabelingCovariance) {
    const auto l1 = layer(0.8, 0.3, 0.4), l2 = layer(1.3, 0.9, -0.2, 0.7);
    auto cav = unit_cavity();
    auto swapped = cav;
    std::swap(swapped.z1, swapped.z2);
    const double t = 0.3;
    const auto a = rho_total(compute_coefficients(l1, l2, cav, {}, kNormalized), t);
    const auto b = rho_total(compute_coefficients(l2, l1, swapped, {}, kNormalized), t);
    EXPECT_LE((reduce(a, 1).entries() - reduce(b, 2).entries()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((reduce(a, 2).entries() - reduce(b, 1).entries()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Purity, Examples) {
    EXPECT_DOUBLE_EQ(purity(rho_total(sample_coefficients(), 0.0)), 1.0);
    const DensityMatrix half(Eigen::MatrixXcd(Eigen::Matrix2cd::Identity() / 2.0));
    EXPECT_DOUBLE_EQ(purity(half), 0.5);
}

TEST(Purity, QuarticRemainderIsExact) {
    // Tr rho^2 - (1 - 2 t^2 (L1+L2)) = t^4 [(L1+L2)^2 + L1^2 + L2^2 + 2(B1^2 + B2^2 + |N|^2 + |M|^2)]
    const auto c = sample_coefficients();
    const double k = std::pow(c.l1 + c.l2, 2) + c.l1 * c.l1 + c.l2 * c.l2 +
                     2.0 * (c.b1 * c.b1 + c.b2 * c.b2 + std::norm(c.n_coef) + std::norm(c.m_coef));
    for (double t : {0.01, 0.05, 0.2}) {
        const double rem = purity(rho_total(c, t)) - (1.0 - 2.0 * t * t * (c.l1 + c.l2));
        EXPECT_NEAR(rem / (k * std::pow(t, 4)), 1.0, 1e-6) << t;
    }
}

TEST(Purity, NonIncreasingBeforeQuarticTurnaround) {
    // the truncated series 1 - 2 t^2 (L1+L2) + k t^4 turns up at t^2 = (L1+L2)/k
    const auto c = sample_coefficients();
    const double k = std::pow(c.l1 + c.l2, 2) + c.l1 * c.l1 + c.l2 * c.l2 +
                     2.0 * (c.b1 * c.b1 + c.b2 * c.b2 + std::norm(c.n_coef) + std::norm(c.m_coef));
    const double tmax = std::sqrt(0.99 * (c.l1 + c.l2) / k);
    double prev = 1.0;
    for (int i = 1; i <= 200; ++i) {
        const double p = purity(rho_total(c, tmax * i / 200.0));
        EXPECT_LE(p, prev + 1e-15);
        prev = p;
    }
}

TEST(DensityMatrix, RejectsInvalidInput) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    EXPECT_THROW(DensityMatrix{m}, InvalidStateError);
    Eigen::MatrixXcd n(2, 2);
    n << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(DensityMatrix{n}, InvalidStateError);
    n << 0.6, 0.0, 0.0, 0.6;
    EXPECT_THROW(DensityMatrix{n}, InvalidStateError);
}

TEST(DensityMatrix, SmallEigenvalueKeepsRelativePrecision) {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0 - 1e-14, 0.0, 0.0, 1e-14;
    EXPECT_NEAR(DensityMatrix(m).eigenvalues()(0) / 1e-14, 1.0, 1e-10);
}
