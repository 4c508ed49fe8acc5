#include <cmath>

#include <gtest/gtest.h>

#include "cavent/concurrence.hpp"
#include "cavent/verify.hpp"

using namespace cavent;

namespace {

LayerConfig layer(double eps, double lambda, double angle = 0.0, double v = 1.0) {
    LayerConfig l;
    l.material = {"test", v, lambda};
    l.electron.energy = eps;
    l.electron.angle = angle;
    return l;
}

CavityGeometry unit_cavity(int n_max = 1) {
    CavityGeometry c;
    c.length = 1.0;
    c.z1 = 0.4;
    c.z2 = 0.6;
    c.light_speed = 1.0;
    c.n_max = n_max;
    return c;
}

const Coupling kNormalized{true, {}};

double closed(const LayerConfig& a, const LayerConfig& b, double t, const PropagatorMomenta& q = {}) {
    return concurrence_closed_form(a, b, unit_cavity(), t, q, kNormalized);
}

/// zeta t^2 D12 in normalized units.
double scale(double t) { return t * t * photon_propagator(unit_cavity(), 0.4, 0.6); }

} // namespace

TEST(Wootters, BellAndProductStates) {
    Eigen::Matrix4cd bell = Eigen::Matrix4cd::Zero();
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    EXPECT_NEAR(wootters_concurrence(bell).value, 1.0, 1e-12);

    Eigen::Matrix2cd a, b;
    a << 0.7, cd(0.1, 0.2), cd(0.1, -0.2), 0.3;
    b << 0.4, cd(0.0, 0.1), cd(0.0, -0.1), 0.6;
    EXPECT_NEAR(wootters_concurrence(Eigen::Matrix4cd(kron(a, b))).value, 0.0, 1e-7);
}

TEST(Wootters, SqrtsSortedDescending) {
    const auto c = compute_coefficients(layer(0.5, 0.2, 1.0), layer(0.7, 0.1), unit_cavity(), {}, kNormalized);
    const auto w = wootters_concurrence(rho_total(c, 0.3, {.diagonal_approximation = true}));
    for (int i = 0; i < 3; ++i)
        EXPECT_GE(w.eigen_sqrts[i], w.eigen_sqrts[i + 1]);
    EXPECT_GE(w.eigen_sqrts[3], 0.0);
}

TEST(Wootters, RejectsInvalidMatrices) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() / 4.0;
    m(0, 1) = 0.1;
    EXPECT_THROW(wootters_concurrence(m), InvalidStateError);
    Eigen::Matrix4cd n = Eigen::Matrix4cd::Identity() / 2.0;
    EXPECT_THROW(wootters_concurrence(n), InvalidStateError);
}

TEST(Wootters, ClosedFormStateGivesCoherenceDifference) {
    const auto c = compute_coefficients(layer(0.5, 0.2, 1.0), layer(0.7, 0.1), unit_cavity(), {}, kNormalized);
    const double t = 0.3;
    const double expect = 2.0 * t * t * (std::abs(c.n_coef) - std::abs(c.m_coef));
    EXPECT_NEAR(wootters_concurrence(rho_total(c, t, {.diagonal_approximation = true})).value, expect, 1e-10);
}

TEST(Wootters, RandomSuiteMatchesClosedForm) {
    const auto check = check_wootters_vs_closed_form(2024, 300);
    EXPECT_TRUE(check.passed) << check.max_residual;
}

TEST(SpinFlipEigenvalues, NoCoherenceCase) {
    RhoCoefficients c;
    c.l1 = 2.0;
    c.l2 = 0.5;
    const double t = 0.3, t4 = std::pow(t, 4);
    const auto ev = spin_flip_eigenvalues(c, t);
    EXPECT_NEAR(ev.values[0], 1.0 * t4, 1e-15); // (sqrt(L1 L2))^2 t^4
    EXPECT_NEAR(ev.values[1], 1.0 * t4, 1e-15);
    EXPECT_EQ(ev.values[2], 0.0);
    EXPECT_EQ(ev.values[3], 0.0);
    EXPECT_TRUE(ev.closed_form_valid);
    EXPECT_EQ(concurrence_from_coefficients(c, t), 0.0);
}

TEST(SpinFlipEigenvalues, MatchNumericSpectrum) {
    const auto check = check_spin_flip_eigenvalues(99, 300);
    EXPECT_TRUE(check.passed) << check.max_residual;
}

TEST(SpinFlipEigenvalues, ScaleAsTFourth) {
    const auto c = compute_coefficients(layer(0.5, 0.2, 1.0), layer(0.7, 0.1), unit_cavity(), {}, kNormalized);
    const auto a = spin_flip_eigenvalues(c, 0.1).values;
    const auto b = spin_flip_eigenvalues(c, 0.05).values;
    for (int i = 0; i < 4; ++i)
        EXPECT_NEAR(b[i] * 16.0, a[i], 1e-14 * std::max(1.0, a[i]));
}

TEST(SpinFlipEigenvalues, ListedSetDoesNotMatchSpectrum) {
    const auto c = compute_coefficients(layer(0.5, 0.2, 1.0), layer(0.7, 0.1), unit_cavity(), {}, kNormalized);
    const double t = 0.3;
    const auto listed = listed_spin_flip_eigenvalues(c, t);
    const auto exact = spin_flip_spectrum(c, t);
    EXPECT_GT(std::abs(listed[0] - exact[0]), 1e-3 * exact[0]);
    EXPECT_EQ(listed[3], 0.0);
    EXPECT_GT(exact[3], 0.0); // |M|^2 t^4 appears twice
    const auto check = check_listed_eigenvalues(1, 50);
    EXPECT_TRUE(check.informational);
    EXPECT_FALSE(check.passed);
}

TEST(ConcurrenceClosedForm, SelectionRuleReturnsZero) {
    auto a = layer(0.5, 0.2, 1.0), b = layer(0.7, 0.1);
    b.electron.spin = -1;
    std::string note;
    EXPECT_EQ(concurrence_closed_form(a, b, unit_cavity(), 0.3, {}, kNormalized, &note), 0.0);
    EXPECT_FALSE(note.empty());
    b.electron.spin = 1;
    b.electron.band = -1;
    EXPECT_EQ(concurrence_closed_form(a, b, unit_cavity(), 0.3, {}, kNormalized), 0.0);
    b.electron.band = 1;
    EXPECT_GT(concurrence_closed_form(a, b, unit_cavity(), 0.3, {}, kNormalized), 0.0);
}

TEST(ConcurrenceClosedForm, GaplessLayersGiveZero) {
    // With lambda = 0 both chi pairs are (1, -1), so |N| = |M|.
    for (double dphi : {0.0, 0.3, kPi / 4.0, kPi / 2.0, 2.0}) {
        EXPECT_NEAR(closed(layer(0.5, 0.0, dphi), layer(0.8, 0.0), 0.3), 0.0, 1e-15) << dphi;
        EXPECT_LT(concurrence_full_formula({0.5, 0.0, 0.8, 0.0, dphi, scale(0.3)}), 1e-15);
    }
}

TEST(ConcurrenceClosedForm, PublishedGaplessLimitNotReproduced) {
    const auto check = check_zero_soi_published(17, 100);
    EXPECT_TRUE(check.informational);
    EXPECT_FALSE(check.passed);
    EXPECT_NEAR(check.max_residual, 1.0, 1e-6);
}

TEST(ConcurrenceClosedForm, IdenticalLayersPerpendicular) {
    const double eps = 0.6, lam = 0.25, t = 0.3;
    const double c = closed(layer(eps, lam, kPi / 2.0), layer(eps, lam), t);
    EXPECT_NEAR(c, 2.0 * scale(t) * lam / std::hypot(eps, lam), 1e-14);
    EXPECT_NEAR(concurrence_identical(eps, lam, kPi / 2.0, scale(t)), c, 1e-14);
}

TEST(ConcurrenceClosedForm, EvenAndPiPeriodicInAngle) {
    const auto b = layer(0.7, 0.3);
    for (double dphi : {0.2, 0.9, 1.4}) {
        const double c0 = closed(layer(0.4, 0.1, dphi), b, 0.3);
        EXPECT_NEAR(closed(layer(0.4, 0.1, -dphi), b, 0.3), c0, 1e-14);
        EXPECT_NEAR(closed(layer(0.4, 0.1, dphi + kPi), b, 0.3), c0, 1e-14);
    }
}

TEST(ConcurrenceClosedForm, IncreasingInInterlayerPropagator) {
    // raising q12 lowers D12 and nothing else
    const auto a = layer(0.4, 0.2, 1.2), b = layer(0.7, 0.3);
    double prev = closed(a, b, 0.3, {0.0, 0.0, 0.0});
    ASSERT_GT(prev, 0.0);
    for (double q = 0.5; q <= 5.0; q += 0.5) {
        const double c = closed(a, b, 0.3, {0.0, 0.0, q});
        EXPECT_LT(c, prev);
        prev = c;
    }
}

TEST(ConcurrenceClosedForm, RejectsInadmissibleTime) {
    EXPECT_THROW(closed(layer(0.4, 0.2), layer(0.7, 0.3), 10.0), PerturbativeError);
}

TEST(FullFormula, MatchesClosedFormOnRandomConfigurations) {
    const auto check = check_full_formula(31, 500);
    EXPECT_TRUE(check.passed) << check.max_residual;
}

TEST(FullFormula, UnitWeightVersionIsNotLayerSymmetric) {
    const ConcurrenceFormulaInput a{0.4, 0.2, 0.7, 0.3, 1.0, 1.0};
    const ConcurrenceFormulaInput b{0.7, 0.3, 0.4, 0.2, 1.0, 1.0};
    EXPECT_NEAR(concurrence_full_formula(a), concurrence_full_formula(b), 1e-14);
    EXPECT_GT(std::abs(concurrence_full_formula_as_printed(a) - concurrence_full_formula_as_printed(b)), 1e-3);
    const auto check = check_full_formula(31, 100, true);
    EXPECT_FALSE(check.passed);
}

TEST(Identical, Examples) {
    EXPECT_NEAR(concurrence_identical(0.5, 0.0, 0.3, 1.0), 0.0, 1e-16);
    EXPECT_NEAR(concurrence_identical(0.5, 0.2, kPi / 2.0, 1.0), 2.0 * 0.2 / std::hypot(0.5, 0.2), 1e-15);
    for (double dphi = 0.0; dphi < 3.2; dphi += 0.1)
        for (double lam : {0.0, 1e-4, 0.1, 2.0})
            EXPECT_GE(concurrence_identical(0.5, lam, dphi, 0.7), 0.0);
    EXPECT_THROW(concurrence_identical(0.0, 0.1, 0.0, 1.0), DomainError);
}

TEST(Identical, ConsistentWithClosedForm) {
    const auto check = check_identical_layers(8, 500);
    EXPECT_TRUE(check.passed) << check.max_residual;
}

TEST(SaturationThreshold, Examples) {
    EXPECT_DOUBLE_EQ(saturation_threshold(layer(0.5, 0.0), layer(0.5, 0.04)), 0.04);
    EXPECT_DOUBLE_EQ(saturation_threshold(layer(1e-3, 0.0), layer(2e-3, 0.1)), 0.05);
}

TEST(SaturationThreshold, ConcurrenceFlatBeyondThreshold) {
    // At dphi = pi/2 the concurrence stops changing exactly at the threshold.
    const auto strong = layer(1.0, 0.5);
    const double crit = saturation_threshold(layer(0.6, 0.0), strong);
    const double before = closed(layer(0.6, 0.9 * crit, kPi / 2.0), strong, 0.3);
    const double at = closed(layer(0.6, crit, kPi / 2.0), strong, 0.3);
    const double after = closed(layer(0.6, 2.0 * crit, kPi / 2.0), strong, 0.3);
    EXPECT_LT(before, at);
    EXPECT_NEAR(after, at, 1e-12);
}

TEST(ConcurrenceReport, ClosedFormAndOracleAgree) {
    const auto r = concurrence_report(layer(0.4, 0.2, 1.2), layer(0.7, 0.3), unit_cavity(), 0.3, {}, kNormalized);
    EXPECT_NEAR(r.closed_form, r.oracle, 1e-10);
    EXPECT_GE(r.closed_form, 0.0);
    EXPECT_LE(r.closed_form, 1.0);
}
