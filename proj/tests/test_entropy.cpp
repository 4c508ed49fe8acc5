#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cavent/entropy.hpp"
#include "cavent/oracle.hpp"
#include "cavent/scenario.hpp"

using namespace cavent;

namespace {

DensityMatrix diag2(double a, double b) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return DensityMatrix(m);
}

LayerConfig layer(double eps, double lambda, double v = 1.0, double angle = 0.0) {
    LayerConfig l;
    l.material = {"test", v, lambda};
    l.electron.energy = eps;
    l.electron.angle = angle;
    return l;
}

CavityGeometry symmetric_cavity() {
    CavityGeometry c;
    c.length = 1.0;
    c.z1 = 0.3;
    c.z2 = 0.7;
    c.light_speed = 1.0;
    c.n_max = 1;
    return c;
}

const Coupling kNormalized{true, {}};

} // namespace

TEST(EntropyExact, Examples) {
    EXPECT_EQ(entropy_exact(diag2(1.0, 0.0)), 0.0);
    EXPECT_NEAR(entropy_exact(diag2(0.5, 0.5)), std::log(2.0), 1e-15);
    EXPECT_NEAR(entropy_exact(diag2(0.9, 0.1)), 0.3251, 1e-4);
    EXPECT_NEAR(entropy_exact(diag2(0.9, 0.1)), -0.1 * std::log(0.1) - 0.9 * std::log(0.9), 1e-15);
}

TEST(EntropyExact, ClampWindow) {
    EXPECT_EQ(entropy_exact(diag2(1.0 + 5e-11, -5e-11)), 0.0);
    EXPECT_THROW(entropy_exact(diag2(1.01, -0.01)), InvalidStateError);
}

TEST(EntropyExact, UnitaryInvariance) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Eigen::Matrix2cd rho;
    rho << 0.8, cd(0.1, -0.05), cd(0.1, 0.05), 0.2;
    const double s0 = entropy_exact(DensityMatrix(Eigen::MatrixXcd(rho)));
    for (int k = 0; k < 50; ++k) {
        Eigen::Matrix2cd a;
        a << cd(g(rng), g(rng)), cd(g(rng), g(rng)), cd(g(rng), g(rng)), cd(g(rng), g(rng));
        const Eigen::Matrix2cd u = Eigen::HouseholderQR<Eigen::Matrix2cd>(a).householderQ();
        Eigen::Matrix2cd r = u * rho * u.adjoint();
        r = 0.5 * (r + r.adjoint()).eval();
        EXPECT_NEAR(entropy_exact(DensityMatrix(Eigen::MatrixXcd(r))), s0, 1e-12);
    }
}

TEST(EntropyExact, BoundedForAdmissibleTimes) {
    const auto c = compute_coefficients(layer(0.7, 0.4), layer(1.1, 0.2), symmetric_cavity(), {}, kNormalized);
    const double tmax = std::sqrt(kAdmissibleWarn / std::max(c.l1, c.l2));
    for (int i = 0; i <= 100; ++i) {
        const auto rho = rho_total(c, tmax * i / 100.0);
        for (int keep : {1, 2}) {
            const double s = entropy_exact(reduce(rho, keep));
            EXPECT_GE(s, 0.0);
            EXPECT_LE(s, std::log(2.0) + 1e-15);
        }
    }
}

TEST(EntropyExact, ReducedEigenvaluesMatchClosedForm) {
    const auto c = compute_coefficients(layer(0.7, 0.4), layer(1.1, 0.2), symmetric_cavity(), {}, kNormalized);
    const double t = 0.5;
    const auto ev = reduce(rho_total(c, t), 2).eigenvalues();
    const auto [pp, pm] = reduced_eigenvalues(t, c.l2, c.b2);
    EXPECT_NEAR(ev(1), pp, 1e-14);
    EXPECT_NEAR(ev(0), pm, 1e-14);
    EXPECT_NEAR(pp + pm, 1.0, 1e-12);
}

TEST(EntropyExpansion, HandValues) {
    const double l = 2.0;
    const double t = std::sqrt(std::exp(-1.0) / l);
    const auto e = entropy_expansion(t, l, 0.0);
    EXPECT_NEAR(e.leading, 2.0 * std::exp(-1.0), 1e-15); // above ln 2 is a truncation artifact
    EXPECT_NEAR(e.with_coherence - e.leading, std::pow(t, 4) * l * l / 2.0, 1e-15);
    const auto z = entropy_expansion(0.0, l, 0.3);
    EXPECT_EQ(z.leading, 0.0);
    EXPECT_EQ(z.with_coherence, 0.0);
    EXPECT_THROW(entropy_expansion(1.0, 2.0, 0.0), DomainError);
}

TEST(EntropyExpansion, CoherenceLowersEntropy) {
    // With t and L fixed, a nonzero B lowers both the exact entropy and the
    // corrected expansion.
    const double t = 0.1, l = 3.0;
    for (double b : {0.05, 0.3, 1.0}) {
        const auto [p0, m0] = reduced_eigenvalues(t, l, 0.0);
        const auto [p1, m1] = reduced_eigenvalues(t, l, b);
        EXPECT_LT(-p1 * std::log(p1) - m1 * std::log(m1), -p0 * std::log(p0) - m0 * std::log(m0));
        EXPECT_LT(entropy_expansion(t, l, b).with_coherence, entropy_expansion(t, l, 0.0).with_coherence);
    }
}

TEST(EntropyRate, Examples) {
    const double l = 5.0;
    const double t = std::sqrt(std::exp(-1.0) / l);
    EXPECT_NEAR(entropy_rate(t, l), 4.0 * t * l, 1e-13);
    for (double x : {1e-6, 1e-3, 0.2, 0.9}) {
        const double tt = std::sqrt(x / l);
        EXPECT_GT(entropy_rate(tt, l), 0.0);
        EXPECT_NEAR(entropy_rate(tt, l) - entropy_rate_of_leading_term(tt, l), 2.0 * tt * l, 1e-12);
    }
    EXPECT_THROW(entropy_rate(0.0, l), DomainError);
}

TEST(EntropyRate, LeadingTermDerivativeMatchesFiniteDifference) {
    const double l = 4e17, t = 4e-10;
    const auto d = finite_difference_check([l](double tt) { return entropy_expansion(tt, l, 0.0).leading; }, t,
                                           1e-3 * t);
    EXPECT_NEAR(d.richardson / entropy_rate_of_leading_term(t, l), 1.0, 1e-6);
    EXPECT_GT(std::abs(d.richardson / entropy_rate(t, l) - 1.0), 1e-3);
}

TEST(EntropyAsymmetry, IdenticalSymmetricLayersGiveZero) {
    const auto a = entropy_asymmetry(layer(0.5, 0.1), layer(0.5, 0.1), symmetric_cavity(), 0.3, {}, kNormalized);
    EXPECT_NEAR(a.leading, 0.0, 1e-15);
    EXPECT_NEAR(a.exact, 0.0, 1e-14);
}

TEST(EntropyAsymmetry, FasterLayerEntangledMore) {
    const auto cav = symmetric_cavity();
    const auto l1 = layer(0.5, 0.1, 1.2e6), l2 = layer(0.5, 0.1, 1.0e6);
    const auto c = compute_coefficients(l1, l2, cav);
    const auto a = entropy_asymmetry(l1, l2, cav, 0.1 / std::sqrt(std::max(c.l1, c.l2)));
    EXPECT_GT(a.leading, 0.0);
}

TEST(EntropyAsymmetry, SignAgreesWithExactOnMildAsymmetry) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    for (int k = 0; k < 100; ++k) {
        CavityGeometry c = symmetric_cavity();
        c.length = 1e-6;
        c.z1 = 0.3e-6;
        c.z2 = 0.7e-6 + (u(rng) - 0.5) * 0.02e-6;
        c.n_max = 1 + k % 3;
        c.light_speed = kSpeedOfLight;
        c.mode_volume = 6.25e-14;
        const double eps = 1e-3 * (0.5 + u(rng));
        const double lam = 1e-4 * (0.5 + u(rng));
        const auto l1 = layer(eps, lam, 1e6 * (1.0 + 0.05 * (u(rng) - 0.5)));
        const auto l2 = layer(eps, lam, 1e6 * (1.0 + 0.05 * (u(rng) - 0.5)));
        const auto coeff = compute_coefficients(l1, l2, c);
        const double t = std::sqrt(0.2 / std::max(coeff.l1, coeff.l2));
        const auto a = entropy_asymmetry(l1, l2, c, t);
        agree += (a.leading > 0.0) == (a.exact > 0.0);
    }
    EXPECT_EQ(agree, 100);
}

TEST(MutualInformation, Examples) {
    EXPECT_EQ(mutual_information(0.0, 0.0), 0.0);
    const auto c = compute_coefficients(layer(0.5, 0.1), layer(0.5, 0.1), symmetric_cavity(), {}, kNormalized);
    const auto rho = rho_total(c, 0.3);
    const double s = entropy_exact(reduce(rho, 1));
    EXPECT_NEAR(entropy_exact(reduce(rho, 2)), s, 1e-14);
    EXPECT_NEAR(mutual_information(s, entropy_exact(reduce(rho, 2))), 2.0 * s, 1e-14);
    EXPECT_THROW(mutual_information(-0.1, 0.2), DomainError);
}

TEST(MutualInformation, JointEntropyIsComparableToMarginals) {
    // The closed-form state is mixed at order t^2 with populations
    // t^2 L1 and t^2 L2, so S12 ~ h(t^2 (L1 + L2)), of the same order as
    // S1 + S2 rather than negligible next to it.
    const auto c = compute_coefficients(layer(0.5, 0.1), layer(0.8, 0.3), symmetric_cavity(), {}, kNormalized);
    for (double frac : {1e-4, 1e-2, 0.1}) {
        const double t = std::sqrt(frac / std::max(c.l1, c.l2));
        const auto rho = rho_total(c, t, {.diagonal_approximation = true});
        const auto ev = rho.eigenvalues();
        double s12 = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            s12 -= detail::xlogx(std::max(0.0, ev(i)));
        const double s1 = entropy_exact(reduce(rho, 1)), s2 = entropy_exact(reduce(rho, 2));
        EXPECT_GT(s12, 0.05 * (s1 + s2)) << frac;
        EXPECT_LT(s12, s1 + s2) << frac;
    }
}

TEST(EntropyReport, FieldsConsistent) {
    const auto c = compute_coefficients(layer(0.5, 0.1), layer(0.8, 0.3), symmetric_cavity(), {}, kNormalized);
    const auto r = entropy_report(c, 0.3, 2);
    EXPECT_NEAR(r.eigenvalues[0] + r.eigenvalues[1], 1.0, 1e-12);
    EXPECT_GE(r.exact, 0.0);
    EXPECT_GT(r.rate, 0.0);
    const auto z = entropy_report(c, 0.0, 1);
    EXPECT_EQ(z.exact, 0.0);
    EXPECT_EQ(z.rate, 0.0);
}
