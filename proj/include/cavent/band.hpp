// Two-band algebra of a gapped Dirac layer: dispersion, the chi mixing
// ratios, and the sublattice ladder operators written in the band basis.
//
// Band basis ordering throughout: index 0 = |+> (conduction),
// index 1 = |-> (valence).
#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "cavent/types.hpp"

namespace cavent {

using cd = std::complex<double>;

inline constexpr int band_index(int band) { return band == 1 ? 0 : 1; }

struct BandEnergies {
    double plus;
    double minus;
};

/// E(+-) = +-sqrt(eps^2 + delta^2).
inline BandEnergies band_energies(double epsilon, double delta) {
    if (!(epsilon > 0.0))
        throw DomainError("band_energies: epsilon must be > 0");
    const double e = std::hypot(epsilon, delta);
    return {e, -e};
}

/// chi(+-) = (E(+-) - delta) / eps, stored together with their difference.
struct ChiPair {
    double chi_plus;
    double chi_minus;
    double delta_chi;

    /// chi for a band index nu = +-1.
    [[nodiscard]] double of(int nu) const { return nu == 1 ? chi_plus : chi_minus; }
};

inline ChiPair chi_pair(double epsilon, double delta) {
    if (!(epsilon > 0.0))
        throw DomainError("chi_pair: epsilon must be > 0 (chi is singular at eps -> 0)");
    const auto [ep, em] = band_energies(epsilon, delta);
    // For delta >> eps the direct subtraction E+ - delta cancels; use the
    // conjugate form eps^2 / (E+ + delta) on whichever side is unstable.
    double cp = 0.0;
    double cm = 0.0;
    if (delta >= 0.0) {
        cp = epsilon / (ep + delta);
        cm = (em - delta) / epsilon;
    } else {
        cp = (ep - delta) / epsilon;
        cm = -epsilon / (ep - delta);
    }
    return {cp, cm, cp - cm};
}

/// The Pauli ladder operator of one layer in the {|+>, |->} basis.
struct BandOperator {
    Eigen::Matrix2cd matrix;
};

enum class Polarity { plus = +1, minus = -1 };

/// Sublattice states |A>, |B> expanded in the band basis.
struct SublatticeStates {
    Eigen::Vector2cd a;
    Eigen::Vector2cd b;
};

inline SublatticeStates sublattice_states(const ChiPair& chi, double angle) {
    const double sp = std::sqrt(1.0 + chi.chi_plus * chi.chi_plus);
    const double sm = std::sqrt(1.0 + chi.chi_minus * chi.chi_minus);
    const cd phase = std::polar(1.0, -angle);
    SublatticeStates s;
    s.a << cd(-chi.chi_minus * sp / chi.delta_chi), cd(chi.chi_plus * sm / chi.delta_chi);
    s.b << phase * sp / chi.delta_chi, -phase * sm / chi.delta_chi;
    return s;
}

/// sigma+ = |A><B|, sigma- = |B><A|, built as outer products in the band basis.
inline BandOperator sigma_band_operator(Polarity polarity, const ChiPair& chi, double angle) {
    const auto s = sublattice_states(chi, angle);
    if (polarity == Polarity::plus)
        return {s.a * s.b.adjoint()};
    return {s.b * s.a.adjoint()};
}

/// Band-basis matrix of sigma+- as a printed-style closed form, obtained by
/// simplifying the
/// outer products with chi+ chi- = -1:
///   sigma+- = e^{+-i phi}/dchi * [[1, chi(-+)], [chi(+-), -1]]
/// (rows/cols ordered |+>, |->). Used as a second route in tests.
inline Eigen::Matrix2cd sigma_band_closed_form(Polarity polarity, const ChiPair& chi, double angle) {
    const int sign = static_cast<int>(polarity);
    const cd phase = std::polar(1.0 / chi.delta_chi, sign * angle);
    Eigen::Matrix2cd m;
    m << phase * 1.0, phase * chi.of(-sign), phase * chi.of(sign), -phase;
    return m;
}

/// Literal evaluation of the printed band-basis action
///   sigma_l |nu> = e^{i l phi}/(2 dchi) sum_{nu'} nu' sqrt((1+chi_{nu'}^2)/(1+chi_nu^2))
///                  [(1-l) - (1-l) chi_{-nu'} chi_nu] |nu'>
/// returned as the column sigma_l |nu>. Kept only for comparison reports.
inline Eigen::Vector2cd printed_sigma_action(int lambda, int nu, const ChiPair& chi, double angle) {
    const cd phase = std::polar(1.0 / (2.0 * chi.delta_chi), lambda * angle);
    Eigen::Vector2cd out = Eigen::Vector2cd::Zero();
    for (int nup : {+1, -1}) {
        const double ratio = std::sqrt((1.0 + chi.of(nup) * chi.of(nup)) / (1.0 + chi.of(nu) * chi.of(nu)));
        const double bracket = (1.0 - lambda) - (1.0 - lambda) * chi.of(-nup) * chi.of(nu);
        out(band_index(nup)) = phase * static_cast<double>(nup) * ratio * bracket;
    }
    return out;
}

} // namespace cavent
