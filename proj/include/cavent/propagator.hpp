// Equal-time cavity photon propagator: a sum over standing-wave modes
// sin(n pi z_i/L) sin(n pi z_j/L) / omega_{n,q}.
#pragma once

#include <algorithm>
#include <cmath>

#include "cavent/types.hpp"

namespace cavent {

/// omega_{n,q} = c sqrt(q^2 + (n pi / L)^2).
inline double mode_frequency(const CavityGeometry& cavity, int n, double q) {
    const double kz = n * kPi / cavity.length;
    return cavity.light_speed * std::sqrt(q * q + kz * kz);
}

/// The n-th summand of the propagator.
inline double propagator_term(const CavityGeometry& cavity, double zi, double zj, double q, int n) {
    const double kz = n * kPi / cavity.length;
    return std::sin(kz * zj) * std::sin(kz * zi) / mode_frequency(cavity, n, q);
}

/// Delta_ij(q) in seconds. Terms are accumulated in increasing n, so raising
/// n_max by one adds exactly the next summand.
inline double photon_propagator(const CavityGeometry& cavity, double zi, double zj, double q = 0.0) {
    if (!(zi >= 0.0 && zi <= cavity.length) || !(zj >= 0.0 && zj <= cavity.length))
        throw DomainError("photon_propagator: positions must lie in [0, L]");
    if (!(q >= 0.0))
        throw DomainError("photon_propagator: q must be >= 0");
    if (cavity.n_max < 1)
        throw DomainError("photon_propagator: n_max must be >= 1");
    // Multiplication commutes exactly in IEEE arithmetic, so ordering the
    // two sines canonically makes the result bitwise symmetric in (zi, zj).
    const double lo = std::min(zi, zj);
    const double hi = std::max(zi, zj);
    double sum = 0.0;
    for (int n = 1; n <= cavity.n_max; ++n)
        sum += propagator_term(cavity, lo, hi, q, n);
    return sum;
}

/// |z2 - z1| / c, the photon flight time between the layers.
inline double time_of_flight(const CavityGeometry& cavity) {
    if (cavity.z1 == cavity.z2)
        throw DomainError("time_of_flight: layers coincide (z1 == z2)");
    return std::abs(cavity.z2 - cavity.z1) / cavity.light_speed;
}

/// The three propagators entering the density matrix.
struct Propagators {
    double delta11;
    double delta22;
    double delta12;
};

inline Propagators propagators(const CavityGeometry& cavity, const PropagatorMomenta& q = {}) {
    return {photon_propagator(cavity, cavity.z1, cavity.z1, q.q11),
            photon_propagator(cavity, cavity.z2, cavity.z2, q.q22),
            photon_propagator(cavity, cavity.z1, cavity.z2, q.q12)};
}

} // namespace cavent
