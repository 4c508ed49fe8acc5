// Core value types shared by every module: materials, electron states,
// cavity geometry, physical constants and the error hierarchy.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cavent {

// ── Errors ──────────────────────────────────────────────────────────────────

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evolution time too long for the second-order expansion to be a state.
class PerturbativeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Matrix that is not a valid density matrix within tolerance.
class InvalidStateError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Numerical routine failed (non-convergence, step underflow).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ── Physical constants ──────────────────────────────────────────────────────

/// CODATA 2018 exact/recommended values, SI.
struct PhysicalConstants {
    double elementary_charge = 1.602176634e-19;   // C
    double hbar = 1.054571817e-34;                // J s
    double vacuum_permittivity = 8.8541878128e-12; // F/m
    double electron_volt = 1.602176634e-19;        // J per eV
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// ── Domain types ────────────────────────────────────────────────────────────

struct Material {
    std::string name;
    double fermi_velocity = 1.0e6; // m/s
    double soi_strength = 0.0;     // eV, intrinsic lambda_so

    void validate() const {
        if (!(fermi_velocity > 0.0))
            throw DomainError("material '" + name + "': fermi_velocity must be > 0");
        if (!(soi_strength >= 0.0))
            throw DomainError("material '" + name + "': soi_strength must be >= 0");
    }
};

/// One electron in one layer. `energy` is the kinetic scale hbar*v_f*|k|.
struct ElectronState {
    double energy = 1.0e-3; // eV
    double angle = 0.0;     // rad, momentum azimuth
    int spin = +1;
    int valley = +1;
    int band = +1;

    void validate() const {
        if (!(energy > 0.0))
            throw DomainError("electron energy must be > 0");
        auto unit = [](int v) { return v == 1 || v == -1; };
        if (!unit(spin) || !unit(valley) || !unit(band))
            throw DomainError("spin, valley and band must each be +1 or -1");
    }
};

struct CavityGeometry {
    double length = 1.0e-6;  // m
    double z1 = 0.4e-6;      // m, position of layer 1
    double z2 = 0.6e-6;      // m, position of layer 2
    int n_max = 1;
    double light_speed = kSpeedOfLight; // m/s
    double mode_volume = 6.25e-14;      // m^3

    void validate() const {
        if (!(length > 0.0))
            throw DomainError("cavity length must be > 0");
        if (!(z1 > 0.0 && z1 < length))
            throw DomainError("z1 must lie strictly inside (0, length)");
        if (!(z2 > 0.0 && z2 < length))
            throw DomainError("z2 must lie strictly inside (0, length)");
        if (n_max < 1)
            throw DomainError("n_max must be >= 1");
        if (!(light_speed > 0.0))
            throw DomainError("light_speed must be > 0");
        if (!(mode_volume > 0.0))
            throw DomainError("mode_volume must be > 0");
    }
};

/// A layer: material, the electron it hosts and where it sits in the cavity.
struct LayerConfig {
    Material material;
    ElectronState electron;

    /// Mass term eta*s*lambda_so, eV.
    [[nodiscard]] double mass() const {
        return electron.valley * electron.spin * material.soi_strength;
    }

    void validate() const {
        material.validate();
        electron.validate();
    }
};

/// How the light-matter prefactor (e*gamma/hbar)^2 v_i v_j is evaluated.
/// Normalized mode sets it to 1 for every layer pair.
struct Coupling {
    bool normalized = false;
    PhysicalConstants constants{};
};

/// In-plane momentum transfer used in each propagator (1/m).
struct PropagatorMomenta {
    double q11 = 0.0;
    double q22 = 0.0;
    double q12 = 0.0;

    static PropagatorMomenta uniform(double q) { return {q, q, q}; }
};

} // namespace cavent
