#pragma once

// Physical constants (CODATA 2018) and unit conversions.
//
// All library internals work in Hartree atomic units:
//   hbar = m_e = e = 4 pi eps0 = 1,  c = 1/alpha.
// SI values appear only at the I/O boundary.

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace chiralcav {

namespace si {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double fine_structure = 7.2973525693e-3;
inline constexpr double hartree = 4.3597447222071e-18; // J
inline constexpr double rydberg = hartree / 2.0;       // J
inline constexpr double atomic_time = 2.4188843265857e-17; // s, hbar / E_h
} // namespace si

namespace au {
inline constexpr double hbar = 1.0;
inline constexpr double electron_mass = 1.0;
inline constexpr double elementary_charge = 1.0;
inline constexpr double epsilon0 = 1.0 / (4.0 * std::numbers::pi);
inline constexpr double fine_structure = si::fine_structure;
inline constexpr double speed_of_light = 1.0 / fine_structure;
inline constexpr double bohr_radius = 1.0;
inline constexpr double hartree = 1.0;
inline constexpr double rydberg = 0.5;
/// Coulomb constant e^2 / (4 pi eps0) for the hydrogen atom.
inline constexpr double coulomb_k = 1.0;
} // namespace au

namespace conv {
inline constexpr double hartree_in_ev = 27.211386245988;
inline constexpr double hartree_in_hz = 6.579683920502e15;
inline constexpr double hartree_in_inverse_cm = 219474.6313632;
} // namespace conv

enum class UnitMode { atomic, si };

/// Conversion between the internal atomic units and SI.
struct UnitSystem
{
    UnitMode mode = UnitMode::atomic;

    double energy_to_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value / si::hartree;
    }
    double energy_from_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value * si::hartree;
    }
    double length_to_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value / si::bohr_radius;
    }
    double length_from_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value * si::bohr_radius;
    }
    /// Angular frequency (rad/s in SI).
    double frequency_to_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value * si::atomic_time;
    }
    double frequency_from_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value / si::atomic_time;
    }
    double mass_to_atomic(double value) const
    {
        return mode == UnitMode::atomic ? value : value / si::electron_mass;
    }
};

/// Output units for energies.
enum class EnergyUnit { hartree, mev, ghz, inverse_cm };

inline double hartree_to(EnergyUnit unit, double value)
{
    switch (unit) {
    case EnergyUnit::hartree: return value;
    case EnergyUnit::mev: return value * conv::hartree_in_ev * 1e3;
    case EnergyUnit::ghz: return value * conv::hartree_in_hz * 1e-9;
    case EnergyUnit::inverse_cm: return value * conv::hartree_in_inverse_cm;
    }
    return value;
}

inline double to_hartree(EnergyUnit unit, double value)
{
    switch (unit) {
    case EnergyUnit::hartree: return value;
    case EnergyUnit::mev: return value / (conv::hartree_in_ev * 1e3);
    case EnergyUnit::ghz: return value / (conv::hartree_in_hz * 1e-9);
    case EnergyUnit::inverse_cm: return value / conv::hartree_in_inverse_cm;
    }
    return value;
}

inline std::string_view unit_label(EnergyUnit unit)
{
    switch (unit) {
    case EnergyUnit::hartree: return "hartree";
    case EnergyUnit::mev: return "meV";
    case EnergyUnit::ghz: return "GHz";
    case EnergyUnit::inverse_cm: return "cm-1";
    }
    return "hartree";
}

inline EnergyUnit parse_energy_unit(std::string_view text)
{
    if (text == "hartree") return EnergyUnit::hartree;
    if (text == "meV" || text == "mev") return EnergyUnit::mev;
    if (text == "GHz" || text == "ghz") return EnergyUnit::ghz;
    if (text == "cm-1" || text == "cm^-1" || text == "inverse_cm") return EnergyUnit::inverse_cm;
    throw InvalidParameter("unknown energy unit '" + std::string(text) +
                           "' (expected hartree, meV, GHz or cm-1)");
}

} // namespace chiralcav
