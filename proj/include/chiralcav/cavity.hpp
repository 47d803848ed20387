#pragma once

#include <cmath>
#include <string>

#include "constants.hpp"
#include "errors.hpp"

namespace chiralcav {

/// Handedness of the circularly polarized cavity mode.
/// `plus` is eps = (e_x + i e_y)/sqrt(2), `minus` its conjugate.
enum class Chirality : int { minus = -1, plus = +1 };

inline constexpr int sign(Chirality c) { return static_cast<int>(c); }
inline constexpr Chirality flipped(Chirality c)
{
    return c == Chirality::plus ? Chirality::minus : Chirality::plus;
}

/// Single-mode chiral cavity coupled to one charged particle.
/// All quantities in atomic units.
class CavityParams
{
public:
    CavityParams(double g, double omega_c, Chirality chirality = Chirality::plus,
                 double mass = au::electron_mass, double charge = -au::elementary_charge)
        : g_(g), omega_c_(omega_c), chirality_(chirality), mass_(mass), charge_(charge)
    {
        if (!(g >= 0.0) || std::isnan(g))
            throw InvalidParameter("cavity.g must be >= 0 (got " + std::to_string(g) + ")");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw InvalidParameter("cavity.omega_c must be > 0 and finite");
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw InvalidParameter("particle mass must be > 0 and finite");
        if (chirality != Chirality::plus && chirality != Chirality::minus)
            throw InvalidParameter("cavity.chirality must be +1 or -1");
        if (!std::isfinite(charge))
            throw InvalidParameter("particle charge must be finite");
    }

    double g() const { return g_; }
    double omega_c() const { return omega_c_; }
    Chirality chirality() const { return chirality_; }
    double mass() const { return mass_; }
    double charge() const { return charge_; }

    CavityParams with_g(double g) const { return {g, omega_c_, chirality_, mass_, charge_}; }
    CavityParams with_chirality(Chirality c) const { return {g_, omega_c_, c, mass_, charge_}; }
    CavityParams with_omega_c(double w) const { return {g_, w, chirality_, mass_, charge_}; }

private:
    double g_;
    double omega_c_;
    Chirality chirality_;
    double mass_;
    double charge_;
};

/// g / (1 + g^2), written so that g -> infinity is finite and the
/// expression is symmetric under g -> 1/g.
inline double coupling_factor(double g)
{
    if (g == 0.0) return 0.0;
    return 1.0 / (g + 1.0 / g);
}

/// Displacement length xi = g/(1+g^2) sqrt(hbar / (m omega_c)).
inline double derive_xi(const CavityParams& p)
{
    return coupling_factor(p.g()) * std::sqrt(au::hbar / (p.mass() * p.omega_c()));
}

struct EffectiveParams
{
    double mass;
    double frequency;
};

/// Renormalized mass and mode frequency, both scaled by (1 + g^2).
inline EffectiveParams derive_effective(const CavityParams& p)
{
    const double s = 1.0 + p.g() * p.g();
    return {p.mass() * s, p.omega_c() * s};
}

/// Signed product q A0, with A0 the single-mode field amplitude implied by g:
/// g^2 = (q A0)^2 / (m hbar omega_c). A neutral particle does not couple.
inline double charge_times_amplitude(const CavityParams& p)
{
    if (p.charge() == 0.0) return 0.0;
    const double magnitude = p.g() * std::sqrt(p.mass() * au::hbar * p.omega_c());
    return p.charge() < 0.0 ? -magnitude : magnitude;
}

} // namespace chiralcav
