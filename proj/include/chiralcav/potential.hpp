#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include "constants.hpp"
#include "errors.hpp"

namespace chiralcav {

enum class Dimension : int { two = 2, three = 3 };

/// Quantum numbers of a central-potential bound state.
///
/// 3D: hydrogen convention, n >= 1, 0 <= l < n, |l_z| <= l; n - l - 1 radial nodes.
/// 2D: n is the radial quantum number (node count), l = |l_z|.
struct QuantumNumbers
{
    int n = 1;
    int l = 0;
    int l_z = 0;

    friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

/// 2D oscillator label (n_R, n_L) -> radial quantum numbers.
/// n_R counts l_z = +1 quanta, n_L counts l_z = -1 quanta.
inline QuantumNumbers ho2d_label(int n_R, int n_L)
{
    if (n_R < 0 || n_L < 0)
        throw InvalidQuantumNumbers("oscillator occupations must be >= 0");
    const int lz = n_R - n_L;
    return {std::min(n_R, n_L), std::abs(lz), lz};
}

inline void validate(const QuantumNumbers& q, Dimension dim)
{
    if (dim == Dimension::three) {
        if (q.n < 1 || q.l < 0 || q.l >= q.n || std::abs(q.l_z) > q.l)
            throw InvalidQuantumNumbers("need n >= 1, 0 <= l < n, |l_z| <= l (got n=" +
                                        std::to_string(q.n) + ", l=" + std::to_string(q.l) +
                                        ", l_z=" + std::to_string(q.l_z) + ")");
    } else {
        if (q.n < 0 || q.l != std::abs(q.l_z))
            throw InvalidQuantumNumbers("2D states need radial n >= 0 and l = |l_z| (got n=" +
                                        std::to_string(q.n) + ", l=" + std::to_string(q.l) +
                                        ", l_z=" + std::to_string(q.l_z) + ")");
    }
}

inline int radial_nodes(const QuantumNumbers& q, Dimension dim)
{
    return dim == Dimension::three ? q.n - q.l - 1 : q.n;
}

/// Behaviour contract of a central potential V(r).
///
/// `laplacian` is the smooth part for r > 0; a point source at the origin is
/// carried separately as the coefficient of delta(r) so that no grid has to
/// resolve it.
class CentralPotential
{
public:
    virtual ~CentralPotential() = default;

    virtual double v(double r) const = 0;
    virtual double dv_dr(double r) const = 0;
    virtual double d2v_dr2(double r) const = 0;
    virtual double laplacian(double r) const = 0;
    virtual double origin_delta_strength() const { return 0.0; }
    virtual Dimension dimension() const = 0;
    virtual std::string name() const = 0;

    /// Coulomb constant k when the potential is exactly -k/r.
    virtual std::optional<double> coulomb_strength() const { return std::nullopt; }

    /// Characteristic length for a particle of the given mass.
    virtual double length_scale(double mass) const = 0;

    /// Outer grid radius that comfortably contains the given state.
    virtual double default_r_max(double mass, const QuantumNumbers& q) const = 0;
};

using PotentialPtr = std::shared_ptr<const CentralPotential>;

namespace detail {
inline void require_positive_radius(double r)
{
    if (!(r > 0.0))
        throw InvalidParameter("potential evaluated at r <= 0 (r=" + std::to_string(r) + ")");
}
} // namespace detail

/// V(r) = -k/r in three dimensions; Laplacian is 4 pi k delta(r).
class CoulombPotential final : public CentralPotential
{
public:
    explicit CoulombPotential(double k) : k_(k)
    {
        if (!(k > 0.0)) throw InvalidParameter("coulomb k must be > 0");
    }

    double v(double r) const override
    {
        detail::require_positive_radius(r);
        return -k_ / r;
    }
    double dv_dr(double r) const override
    {
        detail::require_positive_radius(r);
        return k_ / (r * r);
    }
    double d2v_dr2(double r) const override
    {
        detail::require_positive_radius(r);
        return -2.0 * k_ / (r * r * r);
    }
    double laplacian(double r) const override
    {
        detail::require_positive_radius(r);
        return 0.0;
    }
    double origin_delta_strength() const override { return 4.0 * std::numbers::pi * k_; }
    Dimension dimension() const override { return Dimension::three; }
    std::string name() const override { return "coulomb"; }
    std::optional<double> coulomb_strength() const override { return k_; }

    double length_scale(double mass) const override { return au::hbar * au::hbar / (mass * k_); }
    double default_r_max(double mass, const QuantumNumbers& q) const override
    {
        return 50.0 * q.n * q.n * length_scale(mass);
    }

    double k() const { return k_; }

private:
    double k_;
};

/// V(r) = m w^2 r^2 / 2 in the plane. The spring constant m w^2 is fixed by
/// (m, w); a particle of a different mass sees a different frequency.
class Harmonic2DPotential final : public CentralPotential
{
public:
    Harmonic2DPotential(double mass, double omega) : mass_(mass), omega_(omega)
    {
        if (!(mass > 0.0) || !(omega > 0.0))
            throw InvalidParameter("harmonic mass and omega must be > 0");
    }

    double v(double r) const override { return 0.5 * spring() * r * r; }
    double dv_dr(double r) const override { return spring() * r; }
    double d2v_dr2(double) const override { return spring(); }
    double laplacian(double) const override { return 2.0 * spring(); }
    Dimension dimension() const override { return Dimension::two; }
    std::string name() const override { return "harmonic2d"; }

    double length_scale(double mass) const override
    {
        return std::sqrt(au::hbar / (mass * frequency_for(mass)));
    }
    double default_r_max(double mass, const QuantumNumbers& q) const override
    {
        const double energy = au::hbar * frequency_for(mass) * (2 * q.n + std::abs(q.l_z) + 1);
        return 10.0 * std::sqrt(2.0 * energy / spring());
    }

    double mass() const { return mass_; }
    double omega() const { return omega_; }
    double spring() const { return mass_ * omega_ * omega_; }
    double frequency_for(double mass) const { return std::sqrt(spring() / mass); }

private:
    double mass_;
    double omega_;
};

/// Yukawa potential V(r) = -k exp(-r/lambda) / r: Coulomb-like at the origin,
/// short ranged outside.
class ScreenedCoulombPotential final : public CentralPotential
{
public:
    ScreenedCoulombPotential(double k, double screening_length) : k_(k), lambda_(screening_length)
    {
        if (!(k > 0.0) || !(screening_length > 0.0))
            throw InvalidParameter("screened coulomb needs k > 0 and screening_length > 0");
    }

    double v(double r) const override
    {
        detail::require_positive_radius(r);
        return -k_ * std::exp(-r / lambda_) / r;
    }
    double dv_dr(double r) const override
    {
        detail::require_positive_radius(r);
        return k_ * std::exp(-r / lambda_) * (1.0 / (r * r) + 1.0 / (lambda_ * r));
    }
    double d2v_dr2(double r) const override
    {
        detail::require_positive_radius(r);
        return -k_ * std::exp(-r / lambda_) *
               (2.0 / (r * r * r) + 2.0 / (lambda_ * r * r) + 1.0 / (lambda_ * lambda_ * r));
    }
    double laplacian(double r) const override
    {
        detail::require_positive_radius(r);
        return -k_ * std::exp(-r / lambda_) / (lambda_ * lambda_ * r);
    }
    double origin_delta_strength() const override { return 4.0 * std::numbers::pi * k_; }
    Dimension dimension() const override { return Dimension::three; }
    std::string name() const override { return "screened-coulomb"; }

    double length_scale(double mass) const override { return au::hbar * au::hbar / (mass * k_); }
    double default_r_max(double mass, const QuantumNumbers& q) const override
    {
        return 50.0 * q.n * q.n * length_scale(mass);
    }

    double k() const { return k_; }
    double screening_length() const { return lambda_; }

private:
    double k_;
    double lambda_;
};

inline PotentialPtr coulomb_potential(double k) { return std::make_shared<CoulombPotential>(k); }

inline PotentialPtr harmonic2d_potential(double mass, double omega)
{
    return std::make_shared<Harmonic2DPotential>(mass, omega);
}

inline PotentialPtr screened_coulomb_potential(double k, double screening_length)
{
    return std::make_shared<ScreenedCoulombPotential>(k, screening_length);
}

} // namespace chiralcav
