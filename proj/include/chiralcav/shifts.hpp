#pragma once

// Angular-momentum-dependent (AM) and cavity-Lamb (CL) spectral shifts.
//
//   AM = chirality (xi^2/2) l_z <(1/r) dV/dr>
//   CL = (xi^2/4) <lap V>
//
// Generic path: quadrature over numerically solved radial states.
// Analytic path: hydrogen and 2D oscillator closed forms.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "cavity.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "potential.hpp"
#include "radial.hpp"

namespace chiralcav {

enum class ShiftPath { analytic, numeric };

inline const char* to_string(ShiftPath p) { return p == ShiftPath::analytic ? "analytic" : "numeric"; }

struct ShiftResult
{
    double am_shift = 0.0;
    double cl_shift = 0.0;
    double total = 0.0;
    ShiftPath path = ShiftPath::analytic;
    double g = 0.0;
    double omega_c = 0.0;
    Chirality chirality = Chirality::plus;
    QuantumNumbers state;
    /// CL shift with the in-plane Laplacian instead of the full one (numeric path only).
    std::optional<double> cl_transverse;
};

inline ShiftResult make_shift(double am, double cl, ShiftPath path, const CavityParams& p, const QuantumNumbers& q)
{
    ShiftResult r;
    r.am_shift = am;
    r.cl_shift = cl;
    r.total = am + cl;
    r.path = path;
    r.g = p.g();
    r.omega_c = p.omega_c();
    r.chirality = p.chirality();
    r.state = q;
    return r;
}

inline double am_shift_generic(const RadialState& state, const CentralPotential& pot, const CavityParams& params)
{
    if (state.qn.l_z == 0) return 0.0;
    const double xi = derive_xi(params);
    return sign(params.chirality()) * 0.5 * xi * xi * state.qn.l_z * expectation_inv_r_dv(state, pot);
}

inline double cl_shift_generic(const RadialState& state, const CentralPotential& pot, const CavityParams& params)
{
    const double xi = derive_xi(params);
    return 0.25 * xi * xi * expectation_laplacian(state, pot);
}

/// Both shifts on a solved state, plus the transverse-Laplacian CL variant.
inline ShiftResult shift_generic(const RadialState& state, const CentralPotential& pot, const CavityParams& params)
{
    ShiftResult r = make_shift(am_shift_generic(state, pot, params), cl_shift_generic(state, pot, params),
                               ShiftPath::numeric, params, state.qn);
    const double xi = derive_xi(params);
    r.cl_transverse = 0.25 * xi * xi * expectation_transverse_laplacian(state, pot);
    return r;
}

/// Solve the state with the effective mass and evaluate both shifts.
inline ShiftResult shift_numeric(const CentralPotential& pot, const CavityParams& params, const QuantumNumbers& q)
{
    const double m_eff = derive_effective(params).mass;
    return shift_generic(solve_bound_state(pot, m_eff, q), pot, params);
}

/// How the hydrogen CL closed form is evaluated.
///   derived: (xi^2/4) 4 pi k |psi(0)|^2 = xi^2 k / (n^3 a^3)
///   printed: pi xi^2 k / (n^3 a^3), which carries an extra factor pi
enum class ClForm { derived, printed };

inline ShiftResult hydrogen_shift_closed_form(int n, int l, int l_z, const CavityParams& params, double k,
                                              ClForm cl_form = ClForm::derived)
{
    const QuantumNumbers q{n, l, l_z};
    validate(q, Dimension::three);
    if (!(k > 0.0)) throw InvalidParameter("coulomb strength k must be > 0");
    const double xi = derive_xi(params);
    const double m_eff = derive_effective(params).mass;
    const double a = au::hbar * au::hbar / (m_eff * k);
    const double a3n3 = a * a * a * n * n * n;

    double am = 0.0;
    if (l >= 1 && l_z != 0)
        am = sign(params.chirality()) * l_z * xi * xi * k / (2.0 * a3n3 * l * (l + 0.5) * (l + 1.0));
    double cl = 0.0;
    if (l == 0) cl = (cl_form == ClForm::printed ? std::numbers::pi : 1.0) * xi * xi * k / a3n3;
    return make_shift(am, cl, ShiftPath::analytic, params, q);
}

/// 2D oscillator V = m w^2 r^2 / 2 with states labeled by chiral occupations.
inline ShiftResult ho2d_shift_closed_form(int n_R, int n_L, const CavityParams& params, double m, double omega)
{
    const QuantumNumbers q = ho2d_label(n_R, n_L);
    if (!(m > 0.0) || !(omega > 0.0)) throw InvalidParameter("oscillator mass and frequency must be > 0");
    const double xi = derive_xi(params);
    const double spring = m * omega * omega;
    const double am = sign(params.chirality()) * 0.5 * xi * xi * spring * (n_R - n_L);
    const double cl = 0.5 * xi * xi * spring;
    return make_shift(am, cl, ShiftPath::analytic, params, q);
}

/// Bethe-style frequency window for the continuum integral.
struct LambCutoffs
{
    double omega_min = 0.0;
    double omega_max = 0.0;
};

struct LambResult
{
    double log_factor = 0.0;
    double omega_min = 0.0;
    double omega_max = 0.0;
    double laplacian = 0.0; ///< <lap V>
    double consistent = 0.0; ///< with the c^3 of the free-space mode density
    double literal = 0.0; ///< same prefactor without c^3
};

/// hbar w_min = hbar c pi / a and hbar w_max = m c^2 with a = hbar^2 / (m k).
inline LambCutoffs coulomb_lamb_cutoffs(double mass, double k)
{
    const double a = au::hbar * au::hbar / (mass * k);
    const double c = au::speed_of_light;
    return {c * std::numbers::pi / a, mass * c * c / au::hbar};
}

inline LambResult lamb_shift_continuum(const RadialState& state, const CentralPotential& pot, double mass,
                                       double charge, std::optional<LambCutoffs> cutoffs = std::nullopt)
{
    if (!(mass > 0.0)) throw InvalidParameter("lamb: mass must be > 0");
    LambCutoffs cut;
    if (cutoffs) {
        cut = *cutoffs;
    } else if (auto k = pot.coulomb_strength()) {
        cut = coulomb_lamb_cutoffs(mass, *k);
    } else {
        throw NonHydrogenicCutoffs("lamb: potential '" + pot.name() +
                                   "' is not Coulomb; supply omega_min and omega_max explicitly");
    }
    if (!(cut.omega_min > 0.0) || !(cut.omega_max > cut.omega_min))
        throw InvalidParameter("lamb: cutoffs need 0 < omega_min < omega_max");

    LambResult r;
    r.omega_min = cut.omega_min;
    r.omega_max = cut.omega_max;
    r.log_factor = std::log(cut.omega_max / cut.omega_min);
    r.laplacian = expectation_laplacian(state, pot);
    const double c = au::speed_of_light;
    const double pre = au::hbar * charge * charge / (8.0 * au::epsilon0 * std::numbers::pi * std::numbers::pi * mass * mass);
    r.literal = pre * r.log_factor * r.laplacian;
    r.consistent = r.literal / (c * c * c);
    return r;
}

} // namespace chiralcav
