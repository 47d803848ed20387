#pragma once

// Two-level vacuum Rabi dynamics in the cavity interaction picture.
//
// |1> = |e>|0 photons>, |2> = |g>|1 photon>. In the interaction picture
//   i hbar dc/dt = [[g11, g12 e^{-i w t}], [g21 e^{i w t}, g22]] c
// with w = omega_tilde = (E_g + hbar w_eff - E_e)/hbar and c(0) = (1, 0).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "angular.hpp"
#include "cavity.hpp"
#include "errors.hpp"
#include "radial.hpp"
#include "shifts.hpp"

namespace chiralcav {

using cplx = std::complex<double>;

struct TwoLevelConfig
{
    QuantumNumbers state_e;
    QuantumNumbers state_g;
    double omega_tilde = 0.0;
    std::array<std::array<cplx, 2>, 2> gamma{}; ///< gamma[i][j] = <i| dV |j>

    void validate() const
    {
        if (!std::isfinite(omega_tilde)) throw InvalidParameter("omega_tilde must be finite");
        const double scale = std::max({std::abs(gamma[0][0]), std::abs(gamma[1][1]), std::abs(gamma[0][1]), 1e-300});
        if (std::abs(gamma[0][1] - std::conj(gamma[1][0])) > 1e-14 * scale ||
            std::abs(gamma[0][0].imag()) > 1e-14 * scale || std::abs(gamma[1][1].imag()) > 1e-14 * scale)
            throw InvalidParameter("gamma must be Hermitian");
    }

    cplx gamma12() const { return gamma[0][1]; }
};

/// Angular factor of <e| sin(theta) e^{i s phi} |g> (3D) or <e| e^{i s phi} |g> (2D).
inline double chiral_angular_factor(const QuantumNumbers& e, const QuantumNumbers& g, Dimension dim, int s)
{
    if (dim == Dimension::two) return phase_element_2d(e.l_z, g.l_z, s);
    return sin_theta_phase_element(e.l, e.l_z, g.l, g.l_z, s);
}

/// Integral of u_e (dV/dr) u_g dr; both states on one grid.
inline double radial_dv_element(const RadialState& e, const RadialState& g, const CentralPotential& pot)
{
    if (!(e.grid == g.grid)) throw InvalidParameter("gamma12: states must share a radial grid");
    if (e.dimension != g.dimension) throw InvalidParameter("gamma12: states differ in dimension");
    double sum = 0.0;
    for (std::size_t i = 0; i < e.r.size(); ++i) sum += e.weights[i] * e.u[i] * pot.dv_dr(e.r[i]) * g.u[i];
    return sum;
}

/// gamma12 = <e,0| xi pi.grad V |g,1> = -i (xi/sqrt2) <e| (dV/dr) sin(theta) e^{i chirality phi} |g>,
/// without the sin(theta) in 2D.
inline cplx gamma12_am(const RadialState& e, const RadialState& g, const CentralPotential& pot,
                       const CavityParams& params)
{
    const double ang = chiral_angular_factor(e.qn, g.qn, e.dimension, sign(params.chirality()));
    if (ang == 0.0) return {0.0, 0.0};
    const double xi = derive_xi(params);
    return cplx(0.0, -xi / std::sqrt(2.0) * radial_dv_element(e, g, pot) * ang);
}

inline bool selection_rule_allows(const QuantumNumbers& e, const QuantumNumbers& g, Chirality c)
{
    return e.l_z - g.l_z == sign(c);
}

/// Two-level configuration from solved states. gamma11 carries the shifts of
/// |e> with no photon; gamma22 those of |g> with one photon, where the CL part
/// picks up the (2 n_ph + 1) = 3 factor.
inline TwoLevelConfig make_two_level(const RadialState& e, const RadialState& g, const CentralPotential& pot,
                                     const CavityParams& params, bool allow_forbidden = false)
{
    if (!allow_forbidden && !selection_rule_allows(e.qn, g.qn, params.chirality()))
        throw InvalidQuantumNumbers("selection rule: l_z(e) - l_z(g) must equal chirality (" +
                                    std::to_string(sign(params.chirality())) + "), got " +
                                    std::to_string(e.qn.l_z - g.qn.l_z));
    TwoLevelConfig c;
    c.state_e = e.qn;
    c.state_g = g.qn;
    const double w_eff = derive_effective(params).frequency;
    c.omega_tilde = (g.energy + au::hbar * w_eff - e.energy) / au::hbar;
    c.gamma[0][0] = am_shift_generic(e, pot, params) + cl_shift_generic(e, pot, params);
    c.gamma[1][1] = am_shift_generic(g, pot, params) + 3.0 * cl_shift_generic(g, pot, params);
    c.gamma[0][1] = gamma12_am(e, g, pot, params);
    c.gamma[1][0] = std::conj(c.gamma[0][1]);
    return c;
}

/// |g12|^2 sin^2(w t) / (hbar w)^2, as printed.
inline double rabi_probability_paper(cplx gamma12, double omega_tilde, double t)
{
    const double g2 = std::norm(gamma12) / (au::hbar * au::hbar);
    const double x = omega_tilde * t;
    if (std::abs(x) < 1e-4) return g2 * t * t * (1.0 - x * x / 3.0);
    const double s = std::sin(x) / omega_tilde;
    return g2 * s * s;
}

/// |g12 int_0^t e^{-i w tau} dtau / hbar|^2 = 4 |g12|^2 sin^2(w t/2) / (hbar w)^2.
inline double rabi_probability_first_order(cplx gamma12, double omega_tilde, double t)
{
    const double g2 = std::norm(gamma12) / (au::hbar * au::hbar);
    const double x = 0.5 * omega_tilde * t;
    if (std::abs(x) < 1e-4) return g2 * t * t * (1.0 - x * x / 3.0);
    const double s = 2.0 * std::sin(x) / omega_tilde;
    return g2 * s * s;
}

struct DirectOptions
{
    // Tighter than 1e-10 so the norm drift over long windows stays below 1e-10.
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double max_steps = 1e6;
};

struct DirectResult
{
    std::vector<double> probability; ///< |c_2|^2 at each requested time
    double max_norm_defect = 0.0;    ///< max ||c|^2 - 1|
};

/// Integrates the interaction-picture equation with dopri5 and dense output.
inline DirectResult rabi_probability_direct(const TwoLevelConfig& cfg, const std::vector<double>& times,
                                            const DirectOptions& opts = {})
{
    namespace ode = boost::numeric::odeint;
    cfg.validate();
    if (times.empty()) return {};
    for (std::size_t i = 0; i < times.size(); ++i)
        if (!std::isfinite(times[i]) || times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
            throw InvalidParameter("rabi times must be finite, non-negative and ascending");

    using State = std::array<cplx, 2>;
    const cplx minus_i_over_hbar(0.0, -1.0 / au::hbar);
    const double w = cfg.omega_tilde;
    const auto& G = cfg.gamma;
    const auto rhs = [&](const State& c, State& dc, double t) {
        const cplx ph = std::polar(1.0, -w * t);
        dc[0] = minus_i_over_hbar * (G[0][0] * c[0] + G[0][1] * ph * c[1]);
        dc[1] = minus_i_over_hbar * (G[1][0] * std::conj(ph) * c[0] + G[1][1] * c[1]);
    };

    DirectResult out;
    out.probability.reserve(times.size());
    State c{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    std::vector<double> grid = times;
    const bool prepend = grid.front() > 0.0;
    if (prepend) grid.insert(grid.begin(), 0.0);

    const auto observe = [&](const State& s, double) {
        out.probability.push_back(std::norm(s[1]));
        out.max_norm_defect = std::max(out.max_norm_defect, std::abs(std::norm(s[0]) + std::norm(s[1]) - 1.0));
    };
    const double span = grid.back();
    const double scale = std::max({std::abs(w), std::abs(G[0][0]), std::abs(G[1][1]), std::abs(G[0][1]), 1e-300});
    const double dt0 = std::min(span > 0.0 ? span : 1.0, 0.01 / scale);
    try {
        auto stepper = ode::make_dense_output(opts.abs_tol, opts.rel_tol, ode::runge_kutta_dopri5<State>());
        ode::integrate_times(stepper, rhs, c, grid.begin(), grid.end(), dt0, observe,
                             ode::max_step_checker(static_cast<int>(opts.max_steps)));
    } catch (const ode::odeint_error& e) {
        throw StepSizeUnderflow(std::string("rabi integrator: ") + e.what());
    }
    if (prepend) out.probability.erase(out.probability.begin());
    for (double& p : out.probability) p = std::clamp(p, 0.0, 1.0);
    return out;
}

inline double rabi_probability_direct(const TwoLevelConfig& cfg, double t, const DirectOptions& opts = {})
{
    return rabi_probability_direct(cfg, std::vector<double>{t}, opts).probability.front();
}

struct RabiRow
{
    double t = 0.0;
    double p_paper = 0.0;
    double p_first_order = 0.0;
    double p_direct = 0.0;
};

struct RabiComparison
{
    std::vector<RabiRow> rows;
    double coupling_ratio = 0.0;      ///< |g12| / (hbar w)
    double dev_first_order = 0.0;     ///< max |P_direct - P_first| / max P_first
    double dev_paper = 0.0;           ///< max |P_direct - P_paper| / max P_first
    double max_norm_defect = 0.0;
    bool first_order_regime = true;   ///< coupling ratio below 0.1
    std::string supported;            ///< "first-order", "paper" or "neither"
};

inline RabiComparison compare_formulas(const TwoLevelConfig& cfg, const std::vector<double>& times,
                                       const DirectOptions& opts = {})
{
    RabiComparison rep;
    const DirectResult direct = rabi_probability_direct(cfg, times, opts);
    const cplx g12 = cfg.gamma12();
    rep.coupling_ratio = cfg.omega_tilde == 0.0 ? INFINITY : std::abs(g12) / (au::hbar * std::abs(cfg.omega_tilde));
    rep.first_order_regime = rep.coupling_ratio < 0.1;
    rep.max_norm_defect = direct.max_norm_defect;
    double peak = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        RabiRow r;
        r.t = times[i];
        r.p_paper = rabi_probability_paper(g12, cfg.omega_tilde, r.t);
        r.p_first_order = rabi_probability_first_order(g12, cfg.omega_tilde, r.t);
        r.p_direct = direct.probability[i];
        peak = std::max(peak, r.p_first_order);
        rep.rows.push_back(r);
    }
    double d1 = 0.0;
    double d2 = 0.0;
    for (const auto& r : rep.rows) {
        d1 = std::max(d1, std::abs(r.p_direct - r.p_first_order));
        d2 = std::max(d2, std::abs(r.p_direct - r.p_paper));
    }
    rep.dev_first_order = peak > 0.0 ? d1 / peak : d1;
    rep.dev_paper = peak > 0.0 ? d2 / peak : d2;
    if (peak == 0.0 || std::abs(d1 - d2) <= 1e-12) rep.supported = "neither";
    else rep.supported = d1 < d2 ? "first-order" : "paper";
    return rep;
}

/// Both states solved with the effective mass on one shared grid.
inline std::pair<RadialState, RadialState> solve_pair(const CentralPotential& pot, const CavityParams& params,
                                                      const QuantumNumbers& e, const QuantumNumbers& g)
{
    const double m_eff = derive_effective(params).mass;
    RadialGrid ge = default_grid(pot, m_eff, e);
    const RadialGrid gg = default_grid(pot, m_eff, g);
    ge.r_max = std::max(ge.r_max, gg.r_max);
    ge.r_min = std::min(ge.r_min, gg.r_min);
    return {solve_bound_state(pot, m_eff, e, ge), solve_bound_state(pot, m_eff, g, ge)};
}

/// Coupling g at which the oscillator pair phi_{1,0} <- phi_{0,0} (or the
/// mirrored pair for chirality -1) has |gamma12| / (hbar omega_tilde) = target.
/// Uses the closed-form oscillator spectrum at m_eff; searches g in (0, 1].
inline double ho2d_coupling_for_ratio(double target, double omega_c, double m, double omega)
{
    if (!(target > 0.0)) throw InvalidParameter("target coupling ratio must be > 0");
    const double k = m * omega * omega;
    const auto ratio = [&](double g) {
        const CavityParams p(g, omega_c, Chirality::plus, m);
        const double m_eff = derive_effective(p).mass;
        const double w = std::sqrt(k / m_eff);
        const double gamma = derive_xi(p) / std::sqrt(2.0) * k * std::sqrt(au::hbar / (m_eff * w));
        return gamma / std::abs(derive_effective(p).frequency - w);
    };
    double lo = 0.0;
    double hi = 1.0;
    if (ratio(hi) < target) throw InvalidParameter("target coupling ratio not reachable for g <= 1");
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ratio(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Uniform time grid with `count` points on [t0, t1].
inline std::vector<double> linear_times(double t0, double t1, std::size_t count)
{
    if (count < 2) return {t0};
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1);
    t.back() = t1;
    return t;
}

} // namespace chiralcav
