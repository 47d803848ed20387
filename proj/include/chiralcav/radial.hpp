#pragma once

// Bound states of a particle in a central potential.
//
// Numerov shooting on a logarithmic (default) or uniform radial grid. The
// radial equation is written as y'' = Q(s) y in the grid variable s:
//
//   log grid     s = ln r,  y = u / sqrt(r),  Q = 2m r^2 (V - E) / hbar^2 + nu^2
//   uniform grid s = r,     y = u,            Q = 2m (V - E) / hbar^2 + (nu^2 - 1/4) / r^2
//
// with nu = l + 1/2 in 3D (u = r R) and nu = |l_z| in 2D (u = sqrt(r) R).
// The eigenvalue is bracketed by node counting; inside the right bracket the
// derivative mismatch at the outer turning point gives a first-order energy
// correction, with bisection as the fallback.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "potential.hpp"

namespace chiralcav {

enum class Spacing { uniform, logarithmic };

struct RadialGrid
{
    double r_min = 1e-6;
    double r_max = 50.0;
    std::size_t n_points = 20000;
    Spacing spacing = Spacing::logarithmic;

    void validate() const
    {
        if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
            throw InvalidParameter("radial grid needs 0 < r_min < r_max");
        if (n_points < 16)
            throw InvalidParameter("radial grid needs at least 16 points");
    }

    /// Step in the grid variable (ln r or r).
    double step() const
    {
        return spacing == Spacing::logarithmic
                   ? std::log(r_max / r_min) / static_cast<double>(n_points - 1)
                   : (r_max - r_min) / static_cast<double>(n_points - 1);
    }

    double radius(std::size_t i) const
    {
        if (i + 1 == n_points) return r_max;
        const double s = static_cast<double>(i) * step();
        return spacing == Spacing::logarithmic ? r_min * std::exp(s) : r_min + s;
    }

    std::vector<double> radii() const
    {
        std::vector<double> r(n_points);
        for (std::size_t i = 0; i < n_points; ++i) r[i] = radius(i);
        return r;
    }

    friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

/// r_min = 1e-6 and 20000 log-spaced points; r_max from the potential.
inline RadialGrid default_grid(const CentralPotential& pot, double mass, const QuantumNumbers& q)
{
    RadialGrid grid;
    grid.r_min = 1e-6 * pot.length_scale(mass);
    grid.r_max = pot.default_r_max(mass, q);
    grid.n_points = 20000;
    grid.spacing = Spacing::logarithmic;
    return grid;
}

/// Normalized bound state. `u` is the reduced radial function (r R in 3D,
/// sqrt(r) R in 2D) with integral of u^2 dr equal to one; `weights` are the
/// quadrature weights for integrals over dr on `r`.
struct RadialState
{
    QuantumNumbers qn;
    Dimension dimension = Dimension::three;
    double mass = 1.0;
    double energy = 0.0;
    RadialGrid grid;
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> weights;
    int nodes = 0;
    int iterations = 0;

    /// Integral of f(r) u(r)^2 dr.
    template <class F>
    double expectation(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) sum += weights[i] * f(r[i]) * u[i] * u[i];
        return sum;
    }
};

struct SolverOptions
{
    double energy_tolerance = 1e-12; // relative
    int max_iterations = 400;
    double tail_threshold = 1e-8;
};

namespace detail {

inline std::vector<double> quadrature_weights(const RadialGrid& grid, const std::vector<double>& r)
{
    const double h = grid.step();
    std::vector<double> w(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        w[i] = (grid.spacing == Spacing::logarithmic ? r[i] : 1.0) * h;
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

inline int count_sign_changes(const std::vector<double>& y)
{
    int nodes = 0;
    double prev = 0.0;
    for (double v : y) {
        if (v == 0.0) continue;
        if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++nodes;
        prev = v;
    }
    return nodes;
}

inline void rescale(std::vector<double>& y, std::size_t first, std::size_t last, double factor)
{
    for (std::size_t j = first; j <= last; ++j) y[j] *= factor;
}

} // namespace detail

inline RadialState solve_bound_state(const CentralPotential& pot, double mass, const QuantumNumbers& q,
                                     const RadialGrid& grid, const SolverOptions& opts = {})
{
    const Dimension dim = pot.dimension();
    validate(q, dim);
    grid.validate();
    if (!(mass > 0.0)) throw InvalidParameter("bound-state mass must be > 0");

    const bool log_grid = grid.spacing == Spacing::logarithmic;
    const std::size_t N = grid.n_points;
    const double h = grid.step();
    const double h2_12 = h * h / 12.0;
    const double two_m = 2.0 * mass / (au::hbar * au::hbar);
    const double nu = dim == Dimension::three ? q.l + 0.5 : std::abs(q.l_z);
    const int target_nodes = radial_nodes(q, dim);

    const std::vector<double> r = grid.radii();
    std::vector<double> V(N), w(N), cent(N);
    for (std::size_t i = 0; i < N; ++i) {
        V[i] = pot.v(r[i]);
        w[i] = log_grid ? r[i] * r[i] : 1.0;
        cent[i] = log_grid ? nu * nu : (nu * nu - 0.25) / (r[i] * r[i]);
    }

    double e_lo = V[0];
    for (std::size_t i = 0; i < N; ++i)
        e_lo = std::min(e_lo, V[i] + std::max(nu * nu - 0.25, 0.0) / (two_m * r[i] * r[i]));
    double e_hi = V[N - 1] + (nu * nu - 0.25) / (two_m * r[N - 1] * r[N - 1]);
    if (!(e_hi > e_lo))
        throw GridTooSmall("no energy window for a bound state on this grid (" + pot.name() + ")");

    // Series start y ~ r^p (1 + a r); a removes the leading Coulomb-like error.
    const double p = log_grid ? nu : nu + 0.5;
    const double a = two_m * r[0] * V[0] / (2.0 * nu + 1.0);

    std::vector<double> Q(N), f(N), y(N);
    double energy = 0.5 * (e_lo + e_hi);
    std::size_t match = 0;
    int nodes = -1;
    bool converged = false;
    int it = 0;

    for (; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < N; ++i) {
            Q[i] = two_m * w[i] * (V[i] - energy) + cent[i];
            f[i] = 1.0 - h2_12 * Q[i];
        }

        // Outermost classically allowed point.
        std::ptrdiff_t icl = -1;
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(N) - 1; i >= 0; --i)
            if (Q[static_cast<std::size_t>(i)] < 0.0) {
                icl = i;
                break;
            }
        if (icl < 0) {
            e_lo = energy;
            energy = 0.5 * (e_lo + e_hi);
            continue;
        }
        if (icl < 2) icl = 2;
        if (static_cast<std::size_t>(icl) > N - 3) {
            e_hi = energy;
            energy = 0.5 * (e_lo + e_hi);
            continue;
        }
        match = static_cast<std::size_t>(icl);

        // Outward up to the matching point.
        y[0] = 1.0 + a * r[0];
        y[1] = std::pow(r[1] / r[0], p) * (1.0 + a * r[1]);
        // Summed form on z = f y keeps roundoff from building up where Q ~ 0.
        double dz = f[1] * y[1] - f[0] * y[0];
        for (std::size_t i = 1; i < match; ++i) {
            dz += h * h * Q[i] * y[i];
            y[i + 1] = (f[i] * y[i] + dz) / f[i + 1];
            if (std::abs(y[i + 1]) > 1e150) {
                detail::rescale(y, 0, i + 1, 1e-150);
                dz *= 1e-150;
            }
        }
        const double y_match_out = y[match];

        // Inward from the grid edge down to the matching point.
        y[N - 1] = h;
        y[N - 2] = (12.0 - 10.0 * f[N - 1]) * y[N - 1] / f[N - 2];
        dz = f[N - 2] * y[N - 2] - f[N - 1] * y[N - 1];
        for (std::size_t i = N - 2; i > match; --i) {
            dz += h * h * Q[i] * y[i];
            y[i - 1] = (f[i] * y[i] + dz) / f[i - 1];
            if (std::abs(y[i - 1]) > 1e150) {
                detail::rescale(y, i - 1, N - 1, 1e-150);
                dz *= 1e-150;
            }
        }
        if (y[match] == 0.0 || y_match_out == 0.0) {
            // Degenerate match; nudge the energy.
            energy = 0.5 * (e_lo + e_hi);
            continue;
        }
        detail::rescale(y, match, N - 1, y_match_out / y[match]);

        nodes = detail::count_sign_changes(y);
        if (nodes != target_nodes) {
            if (nodes > target_nodes) e_hi = energy;
            else e_lo = energy;
            energy = 0.5 * (e_lo + e_hi);
            if (e_hi - e_lo <= 1e-15 * std::max(1.0, std::abs(energy)))
                throw NoConvergence("energy bracket collapsed without reaching " +
                                    std::to_string(target_nodes) + " nodes");
            continue;
        }

        double norm = 0.0;
        for (std::size_t i = 0; i < N; ++i) norm += w[i] * y[i] * y[i];
        norm *= h;

        const double ycusp =
            (y[match - 1] * f[match - 1] + y[match + 1] * f[match + 1] + 10.0 * f[match] * y[match]) / 12.0;
        const double de = y[match] * 12.0 * (y[match] - ycusp) / (h * two_m * norm);

        if (std::abs(de) <= opts.energy_tolerance * std::max(std::abs(energy), 1e-300) ||
            e_hi - e_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(energy)) {
            converged = true;
            break;
        }
        if (de > 0.0) e_lo = energy;
        else e_hi = energy;
        double next = energy + de;
        if (!(next > e_lo && next < e_hi)) next = 0.5 * (e_lo + e_hi);
        energy = next;
    }

    if (!converged)
        throw NoConvergence("shooting did not converge for n=" + std::to_string(q.n) +
                            ", l=" + std::to_string(q.l) + " after " + std::to_string(it) + " iterations");

    // Tail amplitude estimate beyond the turning point.
    double kappa = 0.0;
    for (std::size_t i = match; i < N; ++i) kappa += std::sqrt(std::max(Q[i], 0.0)) * h;
    if (std::exp(-kappa) > opts.tail_threshold)
        throw GridTooSmall("wavefunction tail at r_max is not negligible (estimated relative amplitude " +
                           std::to_string(std::exp(-kappa)) + "); enlarge r_max");

    RadialState state;
    state.qn = q;
    state.dimension = dim;
    state.mass = mass;
    state.energy = energy;
    state.grid = grid;
    state.r = r;
    state.u.resize(N);
    for (std::size_t i = 0; i < N; ++i) state.u[i] = log_grid ? y[i] * std::sqrt(r[i]) : y[i];
    state.weights = detail::quadrature_weights(grid, r);
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) norm += state.weights[i] * state.u[i] * state.u[i];
    const double scale = (state.u[0] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm);
    for (double& v : state.u) v *= scale;
    state.nodes = nodes;
    state.iterations = it + 1;
    return state;
}

inline RadialState solve_bound_state(const CentralPotential& pot, double mass, const QuantumNumbers& q)
{
    return solve_bound_state(pot, mass, q, default_grid(pot, mass, q));
}

/// Overlap of two states on the same grid.
inline double overlap(const RadialState& a, const RadialState& b)
{
    if (!(a.grid == b.grid)) throw InvalidParameter("overlap needs states on the same radial grid");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.r.size(); ++i) sum += a.weights[i] * a.u[i] * b.u[i];
    return sum;
}

/// Density |psi(0)|^2 at the origin, extrapolated from the first decade of the
/// grid. Zero unless the state has no angular momentum.
inline double origin_density(const RadialState& s, double residual_threshold = 1e-8)
{
    const bool s_wave = s.dimension == Dimension::three ? s.qn.l == 0 : s.qn.l_z == 0;
    if (!s_wave) return 0.0;

    const double power = s.dimension == Dimension::three ? 1.0 : 0.5;
    const double r_fit = 10.0 * s.r.front();
    std::size_t count = 0;
    while (count < s.r.size() && (s.r[count] <= r_fit || count < 8)) ++count;

    // u / r^p = c0 + c1 z + c2 z^2 with z = r / r_fit.
    Eigen::MatrixXd A(count, 3);
    Eigen::VectorXd b(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double z = s.r[i] / r_fit;
        A(i, 0) = 1.0;
        A(i, 1) = z;
        A(i, 2) = z * z;
        b(i) = s.u[i] / std::pow(s.r[i], power);
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    const double rms = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(count));
    if (!(std::abs(c(0)) > 0.0) || rms > residual_threshold * std::abs(c(0)))
        throw ExtrapolationUnstable("origin extrapolation residual " + std::to_string(rms) +
                                    " exceeds threshold");
    const double angular = s.dimension == Dimension::three ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi;
    return c(0) * c(0) / angular;
}

/// <(1/r) dV/dr>. Throws SingularIntegrand when the integrand is not
/// integrable at the origin (e.g. Coulomb with l = 0).
inline double expectation_inv_r_dv(const RadialState& s, const CentralPotential& pot)
{
    const auto integrand = [&](std::size_t i) {
        return pot.dv_dr(s.r[i]) / s.r[i] * s.u[i] * s.u[i];
    };
    std::size_t k = 0;
    while (k + 1 < s.r.size() && s.r[k] < 10.0 * s.r.front()) ++k;
    const double g0 = integrand(0);
    const double gk = integrand(k);
    if (g0 != 0.0 && gk != 0.0) {
        const double exponent = std::log(std::abs(gk / g0)) / std::log(s.r[k] / s.r[0]);
        if (exponent <= -0.5)
            throw SingularIntegrand("<(1/r) dV/dr> diverges at the origin for l=" + std::to_string(s.qn.l) +
                                    " in " + pot.name() + " (integrand ~ r^" + std::to_string(exponent) + ")");
    }
    return s.expectation([&](double r) { return pot.dv_dr(r) / r; });
}

/// <laplacian V>, including the point source at the origin.
inline double expectation_laplacian(const RadialState& s, const CentralPotential& pot)
{
    double value = s.expectation([&](double r) { return pot.laplacian(r); });
    if (pot.origin_delta_strength() != 0.0) value += pot.origin_delta_strength() * origin_density(s);
    return value;
}

/// <d^2V/dx^2 + d^2V/dy^2>, the in-plane part of the Laplacian.
inline double expectation_transverse_laplacian(const RadialState& s, const CentralPotential& pot)
{
    if (s.dimension == Dimension::two) return expectation_laplacian(s, pot);
    const double l = s.qn.l;
    const double m = s.qn.l_z;
    const double cos2 = (2.0 * l * (l + 1.0) - 2.0 * m * m - 1.0) / ((2.0 * l - 1.0) * (2.0 * l + 3.0));
    const double sin2 = 1.0 - cos2;
    double value = s.expectation([&](double r) {
        return sin2 * pot.d2v_dr2(r) + (2.0 - sin2) * pot.dv_dr(r) / r;
    });
    // A spherically symmetric point source splits 2:1 between the plane and z.
    if (pot.origin_delta_strength() != 0.0)
        value += 2.0 / 3.0 * pot.origin_delta_strength() * origin_density(s);
    return value;
}

} // namespace chiralcav
