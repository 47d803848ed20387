#pragma once

// Angular factors for circularly polarized dipole-like operators.
//
// 3D: <Y_l'^m'| sin(theta) e^{+-i phi} |Y_l^m>, Condon-Shortley phases.
// 2D: <e^{i l' phi}| e^{+-i phi} |e^{i l phi}> = delta_{l', l +- 1}.

#include <cmath>
#include <cstdlib>

namespace chiralcav {

/// <cos^2 theta> in Y_l^m.
inline double cos2_average(int l, int m)
{
    if (l == 0) return 1.0 / 3.0;
    return (2.0 * l * (l + 1.0) - 2.0 * m * m - 1.0) / ((2.0 * l - 1.0) * (2.0 * l + 3.0));
}

/// <Y_lp^mp| sin(theta) e^{i s phi} |Y_l^m> with s = +1 or -1.
inline double sin_theta_phase_element(int lp, int mp, int l, int m, int s)
{
    if (mp != m + s) return 0.0;
    if (std::abs(m) > l || std::abs(mp) > lp) return 0.0;
    const double L = l;
    const double M = m;
    if (lp == l + 1) {
        if (s > 0) return -std::sqrt((L + M + 1.0) * (L + M + 2.0) / ((2.0 * L + 1.0) * (2.0 * L + 3.0)));
        return std::sqrt((L - M + 1.0) * (L - M + 2.0) / ((2.0 * L + 1.0) * (2.0 * L + 3.0)));
    }
    if (lp == l - 1 && l >= 1) {
        if (s > 0) return std::sqrt((L - M) * (L - M - 1.0) / ((2.0 * L - 1.0) * (2.0 * L + 1.0)));
        return -std::sqrt((L + M) * (L + M - 1.0) / ((2.0 * L - 1.0) * (2.0 * L + 1.0)));
    }
    return 0.0;
}

/// <lz_p| e^{i s phi} |lz> on the circle.
inline double phase_element_2d(int lz_p, int lz, int s) { return lz_p == lz + s ? 1.0 : 0.0; }

} // namespace chiralcav
