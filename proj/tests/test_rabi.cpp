#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chiralcav/rabi.hpp"

using namespace chiralcav;

namespace {

/// Exact two-level transition probability with constant diagonal elements.
double exact_rabi(const TwoLevelConfig& c, double t)
{
    const double delta = c.omega_tilde + (c.gamma[1][1] - c.gamma[0][0]).real();
    const double g2 = std::norm(c.gamma12());
    const double big = std::sqrt(delta * delta + 4.0 * g2);
    const double s = std::sin(0.5 * big * t);
    return 4.0 * g2 / (big * big) * s * s;
}

TwoLevelConfig synthetic(double w, cplx g12, double g11 = 0.0, double g22 = 0.0)
{
    TwoLevelConfig c;
    c.omega_tilde = w;
    c.gamma[0][0] = g11;
    c.gamma[1][1] = g22;
    c.gamma[0][1] = g12;
    c.gamma[1][0] = std::conj(g12);
    return c;
}

/// <phi_10| (x + i y) m w^2 |phi_00> on a Cartesian grid, analytic wavefunctions.
cplx cartesian_oscillator_element(double m, double w)
{
    const double b = m * w;
    const int n = 801;
    const double L = 8.0 / std::sqrt(b);
    const double h = 2.0 * L / (n - 1);
    cplx sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -L + i * h;
            const double y = -L + j * h;
            const double gauss = b / std::numbers::pi * std::exp(-b * (x * x + y * y));
            // phi_10 = sqrt(b) (x + i y) phi_00, with phi_00 real.
            const cplx phi10_conj = std::sqrt(b) * cplx(x, -y);
            sum += phi10_conj * m * w * w * cplx(x, y) * gauss;
        }
    return sum * h * h;
}

} // namespace

TEST(Gamma12, OscillatorLadderCoefficient)
{
    const double m = 1.0;
    const double w = 1.0;
    const Harmonic2DPotential pot(m, w);
    const CavityParams p(0.02, 3.0, Chirality::plus, m);
    RadialGrid grid = default_grid(pot, m, {0, 1, 1});
    const RadialState e = solve_bound_state(pot, m, {0, 1, 1}, grid);
    const RadialState g = solve_bound_state(pot, m, {0, 0, 0}, grid);
    const cplx gamma = gamma12_am(e, g, pot, p);
    const double xi = derive_xi(p);
    const double expected = xi / std::sqrt(2.0) * m * w * w * std::sqrt(1.0 / (m * w));
    EXPECT_NEAR(std::abs(gamma), expected, 1e-9 * expected);
    EXPECT_NEAR(gamma.real(), 0.0, 1e-15);

    const cplx cart = cartesian_oscillator_element(m, w);
    EXPECT_NEAR(std::abs(cart), radial_dv_element(e, g, pot), 1e-8);
}

TEST(Gamma12, HydrogenTwoPToOneS)
{
    const CoulombPotential pot(1.0);
    const CavityParams p(0.05, 0.5);
    RadialGrid grid = default_grid(pot, 1.0, {2, 1, 1});
    const RadialState e = solve_bound_state(pot, 1.0, {2, 1, 1}, grid);
    const RadialState g = solve_bound_state(pot, 1.0, {1, 0, 0}, grid);
    // Frozen with tests/oracles/frozen_values.py.
    EXPECT_NEAR(radial_dv_element(e, g, pot), 0.18144368465060578505, 1e-9);
    const cplx gamma = gamma12_am(e, g, pot, p);
    const double expected = derive_xi(p) / std::sqrt(2.0) * 0.18144368465060578505 * 0.81649658092772603;
    EXPECT_NEAR(std::abs(gamma), expected, 1e-8 * expected);
}

TEST(Gamma12, RequiresSharedGrid)
{
    const CoulombPotential pot(1.0);
    const RadialState e = solve_bound_state(pot, 1.0, {2, 1, 1});
    const RadialState g = solve_bound_state(pot, 1.0, {1, 0, 0});
    EXPECT_THROW(gamma12_am(e, g, pot, CavityParams(0.1, 1.0)), InvalidParameter);
}

TEST(Gamma12, SelectionRuleBothSystems)
{
    for (auto c : {Chirality::plus, Chirality::minus}) {
        const CavityParams p(0.05, 0.5, c);
        const CoulombPotential coul(1.0);
        RadialGrid grid = default_grid(coul, 1.0, {3, 0, 0});
        std::vector<RadialState> states;
        for (int n = 1; n <= 3; ++n)
            for (int l = 0; l < n; ++l)
                for (int lz = -l; lz <= l; ++lz) states.push_back(solve_bound_state(coul, 1.0, {n, l, lz}, grid));
        double scale = 0.0;
        for (const auto& a : states)
            for (const auto& b : states) scale = std::max(scale, std::abs(gamma12_am(a, b, coul, p)));
        ASSERT_GT(scale, 0.0);
        for (const auto& a : states)
            for (const auto& b : states)
                if (a.qn.l_z - b.qn.l_z != sign(c)) {
                    EXPECT_LE(std::abs(gamma12_am(a, b, coul, p)), 1e-12 * scale);
                }

        const Harmonic2DPotential ho(1.0, 1.0);
        RadialGrid hgrid = default_grid(ho, 1.0, {1, 2, 2});
        std::vector<RadialState> hs;
        for (int nr = 0; nr <= 1; ++nr)
            for (int lz = -2; lz <= 2; ++lz) hs.push_back(solve_bound_state(ho, 1.0, {nr, std::abs(lz), lz}, hgrid));
        double hscale = 0.0;
        for (const auto& a : hs)
            for (const auto& b : hs) hscale = std::max(hscale, std::abs(gamma12_am(a, b, ho, p)));
        for (const auto& a : hs)
            for (const auto& b : hs)
                if (a.qn.l_z - b.qn.l_z != sign(c)) {
                    EXPECT_LE(std::abs(gamma12_am(a, b, ho, p)), 1e-12 * hscale);
                }
    }
}

TEST(Gamma12, ChiralityFlipConjugatePair)
{
    const CoulombPotential pot(1.0);
    const CavityParams plus(0.05, 0.5, Chirality::plus);
    const CavityParams minus = plus.with_chirality(Chirality::minus);
    RadialGrid grid = default_grid(pot, 1.0, {3, 2, 0});
    for (int n = 2; n <= 3; ++n) {
        const RadialState g = solve_bound_state(pot, 1.0, {1, 0, 0}, grid);
        const RadialState ep = solve_bound_state(pot, 1.0, {n, 1, 1}, grid);
        const RadialState em = solve_bound_state(pot, 1.0, {n, 1, -1}, grid);
        const double a = std::abs(gamma12_am(ep, g, pot, plus));
        EXPECT_GT(a, 0.0);
        EXPECT_NEAR(a, std::abs(gamma12_am(em, g, pot, minus)), 1e-15 * a);
        EXPECT_EQ(std::abs(gamma12_am(em, g, pot, plus)), 0.0);
    }
}

TEST(TwoLevel, BuildAndSelectionGuard)
{
    const Harmonic2DPotential pot(1.0, 1.0);
    const CavityParams p(0.03, 2.0);
    const auto [e, g] = solve_pair(pot, p, {0, 1, 1}, {0, 0, 0});
    const TwoLevelConfig c = make_two_level(e, g, pot, p);
    EXPECT_NO_THROW(c.validate());
    const double xi = derive_xi(p);
    EXPECT_NEAR(c.gamma[0][0].real(), xi * xi, 1e-14);     // AM + CL of phi_10 with no photon
    EXPECT_NEAR(c.gamma[1][1].real(), 1.5 * xi * xi, 1e-14); // 3 CL of phi_00 with one photon
    const double w = 1.0 / std::sqrt(1.0 + 0.03 * 0.03);
    EXPECT_NEAR(c.omega_tilde, 2.0 * (1.0 + 0.03 * 0.03) - w, 1e-10);

    const auto [e0, g0] = solve_pair(pot, p, {1, 0, 0}, {0, 0, 0});
    EXPECT_THROW(make_two_level(e0, g0, pot, p), InvalidQuantumNumbers);
    const TwoLevelConfig forced = make_two_level(e0, g0, pot, p, true);
    EXPECT_EQ(forced.gamma12(), cplx(0.0));
    const DirectResult flat = rabi_probability_direct(forced, linear_times(0.0, 50.0, 20));
    for (double prob : flat.probability) EXPECT_EQ(prob, 0.0);
}

TEST(TwoLevel, RejectsNonHermitianGamma)
{
    TwoLevelConfig c = synthetic(1.0, {0.1, 0.2});
    c.gamma[1][0] = {0.1, 0.2};
    EXPECT_THROW(c.validate(), InvalidParameter);
}

TEST(RabiFormulas, PaperFormulaExamples)
{
    const cplx g(0.0, 1e-3);
    EXPECT_EQ(rabi_probability_paper(g, 2.0, 0.0), 0.0);
    EXPECT_NEAR(rabi_probability_paper(g, 2.0, std::numbers::pi / 2.0), 0.0, 1e-20);
    EXPECT_NEAR(rabi_probability_paper(g, 1e-12, 3.0), 9e-6, 1e-18);
    EXPECT_NEAR(rabi_probability_paper(g, 0.0, 3.0), 9e-6, 1e-18);
}

TEST(RabiFormulas, FirstOrderExamples)
{
    const cplx g(1e-3, 0.0);
    const double w = 2.0;
    EXPECT_NEAR(rabi_probability_first_order(g, w, std::numbers::pi / w), 4e-6 / (w * w), 1e-18);
    EXPECT_NEAR(rabi_probability_first_order(g, w, 2.0 * std::numbers::pi / w), 0.0, 1e-20);
    EXPECT_NEAR(rabi_probability_paper(g, w, 2.0 * std::numbers::pi / w), 0.0, 1e-20);
    EXPECT_NEAR(rabi_probability_first_order(g, 0.0, 2.0), 4e-6, 1e-18);
}

TEST(RabiDirect, MatchesExactTwoLevelSolution)
{
    const std::vector<TwoLevelConfig> cases = {
        synthetic(0.0, {0.0, -0.2}),                // resonant
        synthetic(1.0, {0.0, -0.05}),               // detuned
        synthetic(0.7, {0.1, 0.3}, 0.02, 0.05),     // diagonal shifts
        synthetic(-0.4, {0.0, 1e-3}, 1e-4, -2e-4),  // weak
    };
    const std::vector<double> times = linear_times(0.0, 40.0, 81);
    for (const auto& c : cases) {
        const DirectResult r = rabi_probability_direct(c, times);
        EXPECT_LT(r.max_norm_defect, 1e-10);
        for (std::size_t i = 0; i < times.size(); ++i) {
            EXPECT_NEAR(r.probability[i], exact_rabi(c, times[i]), 1e-8) << c.omega_tilde << " t=" << times[i];
            EXPECT_GE(r.probability[i], 0.0);
            EXPECT_LE(r.probability[i], 1.0);
        }
    }
    // Resonant, equal diagonals: sin^2(|g| t / hbar).
    const TwoLevelConfig res = synthetic(0.0, {0.0, 0.2}, 0.1, 0.1);
    for (double t : {0.5, 3.0, 7.85})
        EXPECT_NEAR(rabi_probability_direct(res, t), std::pow(std::sin(0.2 * t), 2), 1e-8);
}

TEST(RabiDirect, ZeroCouplingStaysPut)
{
    const DirectResult r = rabi_probability_direct(synthetic(1.3, {0.0, 0.0}, 0.2, 0.1), linear_times(0.0, 20.0, 11));
    for (double p : r.probability) EXPECT_EQ(p, 0.0);
}

TEST(RabiDirect, StepCapRaisesStepSizeUnderflow)
{
    DirectOptions capped;
    capped.max_steps = 5;
    EXPECT_THROW(rabi_probability_direct(synthetic(50.0, {0.0, 0.1}), std::vector<double>{0.0, 100.0}, capped),
                 StepSizeUnderflow);
    EXPECT_THROW(rabi_probability_direct(synthetic(1.0, {0.0, 0.1}), std::vector<double>{2.0, 1.0}), InvalidParameter);
}

TEST(RabiCompare, SmallTimeUniversality)
{
    const TwoLevelConfig c = synthetic(1.0, {0.0, 1e-3}, 1e-6, 1.5e-6);
    const std::vector<double> times = linear_times(1e-4, 0.0099, 30);
    const RabiComparison rep = compare_formulas(c, times);
    for (const auto& r : rep.rows) {
        EXPECT_NEAR(r.p_paper / r.p_first_order, 1.0, 1e-4);
        EXPECT_NEAR(r.p_direct / r.p_first_order, 1.0, 1e-4);
    }
}

TEST(RabiCompare, DirectSupportsFirstOrder)
{
    const TwoLevelConfig c = synthetic(1.0, {0.0, 1e-3});
    const RabiComparison rep = compare_formulas(c, linear_times(0.0, 2.0 * std::numbers::pi, 201));
    EXPECT_TRUE(rep.first_order_regime);
    EXPECT_EQ(rep.supported, "first-order");
    EXPECT_NEAR(rep.coupling_ratio, 1e-3, 1e-15);
    EXPECT_LT(rep.dev_first_order, 1e-4);
    EXPECT_GT(rep.dev_paper, 0.5);
    // At w t = pi the printed formula vanishes while the first-order one peaks.
    const RabiRow& mid = rep.rows[100];
    EXPECT_NEAR(mid.p_paper, 0.0, 1e-20);
    EXPECT_NEAR(mid.p_first_order, 4e-6, 1e-18);
}

TEST(RabiCompare, CouplingSearch)
{
    const double g = ho2d_coupling_for_ratio(1e-3, 2.0, 1.0, 1.0);
    const Harmonic2DPotential pot(1.0, 1.0);
    const CavityParams p(g, 2.0);
    const auto [e, gs] = solve_pair(pot, p, {0, 1, 1}, {0, 0, 0});
    const TwoLevelConfig c = make_two_level(e, gs, pot, p);
    EXPECT_NEAR(std::abs(c.gamma12()) / c.omega_tilde, 1e-3, 1e-11);
}
