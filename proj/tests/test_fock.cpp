#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chiralcav/fock.hpp"

using namespace chiralcav;

namespace {

CavityParams cavity(double g, double wc, Chirality c = Chirality::plus, double charge = -1.0)
{
    return CavityParams(g, wc, c, 1.0, charge);
}

std::vector<double> all_eigenvalues(const TruncatedHamiltonian& H)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(H.matrix), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

} // namespace

TEST(FockBasis, SizeAndOrdering)
{
    const Truncation t{4, 3};
    const TruncatedHamiltonian H = build_hamiltonian(cavity(0.1, 2.0), 1.0, 1.0, t);
    EXPECT_EQ(H.basis.size(), 15u * 4u);
    EXPECT_EQ(basis_size(t), 60u);
    std::size_t covered = 0;
    for (std::size_t k = 0; k < H.blocks.size(); ++k) {
        EXPECT_EQ(H.blocks[k].begin, covered);
        covered += H.blocks[k].size;
        if (k > 0) {
            EXPECT_LT(H.blocks[k - 1].j_z, H.blocks[k].j_z);
        }
        for (std::size_t i = H.blocks[k].begin; i < H.blocks[k].begin + H.blocks[k].size; ++i) {
            EXPECT_EQ(H.j_z(H.basis[i]), H.blocks[k].j_z);
            EXPECT_LE(H.basis[i].n_R + H.basis[i].n_L, t.n_mat);
            EXPECT_LE(H.basis[i].n_ph, t.n_ph);
        }
    }
    EXPECT_EQ(covered, H.basis.size());
}

TEST(FockBuild, Guards)
{
    EXPECT_THROW(build_hamiltonian(cavity(0.1, 2.0), 1.0, 1.0, {10, 1}), TruncationTooSmall);
    EXPECT_THROW(build_hamiltonian(cavity(0.1, 2.0), 1.0, 1.0, {1, 8}), TruncationTooSmall);
    FockBuildOptions tiny;
    tiny.memory_budget_bytes = 1000.0;
    EXPECT_THROW(build_hamiltonian(cavity(0.1, 2.0), 1.0, 1.0, {10, 8}, Frame::original, CrossTermSign::derived, tiny),
                 MemoryBudgetExceeded);
    EXPECT_THROW(build_hamiltonian(cavity(0.1, 2.0), 2.0, 1.0, {4, 4}), InvalidParameter);
}

TEST(FockBuild, HermitianAndBlockDiagonal)
{
    for (auto frame : {Frame::original, Frame::transformed})
        for (auto c : {Chirality::plus, Chirality::minus})
            for (double g : {0.0, 0.05, 0.7, 3.0}) {
                const TruncatedHamiltonian H = build_hamiltonian(cavity(g, 1.3, c), 1.0, 0.9, {8, 6}, frame);
                EXPECT_LT(hermiticity_defect(H), 1e-12);
                EXPECT_EQ(off_block_defect(H), 0.0);
            }
}

TEST(FockBuild, DecoupledSpectrumIsExact)
{
    // A neutral particle: spectrum w (n_R + n_L + 1) + w_c n_ph.
    const double w = 1.0;
    const double wc = 1.7;
    const Truncation t{6, 4};
    const TruncatedHamiltonian H = build_hamiltonian(cavity(0.3, wc, Chirality::plus, 0.0), 1.0, w, t);
    std::vector<double> expected;
    for (const auto& f : H.basis) expected.push_back(w * (f.n_R + f.n_L + 1) + wc * f.n_ph);
    std::sort(expected.begin(), expected.end());
    const auto got = all_eigenvalues(H);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-12);
    const auto low = lowest_eigenvalues(H, 3);
    EXPECT_NEAR(low[0], 1.0, 1e-12);
    EXPECT_NEAR(low[1], 2.0, 1e-12);
    EXPECT_NEAR(low[2], 2.0, 1e-12);
}

TEST(FockBuild, DiamagneticDiagonal)
{
    const double g = 0.4;
    const double wc = 2.5;
    const double w = 0.8;
    const TruncatedHamiltonian H = build_hamiltonian(cavity(g, wc), 1.0, w, {4, 4});
    for (const auto& f : H.basis) {
        const double expected = w * (f.n_R + f.n_L + 1) + wc * f.n_ph + 0.5 * g * g * wc * (2 * f.n_ph + 1);
        EXPECT_NEAR(H.element(f, f).real(), expected, 1e-14);
        EXPECT_EQ(H.element(f, f).imag(), 0.0);
    }
}

TEST(FockBuild, ChiralSelectionRule)
{
    const double g = 0.2;
    const double wc = 3.0;
    const double w = 1.1;
    const TruncatedHamiltonian Hp = build_hamiltonian(cavity(g, wc), 1.0, w, {4, 4});
    // <n_ph=1, phi_00| H |n_ph=0, phi_10> != 0, <n_ph=1, phi_00| H |n_ph=0, phi_01> = 0.
    const auto allowed = Hp.element({0, 0, 1}, {1, 0, 0});
    EXPECT_NEAR(std::abs(allowed), g * std::sqrt(wc * w / 2.0), 1e-14);
    EXPECT_EQ(Hp.element({0, 0, 1}, {0, 1, 0}), std::complex<double>(0.0));

    const TruncatedHamiltonian Hm = build_hamiltonian(cavity(g, wc, Chirality::minus), 1.0, w, {4, 4});
    EXPECT_EQ(Hm.element({0, 0, 1}, {1, 0, 0}), std::complex<double>(0.0));
    EXPECT_NEAR(std::abs(Hm.element({0, 0, 1}, {0, 1, 0})), g * std::sqrt(wc * w / 2.0), 1e-14);
}

TEST(FockSpectrum, LanczosAgreesWithDense)
{
    const TruncatedHamiltonian H = build_hamiltonian(cavity(0.3, 2.0), 1.0, 1.0, {12, 8});
    EigenOptions dense;
    EigenOptions krylov;
    krylov.dense_limit = 0;
    const auto a = lowest_eigenvalues(H, 8, dense);
    const auto b = lowest_eigenvalues(H, 8, krylov);
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(a[i], b[i], 1e-10 * std::abs(a[i])) << i;
}

TEST(FockSpectrum, ThreadedBlocksMatchSerial)
{
    const TruncatedHamiltonian H = build_hamiltonian(cavity(0.2, 2.0), 1.0, 1.0, {10, 6});
    EigenOptions threaded;
    threaded.threads = 4;
    EXPECT_EQ(lowest_eigenvalues(H, 10), lowest_eigenvalues(H, 10, threaded));
}

TEST(FockSpectrum, TruncationConvergence)
{
    const CavityParams p = cavity(0.02, 5.0);
    const auto a = lowest_eigenvalues(build_hamiltonian(p, 1.0, 1.0, {10, 4}), 5);
    const auto b = lowest_eigenvalues(build_hamiltonian(p, 1.0, 1.0, {10, 8}), 5);
    for (int i = 0; i < 5; ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-8) << i;
}

TEST(FockSpectrum, VariationalMonotonicity)
{
    const CavityParams p = cavity(0.6, 1.5);
    double prev = INFINITY;
    for (int n = 2; n <= 10; n += 2) {
        const double e0 = lowest_eigenvalues(build_hamiltonian(p, 1.0, 1.0, {n, 6}), 1).front();
        EXPECT_LE(e0, prev + 1e-13);
        prev = e0;
    }
    prev = INFINITY;
    for (int n = 2; n <= 10; n += 2) {
        const double e0 = lowest_eigenvalues(build_hamiltonian(p, 1.0, 1.0, {6, n}), 1).front();
        EXPECT_LE(e0, prev + 1e-13);
        prev = e0;
    }
}

TEST(FockSpectrum, SecondOrderGapOracle)
{
    // Independent second-order result for the l_z = +-1 splitting in the
    // minimal-coupling frame: g^2 w^2 w_c / (w^2 - w_c^2) for chirality +1.
    const double w = 1.0;
    const double wc = 5.0;
    for (double g : {0.005, 0.01}) {
        OracleSweep s;
        s.g_values = {g};
        const OracleRow r = validate_against_perturbation(s).rows.front();
        const double second = g * g * w * w * wc / (w * w - wc * wc);
        EXPECT_NEAR(r.gap_exact / second, 1.0, 5.0 * g * g) << g;
    }
}

TEST(FockSpectrum, GroundStateSecondOrder)
{
    // E0 = w + g^2 w_c/2 - g^2 w w_c / (2 (w + w_c)) to second order.
    const double g = 0.01;
    const double w = 1.0;
    const double wc = 3.0;
    const double e0 = lowest_eigenvalues(build_hamiltonian(cavity(g, wc), 1.0, w, {6, 6}), 1).front();
    const double pert = w + 0.5 * g * g * wc - g * g * w * wc / (2.0 * (w + wc));
    EXPECT_NEAR(e0, pert, 10.0 * g * g * g * g);
}

TEST(Oracle, ZeroCouplingGivesZeroGaps)
{
    OracleSweep s;
    s.g_values = {0.0};
    const OracleReport rep = validate_against_perturbation(s);
    EXPECT_EQ(rep.rows.front().gap_pert, 0.0);
    EXPECT_NEAR(rep.rows.front().gap_exact, 0.0, 1e-13);
}

TEST(Oracle, ReportStructure)
{
    OracleSweep s;
    s.g_values = {0.01, 0.02, 0.04};
    const OracleReport rep = validate_against_perturbation(s);
    ASSERT_EQ(rep.rows.size(), 3u);
    ASSERT_EQ(rep.scaling.size(), 2u);
    EXPECT_EQ(rep.scaling[0].g_low, 0.01);
    EXPECT_EQ(rep.scaling[1].g_high, 0.04);
    for (const auto& r : rep.rows) {
        EXPECT_EQ(r.n_mat, 10);
        EXPECT_EQ(r.n_ph, 8);
        EXPECT_GT(r.gap_pert, 0.0);
    }
    // The exact splitting lowers l_z = +1 for chirality +1.
    EXPECT_FALSE(rep.sign_agrees);
}

TEST(Oracle, ChiralityFlipMirrorsGap)
{
    OracleSweep s;
    s.g_values = {0.03};
    const OracleRow a = validate_against_perturbation(s).rows.front();
    s.chirality = Chirality::minus;
    const OracleRow b = validate_against_perturbation(s).rows.front();
    EXPECT_NEAR(a.gap_exact, -b.gap_exact, 1e-13);
    EXPECT_EQ(a.gap_pert, -b.gap_pert);
}

TEST(Frames, UnitaryEquivalence)
{
    for (auto c : {Chirality::plus, Chirality::minus}) {
        const FrameComparison fc = compare_frames(cavity(0.05, 5.0, c), 1.0, 1.0, {10, 8}, 5);
        EXPECT_LT(fc.max_rel_dev, 1e-6);
    }
    // The printed sign of the p x e_z term interchanges the l_z = +-1 levels.
    const FrameComparison printed =
        compare_frames(cavity(0.05, 5.0), 1.0, 1.0, {10, 8}, 5, CrossTermSign::printed);
    const FrameComparison derived = compare_frames(cavity(0.05, 5.0), 1.0, 1.0, {10, 8}, 5);
    EXPECT_GT(printed.max_rel_dev, 100.0 * derived.max_rel_dev);
}

TEST(Frames, TransformedDecouplesAtZeroCoupling)
{
    const auto a = lowest_eigenvalues(build_hamiltonian(cavity(0.0, 2.0), 1.0, 1.0, {6, 4}), 6);
    const auto b = lowest_eigenvalues(build_transformed_hamiltonian(cavity(0.0, 2.0), 1.0, 1.0, {6, 4}), 6);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}
