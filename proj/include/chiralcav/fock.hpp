#pragma once

// Exact diagonalization of a 2D harmonic oscillator coupled to one chiral
// cavity mode, in a truncated product Fock basis |n_R, n_L, n_ph>.
//
// Chiral ladder operators (hbar = 1):
//   b_R = (a_x - i a_y)/sqrt2,  b_L = (a_x + i a_y)/sqrt2,  L_z = n_R - n_L
//   x - i y = (b_R + b_L^dag)/sqrt(m w),  p_x - i p_y = i sqrt(m w) (b_L^dag - b_R)
//
// Two Hamiltonians share the basis:
//   original     p^2/2m + V + w_c a^dag a - (q/m) p.A + q^2 A^2/2m,   A = A0 (eps* a^dag + eps a)
//   transformed  p^2/2m_eff + V(r + tau) + w_eff a^dag a + g^2 w_c/2, expanded to second order in xi,
//                tau = xi pi + s (xi^2/2) p x e_z
// Both conserve J_z = (n_R - n_L) + chirality n_ph, so the basis is sorted
// into contiguous J_z blocks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <future>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavity.hpp"
#include "errors.hpp"
#include "lanczos.hpp"
#include "shifts.hpp"

namespace chiralcav {

struct FockIndex
{
    int n_R = 0;
    int n_L = 0;
    int n_ph = 0;

    int l_z() const { return n_R - n_L; }
    friend bool operator==(const FockIndex&, const FockIndex&) = default;
};

struct Truncation
{
    int n_mat = 10; ///< n_R + n_L <= n_mat
    int n_ph = 8;   ///< n_ph <= n_ph
};

inline std::size_t basis_size(const Truncation& t)
{
    return static_cast<std::size_t>(t.n_mat + 1) * static_cast<std::size_t>(t.n_mat + 2) / 2 *
           static_cast<std::size_t>(t.n_ph + 1);
}

struct JzBlock
{
    int j_z = 0;
    std::size_t begin = 0;
    std::size_t size = 0;
};

enum class Frame { original, transformed };

/// Sign s of the xi^2 p x e_z term in the shifted argument of V.
///   derived: s = -chirality, from expanding U^dag r U
///   printed: s = +chirality
enum class CrossTermSign { derived, printed };

struct TruncatedHamiltonian
{
    std::vector<FockIndex> basis;
    SparseHermitian matrix;
    std::vector<JzBlock> blocks;
    Truncation truncation;
    CavityParams params;
    double mass = 1.0;
    double omega = 1.0;
    Frame frame = Frame::original;
    int chirality_sign = 1;

    int j_z(const FockIndex& f) const { return f.l_z() + chirality_sign * f.n_ph; }

    std::size_t index_of(const FockIndex& f) const
    {
        const auto it = std::find(basis.begin(), basis.end(), f);
        if (it == basis.end()) throw InvalidParameter("fock index outside the truncated basis");
        return static_cast<std::size_t>(it - basis.begin());
    }

    std::complex<double> element(const FockIndex& bra, const FockIndex& ket) const
    {
        return matrix.coeff(static_cast<Eigen::Index>(index_of(bra)), static_cast<Eigen::Index>(index_of(ket)));
    }
};

struct FockBuildOptions
{
    double memory_budget_bytes = 2.0 * 1024 * 1024 * 1024;
};

namespace detail {

inline std::vector<FockIndex> ordered_basis(const Truncation& t, int chi)
{
    std::vector<FockIndex> basis;
    basis.reserve(basis_size(t));
    for (int nph = 0; nph <= t.n_ph; ++nph)
        for (int n = 0; n <= t.n_mat; ++n)
            for (int nr = 0; nr <= n; ++nr) basis.push_back({nr, n - nr, nph});
    std::sort(basis.begin(), basis.end(), [chi](const FockIndex& a, const FockIndex& b) {
        return std::make_tuple(a.l_z() + chi * a.n_ph, a.n_ph, a.n_R) <
               std::make_tuple(b.l_z() + chi * b.n_ph, b.n_ph, b.n_R);
    });
    return basis;
}

/// Photon-creating matter transitions: (dn_R, dn_L, amplitude factor).
struct Transition
{
    int d_r;
    int d_l;
    std::complex<double> coeff;
};

} // namespace detail

inline TruncatedHamiltonian build_hamiltonian(const CavityParams& params, double m, double omega,
                                              const Truncation& trunc, Frame frame = Frame::original,
                                              CrossTermSign cross = CrossTermSign::derived,
                                              const FockBuildOptions& opts = {})
{
    if (trunc.n_mat < 2 || trunc.n_ph < 2)
        throw TruncationTooSmall("truncation needs n_mat >= 2 and n_ph >= 2 (got n_mat=" +
                                 std::to_string(trunc.n_mat) + ", n_ph=" + std::to_string(trunc.n_ph) + ")");
    if (!(m > 0.0) || !(omega > 0.0)) throw InvalidParameter("oscillator mass and frequency must be > 0");
    if (std::abs(params.mass() - m) > 1e-12 * m)
        throw InvalidParameter("cavity mass " + std::to_string(params.mass()) +
                               " differs from oscillator mass " + std::to_string(m));

    const std::size_t dim = basis_size(trunc);
    // Basis, up to ~9 stored elements per row, plus the dense copy of the largest block.
    const double bytes = static_cast<double>(dim) * (sizeof(FockIndex) + 9.0 * 24.0);
    if (bytes > opts.memory_budget_bytes)
        throw MemoryBudgetExceeded("fock basis of " + std::to_string(dim) + " states needs ~" +
                                   std::to_string(bytes / 1048576.0) + " MiB, over the budget");

    TruncatedHamiltonian H{.basis = {},
                           .matrix = {},
                           .blocks = {},
                           .truncation = trunc,
                           .params = params,
                           .mass = m,
                           .omega = omega,
                           .frame = frame,
                           .chirality_sign = sign(params.chirality())};
    const int chi = H.chirality_sign;
    H.basis = detail::ordered_basis(trunc, chi);

    std::map<std::tuple<int, int, int>, std::size_t> lookup;
    for (std::size_t i = 0; i < H.basis.size(); ++i)
        lookup[{H.basis[i].n_R, H.basis[i].n_L, H.basis[i].n_ph}] = i;
    const auto find = [&](int nr, int nl, int nph) -> std::ptrdiff_t {
        if (nr < 0 || nl < 0 || nph < 0 || nph > trunc.n_ph || nr + nl > trunc.n_mat) return -1;
        return static_cast<std::ptrdiff_t>(lookup.at({nr, nl, nph}));
    };

    for (std::size_t i = 0; i < H.basis.size(); ++i) {
        const int jz = H.j_z(H.basis[i]);
        if (H.blocks.empty() || H.blocks.back().j_z != jz) H.blocks.push_back({jz, i, 0});
        ++H.blocks.back().size;
    }

    const double wc = params.omega_c();
    const double qa0 = charge_times_amplitude(params);
    const double g_eff = qa0 / std::sqrt(m * au::hbar * wc); // signed; zero for a neutral particle
    const double g2 = g_eff * g_eff;

    std::vector<Eigen::Triplet<std::complex<double>>> trip;
    trip.reserve(dim * 9);
    const std::complex<double> I(0.0, 1.0);

    // Photon-creating couplings, as coefficients of sqrt(occupation) factors.
    std::vector<detail::Transition> moves;
    double diag_matter_scale = 1.0;
    double lz_coeff = 0.0;
    double photon_energy = wc;
    double photon_diag = 0.0; // coefficient of (2 n_ph + 1)
    double constant = 0.0;
    double squeeze = 0.0;     // coefficient of (b_R b_L + h.c.)
    if (frame == Frame::original) {
        const double lambda = g_eff * std::sqrt(wc * omega / 2.0);
        photon_diag = 0.5 * g2 * wc;
        // -(q A0/m) p.eps* a^dag with p.eps* = i s (b_L^dag - b_R) for chirality +1.
        if (chi > 0) moves = {{0, +1, -I * lambda}, {-1, 0, I * lambda}};
        else moves = {{+1, 0, -I * lambda}, {0, -1, I * lambda}};
    } else {
        const double s2 = 1.0 + g2;
        const double xi = coupling_factor(std::abs(g_eff)) * std::sqrt(au::hbar / (m * wc));
        const double k = m * omega * omega;
        const double mu = xi * omega * std::sqrt(m * omega / 2.0);
        const int s = cross == CrossTermSign::derived ? -chi : chi;
        diag_matter_scale = 0.5 * (1.0 / s2 + 1.0);
        squeeze = 0.5 * omega * (1.0 - 1.0 / s2);
        lz_coeff = s * 0.5 * xi * xi * k;
        photon_energy = wc * s2;
        photon_diag = 0.5 * k * xi * xi;
        constant = 0.5 * g2 * wc;
        // m w^2 xi r.pi, with r.eps* = (b_R + b_L^dag)/sqrt(2 m w) for chirality +1.
        if (chi > 0) moves = {{-1, 0, I * mu}, {0, +1, I * mu}};
        else moves = {{0, -1, I * mu}, {+1, 0, I * mu}};
    }

    for (std::size_t col = 0; col < H.basis.size(); ++col) {
        const FockIndex f = H.basis[col];
        const int N = f.n_R + f.n_L;
        const double diag = diag_matter_scale * omega * (N + 1) + lz_coeff * f.l_z() + photon_energy * f.n_ph +
                            photon_diag * (2 * f.n_ph + 1) + constant;
        trip.emplace_back(col, col, diag);

        if (squeeze != 0.0) {
            const std::ptrdiff_t up = find(f.n_R + 1, f.n_L + 1, f.n_ph);
            if (up >= 0) {
                const double v = squeeze * std::sqrt((f.n_R + 1.0) * (f.n_L + 1.0));
                trip.emplace_back(up, col, v);
                trip.emplace_back(col, up, v);
            }
        }
        for (const auto& mv : moves) {
            const std::ptrdiff_t row = find(f.n_R + mv.d_r, f.n_L + mv.d_l, f.n_ph + 1);
            if (row < 0) continue;
            const double occ_r = mv.d_r > 0 ? f.n_R + 1.0 : (mv.d_r < 0 ? f.n_R : 1.0);
            const double occ_l = mv.d_l > 0 ? f.n_L + 1.0 : (mv.d_l < 0 ? f.n_L : 1.0);
            const std::complex<double> v = mv.coeff * std::sqrt(occ_r * occ_l * (f.n_ph + 1.0));
            trip.emplace_back(row, col, v);
            trip.emplace_back(col, row, std::conj(v));
        }
    }

    H.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    H.matrix.setFromTriplets(trip.begin(), trip.end());
    H.matrix.makeCompressed();
    return H;
}

inline TruncatedHamiltonian build_transformed_hamiltonian(const CavityParams& params, double m, double omega,
                                                          const Truncation& trunc,
                                                          CrossTermSign cross = CrossTermSign::derived,
                                                          const FockBuildOptions& opts = {})
{
    return build_hamiltonian(params, m, omega, trunc, Frame::transformed, cross, opts);
}

/// max |H - H^dag|.
inline double hermiticity_defect(const TruncatedHamiltonian& H)
{
    const SparseHermitian adj = H.matrix.adjoint();
    const SparseHermitian diff = H.matrix - adj;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (SparseHermitian::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

/// Largest |H_ij| connecting different J_z sectors.
inline double off_block_defect(const TruncatedHamiltonian& H)
{
    double worst = 0.0;
    for (Eigen::Index k = 0; k < H.matrix.outerSize(); ++k)
        for (SparseHermitian::InnerIterator it(H.matrix, k); it; ++it)
            if (H.j_z(H.basis[static_cast<std::size_t>(it.row())]) !=
                H.j_z(H.basis[static_cast<std::size_t>(it.col())]))
                worst = std::max(worst, std::abs(it.value()));
    return worst;
}

struct EigenOptions
{
    std::size_t dense_limit = 5000;
    int threads = 1;
    double memory_budget_bytes = 2.0 * 1024 * 1024 * 1024;
    LanczosOptions lanczos;
};

/// Lowest `count` eigenvalues within one J_z block.
inline std::vector<double> block_lowest(const TruncatedHamiltonian& H, const JzBlock& b, int count,
                                        const EigenOptions& opts = {})
{
    const int take = std::min<int>(count, static_cast<int>(b.size));
    const auto first = static_cast<Eigen::Index>(b.begin);
    const auto n = static_cast<Eigen::Index>(b.size);
    const SparseHermitian sub = H.matrix.block(first, first, n, n);
    if (b.size <= opts.dense_limit) {
        if (static_cast<double>(n) * static_cast<double>(n) * 16.0 > opts.memory_budget_bytes)
            throw MemoryBudgetExceeded("dense block of size " + std::to_string(n) + " exceeds the memory budget");
        const Eigen::MatrixXcd dense(sub);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw SolverFailure("dense eigensolver failed for J_z block " + std::to_string(b.j_z));
        return {es.eigenvalues().data(), es.eigenvalues().data() + take};
    }
    return lanczos_lowest(sub, take, opts.lanczos);
}

inline const JzBlock& find_block(const TruncatedHamiltonian& H, int j_z)
{
    for (const auto& b : H.blocks)
        if (b.j_z == j_z) return b;
    throw InvalidParameter("no J_z = " + std::to_string(j_z) + " sector in the truncated basis");
}

/// Lowest `count` eigenvalues of the full matrix, ascending. Blocks are
/// diagonalized independently, concurrently when threads > 1.
inline std::vector<double> lowest_eigenvalues(const TruncatedHamiltonian& H, int count, const EigenOptions& opts = {})
{
    if (count < 1 || static_cast<std::size_t>(count) > H.basis.size())
        throw InvalidParameter("eigenvalue count must be in [1, basis size]");
    std::vector<std::vector<double>> per_block(H.blocks.size());
    if (opts.threads > 1) {
        std::vector<std::future<std::vector<double>>> jobs;
        std::size_t next = 0;
        while (next < H.blocks.size()) {
            jobs.clear();
            const std::size_t start = next;
            for (int t = 0; t < opts.threads && next < H.blocks.size(); ++t, ++next)
                jobs.push_back(std::async(std::launch::async, [&H, &opts, count, b = H.blocks[next]] {
                    return block_lowest(H, b, count, opts);
                }));
            for (std::size_t k = 0; k < jobs.size(); ++k) per_block[start + k] = jobs[k].get();
        }
    } else {
        for (std::size_t k = 0; k < H.blocks.size(); ++k) per_block[k] = block_lowest(H, H.blocks[k], count, opts);
    }
    std::vector<double> all;
    for (const auto& v : per_block) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    all.resize(static_cast<std::size_t>(count));
    return all;
}

// ---------------------------------------------------------------------------
// Validation of the per-state AM shift against the exact spectrum.

struct OracleSweep
{
    std::vector<double> g_values{0.01, 0.02, 0.04};
    double omega_c = 5.0;
    double mass = 1.0;
    double omega = 1.0;
    double charge = -1.0;
    Chirality chirality = Chirality::plus;
    Truncation truncation{10, 8};
    EigenOptions eigen;
};

struct OracleRow
{
    double g = 0.0;
    int n_mat = 0;
    int n_ph = 0;
    double gap_exact = 0.0; ///< E(l_z = +1) - E(l_z = -1), lowest states
    double gap_pert = 0.0;  ///< chirality m w^2 xi^2
    double rel_err = 0.0;   ///< ||gap_exact| - |gap_pert|| / |gap_pert|
    double abs_err = 0.0;   ///< ||gap_exact| - |gap_pert||
    bool sign_agrees = true;
};

struct ScalingPair
{
    double g_low = 0.0;
    double g_high = 0.0;
    double ratio = 0.0; ///< abs_err(g_high) / abs_err(g_low)
};

struct OracleReport
{
    std::vector<OracleRow> rows;
    std::vector<ScalingPair> scaling; ///< for every pair with g_high = 2 g_low
    bool non_monotone = false;       ///< rel_err not non-decreasing in g
    bool sign_agrees = true;
    double max_rel_err = 0.0;
};

inline OracleRow oracle_point(const OracleSweep& sweep, double g)
{
    const CavityParams p(g, sweep.omega_c, sweep.chirality, sweep.mass, sweep.charge);
    const TruncatedHamiltonian H = build_hamiltonian(p, sweep.mass, sweep.omega, sweep.truncation);
    // The lowest levels with J_z = +-1 connect to |1,0,0> and |0,1,0>.
    const double e_plus = block_lowest(H, find_block(H, 1), 1, sweep.eigen).front();
    const double e_minus = block_lowest(H, find_block(H, -1), 1, sweep.eigen).front();

    OracleRow row;
    row.g = g;
    row.n_mat = sweep.truncation.n_mat;
    row.n_ph = sweep.truncation.n_ph;
    row.gap_exact = e_plus - e_minus;
    row.gap_pert = ho2d_shift_closed_form(1, 0, p, sweep.mass, sweep.omega).am_shift -
                   ho2d_shift_closed_form(0, 1, p, sweep.mass, sweep.omega).am_shift;
    row.abs_err = std::abs(std::abs(row.gap_exact) - std::abs(row.gap_pert));
    row.rel_err = row.gap_pert == 0.0 ? row.abs_err : row.abs_err / std::abs(row.gap_pert);
    row.sign_agrees = row.gap_pert == 0.0 || (row.gap_exact > 0.0) == (row.gap_pert > 0.0);
    return row;
}

/// Summary statistics over rows already computed, in g order.
inline OracleReport summarize_oracle(std::vector<OracleRow> rows)
{
    OracleReport rep;
    rep.rows = std::move(rows);
    double prev = -1.0;
    double prev_g = -1.0;
    for (const auto& r : rep.rows) {
        if (r.gap_pert != 0.0) {
            rep.sign_agrees = rep.sign_agrees && r.sign_agrees;
            rep.max_rel_err = std::max(rep.max_rel_err, r.rel_err);
            if (r.g > prev_g && r.rel_err < prev) rep.non_monotone = true;
            prev = r.rel_err;
            prev_g = r.g;
        }
    }
    for (const auto& lo : rep.rows)
        for (const auto& hi : rep.rows)
            if (lo.g > 0.0 && std::abs(hi.g - 2.0 * lo.g) <= 1e-12 * hi.g && lo.abs_err > 0.0)
                rep.scaling.push_back({lo.g, hi.g, hi.abs_err / lo.abs_err});
    return rep;
}

inline OracleReport validate_against_perturbation(const OracleSweep& sweep)
{
    std::vector<OracleRow> rows;
    for (double g : sweep.g_values) rows.push_back(oracle_point(sweep, g));
    return summarize_oracle(std::move(rows));
}

struct FrameComparison
{
    std::vector<double> original;
    std::vector<double> transformed;
    double max_rel_dev = 0.0;
};

/// Lowest levels of the minimal-coupling and transformed Hamiltonians.
inline FrameComparison compare_frames(const CavityParams& params, double m, double omega, const Truncation& trunc,
                                      int count, CrossTermSign cross = CrossTermSign::derived,
                                      const EigenOptions& opts = {})
{
    FrameComparison c;
    c.original = lowest_eigenvalues(build_hamiltonian(params, m, omega, trunc), count, opts);
    c.transformed = lowest_eigenvalues(build_transformed_hamiltonian(params, m, omega, trunc, cross), count, opts);
    for (int i = 0; i < count; ++i) {
        const double dev = std::abs(c.original[i] - c.transformed[i]) / std::abs(c.original[i]);
        c.max_rel_dev = std::max(c.max_rel_dev, dev);
    }
    return c;
}

} // namespace chiralcav
