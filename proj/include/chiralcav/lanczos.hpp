#pragma once

// Lowest eigenvalues of a sparse Hermitian matrix by Lanczos iteration with
// full reorthogonalization. Each run converges the lowest Ritz pair of the
// operator deflated against the pairs already locked, so degenerate levels
// come out with their multiplicity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "errors.hpp"

namespace chiralcav {

using SparseHermitian = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

struct LanczosOptions
{
    double tolerance = 1e-11; // residual norm relative to the spectral scale
    int max_dimension = 800;
    unsigned seed = 20240613u;
};

inline std::vector<double> lanczos_lowest(const SparseHermitian& H, int count, const LanczosOptions& opts = {})
{
    using Vec = Eigen::VectorXcd;
    const Eigen::Index n = H.rows();
    if (H.cols() != n) throw SolverFailure("lanczos: matrix is not square");
    if (count < 1 || count > n)
        throw SolverFailure("lanczos: requested " + std::to_string(count) + " eigenvalues from a block of size " +
                            std::to_string(n));

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd locked(n, count);
    std::vector<double> values;

    for (int found = 0; found < count; ++found) {
        const auto Q = locked.leftCols(found);
        const auto deflate = [&](Vec& x) {
            if (found > 0) x -= Q * (Q.adjoint() * x);
        };

        const Eigen::Index max_dim = std::min<Eigen::Index>(n - found, opts.max_dimension);
        Eigen::MatrixXcd V(n, max_dim);
        std::vector<double> alpha;
        std::vector<double> beta;

        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = {normal(rng), normal(rng)};
        deflate(v);
        deflate(v);
        V.col(0) = v.normalized();

        double scale = 0.0;
        bool done = false;
        for (Eigen::Index j = 0; j < max_dim && !done; ++j) {
            Vec w = H * V.col(j);
            deflate(w);
            const double a = V.col(j).dot(w).real();
            alpha.push_back(a);
            for (int pass = 0; pass < 2; ++pass) {
                w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
                deflate(w);
            }
            const double b = w.norm();
            scale = std::max(scale, std::abs(a) + b);

            const Eigen::Index m = j + 1;
            const bool breakdown = b <= 1e-13 * scale;
            if (m % 8 == 0 || m == max_dim || breakdown) {
                Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
                Eigen::VectorXd sub(m - 1);
                for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
                tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
                if (tri.info() != Eigen::Success) throw SolverFailure("lanczos: tridiagonal eigensolve failed");
                const double residual = b * std::abs(tri.eigenvectors()(m - 1, 0));
                if (residual <= opts.tolerance * scale || breakdown) {
                    Vec y = V.leftCols(m) * tri.eigenvectors().col(0).cast<std::complex<double>>();
                    deflate(y);
                    locked.col(found) = y.normalized();
                    values.push_back(tri.eigenvalues()(0));
                    done = true;
                    break;
                }
                if (m == max_dim)
                    throw SolverFailure("lanczos: eigenvalue " + std::to_string(found) + " not converged within " +
                                        std::to_string(max_dim) + " iterations (residual " +
                                        std::to_string(residual / scale) + ")");
            }
            beta.push_back(b);
            V.col(j + 1) = w / b;
        }
        if (!done) throw SolverFailure("lanczos: exhausted Krylov space");
    }
    std::sort(values.begin(), values.end());
    return values;
}

} // namespace chiralcav
