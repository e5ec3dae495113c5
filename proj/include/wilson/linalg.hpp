#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "wilson/types.hpp"

namespace wilson::linalg {

/// Real symmetric tridiagonal matrix: diagonal `diag`, off-diagonal `off`
/// (off[i] couples rows i and i+1).
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    [[nodiscard]] index_t size() const { return static_cast<index_t>(diag.size()); }
};

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form with the same eigenvalues. Only the lower triangle of `a` is read.
/// Reflectors are applied column by column, k = 0, 1, ..., n-2, so the result
/// is bitwise reproducible for a given input.
Tridiagonal householder_tridiagonalize(const CMatrix& a);

/// Number of eigenvalues strictly below `shift`, from the signs of the pivots
/// of the LDL^T factorization of T - shift (Sylvester's law of inertia).
index_t sturm_count(const Tridiagonal& t, double shift);

/// k-th smallest eigenvalue (0-based) by bisection on Sturm counts.
double bisect_eigenvalue(const Tridiagonal& t, index_t k, double rel_tol = 1e-15);

/// All eigenvalues in ascending order, by bisection.
std::vector<double> bisect_all(const Tridiagonal& t);

/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin(const Tridiagonal& t);

/// Symmetric indefinite factorization P^T A P = L D L^T with Bunch-Kaufman
/// diagonal pivoting (1x1 and 2x2 pivot blocks, alpha = (1 + sqrt 17) / 8).
/// Only the lower triangle of the input is referenced.
class BunchKaufman {
public:
    explicit BunchKaufman(RMatrix a);

    [[nodiscard]] index_t size() const { return l_.rows(); }
    [[nodiscard]] index_t positive() const { return pos_; }
    [[nodiscard]] index_t negative() const { return neg_; }
    [[nodiscard]] index_t zero() const { return zero_; }

    /// Replaces B by L^{-1} P^T B.
    void forward(RMatrix& b) const;
    /// Replaces Y by D^{-1} Y. Throws on a singular pivot block.
    void scale(RMatrix& y) const;
    /// Solves A X = B.
    [[nodiscard]] RMatrix solve(const RMatrix& b) const;

    [[nodiscard]] const std::vector<index_t>& permutation() const { return perm_; }
    /// Unit lower triangular factor.
    [[nodiscard]] const RMatrix& lower() const { return l_; }
    /// Block-diagonal factor assembled as a dense matrix.
    [[nodiscard]] RMatrix block_diagonal() const;

private:
    struct Pivot {
        index_t start;
        int size;
        double a, b, c;  // [[a, b], [b, c]] for size 2, a alone for size 1
    };

    RMatrix l_;
    std::vector<index_t> perm_;
    std::vector<Pivot> pivots_;
    index_t pos_ = 0;
    index_t neg_ = 0;
    index_t zero_ = 0;
};

/// Real symmetric embedding [[Re A, -Im A], [Im A, Re A]] interleaved per
/// complex index, so complex entry (i, k) maps to the 2x2 block at (2i, 2k).
/// Every eigenvalue of A appears twice.
RMatrix real_embedding(const CMatrix& a);

/// Breadth-first level structure from a pseudo-peripheral vertex of the
/// sparsity graph of A + A^T. Couplings only join a level to itself or to its
/// neighbours, so the matrix is block tridiagonal in level order.
std::vector<std::vector<index_t>> level_structure(const Eigen::SparseMatrix<cplx>& a);

struct SignCounts {
    index_t positive = 0;
    index_t negative = 0;
    index_t zero = 0;
};

/// Inertia of the Hermitian matrix A - shift * 1, computed as the inertia of
/// its real symmetric embedding by block LDL^T over the level structure: the
/// Schur complement of each level is factored with Bunch-Kaufman and
/// eliminated into the next level. Counts are reported for A (halved).
/// Throws if the embedding's counts are odd, which only happens when shift is
/// within rounding of an eigenvalue.
SignCounts sparse_shifted_inertia(const Eigen::SparseMatrix<cplx>& a, double shift);

} // namespace wilson::linalg
