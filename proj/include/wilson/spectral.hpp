#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "wilson/wilson_operator.hpp"

namespace wilson {

enum class InertiaMethod { Auto, Dense, Sparse };

const char* to_string(InertiaMethod method);

/// Eigenvalue sign counts of a Hermitian matrix. Eigenvalues in (-tol, tol)
/// are counted as zero.
struct Inertia {
    index_t n_plus = 0;
    index_t n_minus = 0;
    index_t n_zero = 0;
    double gap = 0.0;  // smallest |eigenvalue|; 0 when n_zero > 0
    double tol = 0.0;
    InertiaMethod method = InertiaMethod::Dense;  // the path that produced the counts

    [[nodiscard]] index_t dim() const { return n_plus + n_minus + n_zero; }
    friend bool same_counts(const Inertia& a, const Inertia& b)
    {
        return a.n_plus == b.n_plus && a.n_minus == b.n_minus && a.n_zero == b.n_zero;
    }
};

/// p/2 for an integer p.
struct HalfInteger {
    long long twice = 0;

    [[nodiscard]] bool is_integer() const { return twice % 2 == 0; }
    /// Throws unless is_integer().
    [[nodiscard]] long long value() const;
    [[nodiscard]] double to_double() const { return 0.5 * static_cast<double>(twice); }
    friend bool operator==(const HalfInteger&, const HalfInteger&) = default;
};

/// Largest dimension the Auto method sends to the dense path.
inline constexpr index_t kDenseInertiaLimit = 512;

/// 1e-8 * norm, or 1e-8 when the norm vanishes.
double default_tolerance(double norm_inf);

/// Dense path: Householder tridiagonalization followed by Sturm counts at
/// -tol and +tol. The gap comes from bisection on the same tridiagonal matrix.
/// tol <= 0 selects default_tolerance.
Inertia inertia(const CMatrix& h, double tol = 0.0, InertiaMethod method = InertiaMethod::Dense);

/// Sparse path: block LDL^T of the real embedding of H - tol and H + tol over a
/// breadth-first level ordering. The gap reported by this path is the square
/// root of a Lanczos Ritz value of H^2 after at most 200 steps: an upper bound
/// on the smallest |eigenvalue|, typically within 1e-3 relative. Use
/// min_abs_eigenvalue when the gap itself matters. Dense is also accepted as a
/// method (densifies).
Inertia inertia(const Eigen::SparseMatrix<cplx>& h, double tol = 0.0, InertiaMethod method = InertiaMethod::Sparse);

/// Auto uses the dense path up to kDenseInertiaLimit and the sparse path
/// above it.
Inertia inertia(const WilsonOperator& h, double tol = 0.0, InertiaMethod method = InertiaMethod::Auto);

/// (n_plus - n_minus) / 2. Throws "invariant undefined for singular A" when
/// n_zero > 0.
HalfInteger half_signature(const Inertia& i);

/// Throws SingularOperatorError when n_zero > 0.
void require_invertible(const Inertia& i);

enum class GapMethod { Bisection, Iterative };

/// Smallest |eigenvalue| to relative accuracy 1e-6 or better.
///
/// Bisection: Sturm counts on the tridiagonal form (dense) or shifted sparse
/// inertia counts (WilsonOperator above kDenseInertiaLimit).
/// Iterative: Lanczos on H^2 with full reorthogonalization from a fixed-seed
/// start vector; a Ritz value is accepted once its residual bound
/// |beta_k s_k| falls below 1e-7 of the Ritz value (plus 1e-14 ||H||^2).
/// Without convergence after kLanczosMaxIterations / 4 steps the Ritz value
/// and residual bracket the gap and bisection on shifted counts finishes the
/// job.
double min_abs_eigenvalue(const CMatrix& h, GapMethod method = GapMethod::Bisection);
double min_abs_eigenvalue(const WilsonOperator& h, GapMethod method = GapMethod::Iterative);

inline constexpr index_t kLanczosMaxIterations = 1500;

struct LanczosResult {
    double value = 0.0;  // smallest eigenvalue of the operator
    double residual = 0.0;
    index_t iterations = 0;
    bool converged = false;
};

/// Lanczos for the smallest eigenvalue of a positive semidefinite operator
/// given by its action. `scale` is an upper bound on its norm.
LanczosResult lanczos_smallest(const std::function<void(const CVector&, CVector&)>& apply, index_t dim,
                               double scale, index_t max_iterations = kLanczosMaxIterations);

/// All eigenvalues in ascending order (bisection on the tridiagonal form).
std::vector<double> dense_eigenvalues(const CMatrix& h);

/// Eigenvalues of the operator of a translation-invariant field from its
/// symbol: the union over momenta k in (Z/N)^d / N of the eigenvalues of
/// symbol(cl, k, mu), each repeated rank times. Sorted ascending.
/// Throws "oracle requires translation invariance" unless every link is
/// exactly the identity.
std::vector<double> fourier_diagonalize(const GaugeField& f, const CliffordRep& cl, double mu);

} // namespace wilson
