#include "wilson/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "wilson/linalg.hpp"

namespace wilson {

namespace {

constexpr double kHermitianTol = 1e-10;

double resolve_tol(double tol, double norm)
{
    return tol > 0.0 ? tol : default_tolerance(norm);
}

double dense_norm_inf(const CMatrix& h)
{
    return h.rows() == 0 ? 0.0 : h.cwiseAbs().rowwise().sum().maxCoeff();
}

double sparse_norm_inf(const Eigen::SparseMatrix<cplx>& h)
{
    RVector sums = RVector::Zero(h.rows());
    for (index_t c = 0; c < h.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(h, c); it; ++it)
            sums(it.row()) += std::abs(it.value());
    return h.rows() == 0 ? 0.0 : sums.maxCoeff();
}

void check_hermitian(double defect, double norm)
{
    if (defect > kHermitianTol * std::max(1.0, norm))
        throw Error("inertia: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
}

double sparse_hermitian_defect(const Eigen::SparseMatrix<cplx>& h)
{
    const Eigen::SparseMatrix<cplx> adj = h.adjoint();
    const Eigen::SparseMatrix<cplx> diff = h - adj;
    double worst = 0.0;
    for (index_t c = 0; c < diff.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(diff, c); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

// Gap from a tridiagonal form whose counts are already known.
double tridiagonal_gap(const linalg::Tridiagonal& t, index_t below_zero)
{
    const index_t n = t.size();
    double gap = std::numeric_limits<double>::infinity();
    if (below_zero < n)
        gap = std::min(gap, std::abs(linalg::bisect_eigenvalue(t, below_zero)));
    if (below_zero > 0)
        gap = std::min(gap, std::abs(linalg::bisect_eigenvalue(t, below_zero - 1)));
    return n == 0 ? 0.0 : gap;
}

Inertia dense_inertia(const CMatrix& h, double tol)
{
    const auto t = linalg::householder_tridiagonalize(h);
    const index_t n = t.size();
    const index_t below = linalg::sturm_count(t, -tol);
    const index_t below_plus = linalg::sturm_count(t, tol);
    Inertia out;
    out.n_minus = below;
    out.n_zero = below_plus - below;
    out.n_plus = n - below_plus;
    out.tol = tol;
    out.method = InertiaMethod::Dense;
    out.gap = out.n_zero > 0 ? 0.0 : tridiagonal_gap(t, below);
    return out;
}

Inertia sparse_counts(const Eigen::SparseMatrix<cplx>& h, double tol)
{
    const auto lower = linalg::sparse_shifted_inertia(h, -tol);
    const auto upper = linalg::sparse_shifted_inertia(h, tol);
    Inertia out;
    out.n_minus = lower.negative;
    out.n_zero = upper.negative - lower.negative;
    out.n_plus = h.rows() - upper.negative;
    out.tol = tol;
    out.method = InertiaMethod::Sparse;
    if (out.n_zero < 0)
        throw Error("sparse inertia: shifted counts are not monotone");
    return out;
}

CVector start_vector(index_t dim)
{
    std::mt19937_64 rng(0x5eed'1a4c'2057ULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CVector v(dim);
    for (index_t i = 0; i < dim; ++i) {
        const double re = u(rng);
        const double im = u(rng);
        v(i) = cplx{re, im};
    }
    return v.normalized();
}

// Number of eigenvalues with |lambda| < s from two shifted factorizations.
// A shift that lands on an eigenvalue within rounding is nudged outward.
index_t sparse_count_within(const Eigen::SparseMatrix<cplx>& h, double s)
{
    for (int attempt = 0;; ++attempt) {
        try {
            return linalg::sparse_shifted_inertia(h, s).negative - linalg::sparse_shifted_inertia(h, -s).negative;
        } catch (const Error&) {
            if (attempt == 3)
                throw;
            s *= 1.0 + 1e-12;
        }
    }
}

// Shrinks [lo, hi] around the smallest |eigenvalue|, given that some
// eigenvalue has |lambda| <= hi, until the relative width is below rel.
double sparse_refine_gap(const Eigen::SparseMatrix<cplx>& h, double lo, double hi, double rel)
{
    if (lo > 0.0 && sparse_count_within(h, lo) > 0)
        lo = 0.0;
    while (hi - lo > rel * hi && hi > 1e-300) {
        const double mid = 0.5 * (lo + hi);
        (sparse_count_within(h, mid) > 0 ? hi : lo) = mid;
    }
    return hi;
}

constexpr index_t kGapEstimateIterations = 200;

LanczosResult wilson_lanczos(const WilsonOperator& h, index_t iterations)
{
    CVector tmp(h.dim());
    auto apply = [&](const CVector& x, CVector& y) {
        h.apply(std::span<const cplx>(x.data(), x.size()), std::span<cplx>(tmp.data(), tmp.size()));
        y.resize(x.size());
        h.apply(std::span<const cplx>(tmp.data(), tmp.size()), std::span<cplx>(y.data(), y.size()));
    };
    const double norm = h.norm_inf();
    return lanczos_smallest(apply, h.dim(), norm * norm, iterations);
}

} // namespace

const char* to_string(InertiaMethod method)
{
    switch (method) {
    case InertiaMethod::Auto: return "auto";
    case InertiaMethod::Dense: return "dense";
    case InertiaMethod::Sparse: return "sparse";
    }
    return "?";
}

long long HalfInteger::value() const
{
    if (!is_integer())
        throw Error("half-integer value " + std::to_string(twice) + "/2 is not an integer");
    return twice / 2;
}

double default_tolerance(double norm_inf)
{
    return norm_inf > 0.0 ? 1e-8 * norm_inf : 1e-8;
}

Inertia inertia(const CMatrix& h, double tol, InertiaMethod method)
{
    if (h.rows() != h.cols())
        throw Error("inertia: matrix must be square");
    const double norm = dense_norm_inf(h);
    check_hermitian(hermitian_defect(h), norm);
    tol = resolve_tol(tol, norm);
    if (method == InertiaMethod::Sparse) {
        Eigen::SparseMatrix<cplx> s = h.sparseView();
        return inertia(s, tol, InertiaMethod::Sparse);
    }
    return dense_inertia(h, tol);
}

Inertia inertia(const Eigen::SparseMatrix<cplx>& h, double tol, InertiaMethod method)
{
    if (h.rows() != h.cols())
        throw Error("inertia: matrix must be square");
    const double norm = sparse_norm_inf(h);
    check_hermitian(sparse_hermitian_defect(h), norm);
    tol = resolve_tol(tol, norm);
    if (method == InertiaMethod::Dense || (method == InertiaMethod::Auto && h.rows() <= kDenseInertiaLimit))
        return dense_inertia(CMatrix(h), tol);

    Inertia out = sparse_counts(h, tol);
    if (out.n_zero > 0) {
        out.gap = 0.0;
        return out;
    }
    auto apply = [&](const CVector& v, CVector& y) {
        CVector t = h * v;
        y = h * t;
    };
    const auto lz = lanczos_smallest(apply, h.rows(), norm * norm, kGapEstimateIterations);
    out.gap = std::max(std::sqrt(std::max(lz.value, 0.0)), tol);
    return out;
}

Inertia inertia(const WilsonOperator& h, double tol, InertiaMethod method)
{
    tol = resolve_tol(tol, h.norm_inf());
    if (method == InertiaMethod::Dense || (method == InertiaMethod::Auto && h.dim() <= kDenseInertiaLimit))
        return dense_inertia(h.to_dense(), tol);

    Inertia out = sparse_counts(h.to_sparse(), tol);
    if (out.n_zero == 0)
        out.gap = std::max(std::sqrt(std::max(wilson_lanczos(h, kGapEstimateIterations).value, 0.0)), tol);
    return out;
}

HalfInteger half_signature(const Inertia& i)
{
    if (i.n_zero != 0)
        throw Error("invariant undefined for singular A");
    return {static_cast<long long>(i.n_plus - i.n_minus)};
}

void require_invertible(const Inertia& i)
{
    if (i.n_zero > 0) {
        char tol[32];
        std::snprintf(tol, sizeof tol, "%.3g", i.tol);
        throw SingularOperatorError("singular operator: shrink a or change m (" + std::to_string(i.n_zero) +
                                    " eigenvalues within " + tol + " of zero)");
    }
}

LanczosResult lanczos_smallest(const std::function<void(const CVector&, CVector&)>& apply, index_t dim,
                               double scale, index_t max_iterations)
{
    LanczosResult res;
    if (dim == 0)
        return {0.0, 0.0, 0, true};
    const index_t kmax = std::min(dim, max_iterations);
    CMatrix v(dim, kmax + 1);
    std::vector<double> alpha, beta;
    v.col(0) = start_vector(dim);
    CVector w(dim);
    const double floor = 1e-14 * std::max(scale, 1e-300);

    for (index_t k = 0; k < kmax; ++k) {
        apply(v.col(k), w);
        const double a = v.col(k).dot(w).real();
        alpha.push_back(a);
        // two passes of classical Gram-Schmidt against the whole basis
        for (int pass = 0; pass < 2; ++pass) {
            const CVector coeffs = v.leftCols(k + 1).adjoint() * w;
            w.noalias() -= v.leftCols(k + 1) * coeffs;
        }
        const double b = w.norm();
        const bool exhausted = b <= floor || k + 1 == kmax;
        res.iterations = k + 1;

        if ((k + 1) % 8 == 0 || exhausted) {
            const index_t m = k + 1;
            RMatrix t = RMatrix::Zero(m, m);
            for (index_t i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m)
                    t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
            const double theta = es.eigenvalues()(0);
            const double resid = b * std::abs(es.eigenvectors()(m - 1, 0));
            res.value = theta;
            res.residual = resid;
            if (resid <= 1e-7 * std::abs(theta) + floor || b <= floor) {
                res.converged = true;
                return res;
            }
        }
        if (exhausted)
            break;
        beta.push_back(b);
        v.col(k + 1) = w / b;
    }
    return res;
}

double min_abs_eigenvalue(const CMatrix& h, GapMethod method)
{
    if (h.rows() != h.cols())
        throw Error("min_abs_eigenvalue: matrix must be square");
    const double norm = dense_norm_inf(h);
    check_hermitian(hermitian_defect(h), norm);
    if (method == GapMethod::Iterative) {
        auto apply = [&](const CVector& x, CVector& y) {
            CVector t = h * x;
            y.noalias() = h * t;
        };
        const auto lz = lanczos_smallest(apply, h.rows(), norm * norm);
        if (lz.converged)
            return std::sqrt(std::max(lz.value, 0.0));
    }
    const auto t = linalg::householder_tridiagonalize(h);
    return tridiagonal_gap(t, linalg::sturm_count(t, 0.0));
}

double min_abs_eigenvalue(const WilsonOperator& h, GapMethod method)
{
    if (h.dim() <= kDenseInertiaLimit && method == GapMethod::Bisection)
        return min_abs_eigenvalue(h.to_dense(), GapMethod::Bisection);
    const double norm = h.norm_inf();
    double lo = 0.0;
    double hi = norm * 1.01 + 1e-300;
    if (method == GapMethod::Iterative) {
        const auto lz = wilson_lanczos(h, kLanczosMaxIterations / 4);
        const double theta = std::max(lz.value, 0.0);
        if (lz.converged)
            return std::sqrt(theta);
        // The Ritz value bounds lambda_min(H^2) from above.
        hi = std::sqrt(theta) * (1.0 + 1e-12);
        lo = std::sqrt(std::max(theta - lz.residual, 0.0));
    }
    if (h.dim() <= kDenseInertiaLimit)
        return min_abs_eigenvalue(h.to_dense(), GapMethod::Bisection);
    return sparse_refine_gap(h.to_sparse(), lo, hi, 1e-7);
}

std::vector<double> dense_eigenvalues(const CMatrix& h)
{
    check_hermitian(hermitian_defect(h), dense_norm_inf(h));
    return linalg::bisect_all(linalg::householder_tridiagonalize(h));
}

std::vector<double> fourier_diagonalize(const GaugeField& f, const CliffordRep& cl, double mu)
{
    const auto& geom = f.geometry();
    const index_t r = f.rank();
    const CMatrix id = CMatrix::Identity(r, r);
    for (index_t x = 0; x < geom.num_sites(); ++x)
        for (int j = 0; j < geom.dim(); ++j)
            if (f.link(x, j) != id)
                throw Error("oracle requires translation invariance");
    if (cl.d != geom.dim())
        throw Error("fourier_diagonalize: Clifford dimension does not match lattice");

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(geom.num_sites() * r * cl.spinor_dim()));
    std::vector<double> k(geom.dim());
    for (index_t x = 0; x < geom.num_sites(); ++x) {
        const auto n = geom.coords(x);
        for (int j = 0; j < geom.dim(); ++j)
            k[j] = static_cast<double>(n[j]) / geom.extent();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(symbol(cl, k, mu).matrix, Eigen::EigenvaluesOnly);
        for (index_t c = 0; c < r; ++c)
            for (index_t i = 0; i < es.eigenvalues().size(); ++i)
                out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace wilson
