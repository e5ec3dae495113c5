#include "wilson/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <limits>

namespace wilson::linalg {

Tridiagonal householder_tridiagonalize(const CMatrix& input)
{
    if (input.rows() != input.cols())
        throw Error("tridiagonalize: matrix must be square");
    const index_t n = input.rows();
    CMatrix a = input;
    Tridiagonal t;
    t.diag.resize(n);
    t.off.resize(n > 0 ? n - 1 : 0);

    for (index_t k = 0; k + 1 < n; ++k) {
        t.diag[k] = a(k, k).real();
        const index_t m = n - k - 1;
        const cplx alpha = a(k + 1, k);
        const double xnorm = m > 1 ? a.col(k).tail(m - 1).norm() : 0.0;
        if (xnorm == 0.0) {
            // Already tridiagonal in this column; a unimodular phase on the
            // off-diagonal does not change the eigenvalues.
            t.off[k] = std::abs(alpha);
            continue;
        }
        const double beta = -std::copysign(std::hypot(std::abs(alpha), xnorm), alpha.real());
        const cplx tau = (beta - alpha) / beta;
        CVector v(m);
        v(0) = 1.0;
        v.tail(m - 1) = a.col(k).tail(m - 1) / (alpha - beta);
        t.off[k] = beta;

        auto a22 = a.bottomRightCorner(m, m);
        CVector p = tau * (a22.selfadjointView<Eigen::Lower>() * v);
        const cplx correction = -0.5 * tau * p.dot(v);
        p += correction * v;
        a22.selfadjointView<Eigen::Lower>().rankUpdate(v, p, -1.0);
    }
    if (n > 0)
        t.diag[n - 1] = a(n - 1, n - 1).real();
    return t;
}

namespace {

double pivot_floor(const Tridiagonal& t)
{
    double emax = 1.0;
    for (double e : t.off)
        emax = std::max(emax, e * e);
    return DBL_MIN * emax;
}

} // namespace

index_t sturm_count(const Tridiagonal& t, double shift)
{
    const index_t n = t.size();
    if (n == 0)
        return 0;
    const double pivmin = pivot_floor(t);
    index_t count = 0;
    double q = t.diag[0] - shift;
    if (std::abs(q) <= pivmin)
        q = -pivmin;
    if (q < 0.0)
        ++count;
    for (index_t i = 1; i < n; ++i) {
        q = t.diag[i] - shift - t.off[i - 1] * t.off[i - 1] / q;
        if (std::abs(q) <= pivmin)
            q = -pivmin;
        if (q < 0.0)
            ++count;
    }
    return count;
}

std::pair<double, double> gershgorin(const Tridiagonal& t)
{
    const index_t n = t.size();
    if (n == 0)
        return {0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (index_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0)
            radius += std::abs(t.off[i - 1]);
        if (i + 1 < n)
            radius += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    const double pad = 2.0 * DBL_EPSILON * std::max(std::abs(lo), std::abs(hi)) + pivot_floor(t);
    return {lo - pad, hi + pad};
}

double bisect_eigenvalue(const Tridiagonal& t, index_t k, double rel_tol)
{
    if (k < 0 || k >= t.size())
        throw Error("bisect_eigenvalue: index out of range");
    auto [lo, hi] = gershgorin(t);
    const double abs_tol = rel_tol * std::max({std::abs(lo), std::abs(hi), DBL_MIN});
    while (hi - lo > abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> bisect_all(const Tridiagonal& t)
{
    std::vector<double> out(t.size());
    for (index_t k = 0; k < t.size(); ++k)
        out[k] = bisect_eigenvalue(t, k);
    return out;
}

// ---------------------------------------------------------------------------

BunchKaufman::BunchKaufman(RMatrix a) : l_(std::move(a))
{
    if (l_.rows() != l_.cols())
        throw Error("BunchKaufman: matrix must be square");
    const index_t n = l_.rows();
    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
    perm_.resize(n);
    for (index_t i = 0; i < n; ++i)
        perm_[i] = i;

    double* base = l_.data();
    auto at = [base, n](index_t i, index_t j) -> double& { return base[i + j * n]; };

    // Symmetric interchange of k and r (k < r) in the lower triangle of the
    // trailing block, plus the matching row swap in the computed columns of L.
    auto interchange = [&](index_t k, index_t r) {
        if (k == r)
            return;
        std::swap(at(k, k), at(r, r));
        for (index_t i = k + 1; i < r; ++i)
            std::swap(at(i, k), at(r, i));
        for (index_t i = r + 1; i < n; ++i)
            std::swap(at(i, k), at(i, r));
        for (index_t j = 0; j < k; ++j)
            std::swap(at(k, j), at(r, j));
        std::swap(perm_[k], perm_[r]);
    };

    index_t k = 0;
    while (k < n) {
        const double absakk = std::abs(at(k, k));
        double colmax = 0.0;
        index_t imax = k;
        for (index_t i = k + 1; i < n; ++i)
            if (std::abs(at(i, k)) > colmax) {
                colmax = std::abs(at(i, k));
                imax = i;
            }

        int size = 1;
        if (std::max(absakk, colmax) == 0.0) {
            pivots_.push_back({k, 1, 0.0, 0.0, 0.0});
            ++zero_;
            ++k;
            continue;
        }
        if (absakk < alpha * colmax) {
            double rowmax = 0.0;
            for (index_t j = k; j < imax; ++j)
                rowmax = std::max(rowmax, std::abs(at(imax, j)));
            for (index_t j = imax + 1; j < n; ++j)
                rowmax = std::max(rowmax, std::abs(at(j, imax)));
            if (absakk * rowmax >= alpha * colmax * colmax) {
                // keep the 1x1 pivot at k
            } else if (std::abs(at(imax, imax)) >= alpha * rowmax) {
                interchange(k, imax);
            } else {
                size = 2;
                interchange(k + 1, imax);
            }
        }

        if (size == 1) {
            const double d = at(k, k);
            pivots_.push_back({k, 1, d, 0.0, 0.0});
            if (d > 0.0)
                ++pos_;
            else if (d < 0.0)
                ++neg_;
            else
                ++zero_;
            if (d != 0.0) {
                double* col = &at(0, k);
                for (index_t j = k + 1; j < n; ++j) {
                    const double w = col[j];
                    if (w == 0.0)
                        continue;
                    const double f = w / d;
                    double* target = &at(0, j);
                    for (index_t i = j; i < n; ++i)
                        target[i] -= f * col[i];
                }
                for (index_t i = k + 1; i < n; ++i)
                    col[i] /= d;
            }
            k += 1;
        } else {
            const double a11 = at(k, k);
            const double a21 = at(k + 1, k);
            const double a22 = at(k + 1, k + 1);
            const double det = a11 * a22 - a21 * a21;
            pivots_.push_back({k, 2, a11, a21, a22});
            if (det < 0.0) {
                ++pos_;
                ++neg_;
            } else if (det > 0.0) {
                (a11 + a22 > 0.0 ? pos_ : neg_) += 2;
            } else {
                ++zero_;
                if (a11 + a22 > 0.0)
                    ++pos_;
                else if (a11 + a22 < 0.0)
                    ++neg_;
                else
                    ++zero_;
            }
            double* c1 = &at(0, k);
            double* c2 = &at(0, k + 1);
            if (det != 0.0) {
                for (index_t j = k + 2; j < n; ++j) {
                    const double w1 = c1[j];
                    const double w2 = c2[j];
                    const double f1 = (w1 * a22 - w2 * a21) / det;
                    const double f2 = (w2 * a11 - w1 * a21) / det;
                    double* target = &at(0, j);
                    for (index_t i = j; i < n; ++i)
                        target[i] -= f1 * c1[i] + f2 * c2[i];
                }
                for (index_t i = k + 2; i < n; ++i) {
                    const double w1 = c1[i];
                    const double w2 = c2[i];
                    c1[i] = (w1 * a22 - w2 * a21) / det;
                    c2[i] = (w2 * a11 - w1 * a21) / det;
                }
            }
            c1[k + 1] = 0.0;
            k += 2;
        }
    }

    // Keep the strictly lower part as the unit lower triangular factor.
    for (index_t j = 0; j < n; ++j) {
        for (index_t i = 0; i < j; ++i)
            at(i, j) = 0.0;
        at(j, j) = 1.0;
    }
}

void BunchKaufman::forward(RMatrix& b) const
{
    if (b.rows() != size())
        throw Error("BunchKaufman::forward: dimension mismatch");
    RMatrix permuted(b.rows(), b.cols());
    for (index_t i = 0; i < size(); ++i)
        permuted.row(i) = b.row(perm_[i]);
    l_.triangularView<Eigen::UnitLower>().solveInPlace(permuted);
    b = std::move(permuted);
}

void BunchKaufman::scale(RMatrix& y) const
{
    for (const auto& p : pivots_) {
        if (p.size == 1) {
            if (p.a == 0.0)
                throw SingularOperatorError("BunchKaufman: singular pivot");
            y.row(p.start) /= p.a;
        } else {
            const double det = p.a * p.c - p.b * p.b;
            if (det == 0.0)
                throw SingularOperatorError("BunchKaufman: singular 2x2 pivot");
            const RVector r1 = y.row(p.start);
            const RVector r2 = y.row(p.start + 1);
            y.row(p.start) = (p.c * r1 - p.b * r2) / det;
            y.row(p.start + 1) = (p.a * r2 - p.b * r1) / det;
        }
    }
}

RMatrix BunchKaufman::solve(const RMatrix& b) const
{
    RMatrix y = b;
    forward(y);
    scale(y);
    l_.transpose().triangularView<Eigen::UnitUpper>().solveInPlace(y);
    RMatrix x(y.rows(), y.cols());
    for (index_t i = 0; i < size(); ++i)
        x.row(perm_[i]) = y.row(i);
    return x;
}

RMatrix BunchKaufman::block_diagonal() const
{
    RMatrix d = RMatrix::Zero(size(), size());
    for (const auto& p : pivots_) {
        d(p.start, p.start) = p.a;
        if (p.size == 2) {
            d(p.start + 1, p.start) = p.b;
            d(p.start, p.start + 1) = p.b;
            d(p.start + 1, p.start + 1) = p.c;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------

RMatrix real_embedding(const CMatrix& a)
{
    RMatrix out(2 * a.rows(), 2 * a.cols());
    for (index_t j = 0; j < a.cols(); ++j)
        for (index_t i = 0; i < a.rows(); ++i) {
            const cplx z = a(i, j);
            out(2 * i, 2 * j) = z.real();
            out(2 * i, 2 * j + 1) = -z.imag();
            out(2 * i + 1, 2 * j) = z.imag();
            out(2 * i + 1, 2 * j + 1) = z.real();
        }
    return out;
}

namespace {

using Adjacency = std::vector<std::vector<index_t>>;

Adjacency symmetric_pattern(const Eigen::SparseMatrix<cplx>& a)
{
    Adjacency adj(a.rows());
    for (index_t c = 0; c < a.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(a, c); it; ++it) {
            const index_t r = it.row();
            if (r == c || it.value() == cplx{})
                continue;
            adj[r].push_back(c);
            adj[c].push_back(r);
        }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

std::vector<std::vector<index_t>> bfs_levels(const Adjacency& adj, index_t root, std::vector<int>& mark, int stamp)
{
    std::vector<std::vector<index_t>> levels{{root}};
    mark[root] = stamp;
    while (true) {
        std::vector<index_t> next;
        for (index_t v : levels.back())
            for (index_t w : adj[v])
                if (mark[w] != stamp) {
                    mark[w] = stamp;
                    next.push_back(w);
                }
        if (next.empty())
            break;
        std::sort(next.begin(), next.end());
        levels.push_back(std::move(next));
    }
    return levels;
}

} // namespace

std::vector<std::vector<index_t>> level_structure(const Eigen::SparseMatrix<cplx>& a)
{
    if (a.rows() != a.cols())
        throw Error("level_structure: matrix must be square");
    const index_t n = a.rows();
    const Adjacency adj = symmetric_pattern(a);
    std::vector<char> done(n, 0);
    std::vector<int> mark(n, -1);
    int stamp = 0;
    std::vector<std::vector<index_t>> all;

    for (index_t seed = 0; seed < n; ++seed) {
        if (done[seed])
            continue;
        // George-Liu pseudo-peripheral vertex search within this component.
        index_t root = seed;
        auto levels = bfs_levels(adj, root, mark, stamp++);
        while (true) {
            const auto& last = levels.back();
            const index_t candidate = *std::min_element(last.begin(), last.end(), [&](index_t x, index_t y) {
                return adj[x].size() < adj[y].size() || (adj[x].size() == adj[y].size() && x < y);
            });
            auto trial = bfs_levels(adj, candidate, mark, stamp++);
            if (trial.size() <= levels.size())
                break;
            root = candidate;
            levels = std::move(trial);
        }
        for (auto& level : levels) {
            for (index_t v : level)
                done[v] = 1;
            all.push_back(std::move(level));
        }
    }
    return all;
}

SignCounts sparse_shifted_inertia(const Eigen::SparseMatrix<cplx>& a, double shift)
{
    const index_t n = a.rows();
    if (a.cols() != n)
        throw Error("sparse inertia: matrix must be square");
    if (n == 0)
        return {};

    const auto levels = level_structure(a);
    const index_t nlev = static_cast<index_t>(levels.size());
    std::vector<index_t> level_of(n), local(n);
    for (index_t k = 0; k < nlev; ++k)
        for (index_t i = 0; i < static_cast<index_t>(levels[k].size()); ++i) {
            level_of[levels[k][i]] = k;
            local[levels[k][i]] = i;
        }

    std::vector<RMatrix> diag(nlev);
    std::vector<RMatrix> below(nlev > 0 ? nlev - 1 : 0);  // block (k+1, k)
    for (index_t k = 0; k < nlev; ++k) {
        const index_t m = static_cast<index_t>(levels[k].size());
        diag[k] = RMatrix::Zero(2 * m, 2 * m);
        diag[k].diagonal().setConstant(-shift);
        if (k + 1 < nlev)
            below[k] = RMatrix::Zero(2 * static_cast<index_t>(levels[k + 1].size()), 2 * m);
    }

    auto put = [](RMatrix& m, index_t i, index_t j, cplx z) {
        m(2 * i, 2 * j) += z.real();
        m(2 * i, 2 * j + 1) -= z.imag();
        m(2 * i + 1, 2 * j) += z.imag();
        m(2 * i + 1, 2 * j + 1) += z.real();
    };

    for (index_t c = 0; c < a.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(a, c); it; ++it) {
            const index_t r = it.row();
            const index_t lr = level_of[r];
            const index_t lc = level_of[c];
            if (lr == lc)
                put(diag[lr], local[r], local[c], it.value());
            else if (lr == lc + 1)
                put(below[lc], local[r], local[c], it.value());
            else if (lc != lr + 1)
                throw Error("sparse inertia: level structure violated");
        }

    SignCounts twice;
    RMatrix schur = std::move(diag[0]);
    for (index_t k = 0; k < nlev; ++k) {
        BunchKaufman bk(std::move(schur));
        twice.positive += bk.positive();
        twice.negative += bk.negative();
        twice.zero += bk.zero();
        if (k + 1 == nlev)
            break;
        if (bk.zero() > 0)
            throw SingularOperatorError("sparse inertia: singular Schur complement at level " + std::to_string(k) +
                                        "; shift coincides with an eigenvalue");
        RMatrix y = below[k].transpose();
        bk.forward(y);
        RMatrix w = y;
        bk.scale(w);
        schur = std::move(diag[k + 1]);
        schur.noalias() -= y.transpose() * w;
    }

    if (twice.positive % 2 != 0 || twice.negative % 2 != 0 || twice.zero % 2 != 0)
        throw Error("sparse inertia: inconsistent real-embedding counts (shift within rounding of an eigenvalue)");
    return {twice.positive / 2, twice.negative / 2, twice.zero / 2};
}

} // namespace wilson::linalg
