#include "wilson/wilson_operator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

namespace wilson {

const char* to_string(MassMode mode)
{
    return mode == MassMode::Cutoff ? "cutoff" : "constant";
}

WilsonOperator assemble_scaled(const GaugeField& f, const CliffordRep& cl, double kappa, double mass, MassMode mode)
{
    const auto& geom = f.geometry();
    const int d = geom.dim();
    if (cl.d != d)
        throw Error("assemble: Clifford dimension " + std::to_string(cl.d) + " does not match lattice dimension " +
                    std::to_string(d));

    WilsonOperator h;
    h.geom_ = geom;
    h.rank_ = f.rank();
    h.spinor_dim_ = cl.spinor_dim();
    h.block_ = f.rank() * cl.spinor_dim();
    h.mass_ = mass;
    h.kappa_ = kappa;
    h.mode_ = mode;

    const index_t r = f.rank();
    const index_t b = h.block_;
    const CMatrix& gamma = cl.grading;
    const CMatrix id_r = CMatrix::Identity(r, r);

    // Per-site spinor factors of the forward hop and its mirror.
    std::vector<CMatrix> forward(d), backward(d);
    for (int j = 0; j < d; ++j) {
        forward[j] = 0.5 * kappa * (cl.generators[j] + gamma);
        backward[j] = 0.5 * kappa * (gamma - cl.generators[j]);
    }

    std::vector<std::map<index_t, CMatrix>> rows(geom.num_sites());
    const CMatrix diag = kron(id_r, (mass - kappa * d) * gamma);
    for (index_t x = 0; x < geom.num_sites(); ++x)
        rows[x].emplace(x, diag);

    auto accumulate = [&](index_t row, index_t col, CMatrix blk) {
        auto [it, inserted] = rows[row].try_emplace(col, std::move(blk));
        if (!inserted)
            it->second += blk;
    };

    for (index_t x = 0; x < geom.num_sites(); ++x)
        for (int j = 0; j < d; ++j) {
            const index_t y = geom.shift(x, j);
            const auto link = f.link(x, j);
            accumulate(y, x, kron(link, forward[j]));
            accumulate(x, y, kron(link.adjoint(), backward[j]));
        }

    h.row_ptr_.assign(1, 0);
    for (const auto& row : rows) {
        for (const auto& [col, blk] : row) {
            h.col_.push_back(col);
            h.values_.insert(h.values_.end(), blk.data(), blk.data() + b * b);
        }
        h.row_ptr_.push_back(static_cast<index_t>(h.col_.size()));
    }
    return h;
}

void WilsonOperator::apply(std::span<const cplx> v, std::span<cplx> y) const
{
    if (static_cast<index_t>(v.size()) != dim() || static_cast<index_t>(y.size()) != dim())
        throw Error("matvec: dimension mismatch");
    const index_t n_sites = geom_.num_sites();
    for (index_t x = 0; x < n_sites; ++x) {
        Eigen::Map<CVector> out(y.data() + x * block_, block_);
        out.setZero();
        for (index_t e = row_ptr_[x]; e < row_ptr_[x + 1]; ++e) {
            Eigen::Map<const CVector> in(v.data() + col_[e] * block_, block_);
            out.noalias() += block(e) * in;
        }
    }
}

CVector WilsonOperator::apply(const CVector& v) const
{
    CVector y(dim());
    apply(std::span<const cplx>(v.data(), v.size()), std::span<cplx>(y.data(), y.size()));
    return y;
}

CVector matvec(const WilsonOperator& h, const CVector& v)
{
    if (v.size() != h.dim())
        throw Error("matvec: vector of length " + std::to_string(v.size()) + " for operator of dimension " +
                    std::to_string(h.dim()));
    return h.apply(v);
}

CMatrix WilsonOperator::to_dense() const
{
    CMatrix out = CMatrix::Zero(dim(), dim());
    for (index_t x = 0; x < geom_.num_sites(); ++x)
        for (index_t e = row_ptr_[x]; e < row_ptr_[x + 1]; ++e)
            out.block(x * block_, col_[e] * block_, block_, block_) = block(e);
    return out;
}

Eigen::SparseMatrix<cplx> WilsonOperator::to_sparse() const
{
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(values_.size());
    for (index_t x = 0; x < geom_.num_sites(); ++x)
        for (index_t e = row_ptr_[x]; e < row_ptr_[x + 1]; ++e) {
            const auto blk = block(e);
            for (index_t c = 0; c < block_; ++c)
                for (index_t rr = 0; rr < block_; ++rr)
                    if (blk(rr, c) != cplx{})
                        triplets.emplace_back(x * block_ + rr, col_[e] * block_ + c, blk(rr, c));
        }
    Eigen::SparseMatrix<cplx> s(dim(), dim());
    s.setFromTriplets(triplets.begin(), triplets.end());
    return s;
}

double WilsonOperator::norm_inf() const
{
    double worst = 0.0;
    for (index_t x = 0; x < geom_.num_sites(); ++x) {
        RVector sums = RVector::Zero(block_);
        for (index_t e = row_ptr_[x]; e < row_ptr_[x + 1]; ++e)
            sums += block(e).cwiseAbs().rowwise().sum();
        worst = std::max(worst, sums.maxCoeff());
    }
    return worst;
}

index_t WilsonOperator::nonzeros() const
{
    index_t count = 0;
    for (const cplx& v : values_)
        if (v != cplx{})
            ++count;
    return count;
}

void write_matrix_market(std::ostream& out, const WilsonOperator& h)
{
    const auto s = h.to_sparse();
    index_t entries = 0;
    for (index_t c = 0; c < s.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(s, c); it; ++it)
            if (it.row() <= it.col())
                ++entries;
    out << "%%MatrixMarket matrix coordinate complex hermitian\n";
    out << "% hermitian Wilson-Dirac operator, mu = " << std::setprecision(17) << h.mu()
        << ", mass mode " << to_string(h.mass_mode()) << ", upper triangle\n";
    out << h.dim() << ' ' << h.dim() << ' ' << entries << '\n';
    for (index_t c = 0; c < s.outerSize(); ++c)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(s, c); it; ++it)
            if (it.row() <= it.col())
                out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' ' << it.value().imag()
                    << '\n';
}

// ---------------------------------------------------------------------------

SymbolPoint symbol(const CliffordRep& cl, std::span<const double> k, double mu)
{
    if (static_cast<int>(k.size()) != cl.d)
        throw Error("symbol: momentum has wrong dimension");
    const double two_pi = 2.0 * std::numbers::pi;
    const cplx i{0.0, 1.0};
    CMatrix m = CMatrix::Zero(cl.spinor_dim(), cl.spinor_dim());
    double mass_term = mu;
    for (int j = 0; j < cl.d; ++j) {
        m += cl.generators[j] * (i * std::sin(two_pi * k[j]));
        mass_term += std::cos(two_pi * k[j]) - 1.0;
    }
    m += mass_term * cl.grading;
    return {std::vector<double>(k.begin(), k.end()), m};
}

double symbol_modulus(std::span<const double> k, double mu)
{
    const double two_pi = 2.0 * std::numbers::pi;
    double sines = 0.0;
    double mass_term = mu;
    for (double kj : k) {
        const double s = std::sin(two_pi * kj);
        sines += s * s;
        mass_term += std::cos(two_pi * kj) - 1.0;
    }
    return std::sqrt(sines + mass_term * mass_term);
}

namespace {

struct GapScan {
    std::vector<double> sin_sq;
    std::vector<double> wilson;
    double mu = 0.0;
    double best = std::numeric_limits<double>::infinity();

    void descend(int remaining, std::size_t first, double sines, double wsum)
    {
        if (remaining == 0) {
            const double m = wsum + mu;
            best = std::min(best, sines + m * m);
            return;
        }
        for (std::size_t n = first; n < sin_sq.size(); ++n)
            descend(remaining - 1, n, sines + sin_sq[n], wsum + wilson[n]);
    }
};

} // namespace

double symbol_gap(int d, double mu, int grid)
{
    if (grid < 2)
        throw Error("symbol_gap: grid must be at least 2");
    if (d < 1)
        throw Error("symbol_gap: dimension must be positive");
    const double two_pi = 2.0 * std::numbers::pi;
    GapScan scan;
    scan.mu = mu;
    for (int n = 0; n <= grid / 2; ++n) {
        const double angle = two_pi * n / grid;
        const double s = std::sin(angle);
        scan.sin_sq.push_back(s * s);
        scan.wilson.push_back(std::cos(angle) - 1.0);
    }
    scan.descend(d, 0, 0.0, 0.0);
    return std::sqrt(scan.best);
}

GapEstimate certified_symbol_gap(int d, double mu, int start_grid, int max_grid)
{
    GapEstimate est;
    int grid = std::max(2, start_grid);
    double previous = symbol_gap(d, mu, grid);
    est = {previous, grid, false};
    while (grid * 2 <= max_grid) {
        grid *= 2;
        const double current = symbol_gap(d, mu, grid);
        const bool agree = current < 1e-12 ? std::abs(current - previous) < 1e-12
                                           : std::abs(current - previous) <= 5e-4 * current;
        est = {current, grid, agree};
        if (agree)
            break;
        previous = current;
    }
    return est;
}

} // namespace wilson
