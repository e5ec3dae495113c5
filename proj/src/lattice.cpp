#include "wilson/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace wilson {

LatticeGeometry::LatticeGeometry(int d, int n) : d_(d), n_(n)
{
    if (d < 1)
        throw Error("lattice dimension must be positive");
    if (n < 2)
        throw Error("lattice too coarse: N must be at least 2");
    stride_.assign(d, 1);
    index_t total = 1;
    for (int j = d - 1; j >= 0; --j) {
        stride_[j] = total;
        total *= n;
    }
    num_sites_ = total;
}

LatticeGeometry make_geometry(int d, int n) { return LatticeGeometry(d, n); }

index_t LatticeGeometry::site(std::span<const long> coords) const
{
    if (static_cast<int>(coords.size()) != d_)
        throw Error("site: coordinate vector has wrong length");
    index_t s = 0;
    for (int j = 0; j < d_; ++j) {
        long c = coords[j] % n_;
        if (c < 0)
            c += n_;
        s += c * stride_[j];
    }
    return s;
}

long LatticeGeometry::coord(index_t site, int direction) const
{
    return static_cast<long>((site / stride_[direction]) % n_);
}

std::vector<long> LatticeGeometry::coords(index_t site) const
{
    std::vector<long> x(d_);
    for (int j = 0; j < d_; ++j)
        x[j] = coord(site, j);
    return x;
}

index_t LatticeGeometry::shift(index_t site, int direction, long steps) const
{
    const long c = coord(site, direction);
    long moved = (c + steps) % n_;
    if (moved < 0)
        moved += n_;
    return site + (moved - c) * stride_[direction];
}

// ---------------------------------------------------------------------------

FluxMatrix::FluxMatrix(int d) : d_(d), k_(static_cast<std::size_t>(d) * d, 0)
{
    if (d < 1)
        throw Error("flux matrix dimension must be positive");
}

FluxMatrix::FluxMatrix(int d, std::vector<long> entries) : d_(d), k_(std::move(entries))
{
    if (d < 1 || k_.size() != static_cast<std::size_t>(d) * d)
        throw Error("flux matrix must have d*d entries");
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
            if (k_[j * d + l] != -k_[l * d + j])
                throw Error("flux matrix must be antisymmetric");
}

void FluxMatrix::set(int j, int l, long value)
{
    if (j < 0 || l < 0 || j >= d_ || l >= d_ || j == l)
        throw Error("flux entry indices out of range");
    k_[j * d_ + l] = value;
    k_[l * d_ + j] = -value;
}

bool FluxMatrix::is_zero() const
{
    return std::all_of(k_.begin(), k_.end(), [](long v) { return v == 0; });
}

FluxMatrix operator+(const FluxMatrix& a, const FluxMatrix& b)
{
    if (a.d_ != b.d_)
        throw Error("flux matrices of different dimension");
    FluxMatrix out(a.d_);
    for (std::size_t i = 0; i < a.k_.size(); ++i)
        out.k_[i] = a.k_[i] + b.k_[i];
    return out;
}

// ---------------------------------------------------------------------------

GaugeField::GaugeField(LatticeGeometry geom, int rank) : geom_(std::move(geom)), rank_(rank)
{
    if (rank < 1)
        throw Error("gauge field rank must be at least 1");
    links_.assign(static_cast<std::size_t>(geom_.num_sites()) * geom_.dim() * rank * rank, cplx{});
}

Eigen::Map<const CMatrix> GaugeField::link(index_t site, int direction) const
{
    const index_t r = rank_;
    return {links_.data() + (site * geom_.dim() + direction) * r * r, r, r};
}

Eigen::Map<CMatrix> GaugeField::link(index_t site, int direction)
{
    const index_t r = rank_;
    return {links_.data() + (site * geom_.dim() + direction) * r * r, r, r};
}

GaugeField trivial_field(const LatticeGeometry& geom, int rank)
{
    GaugeField f(geom, rank);
    for (index_t x = 0; x < geom.num_sites(); ++x)
        for (int j = 0; j < geom.dim(); ++j)
            f.link(x, j).setIdentity();
    f.line_summands = std::vector<FluxMatrix>(rank, FluxMatrix(geom.dim()));
    return f;
}

GaugeField constant_flux_field(const LatticeGeometry& geom, const FluxMatrix& flux)
{
    const int d = geom.dim();
    if (flux.dim() != d)
        throw Error("flux matrix dimension does not match the lattice");
    const double n = geom.extent();
    const double two_pi = 2.0 * std::numbers::pi;

    GaugeField f(geom, 1);
    for (index_t x = 0; x < geom.num_sites(); ++x) {
        const auto c = geom.coords(x);
        for (int j = 0; j < d; ++j) {
            double phase = 0.0;
            for (int i = 0; i < j; ++i)
                phase += two_pi * static_cast<double>(flux(i, j)) * c[i] / (n * n);
            if (c[j] == geom.extent() - 1)
                for (int l = j + 1; l < d; ++l)
                    phase -= two_pi * static_cast<double>(flux(j, l)) * c[l] / n;
            f.link(x, j)(0, 0) = std::polar(1.0, phase);
        }
    }
    f.line_summands = std::vector<FluxMatrix>{flux};
    return f;
}

GaugeField tensor_field(const GaugeField& f, const GaugeField& g)
{
    if (!(f.geometry() == g.geometry()))
        throw Error("tensor_field: geometry mismatch");
    GaugeField out(f.geometry(), f.rank() * g.rank());
    for (index_t x = 0; x < f.geometry().num_sites(); ++x)
        for (int j = 0; j < f.geometry().dim(); ++j)
            out.link(x, j) = kron(f.link(x, j), g.link(x, j));
    if (f.line_summands && g.line_summands) {
        std::vector<FluxMatrix> prod;
        for (const auto& a : *f.line_summands)
            for (const auto& b : *g.line_summands)
                prod.push_back(a + b);
        out.line_summands = std::move(prod);
    }
    return out;
}

GaugeField direct_sum_field(const GaugeField& f, const GaugeField& g)
{
    if (!(f.geometry() == g.geometry()))
        throw Error("direct_sum_field: geometry mismatch");
    const int rf = f.rank();
    const int rg = g.rank();
    GaugeField out(f.geometry(), rf + rg);
    for (index_t x = 0; x < f.geometry().num_sites(); ++x)
        for (int j = 0; j < f.geometry().dim(); ++j) {
            auto u = out.link(x, j);
            u.topLeftCorner(rf, rf) = f.link(x, j);
            u.bottomRightCorner(rg, rg) = g.link(x, j);
        }
    if (f.line_summands && g.line_summands) {
        auto sum = *f.line_summands;
        sum.insert(sum.end(), g.line_summands->begin(), g.line_summands->end());
        out.line_summands = std::move(sum);
    }
    return out;
}

namespace {

// Uniform on [-1, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double signed_unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

CMatrix exp_i_hermitian(const CMatrix& h)
{
    if (h.rows() == 1)
        return CMatrix::Constant(1, 1, std::polar(1.0, h(0, 0).real()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector phases = es.eigenvalues().unaryExpr([](double t) { return std::polar(1.0, t); }).cast<cplx>();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

GaugeField perturb_field(const GaugeField& f, double strength, std::uint64_t seed)
{
    if (!(strength >= 0.0))
        throw Error("perturbation strength must be non-negative");
    GaugeField out = f;
    if (strength == 0.0)
        return out;
    std::mt19937_64 rng(seed);
    const index_t r = f.rank();
    for (index_t x = 0; x < f.geometry().num_sites(); ++x)
        for (int j = 0; j < f.geometry().dim(); ++j) {
            CMatrix raw(r, r);
            for (index_t c = 0; c < r; ++c)
                for (index_t row = 0; row < r; ++row) {
                    const double re = signed_unit(rng);
                    const double im = signed_unit(rng);
                    raw(row, c) = cplx{re, im};
                }
            CMatrix h = 0.5 * (raw + raw.adjoint());
            const double norm = h.norm();
            if (norm > 0.0)
                h *= strength / norm;
            out.link(x, j) = exp_i_hermitian(h) * f.link(x, j);
        }
    return out;
}

GaugeField gauge_transform(const GaugeField& f, std::span<const CMatrix> g)
{
    const auto& geom = f.geometry();
    if (static_cast<index_t>(g.size()) != geom.num_sites())
        throw Error("gauge_transform: need one matrix per site");
    GaugeField out = f;
    for (index_t x = 0; x < geom.num_sites(); ++x)
        for (int j = 0; j < geom.dim(); ++j)
            out.link(x, j) = g[geom.shift(x, j)] * f.link(x, j) * g[x].adjoint();
    return out;
}

CMatrix plaquette(const GaugeField& f, index_t site, int j, int l)
{
    const auto& geom = f.geometry();
    const index_t xj = geom.shift(site, j);
    const index_t xl = geom.shift(site, l);
    return f.link(site, l).adjoint() * f.link(xl, j).adjoint() * f.link(xj, l) * f.link(site, j);
}

double estimate_curvature_norm(const GaugeField& f)
{
    const auto& geom = f.geometry();
    const index_t r = f.rank();
    const CMatrix id = CMatrix::Identity(r, r);
    double worst = 0.0;
    for (index_t x = 0; x < geom.num_sites(); ++x)
        for (int j = 0; j < geom.dim(); ++j)
            for (int l = j + 1; l < geom.dim(); ++l) {
                const CMatrix dev = plaquette(f, x, j, l) - id;
                const double norm = r == 1 ? std::abs(dev(0, 0))
                                           : Eigen::JacobiSVD<CMatrix>(dev).singularValues()(0);
                worst = std::max(worst, norm);
            }
    const double a = geom.spacing();
    return worst / (a * a);
}

CMatrix wilson_loop(const GaugeField& f, index_t base, int direction)
{
    const auto& geom = f.geometry();
    if (base < 0 || base >= geom.num_sites() || direction < 0 || direction >= geom.dim())
        throw Error("wilson_loop: site or direction out of range");
    CMatrix w = CMatrix::Identity(f.rank(), f.rank());
    index_t x = base;
    for (int step = 0; step < geom.extent(); ++step) {
        w = f.link(x, direction) * w;
        x = geom.shift(x, direction);
    }
    return w;
}

double unitarity_defect(const GaugeField& f)
{
    const index_t r = f.rank();
    const CMatrix id = CMatrix::Identity(r, r);
    double worst = 0.0;
    for (index_t x = 0; x < f.geometry().num_sites(); ++x)
        for (int j = 0; j < f.geometry().dim(); ++j)
            worst = std::max(worst, (f.link(x, j).adjoint() * f.link(x, j) - id).cwiseAbs().maxCoeff());
    return worst;
}

} // namespace wilson
