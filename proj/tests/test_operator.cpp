#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "wilson/spectral.hpp"
#include "wilson/wilson_operator.hpp"

using namespace wilson;

namespace {

GaugeField flux_field(int d, int n, long k12, int rank = 1)
{
    const auto g = make_geometry(d, n);
    FluxMatrix k(d);
    k.set(0, 1, k12);
    auto f = constant_flux_field(g, k);
    if (rank > 1)
        f = tensor_field(f, trivial_field(g, rank));
    return f;
}

CVector random_vector(std::mt19937_64& rng, index_t n)
{
    std::normal_distribution<double> g;
    CVector v(n);
    for (index_t i = 0; i < n; ++i)
        v(i) = {g(rng), g(rng)};
    return v;
}

CMatrix random_unitary(std::mt19937_64& rng, index_t n)
{
    std::normal_distribution<double> g;
    CMatrix z(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            z(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<CMatrix> qr(z);
    return qr.householderQ() * CMatrix::Identity(n, n);
}

std::vector<double> eigenvalues(const CMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

// 1 (x) gamma on sites (x) C^r (x) spinors.
CMatrix grading_block(const WilsonOperator& h, const CliffordRep& cl)
{
    const index_t copies = h.dim() / cl.spinor_dim();
    return kron(CMatrix::Identity(copies, copies), cl.grading);
}

} // namespace

TEST_CASE("assembled operator is exactly Hermitian with bounded row support")
{
    for (int d : {2, 4}) {
        for (int n : {2, 3, 4}) {
            if (d == 4 && n > 3)
                continue;
            CAPTURE(d);
            CAPTURE(n);
            const auto f = perturb_field(flux_field(d, n, 1, 2), 0.1, 4);
            const auto h = assemble(f, clifford_rep(d), 0.7);
            const CMatrix m = h.to_dense();
            CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(h.dim() == f.geometry().num_sites() * 2 * (index_t{1} << (d / 2)));
            const index_t bound = (2 * d + 1) * f.rank() * h.spinor_dim();
            const Eigen::SparseMatrix<cplx, Eigen::RowMajor> rows = h.to_sparse();
            for (index_t r = 0; r < rows.outerSize(); ++r)
                CHECK(rows.outerIndexPtr()[r + 1] - rows.outerIndexPtr()[r] <= bound);
        }
    }
}

TEST_CASE("trivial d = 2, N = 2, mu = 1 spectrum")
{
    const auto f = trivial_field(make_geometry(2, 2), 1);
    const auto h = assemble(f, clifford_rep(2), 1.0);
    const auto ev = eigenvalues(h.to_dense());
    const std::vector<double> expected{-3, -1, -1, -1, 1, 1, 1, 3};
    REQUIRE(ev.size() == expected.size());
    for (std::size_t i = 0; i < ev.size(); ++i)
        CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("trace vanishes and mass enters linearly")
{
    const auto cl = clifford_rep(2);
    const auto f = perturb_field(flux_field(2, 4, 2, 2), 0.2, 8);
    const CMatrix h0 = assemble(f, cl, 0.0).to_dense();
    for (double mu : {0.3, 1.0, 2.5}) {
        const auto h = assemble(f, cl, mu);
        const CMatrix hm = h.to_dense();
        CHECK(std::abs(hm.trace()) < 1e-10);
        CHECK((hm - h0 - mu * grading_block(h, cl)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("positive rescaling preserves inertia")
{
    const auto cl = clifford_rep(2);
    const auto f = flux_field(2, 6, 1);
    const auto h = assemble(f, cl, 1.0);
    for (double c : {0.25, 3.0, 16.0}) {
        const auto hc = assemble_scaled(f, cl, c, c * 1.0);
        CHECK((hc.to_dense() - c * h.to_dense()).cwiseAbs().maxCoeff() < 1e-12 * c);
        CHECK(same_counts(inertia(hc), inertia(h)));
    }
}

TEST_CASE("trivial field commutes with translations")
{
    const auto g = make_geometry(2, 5);
    const auto cl = clifford_rep(2);
    const auto h = assemble(trivial_field(g, 2), cl, 0.8);
    const index_t b = h.block_size();
    std::mt19937_64 rng(3);
    const CVector v = random_vector(rng, h.dim());
    for (int j = 0; j < 2; ++j) {
        auto translate = [&](const CVector& x) {
            CVector y(x.size());
            for (index_t s = 0; s < g.num_sites(); ++s)
                y.segment(g.shift(s, j) * b, b) = x.segment(s * b, b);
            return y;
        };
        CHECK((h.apply(translate(v)) - translate(h.apply(v))).norm() < 1e-12);
    }
}

TEST_CASE("matvec")
{
    const auto f = perturb_field(flux_field(2, 2, 1), 0.3, 1);
    const auto h = assemble(f, clifford_rep(2), 1.0);
    const CMatrix dense = h.to_dense();
    CHECK(matvec(h, CVector::Zero(h.dim())).norm() == 0.0);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        const CVector v = random_vector(rng, h.dim());
        CHECK((matvec(h, v) - dense * v).cwiseAbs().maxCoeff() < 1e-13);
    }
    for (index_t i = 0; i < h.dim(); ++i)
        for (index_t j = 0; j < h.dim(); ++j) {
            const CVector hi = matvec(h, CVector::Unit(h.dim(), i));
            const CVector hj = matvec(h, CVector::Unit(h.dim(), j));
            CHECK(hi(j) == std::conj(hj(i)));
        }
    CHECK_THROWS_AS(matvec(h, CVector::Zero(h.dim() + 1)), Error);
}

TEST_CASE("dimension mismatch is rejected")
{
    CHECK_THROWS_AS(assemble(trivial_field(make_geometry(2, 4), 1), clifford_rep(4), 1.0), Error);
}

TEST_CASE("gauge transformation preserves the spectrum")
{
    const auto g = make_geometry(2, 4);
    const auto cl = clifford_rep(2);
    const auto f = perturb_field(flux_field(2, 4, 1, 2), 0.1, 2);
    std::mt19937_64 rng(99);
    std::vector<CMatrix> gs;
    for (index_t s = 0; s < g.num_sites(); ++s)
        gs.push_back(random_unitary(rng, 2));
    const auto h1 = assemble(f, cl, 1.0);
    const auto h2 = assemble(gauge_transform(f, gs), cl, 1.0);
    const auto e1 = eigenvalues(h1.to_dense());
    const auto e2 = eigenvalues(h2.to_dense());
    for (std::size_t i = 0; i < e1.size(); ++i)
        CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-10));
    CHECK(same_counts(inertia(h1), inertia(h2)));
}

TEST_CASE("Matrix Market export reproduces the matrix")
{
    const auto f = perturb_field(flux_field(2, 3, 1), 0.2, 6);
    const auto h = assemble(f, clifford_rep(2), 1.2, MassMode::Constant);
    std::ostringstream out;
    write_matrix_market(out, h);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "%%MatrixMarket matrix coordinate complex hermitian");
    while (in.peek() == '%')
        std::getline(in, line);
    index_t rows = 0, cols = 0, nnz = 0;
    in >> rows >> cols >> nnz;
    CHECK(rows == h.dim());
    CHECK(cols == h.dim());
    CMatrix m = CMatrix::Zero(rows, cols);
    for (index_t e = 0; e < nnz; ++e) {
        index_t r = 0, c = 0;
        double re = 0.0, im = 0.0;
        in >> r >> c >> re >> im;
        CHECK(r <= c);
        m(r - 1, c - 1) = {re, im};
        if (r != c)
            m(c - 1, r - 1) = {re, -im};
    }
    CHECK((m - h.to_dense()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("symbol values")
{
    const auto cl = clifford_rep(2);
    const std::vector<double> zero{0.0, 0.0};
    const auto s0 = symbol(cl, zero, 0.7);
    CHECK((s0.matrix - 0.7 * cl.grading).cwiseAbs().maxCoeff() < 1e-15);

    const std::vector<double> corner{0.5, 0.5};
    const auto sc = symbol(cl, corner, 0.7);
    CHECK((sc.matrix - (0.7 - 4.0) * cl.grading).cwiseAbs().maxCoeff() < 1e-14);

    const std::vector<double> quarter{0.25, 0.25};
    const auto sq = eigenvalues(symbol(cl, quarter, 1.0).matrix);
    CHECK(sq[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
    CHECK(sq[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(symbol_modulus(quarter, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    // mu = -W(k) cancels the gamma term, leaving D(k), which anticommutes with gamma
    const auto cl4 = clifford_rep(4);
    const std::vector<double> k{0.1, 0.37, 0.5, 0.8};
    double w = 0.0;
    for (double kj : k)
        w += std::cos(2 * std::numbers::pi * kj) - 1.0;
    const auto ev = eigenvalues(symbol(cl4, k, -w).matrix);
    for (std::size_t i = 0; i < ev.size(); ++i)
        CHECK(ev[i] == doctest::Approx(-ev[ev.size() - 1 - i]).epsilon(1e-12));
    CHECK_THROWS_AS(symbol(cl4, zero, 1.0), Error);
}

TEST_CASE("symbol gap")
{
    CHECK(symbol_gap(2, 1.0, 512) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(symbol_gap(2, 0.0, 64) == 0.0);
    CHECK(symbol_gap(4, 0.0, 16) == 0.0);
    CHECK(symbol_gap(2, 2.0, 64) < 1e-12);
    CHECK(symbol_gap(4, 2.0, 16) < 1e-12);
    for (double mu : {0.1, 0.5, 1.0, 1.5, 1.9})
        CHECK(symbol_gap(2, mu, 256) > 0.0);
    // the reduced scan equals a brute-force full grid scan
    for (double mu : {0.3, 1.7, 3.1}) {
        double best = 1e300;
        const int n = 24;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const std::vector<double> k{double(a) / n, double(b) / n};
                best = std::min(best, symbol_modulus(k, mu));
            }
        CHECK(symbol_gap(2, mu, n) == doctest::Approx(best).epsilon(1e-14));
    }
    const auto est = certified_symbol_gap(2, 1.0);
    CHECK(est.certified);
    CHECK(est.gap == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(symbol_gap(2, 1.0, 1), Error);
}
