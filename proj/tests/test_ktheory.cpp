#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <Eigen/QR>

#include "wilson/ktheory.hpp"

using namespace wilson;

namespace {

GaugeField flux_field(int d, int n, std::initializer_list<std::array<long, 3>> entries)
{
    FluxMatrix k(d);
    for (const auto& e : entries)
        k.set(static_cast<int>(e[0]), static_cast<int>(e[1]), e[2]);
    return constant_flux_field(make_geometry(d, n), k);
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

CMatrix block_diag(const CMatrix& a, const CMatrix& b)
{
    CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

CMatrix phases(std::initializer_list<double> k)
{
    CMatrix u = CMatrix::Zero(k.size(), k.size());
    index_t i = 0;
    for (double v : k) {
        u(i, i) = std::polar(1.0, 2 * std::numbers::pi * v);
        ++i;
    }
    return u;
}

} // namespace

TEST_CASE("Pfaffian continuum index")
{
    CHECK(continuum_index(FluxMatrix(2, {0, 3, -3, 0})) == 3);
    FluxMatrix a(4);
    a.set(0, 1, 1);
    a.set(2, 3, 1);
    CHECK(continuum_index(a) == 1);
    FluxMatrix b(4);
    b.set(0, 1, 2);
    b.set(2, 3, -1);
    CHECK(continuum_index(b) == -2);
    CHECK(continuum_index(FluxMatrix(4)) == 0);
    CHECK(continuum_index(FluxMatrix(6)) == 0);
    CHECK_THROWS_AS(continuum_index(FluxMatrix(3)), Error);

    // Pf(K) = K12 K34 - K13 K24 + K14 K23, and Pf^2 = det in d = 6
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<long> pick(-3, 3);
    for (int t = 0; t < 20; ++t) {
        FluxMatrix k4(4);
        for (int j = 0; j < 4; ++j)
            for (int l = j + 1; l < 4; ++l)
                k4.set(j, l, pick(rng));
        CHECK(continuum_index(k4) == k4(0, 1) * k4(2, 3) - k4(0, 2) * k4(1, 3) + k4(0, 3) * k4(1, 2));
        FluxMatrix k6(6);
        RMatrix m = RMatrix::Zero(6, 6);
        for (int j = 0; j < 6; ++j)
            for (int l = j + 1; l < 6; ++l) {
                k6.set(j, l, pick(rng));
                m(j, l) = double(k6(j, l));
                m(l, j) = -m(j, l);
            }
        const double pf = double(continuum_index(k6));
        CHECK(pf * pf == doctest::Approx(m.determinant()).epsilon(1e-9));
    }
}

TEST_CASE("continuum index of composite fields")
{
    const auto f1 = flux_field(2, 6, {{0, 1, 1}});
    const auto f2 = flux_field(2, 6, {{0, 1, -3}});
    CHECK(continuum_index(direct_sum_field(f1, f2)) == -2);
    CHECK(continuum_index(tensor_field(f1, f2)) == -2);
    CHECK(continuum_index(tensor_field(f1, trivial_field(f1.geometry(), 3))) == 3);
    GaugeField raw(make_geometry(2, 4), 1);
    CHECK_FALSE(continuum_index(raw).has_value());
}

TEST_CASE("lattice index d = 2 calibration and small cases")
{
    CHECK(kOrientationSign == 1);
    const auto rep = lattice_index(flux_field(2, 16, {{0, 1, 1}}), 1.0, MassMode::Cutoff);
    CHECK(rep.invariant == 1);
    REQUIRE(rep.agrees);
    CHECK(*rep.agrees);
    CHECK(rep.inertia.n_zero == 0);
    CHECK(rep.mu == 1.0);
    CHECK(rep.bound_margin.has_value());
    CHECK(rep.invariant == half_signature(rep.inertia).value());

    for (long k = -3; k <= 3; ++k) {
        CAPTURE(k);
        const auto r = lattice_index(flux_field(2, 8, {{0, 1, k}}), 1.0, MassMode::Cutoff);
        CHECK(r.invariant == kOrientationSign * k);
    }
    CHECK(lattice_index(trivial_field(make_geometry(2, 8), 1), 1.0, MassMode::Cutoff).invariant == 0);
}

TEST_CASE("lattice index parameter checks")
{
    const auto f = trivial_field(make_geometry(2, 8), 1);
    CHECK_THROWS_WITH_AS(lattice_index(f, 2.0, MassMode::Cutoff), doctest::Contains("0 < m < 2"), Error);
    CHECK_THROWS_AS(lattice_index(f, -0.5, MassMode::Cutoff), Error);
    CHECK_THROWS_AS(lattice_index(f, -1.0, MassMode::Constant), Error);
    // m = 0 closes the gap at k = 0
    CHECK_THROWS_AS(lattice_index(f, 0.0, MassMode::Cutoff), SingularOperatorError);
    IndexOptions loose;
    loose.enforce_range = false;
    // every symbol block has one eigenvalue of each sign, so a flat field has I = 0 in any window
    const auto outside = lattice_index(f, 2.5, MassMode::Cutoff, loose);
    CHECK(outside.invariant == 0);
    CHECK_FALSE(outside.warnings.empty());
    CHECK_FALSE(outside.bound_margin.has_value());
    const auto c = lattice_index(f, 4.0, MassMode::Constant);
    CHECK(c.mu == 0.5);
    CHECK(c.invariant == 0);
}

TEST_CASE("lattice index d = 4")
{
    const auto r = lattice_index(flux_field(4, 4, {{0, 1, 1}, {2, 3, 1}}), 1.0, MassMode::Cutoff);
    CHECK(r.inertia.method == InertiaMethod::Sparse);
    CHECK(r.invariant == 1);
    CHECK(r.continuum_index == 1);
}

TEST_CASE("additivity over direct sums")
{
    const auto f = flux_field(2, 8, {{0, 1, 1}});
    const auto g = flux_field(2, 8, {{0, 1, -2}});
    const auto i_f = lattice_index(f, 1.0, MassMode::Cutoff).invariant;
    const auto i_g = lattice_index(g, 1.0, MassMode::Cutoff).invariant;
    const auto s = lattice_index(direct_sum_field(f, g), 1.0, MassMode::Cutoff);
    CHECK(s.invariant == i_f + i_g);
    CHECK(s.continuum_index == -1);
    CHECK(*s.agrees);
}

TEST_CASE("stability in N and m")
{
    for (long k : {-2, 1, 3}) {
        CAPTURE(k);
        for (int n : {8, 16})
            for (double m : {0.5, 1.0, 1.5}) {
                CAPTURE(n);
                CAPTURE(m);
                CHECK(lattice_index(flux_field(2, n, {{0, 1, k}}), m, MassMode::Cutoff).invariant == k);
            }
    }
    // N = 4 is too coarse for K12 = 2 at m = 0.5 (gap ~0.05, index 0)
    for (double m : {1.0, 1.5})
        CHECK(lattice_index(flux_field(4, 4, {{0, 1, 2}, {2, 3, -1}}), m, MassMode::Cutoff).invariant == -2);
}

TEST_CASE("perturbation robustness")
{
    const auto f = flux_field(2, 12, {{0, 1, 1}});
    const auto base = lattice_index(f, 1.0, MassMode::Cutoff).invariant;
    const double strength = 0.2;
    for (int step = 1; step <= 5; ++step) {
        const auto p = perturb_field(f, strength * step / 5.0, 2024);
        const auto r = lattice_index(p, 1.0, MassMode::Cutoff);
        CHECK(r.inertia.gap > 0.05);
        CHECK(r.invariant == base);
        CHECK(*r.agrees);
    }
}

TEST_CASE("symbol degree")
{
    CHECK(symbol_degree(2, 1.0).degree == 1);
    CHECK(symbol_degree(4, 1.0, 4).degree == 1);
    CHECK(symbol_degree(2, -1.0).degree == 0);
    CHECK(symbol_degree(4, -1.0, 4).degree == 0);
    // second and third windows in d = 2
    CHECK(symbol_degree(2, 3.0).degree == corner_degree(2, 3.0));
    CHECK(corner_degree(2, 3.0) == -1);
    CHECK(symbol_degree(2, 5.0).degree == 0);
    CHECK(corner_degree(2, 1.0) == 1);
    CHECK(corner_degree(4, 3.0) == -3);

    // any regular target gives the same count
    for (double mu : {0.7, 1.0, 3.0}) {
        const int ref = symbol_degree(2, mu).degree;
        for (const auto& t : {std::vector<double>{0.03, -0.02}, std::vector<double>{-0.05, 0.04}})
            CHECK(signed_preimage_count(2, mu, t, 16) == ref);
    }
    const auto r = symbol_degree(2, 1.0, 4);
    CHECK(r.resolution >= 4);
    CHECK(r.preimages >= 1);

    for (double mu : {0.0, 2.0, 4.0})
        CHECK_THROWS_AS(symbol_degree(2, mu), Error);
}

TEST_CASE("gap bound")
{
    const auto cl = clifford_rep(2);
    const auto triv = trivial_field(make_geometry(2, 8), 1);
    for (double m : {0.5, 1.0, 3.0}) {
        const auto r = verify_gap_bound(triv, cl, m, m);
        CHECK(r.status == BoundStatus::Pass);
        CHECK(r.margin >= -1e-9);
        CHECK(r.lambda_min == doctest::Approx(m).epsilon(1e-6));
    }
    const auto flux = flux_field(2, 16, {{0, 1, 1}});
    const auto p = verify_gap_bound(flux, cl, 11.0, 16.0);
    CHECK(p.rhs > 0.0);
    CHECK(p.status == BoundStatus::Pass);
    const auto v = verify_gap_bound(flux_field(2, 4, {{0, 1, 3}}), cl, 1.0, 1.0);
    CHECK(v.rhs < 0.0);
    CHECK(v.status == BoundStatus::Vacuous);
    CHECK(std::string(to_string(v.status)) == "vacuous");
    CHECK_THROWS_AS(verify_gap_bound(flux, cl, 2.0, 1.0), Error);
    CHECK_THROWS_AS(verify_gap_bound(flux, cl, 2.0, 17.0), Error);
}

TEST_CASE("mass-mode equivalence")
{
    const auto triv = trivial_field(make_geometry(2, 8), 1);
    const auto t = mass_mode_equivalence(triv, 1.0, 4.0);
    CHECK(t.equal);
    CHECK(t.cutoff.invariant == 0);

    // tiny constant mass: below the curvature threshold, refused
    const auto f8 = flux_field(2, 8, {{0, 1, 1}});
    CHECK_THROWS_WITH_AS(mass_mode_equivalence(f8, 1.0, 1e-3), doctest::Contains("not comparable"), Error);
    // tiny constant mass on a flat field: the gap collapses and is reported as singular
    IndexOptions opts;
    opts.tol = 1e-2;
    CHECK_THROWS_AS(mass_mode_equivalence(triv, 1.0, 1e-3, opts), SingularOperatorError);
}

TEST_CASE("acm invariant")
{
    const auto id = make_unitary_tuple({CMatrix::Identity(3, 3), CMatrix::Identity(3, 3)});
    CHECK(acm_invariant(id, 1.0) == 0);
    const auto cl = clifford_rep(2);
    CHECK((acm_matrix(id, cl, 1.0) - kron(CMatrix::Identity(3, 3), cl.grading)).cwiseAbs().maxCoeff() < 1e-15);

    for (index_t n = 4; n <= 12; ++n) {
        CAPTURE(n);
        const auto cs = clock_shift(n);
        const auto a = acm_invariant(cs, 1.0);
        CHECK(std::abs(a) == 1);
        CHECK(a == loring_bott_index(cs, 1.0));
        CHECK(exel_loring_invariant(cs) == -1);
    }
    CHECK_THROWS_AS(acm_invariant(clock_shift(4), 2.0), Error);
    CHECK_THROWS_AS(acm_invariant(make_unitary_tuple({CMatrix::Identity(2, 2)}), 1.0), Error);
}

TEST_CASE("acm invariant is conjugation invariant")
{
    std::mt19937_64 rng(77);
    for (index_t n : {5, 8}) {
        const auto cs = clock_shift(n);
        const CMatrix w = random_unitary(rng, n);
        const auto conj = make_unitary_tuple(
            {w * cs.unitaries[0] * w.adjoint(), w * cs.unitaries[1] * w.adjoint()}, 1e-10);
        CHECK(acm_invariant(conj, 1.0) == acm_invariant(cs, 1.0));
        CHECK(loring_bott_index(conj, 1.0) == loring_bott_index(cs, 1.0));
    }
}

TEST_CASE("acm invariant with a commuting diagonal summand")
{
    // joint phases away from the corners where the symbol vanishes for m = 1
    const CMatrix d1 = phases({0.1, 0.3, 0.5, 0.7});
    const CMatrix d2 = phases({0.2, 0.9, 0.5, 0.25});
    const auto diag = make_unitary_tuple({d1, d2});
    CHECK(acm_invariant(diag, 1.0) == 0);
    const auto cs = clock_shift(6);
    const auto sum = make_unitary_tuple(
        {block_diag(cs.unitaries[0], d1), block_diag(cs.unitaries[1], d2)}, 1e-10);
    CHECK(acm_invariant(sum, 1.0) == acm_invariant(cs, 1.0));
}

TEST_CASE("singular acm matrix is reported")
{
    // n = 2 clock and shift anticommute; at m = 2 - sqrt 2 the matrix has a kernel
    const auto cs = clock_shift(2);
    CHECK_THROWS_WITH_AS(acm_invariant(cs, 2.0 - std::sqrt(2.0)), doctest::Contains("too far from commuting"),
                         SingularOperatorError);
}

TEST_CASE("tuple form equals lattice form")
{
    const auto f = flux_field(2, 4, {{0, 1, 1}});
    const auto t = link_shift_unitaries(f);
    CHECK(t.n == 16);
    CHECK(acm_invariant(t, 1.0) == lattice_index(f, 1.0, MassMode::Cutoff).invariant);
    // the matrices coincide, not just the invariants
    const auto cl = clifford_rep(2);
    CHECK((acm_matrix(t, cl, 1.0) - assemble(f, cl, 1.0).to_dense()).cwiseAbs().maxCoeff() < 1e-14);
}
