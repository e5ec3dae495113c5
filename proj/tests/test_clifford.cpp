#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include "wilson/clifford.hpp"

using namespace wilson;

namespace {

const cplx I1{0.0, 1.0};

CMatrix pauli(int k)
{
    CMatrix s(2, 2);
    if (k == 1)
        s << 0, 1, 1, 0;
    else if (k == 2)
        s << 0, -I1, I1, 0;
    else
        s << 1, 0, 0, -1;
    return s;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("relations hold for d = 2, 4, 6, 8")
{
    for (int d : {2, 4, 6, 8}) {
        CAPTURE(d);
        const auto cl = clifford_rep(d);
        REQUIRE(cl.generators.size() == static_cast<std::size_t>(d));
        const index_t s = index_t{1} << (d / 2);
        CHECK(cl.spinor_dim() == s);
        const CMatrix id = CMatrix::Identity(s, s);
        for (int j = 0; j < d; ++j) {
            const auto& cj = cl.generators[j];
            CHECK(max_abs(cj.adjoint() + cj) < 1e-12);
            CHECK(max_abs(cl.grading * cj + cj * cl.grading) < 1e-12);
            for (int l = 0; l < d; ++l) {
                const CMatrix ac = cj * cl.generators[l] + cl.generators[l] * cj;
                CHECK(max_abs(ac + (j == l ? 2.0 : 0.0) * id) < 1e-12);
            }
        }
        CHECK(max_abs(cl.grading.adjoint() - cl.grading) < 1e-12);
        CHECK(max_abs(cl.grading * cl.grading - id) < 1e-12);
        CHECK(std::abs(cl.grading.trace()) < 1e-12);
        CHECK(clifford_relation_defect(cl) < 1e-12);
    }
}

TEST_CASE("d = 2 is i sigma_1, i sigma_2, sigma_3")
{
    const auto cl = clifford_rep(2);
    CHECK(max_abs(cl.generators[0] - I1 * pauli(1)) == 0.0);
    CHECK(max_abs(cl.generators[1] - I1 * pauli(2)) == 0.0);
    CHECK(max_abs(cl.grading - pauli(3)) == 0.0);
    // gamma c_1 + c_1 gamma vanishes exactly
    CHECK(max_abs(cl.grading * cl.generators[0] + cl.generators[0] * cl.grading) == 0.0);
}

TEST_CASE("d = 4 explicit generators")
{
    const auto cl = clifford_rep(4);
    const CMatrix one = CMatrix::Identity(2, 2);
    CHECK(max_abs(cl.generators[0] - I1 * kron(pauli(1), one)) < 1e-15);
    CHECK(max_abs(cl.generators[1] - I1 * kron(pauli(2), one)) < 1e-15);
    CHECK(max_abs(cl.generators[2] - I1 * kron(pauli(3), pauli(1))) < 1e-15);
    CHECK(max_abs(cl.generators[3] - I1 * kron(pauli(3), pauli(2))) < 1e-15);
    CHECK(max_abs(cl.grading - kron(pauli(3), pauli(3))) < 1e-15);
}

TEST_CASE("grading is i^(d/2) c_1 ... c_d and diagonal")
{
    for (int d : {2, 4, 6, 8}) {
        CAPTURE(d);
        const auto cl = clifford_rep(d);
        CMatrix p = CMatrix::Identity(cl.spinor_dim(), cl.spinor_dim());
        for (const auto& c : cl.generators)
            p = p * c;
        p *= std::pow(I1, d / 2);
        CHECK(max_abs(p - cl.grading) < 1e-12);
        const CMatrix off = cl.grading - CMatrix(cl.grading.diagonal().asDiagonal());
        CHECK(max_abs(off) == 0.0);
    }
}

TEST_CASE("commutant is the scalars")
{
    for (int d : {2, 4}) {
        CAPTURE(d);
        const auto cl = clifford_rep(d);
        const index_t s = cl.spinor_dim();
        const CMatrix id = CMatrix::Identity(s, s);
        // vec(c X - X c) = (1 (x) c - c^T (x) 1) vec(X)
        CMatrix sys(d * s * s, s * s);
        for (int j = 0; j < d; ++j) {
            const auto& c = cl.generators[j];
            sys.middleRows(j * s * s, s * s) = kron(id, c) - kron(c.transpose(), id);
        }
        Eigen::FullPivLU<CMatrix> lu(sys);
        CHECK(s * s - lu.rank() == 1);
    }
}

TEST_CASE("construction is deterministic")
{
    const auto a = clifford_rep(6);
    const auto b = clifford_rep(6);
    for (int j = 0; j < 6; ++j)
        CHECK(a.generators[j] == b.generators[j]);
    CHECK(a.grading == b.grading);
}

TEST_CASE("odd or non-positive d is rejected")
{
    CHECK_THROWS_WITH_AS(clifford_rep(3), doctest::Contains("even dimension required"), Error);
    CHECK_THROWS_WITH_AS(clifford_rep(0), doctest::Contains("even dimension required"), Error);
    CHECK_THROWS_WITH_AS(clifford_rep(-2), doctest::Contains("even dimension required"), Error);
    CHECK_THROWS_AS(clifford_rep(10), Error);
}
