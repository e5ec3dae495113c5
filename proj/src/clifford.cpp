#include "wilson/clifford.hpp"

#include <algorithm>

namespace wilson {

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double hermitian_defect(const CMatrix& a)
{
    if (a.rows() != a.cols())
        return std::numeric_limits<double>::infinity();
    if (a.size() == 0)
        return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

CMatrix pauli(int k)
{
    const cplx i{0.0, 1.0};
    CMatrix s(2, 2);
    switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
    }
    return s;
}

CMatrix tensor_chain(const std::vector<int>& factors)
{
    CMatrix out = CMatrix::Identity(1, 1);
    for (int f : factors)
        out = kron(out, pauli(f));
    return out;
}

} // namespace

CliffordRep clifford_rep(int d)
{
    if (d <= 0 || d % 2 != 0)
        throw Error("even dimension required (got d = " + std::to_string(d) + ")");
    if (d > 8)
        throw Error("clifford_rep: d = " + std::to_string(d) + " exceeds supported range");

    const int k = d / 2;
    const cplx i{0.0, 1.0};
    CliffordRep cl;
    cl.d = d;
    for (int pos = 0; pos < k; ++pos) {
        for (int p : {1, 2}) {
            std::vector<int> factors(k, 0);
            std::fill(factors.begin(), factors.begin() + pos, 3);
            factors[pos] = p;
            cl.generators.push_back(i * tensor_chain(factors));
        }
    }
    cl.grading = tensor_chain(std::vector<int>(k, 3));
    return cl;
}

double clifford_relation_defect(const CliffordRep& cl)
{
    const index_t s = cl.spinor_dim();
    const CMatrix id = CMatrix::Identity(s, s);
    const CMatrix& g = cl.grading;
    double worst = 0.0;
    auto track = [&](const CMatrix& m) { worst = std::max(worst, m.cwiseAbs().maxCoeff()); };

    for (std::size_t j = 0; j < cl.generators.size(); ++j) {
        const CMatrix& cj = cl.generators[j];
        for (std::size_t l = 0; l < cl.generators.size(); ++l) {
            const CMatrix& cm = cl.generators[l];
            track(cj * cm + cm * cj + (j == l ? 2.0 : 0.0) * id);
        }
        track(cj.adjoint() + cj);
        track(g * cj + cj * g);
    }
    track(g - g.adjoint());
    track(g * g - id);
    worst = std::max(worst, std::abs(g.trace()));
    return worst;
}

} // namespace wilson
