#include "wilson/unitary_tuple.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace wilson {

namespace {

double spectral_norm(const CMatrix& a)
{
    if (a.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

} // namespace

UnitaryTuple make_unitary_tuple(std::vector<CMatrix> unitaries, double tol)
{
    if (unitaries.empty())
        throw Error("unitary tuple: at least one matrix required");
    UnitaryTuple t;
    t.d = static_cast<int>(unitaries.size());
    t.n = unitaries.front().rows();
    for (std::size_t j = 0; j < unitaries.size(); ++j) {
        const auto& u = unitaries[j];
        if (u.rows() != t.n || u.cols() != t.n)
            throw Error("unitary tuple: matrix " + std::to_string(j) + " has the wrong shape");
        const double defect = (u.adjoint() * u - CMatrix::Identity(t.n, t.n)).cwiseAbs().maxCoeff();
        if (defect > tol)
            throw Error("unitary tuple: matrix " + std::to_string(j) + " is not unitary (defect " +
                        std::to_string(defect) + ")");
    }
    for (int j = 0; j < t.d; ++j)
        for (int l = j + 1; l < t.d; ++l)
            t.epsilon = std::max(t.epsilon, spectral_norm(unitaries[j] * unitaries[l] - unitaries[l] * unitaries[j]));
    t.unitaries = std::move(unitaries);
    return t;
}

UnitaryTuple clock_shift(index_t n)
{
    if (n < 1)
        throw Error("clock_shift: n must be positive");
    CMatrix clock = CMatrix::Zero(n, n);
    CMatrix shift = CMatrix::Zero(n, n);
    for (index_t k = 0; k < n; ++k) {
        clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
        shift((k + 1) % n, k) = 1.0;
    }
    return make_unitary_tuple({clock, shift});
}

} // namespace wilson
