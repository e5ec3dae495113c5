#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wilson {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using index_t = std::ptrdiff_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised whenever an operator that must be invertible has eigenvalues in the
// zero band (-tol, tol).
class SingularOperatorError : public Error {
public:
    using Error::Error;
};

// Kronecker product A (x) B, first factor outermost.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Largest entrywise modulus of A - A^*.
double hermitian_defect(const CMatrix& a);

} // namespace wilson
