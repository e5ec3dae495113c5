#pragma once

#include <vector>

#include "wilson/types.hpp"

namespace wilson {

/// d mutually almost commuting n x n unitaries, i.e. a quasi-representation of
/// Z^d on C^n. `epsilon` is the largest pairwise commutator norm.
struct UnitaryTuple {
    int d = 0;
    index_t n = 0;
    std::vector<CMatrix> unitaries;
    double epsilon = 0.0;
};

/// Validates shapes and unitarity (entrywise ||U^*U - 1|| <= tol) and computes
/// epsilon = max_{j<l} ||[U_j, U_l]||_2.
UnitaryTuple make_unitary_tuple(std::vector<CMatrix> unitaries, double tol = 1e-12);

/// The clock and shift pair of size n: U_1 = diag(1, z, ..., z^{n-1}) with
/// z = exp(2 pi i / n), and U_2 the cyclic shift e_k -> e_{k+1}.
UnitaryTuple clock_shift(index_t n);

} // namespace wilson
