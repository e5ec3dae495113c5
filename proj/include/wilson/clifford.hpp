#pragma once

#include <vector>

#include "wilson/types.hpp"

namespace wilson {

/// Irreducible graded representation of the complex Clifford algebra on a
/// negative-definite d-dimensional space, d even.
///
/// generators[j] squares to -1, is skew-adjoint, and anticommutes with every
/// other generator and with the grading. The grading is sigma_3^{(x) d/2},
/// i.e. diagonal with entries +-1, and equals i^{d/2} c(v_1)...c(v_d).
struct CliffordRep {
    int d = 0;
    std::vector<CMatrix> generators;
    CMatrix grading;

    [[nodiscard]] index_t spinor_dim() const { return grading.rows(); }
};

/// Iterated tensor-product construction:
///   c(v_{2i-1}) = i sigma_3^{(x)(i-1)} (x) sigma_1 (x) 1^{(x)(k-i)}
///   c(v_{2i})   = i sigma_3^{(x)(i-1)} (x) sigma_2 (x) 1^{(x)(k-i)}
/// with k = d/2. Throws for odd or non-positive d, and for d > 8 (spinor dimension above 16).
CliffordRep clifford_rep(int d);

/// Worst deviation over all four defining relations (anticommutation,
/// skew-adjointness, grading involution and oddness, traceless grading).
double clifford_relation_defect(const CliffordRep& cl);

} // namespace wilson
