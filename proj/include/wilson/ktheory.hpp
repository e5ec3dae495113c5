#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wilson/spectral.hpp"
#include "wilson/unitary_tuple.hpp"

namespace wilson {

/// Orientation sign sigma relating the lattice invariant to the continuum
/// index, I = sigma * Index. Calibrated once on d = 2, N = 16, K_12 = 1, m = 1
/// (cutoff mode) with the Clifford basis of clifford_rep and the shift
/// convention of WilsonOperator; never adjusted afterwards.
inline constexpr int kOrientationSign = +1;

struct IndexOptions {
    double tol = 0.0;         // <= 0: tol_scale * default_tolerance
    double tol_scale = 1.0;
    InertiaMethod method = InertiaMethod::Auto;
    /// When false, masses outside the admissible range are computed anyway
    /// (used by sweeps that cross window boundaries).
    bool enforce_range = true;
};

struct IndexReport {
    long long invariant = 0;
    Inertia inertia;
    MassMode mass_mode = MassMode::Cutoff;
    double m = 0.0;
    double mu = 0.0;
    double curvature_estimate = 0.0;
    /// N^2 gap^2 - ((mu N)^2 - 4 d^2 ||R||): the lower bound on the squared
    /// gap in physical units measured against its guaranteed value. Set when
    /// the hopping scale 1 lies in [mu, 1], i.e. mu <= 1.
    std::optional<double> bound_margin;
    std::optional<long long> continuum_index;
    std::optional<bool> agrees;
    std::vector<std::string> warnings;
};

/// I(D_W + (m/a) gamma) in cutoff mode (mu = m, requires 0 < m < 2) or
/// I(D_W + m gamma) in constant mode (mu = m / N, requires m > 0). Throws
/// SingularOperatorError when the operator has eigenvalues within tol of 0.
/// The endpoint m = 0 is not rejected up front: it is assembled and reported
/// through the singular-operator path, which is what it is for the
/// translation-invariant field.
IndexReport lattice_index(const GaugeField& f, double m, MassMode mode, const IndexOptions& opts = {});

/// Pfaffian of the flux matrix by expansion over perfect matchings. Throws for
/// odd d.
long long continuum_index(const FluxMatrix& k);

/// Sum of Pf(K_i) over the line bundles a field decomposes into, when known.
std::optional<long long> continuum_index(const GaugeField& f);

struct DegreeResult {
    int degree = 0;
    int resolution = 0;           // seeding grid per axis of the accepted run
    index_t preimages = 0;        // regular preimages of the target
    std::vector<double> target;   // tangent offset t: the target is (1, t) / |(1, t)|
    int perturbations = 0;        // retries with a perturbed target
};

/// Degree of F(k) = (W(k) + mu, sin 2 pi k_1, ..., sin 2 pi k_d) / modulus
/// from T^d to S^d, by signed preimage counting. A preimage of (1, t) / |(1, t)|
/// is a zero of Phi_j(k) = sin(2 pi k_j) - t_j (W(k) + mu) with W(k) + mu > 0,
/// counted with the sign of det dPhi. Zeros are found by Newton iteration from
/// every point of a resolution^d seeding grid; the count is accepted once
/// resolution and 2 * resolution agree. Throws on window boundaries
/// mu in {0, 2, ..., 2d}.
DegreeResult symbol_degree(int d, double mu, int resolution = 8);

/// Signed count of preimages of (1, t) / |(1, t)| at one seeding resolution,
/// without the doubling check. Throws if the target is not regular.
int signed_preimage_count(int d, double mu, std::span<const double> t, int resolution);

/// Corner-counting value sum over k in {0, 1/2}^d with W(k) + mu > 0 of
/// (-1)^{#halves}: the preimages of the north pole.
int corner_degree(int d, double mu);

enum class BoundStatus { Pass, Fail, Vacuous };
const char* to_string(BoundStatus s);

struct GapBoundReport {
    double lambda_min = 0.0;       // smallest |eigenvalue| of kappa pi(D_W) + m gamma
    double lambda_min_sq = 0.0;
    double curvature = 0.0;        // estimate_curvature_norm
    double rhs = 0.0;              // m^2 - 4 d^2 ||R||
    double margin = 0.0;           // lambda_min_sq - rhs
    BoundStatus status = BoundStatus::Pass;
};

/// Compares lambda_min((kappa pi(D_W) + m gamma)^2) with m^2 - 4 d^2 ||R||.
/// Requires 0 < m <= kappa <= N. Pass needs margin >= -1e-9; a negative
/// right-hand side is reported as vacuous.
GapBoundReport verify_gap_bound(const GaugeField& f, const CliffordRep& cl, double m, double kappa);

struct MassModeReport {
    IndexReport cutoff;
    IndexReport constant;
    bool equal = false;
};

/// Compares lattice_index in cutoff mode at m_cutoff with constant mode at
/// m_const. Singular operators in either mode propagate as
/// SingularOperatorError.
MassModeReport mass_mode_equivalence(const GaugeField& f, double m_cutoff, double m_const,
                                     const IndexOptions& opts = {});

/// The matrix sum_j (U_j - U_j^*)/2 (x) c(v_j) + (sum_j ((U_j + U_j^*)/2 - 1) + m) (x) gamma.
CMatrix acm_matrix(const UnitaryTuple& t, const CliffordRep& cl, double m);

/// I of acm_matrix. Requires even d and 0 < m < 2. Throws
/// SingularOperatorError when the matrix is not invertible.
long long acm_invariant(const UnitaryTuple& t, double m);

/// Half the signature of X (x) sigma_1 + Y (x) sigma_2 + Z (x) sigma_3 for
/// X = (U_1 - U_1^*)/2i, Y = (U_2 - U_2^*)/2i,
/// Z = (U_1 + U_1^*)/2 + (U_2 + U_2^*)/2 - 2 + m. Built from Pauli matrices
/// directly. Throws SingularOperatorError when not invertible.
long long loring_bott_index(const UnitaryTuple& t, double m);

/// Exel-Loring winding (1 / 2 pi) sum arg(eigenvalues of V U V^* U^*) for a
/// pair (U, V); requires ||[U, V]|| < 2.
long long exel_loring_invariant(const UnitaryTuple& t);

/// The link-weighted shift operators U_j on sites (x) C^r as a tuple of dense
/// unitaries; (U_j psi)(x + e_j) = U_j(x) psi(x).
UnitaryTuple link_shift_unitaries(const GaugeField& f);

} // namespace wilson
