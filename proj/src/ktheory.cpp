#include "wilson/ktheory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace wilson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// Pfaffian over the index list `idx` by expansion along its first entry.
long long pfaffian(const FluxMatrix& k, std::vector<int>& idx)
{
    if (idx.empty())
        return 1;
    const int first = idx[0];
    long long total = 0;
    for (std::size_t p = 1; p < idx.size(); ++p) {
        const long long a = k(first, idx[p]);
        if (a == 0)
            continue;
        std::vector<int> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t q = 1; q < idx.size(); ++q)
            if (q != p)
                rest.push_back(idx[q]);
        const long long sign = (p % 2 == 1) ? 1 : -1;
        total += sign * a * pfaffian(k, rest);
    }
    return total;
}

} // namespace

long long continuum_index(const FluxMatrix& k)
{
    const int d = k.dim();
    if (d <= 0 || d % 2 != 0)
        throw Error("continuum index requires even dimension");
    std::vector<int> idx(d);
    for (int j = 0; j < d; ++j)
        idx[j] = j;
    return pfaffian(k, idx);
}

std::optional<long long> continuum_index(const GaugeField& f)
{
    if (!f.line_summands)
        return std::nullopt;
    long long total = 0;
    for (const auto& k : *f.line_summands)
        total += continuum_index(k);
    return total;
}

IndexReport lattice_index(const GaugeField& f, double m, MassMode mode, const IndexOptions& opts)
{
    const auto& g = f.geometry();
    const int d = g.dim();
    const int n = g.extent();
    IndexReport rep;
    rep.mass_mode = mode;
    rep.m = m;
    if (mode == MassMode::Cutoff) {
        if (opts.enforce_range && !(m >= 0.0 && m < 2.0))
            throw Error("cutoff mode requires 0 < m < 2 (got " + fmt(m) + ")");
        rep.mu = m;
    } else {
        if (opts.enforce_range && !(m >= 0.0))
            throw Error("constant mode requires m > 0 (got " + fmt(m) + ")");
        rep.mu = m / n;
    }
    const auto cl = clifford_rep(d);
    rep.curvature_estimate = estimate_curvature_norm(f);
    const double threshold = 4.0 * d * d * rep.curvature_estimate;
    if (mode == MassMode::Constant && m <= threshold)
        rep.warnings.push_back("m = " + fmt(m) + " does not exceed 4 d^2 ||R|| = " + fmt(threshold) +
                               "; no a priori gap guarantee");
    if (rep.mu >= 2.0 || rep.mu <= 0.0)
        rep.warnings.push_back("mu = m a = " + fmt(rep.mu) + " lies outside the window (0, 2)");

    const auto h = assemble(f, cl, rep.mu, mode);
    const double tol = opts.tol > 0.0 ? opts.tol : opts.tol_scale * default_tolerance(h.norm_inf());
    rep.inertia = inertia(h, tol, opts.method);
    require_invertible(rep.inertia);
    rep.invariant = half_signature(rep.inertia).value();

    if (rep.mu > 0.0 && rep.mu <= 1.0) {
        const double gap_phys = n * rep.inertia.gap;
        const double m_phys = rep.mu * n;
        rep.bound_margin = gap_phys * gap_phys - (m_phys * m_phys - threshold);
    }
    rep.continuum_index = continuum_index(f);
    if (rep.continuum_index)
        rep.agrees = rep.invariant == kOrientationSign * *rep.continuum_index;
    return rep;
}

// ---------------------------------------------------------------------------

int corner_degree(int d, double mu)
{
    int total = 0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        const int halves = std::popcount(mask);
        if (mu - 2.0 * halves > 0.0)
            total += (halves % 2 == 0) ? 1 : -1;
    }
    return total;
}

namespace {

struct Root {
    std::vector<double> k;
    int sign;
};

double torus_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double diff = std::abs(a[j] - b[j]);
        diff = std::min(diff, 1.0 - diff);
        worst = std::max(worst, diff);
    }
    return worst;
}

double wrap(double x)
{
    x -= std::floor(x);
    return x >= 1.0 ? 0.0 : x;
}

enum class CountStatus { Ok, Degenerate };

struct CountResult {
    CountStatus status = CountStatus::Ok;
    int degree = 0;
    std::vector<Root> roots;
};

CountResult count_preimages(int d, double mu, const std::vector<double>& t, int res)
{
    CountResult out;
    const double det_floor = 1e-6 * std::pow(kTwoPi, d);
    std::vector<double> k(d), phi(d);
    RMatrix jac(d, d);
    RVector rhs(d);

    auto evaluate = [&](const std::vector<double>& x, bool with_jacobian) {
        double w = mu;
        for (int j = 0; j < d; ++j)
            w += std::cos(kTwoPi * x[j]) - 1.0;
        for (int j = 0; j < d; ++j)
            phi[j] = std::sin(kTwoPi * x[j]) - t[j] * w;
        if (with_jacobian)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l)
                    jac(j, l) = (j == l ? kTwoPi * std::cos(kTwoPi * x[j]) : 0.0) + t[j] * kTwoPi * std::sin(kTwoPi * x[l]);
        return w;
    };

    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= res;
    std::vector<long> digits(d);
    for (long long s = 0; s < total; ++s) {
        long long rem = s;
        for (int j = d - 1; j >= 0; --j) {
            digits[j] = static_cast<long>(rem % res);
            rem /= res;
        }
        for (int j = 0; j < d; ++j)
            k[j] = (digits[j] + 0.25) / res;

        bool converged = false;
        for (int it = 0; it < 60; ++it) {
            evaluate(k, true);
            double norm = 0.0;
            for (int j = 0; j < d; ++j)
                norm = std::max(norm, std::abs(phi[j]));
            if (norm < 1e-13) {
                converged = true;
                break;
            }
            for (int j = 0; j < d; ++j)
                rhs(j) = phi[j];
            const RVector step = jac.partialPivLu().solve(rhs);
            if (!step.allFinite())
                break;
            const double len = step.cwiseAbs().maxCoeff();
            const double damp = len > 0.1 ? 0.1 / len : 1.0;
            for (int j = 0; j < d; ++j)
                k[j] = wrap(k[j] - damp * step(j));
        }
        if (!converged)
            continue;

        bool seen = false;
        for (const auto& r : out.roots)
            if (torus_distance(r.k, k) < 1e-8) {
                seen = true;
                break;
            }
        if (seen)
            continue;

        const double w = evaluate(k, true);
        const double det = jac.determinant();
        if (std::abs(w) < 1e-8 || std::abs(det) < det_floor) {
            out.status = CountStatus::Degenerate;
            return out;
        }
        // Zeros with W + mu < 0 map to the antipode of the target.
        const int sign = w > 0.0 ? (det > 0.0 ? 1 : -1) : 0;
        out.roots.push_back({k, sign});
        out.degree += sign;
    }
    return out;
}

} // namespace

int signed_preimage_count(int d, double mu, std::span<const double> t, int resolution)
{
    if (static_cast<int>(t.size()) != d)
        throw Error("signed_preimage_count: target offset has wrong dimension");
    const auto r = count_preimages(d, mu, std::vector<double>(t.begin(), t.end()), resolution);
    if (r.status == CountStatus::Degenerate)
        throw Error("signed_preimage_count: target is not a regular value");
    return r.degree;
}

DegreeResult symbol_degree(int d, double mu, int resolution)
{
    if (d < 1)
        throw Error("symbol_degree: dimension must be positive");
    if (resolution < 2)
        throw Error("symbol_degree: resolution must be at least 2");
    for (int w = 0; w <= d; ++w)
        if (std::abs(mu - 2.0 * w) < 1e-9)
            throw Error("mu = " + fmt(mu) + " is a window boundary; the symbol map is undefined there");

    std::mt19937_64 rng(20240229);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> t(d, 0.0);
    constexpr int kMaxPerturbations = 8;
    constexpr int kMaxDoublings = 3;
    for (int attempt = 0; attempt <= kMaxPerturbations; ++attempt) {
        if (attempt > 0)
            for (auto& tj : t)
                tj = 0.05 * u(rng);
        int res = resolution;
        auto coarse = count_preimages(d, mu, t, res);
        if (coarse.status == CountStatus::Degenerate)
            continue;
        bool degenerate = false;
        for (int doubling = 0; doubling < kMaxDoublings; ++doubling) {
            auto fine = count_preimages(d, mu, t, 2 * res);
            if (fine.status == CountStatus::Degenerate) {
                degenerate = true;
                break;
            }
            if (fine.degree == coarse.degree && fine.roots.size() == coarse.roots.size()) {
                DegreeResult r;
                r.degree = fine.degree;
                r.resolution = res;
                r.target = t;
                r.perturbations = attempt;
                for (const auto& root : fine.roots)
                    if (root.sign != 0)
                        ++r.preimages;
                return r;
            }
            coarse = std::move(fine);
            res *= 2;
        }
        if (!degenerate)
            throw Error("symbol_degree: preimage count did not stabilize under resolution doubling");
    }
    throw Error("symbol_degree: could not certify a regular value after perturbation retries");
}

// ---------------------------------------------------------------------------

const char* to_string(BoundStatus s)
{
    switch (s) {
    case BoundStatus::Pass: return "pass";
    case BoundStatus::Fail: return "fail";
    case BoundStatus::Vacuous: return "vacuous";
    }
    return "?";
}

GapBoundReport verify_gap_bound(const GaugeField& f, const CliffordRep& cl, double m, double kappa)
{
    const int n = f.geometry().extent();
    const int d = f.geometry().dim();
    if (!(m > 0.0))
        throw Error("verify_gap_bound: m must be positive");
    if (!(kappa >= m && kappa <= n))
        throw Error("verify_gap_bound: kappa = " + fmt(kappa) + " outside [m, N] = [" + fmt(m) + ", " +
                    std::to_string(n) + "]");
    GapBoundReport rep;
    const auto h = assemble_scaled(f, cl, kappa, m);
    rep.lambda_min = min_abs_eigenvalue(h, h.dim() <= kDenseInertiaLimit ? GapMethod::Bisection : GapMethod::Iterative);
    rep.lambda_min_sq = rep.lambda_min * rep.lambda_min;
    rep.curvature = estimate_curvature_norm(f);
    rep.rhs = m * m - 4.0 * d * d * rep.curvature;
    rep.margin = rep.lambda_min_sq - rep.rhs;
    if (rep.rhs < 0.0)
        rep.status = BoundStatus::Vacuous;
    else
        rep.status = rep.margin >= -1e-9 ? BoundStatus::Pass : BoundStatus::Fail;
    return rep;
}

MassModeReport mass_mode_equivalence(const GaugeField& f, double m_cutoff, double m_const, const IndexOptions& opts)
{
    const int d = f.geometry().dim();
    const double threshold = 4.0 * d * d * estimate_curvature_norm(f);
    if (threshold > 0.0 && m_const <= threshold)
        throw Error("constant mass m = " + fmt(m_const) + " does not exceed 4 d^2 ||R|| = " + fmt(threshold) +
                    "; the two modes are not comparable there");
    MassModeReport rep;
    rep.cutoff = lattice_index(f, m_cutoff, MassMode::Cutoff, opts);
    rep.constant = lattice_index(f, m_const, MassMode::Constant, opts);
    rep.equal = rep.cutoff.invariant == rep.constant.invariant;
    return rep;
}

// ---------------------------------------------------------------------------

CMatrix acm_matrix(const UnitaryTuple& t, const CliffordRep& cl, double m)
{
    if (cl.d != t.d)
        throw Error("acm: tuple length does not match Clifford dimension");
    const index_t n = t.n;
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix wilson = m * id;
    CMatrix h = CMatrix::Zero(n * cl.spinor_dim(), n * cl.spinor_dim());
    for (int j = 0; j < t.d; ++j) {
        const CMatrix& u = t.unitaries[j];
        h += kron(0.5 * (u - u.adjoint()), cl.generators[j]);
        wilson += 0.5 * (u + u.adjoint()) - id;
    }
    h += kron(wilson, cl.grading);
    return h;
}

long long acm_invariant(const UnitaryTuple& t, double m)
{
    if (t.d % 2 != 0)
        throw Error("acm invariant requires an even number of unitaries");
    if (!(m > 0.0 && m < 2.0))
        throw Error("acm invariant requires 0 < m < 2");
    const auto cl = clifford_rep(t.d);
    const CMatrix h = acm_matrix(t, cl, m);
    const Inertia in = h.rows() <= kDenseInertiaLimit ? inertia(h) : inertia(CMatrix(h), 0.0, InertiaMethod::Sparse);
    if (in.n_zero > 0)
        throw SingularOperatorError("invariant undefined at this (tuple, m); tuple may be too far from commuting");
    return half_signature(in).value();
}

long long loring_bott_index(const UnitaryTuple& t, double m)
{
    if (t.d != 2)
        throw Error("Bott index is defined here for pairs of unitaries");
    const index_t n = t.n;
    const cplx i{0.0, 1.0};
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix& u1 = t.unitaries[0];
    const CMatrix& u2 = t.unitaries[1];
    const CMatrix x = (u1 - u1.adjoint()) / (2.0 * i);
    const CMatrix y = (u2 - u2.adjoint()) / (2.0 * i);
    const CMatrix z = 0.5 * (u1 + u1.adjoint()) + 0.5 * (u2 + u2.adjoint()) + (m - 2.0) * id;

    CMatrix b(2 * n, 2 * n);
    b.topLeftCorner(n, n) = z;
    b.bottomRightCorner(n, n) = -z;
    b.topRightCorner(n, n) = x - i * y;     // sigma_1 and sigma_2 off-diagonal entries
    b.bottomLeftCorner(n, n) = x + i * y;
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(b, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double tol = 1e-8 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    long long pos = 0, neg = 0;
    for (index_t k = 0; k < ev.size(); ++k) {
        if (std::abs(ev(k)) < tol)
            throw SingularOperatorError("Bott index undefined: localizer has a zero eigenvalue");
        (ev(k) > 0 ? pos : neg) += 1;
    }
    return (pos - neg) / 2;
}

long long exel_loring_invariant(const UnitaryTuple& t)
{
    if (t.d != 2)
        throw Error("Exel-Loring invariant needs a pair of unitaries");
    if (!(t.epsilon < 2.0))
        throw Error("Exel-Loring invariant needs ||[U, V]|| < 2");
    const CMatrix& u = t.unitaries[0];
    const CMatrix& v = t.unitaries[1];
    const CMatrix w = v * u * v.adjoint() * u.adjoint();
    const Eigen::ComplexEigenSolver<CMatrix> es(w, false);
    double total = 0.0;
    for (index_t k = 0; k < es.eigenvalues().size(); ++k)
        total += std::arg(es.eigenvalues()(k));
    const double winding = total / kTwoPi;
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 1e-6)
        throw Error("Exel-Loring winding is not an integer (" + fmt(winding) + ")");
    return static_cast<long long>(rounded);
}

UnitaryTuple link_shift_unitaries(const GaugeField& f)
{
    const auto& g = f.geometry();
    const index_t r = f.rank();
    const index_t n = g.num_sites() * r;
    std::vector<CMatrix> out;
    for (int j = 0; j < g.dim(); ++j) {
        CMatrix u = CMatrix::Zero(n, n);
        for (index_t x = 0; x < g.num_sites(); ++x)
            u.block(g.shift(x, j) * r, x * r, r, r) = f.link(x, j);
        out.push_back(std::move(u));
    }
    return make_unitary_tuple(std::move(out), 1e-10);
}

} // namespace wilson
