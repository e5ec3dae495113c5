#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wilson/types.hpp"

namespace wilson {

/// Periodic lattice (Z/N)^d with spacing a = 1/N on the unit torus.
/// Sites are numbered lexicographically with the first coordinate most
/// significant.
class LatticeGeometry {
public:
    LatticeGeometry() = default;
    LatticeGeometry(int d, int n);

    [[nodiscard]] int dim() const { return d_; }
    [[nodiscard]] int extent() const { return n_; }
    [[nodiscard]] double spacing() const { return 1.0 / n_; }
    [[nodiscard]] index_t num_sites() const { return num_sites_; }

    /// Coordinates are reduced mod N, so any integer vector is accepted.
    [[nodiscard]] index_t site(std::span<const long> coords) const;
    [[nodiscard]] std::vector<long> coords(index_t site) const;
    [[nodiscard]] long coord(index_t site, int direction) const;
    /// Site reached from `site` after `steps` unit hops along `direction`.
    [[nodiscard]] index_t shift(index_t site, int direction, long steps = 1) const;

    friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;

private:
    int d_ = 0;
    int n_ = 0;
    index_t num_sites_ = 0;
    std::vector<index_t> stride_;
};

LatticeGeometry make_geometry(int d, int n);

/// Integer first-Chern fluxes through the coordinate 2-planes.
class FluxMatrix {
public:
    FluxMatrix() = default;
    explicit FluxMatrix(int d);
    /// Row-major d x d entries; must be exactly antisymmetric.
    FluxMatrix(int d, std::vector<long> entries);

    [[nodiscard]] int dim() const { return d_; }
    [[nodiscard]] long operator()(int j, int l) const { return k_[j * d_ + l]; }
    /// Sets K_{jl} = value and K_{lj} = -value (0-based j != l).
    void set(int j, int l, long value);
    [[nodiscard]] bool is_zero() const;

    friend FluxMatrix operator+(const FluxMatrix& a, const FluxMatrix& b);
    friend bool operator==(const FluxMatrix&, const FluxMatrix&) = default;

private:
    int d_ = 0;
    std::vector<long> k_;
};

/// U(r) link field on a periodic lattice. link(x, j) transports the fiber at x
/// to the fiber at x + a v_j.
///
/// When the field is built from constant-flux line bundles through tensor
/// products and direct sums, `line_summands` keeps the flux matrices of the
/// line bundles the field decomposes into; it is empty for fields of unknown
/// topology (e.g. loaded from disk).
class GaugeField {
public:
    GaugeField() = default;
    GaugeField(LatticeGeometry geom, int rank);

    [[nodiscard]] const LatticeGeometry& geometry() const { return geom_; }
    [[nodiscard]] int rank() const { return rank_; }

    [[nodiscard]] Eigen::Map<const CMatrix> link(index_t site, int direction) const;
    [[nodiscard]] Eigen::Map<CMatrix> link(index_t site, int direction);

    /// Raw storage ordered by (site, direction, column-major r x r entries).
    [[nodiscard]] std::span<const cplx> data() const { return links_; }

    std::optional<std::vector<FluxMatrix>> line_summands;

private:
    LatticeGeometry geom_;
    int rank_ = 0;
    std::vector<cplx> links_;
};

GaugeField trivial_field(const LatticeGeometry& geom, int rank);

/// Constant-curvature U(1) field with uniform plaquettes
/// P_{jl}(x) = exp(2 pi i K_{jl} / N^2) for every site and every j < l.
///
/// For each plane j < l the link in direction l carries the phase
/// exp(2 pi i K_{jl} x_j / N^2) and the link in direction j on the hyperplane
/// x_j = N - 1 carries the twist exp(-2 pi i K_{jl} x_l / N).
GaugeField constant_flux_field(const LatticeGeometry& geom, const FluxMatrix& flux);

GaugeField tensor_field(const GaugeField& f, const GaugeField& g);
GaugeField direct_sum_field(const GaugeField& f, const GaugeField& g);

/// Multiplies every link by exp(i H) with H Hermitian and ||H||_2 <= strength.
/// H = strength * G / ||G||_F where the real and imaginary parts of the entries
/// of G are uniform on [-1, 1), drawn from std::mt19937_64(seed) in
/// (site, direction, column-major entry) order. See docs/file-formats.md.
/// line_summands are kept: the perturbed field describes the same bundle.
GaugeField perturb_field(const GaugeField& f, double strength, std::uint64_t seed);

/// Applies U_j(x) -> g(x + a v_j) U_j(x) g(x)^*. `g` holds one r x r unitary
/// per site.
GaugeField gauge_transform(const GaugeField& f, std::span<const CMatrix> g);

/// Transport around the elementary square x -> x+e_j -> x+e_j+e_l -> x+e_l -> x,
/// as an endomorphism of the fiber at x.
CMatrix plaquette(const GaugeField& f, index_t site, int j, int l);

/// max over sites and planes j < l of ||P_{jl}(x) - 1||_2 / a^2.
double estimate_curvature_norm(const GaugeField& f);

/// Ordered product of the N links along the closed j-cycle through `base`.
CMatrix wilson_loop(const GaugeField& f, index_t base, int direction);

/// Largest ||U^* U - 1|| entry over all links.
double unitarity_defect(const GaugeField& f);

} // namespace wilson
