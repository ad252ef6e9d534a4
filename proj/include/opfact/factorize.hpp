#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "opfact/covering.hpp"
#include "opfact/funcspace.hpp"
#include "opfact/operators.hpp"

namespace opfact {

/// Sample factorization (Delta, Delta*) of a compact class of functions on a box.
///
/// Delta samples a function at the centers of a lattice gamma-cover. Delta* rebuilds a function on
/// the reconstruction grid from M sample values, either by nearest center (ties to the lowest
/// index) or by multilinear interpolation over the center lattice with clamped extrapolation.
/// The reconstruction grid is refined so that every center is one of its nodes; Delta* therefore
/// returns the input coordinates exactly at the centers and Delta o Delta* is the identity.
/// Both rules are convex combinations of the inputs, so sup|Delta* v| <= max|v| (norm bound c = 1).
class SampleFactorization {
public:
    SampleFactorization(const BoxDomain& domain, double gamma, Interp rule, std::size_t min_nodes_per_axis);

    const BoxDomain& domain() const { return *cover_.box; }
    const Cover& cover() const { return cover_; }
    std::size_t order() const { return cover_.size(); }
    Interp rule() const { return rule_; }
    double norm_bound() const { return 1.0; }
    const GridPtr& grid() const { return grid_; }
    // Reconstruction-grid node holding center i.
    std::size_t center_node(std::size_t i) const { return center_nodes_[i]; }

    std::vector<double> delta(const SampledFunction& f) const;
    SampledFunction delta_star(std::span<const double> v) const;

private:
    Cover cover_;
    Interp rule_;
    GridPtr grid_;
    std::vector<std::size_t> center_nodes_;
    // Delta* as a sparse (node x center) matrix in CSR form.
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_;
    std::vector<double> weight_;
};

// Target grid resolution is a minimum node count per axis; it is rounded up to the nearest count
// that places every center on a node.
SampleFactorization build_factorization(const BoxDomain& domain, double gamma, Interp rule,
                                        std::size_t min_nodes_per_axis);

inline std::vector<double> delta(const SampleFactorization& sf, const SampledFunction& f) { return sf.delta(f); }
inline SampledFunction delta_star(const SampleFactorization& sf, std::span<const double> v) {
    return sf.delta_star(v);
}

// max over random v in [-scale, scale]^M of |Delta(Delta* v) - v|_inf.
double check_diagram_b(const SampleFactorization& sf, std::size_t trials, std::uint64_t seed, double scale = 1.0);

// max over the testset of sup |f - Delta* Delta f| on the reconstruction grid.
double check_reconstruction(const SampleFactorization& sf, std::span<const SampledFunction> testset);

// max over the testset of sup |Delta*_Y Delta_Y D Delta*_X Delta_X f - D f| on sfY's grid.
double map_factorization_error(const TargetOperator& opr, const SampleFactorization& sf_x,
                               const SampleFactorization& sf_y, std::span<const SampledFunction> testset);

}  // namespace opfact
