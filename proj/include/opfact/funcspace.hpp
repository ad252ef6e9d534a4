#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace opfact {

using Point = std::vector<double>;

/// Axis-aligned compact box K = [lower_0, upper_0] x ... x [lower_{d-1}, upper_{d-1}].
class BoxDomain {
public:
    BoxDomain(std::vector<double> lower, std::vector<double> upper);

    std::size_t dim() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    double side(std::size_t axis) const { return upper_[axis] - lower_[axis]; }
    double diameter() const;
    double volume() const;

    // Tolerance is relative to each side length.
    bool contains(std::span<const double> t, double rel_tol = 1e-12) const;

    bool operator==(const BoxDomain&) const = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

enum class GridKind { trapezoid, latent };

/// Tensor-product grid over a box with per-node quadrature weights.
///
/// Nodes are flattened row-major: the last axis varies fastest.
class Grid {
public:
    Grid(BoxDomain domain, std::vector<std::vector<double>> axis_coords, GridKind kind);

    const BoxDomain& domain() const { return domain_; }
    GridKind kind() const { return kind_; }
    std::size_t dim() const { return domain_.dim(); }
    std::size_t size() const { return weights_.size(); }
    std::size_t count(std::size_t axis) const { return coords_[axis].size(); }
    std::span<const double> coords(std::size_t axis) const { return coords_[axis]; }
    // Uniform spacing along an axis (0 for single-node axes).
    double spacing(std::size_t axis) const { return spacing_[axis]; }
    std::span<const double> quad_weights() const { return weights_; }

    Point node(std::size_t flat) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;
    std::size_t flat_index(std::span<const std::size_t> multi) const;
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }

    bool operator==(const Grid& other) const;

private:
    BoxDomain domain_;
    std::vector<std::vector<double>> coords_;
    std::vector<double> spacing_;
    std::vector<std::size_t> strides_;
    std::vector<double> weights_;
    GridKind kind_;
};

using GridPtr = std::shared_ptr<const Grid>;

bool same_grid(const GridPtr& a, const GridPtr& b);

enum class Interp { nearest, multilinear };

std::string_view to_string(Interp rule);
Interp interp_from_string(std::string_view name);

/// A continuous function on a box, stored as its values on a grid.
class SampledFunction {
public:
    SampledFunction(GridPtr grid, std::vector<double> values, Interp interp = Interp::multilinear);

    const GridPtr& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t node) const { return values_[node]; }
    Interp interp() const { return interp_; }

private:
    GridPtr grid_;
    std::vector<double> values_;
    Interp interp_;
};

/// Lipschitz ball of C(K) intersected with a sup-norm ball; compact.
struct LipschitzClass {
    BoxDomain domain;
    double lipschitz_bound = 1.0;
    double amplitude_bound = 1.0;
};

// Uniform trapezoid grid with nodes_per_axis nodes per axis, both endpoints included.
GridPtr make_grid(const BoxDomain& domain, std::size_t nodes_per_axis);
GridPtr make_grid(const BoxDomain& domain, std::span<const std::size_t> nodes_per_axis);

// n unit-weight points at 0.5, 1.5, ..., n - 0.5 inside [0, n]; a discrete latent domain.
GridPtr make_latent_grid(std::size_t n);

SampledFunction sample(const GridPtr& grid, const std::function<double(std::span<const double>)>& fn,
                       Interp interp = Interp::multilinear);

double evaluate(const SampledFunction& f, std::span<const double> t);

// Re-expresses f on another grid of the same domain by evaluating at its nodes.
SampledFunction resample(const SampledFunction& f, const GridPtr& grid);

// Largest finite-difference slope between grid neighbours along any axis.
double estimate_lipschitz(const SampledFunction& f);

SampledFunction random_lipschitz(const LipschitzClass& cls, const GridPtr& grid, std::uint64_t seed);

double sup_distance(const SampledFunction& f, const SampledFunction& g);

// a*f + b*g on the shared grid.
SampledFunction linear_combination(double a, const SampledFunction& f, double b, const SampledFunction& g);

}  // namespace opfact
