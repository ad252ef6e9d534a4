#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "opfact/covering.hpp"
#include "opfact/factorize.hpp"
#include "opfact/funcspace.hpp"
#include "opfact/linalg.hpp"
#include "opfact/netcore.hpp"

namespace opfact {

// Function -> R^N: coordinate i is the quadrature of f * weights[i] plus biases[i].
struct FunctionalLayer {
    std::vector<SampledFunction> weights;
    std::vector<double> biases;
};

// R^N -> function: y -> sum_i y_i basis[i] + bias.
struct BasisLayer {
    std::vector<SampledFunction> basis;
    SampledFunction bias;
};

// Function -> function: (T f)(t) = sum_u kernel(t, u) f(u) q(u) + bias(t), q the input quadrature weights.
struct OperatorLayer {
    GridPtr input_grid;
    Matrix kernel;  // output nodes x input nodes
    SampledFunction bias;
};

enum class Architecture { thm1, thm2, thm3 };

std::string_view to_string(Architecture arch);
Architecture architecture_from_string(std::string_view name);

/// Discretized infinite-dimensional two-layer architecture.
///   thm1: operator layer, g, operator layer through an N-point latent grid.
///   thm2: functional layer, g, basis layer.
///   thm3: finite affine layer on R^d, g, basis layer.
struct OperatorNet {
    Architecture architecture = Architecture::thm2;
    Activation activation = Activation::tanh;
    std::optional<FunctionalLayer> functional;
    std::optional<BasisLayer> basis;
    std::optional<OperatorLayer> first_operator;
    std::optional<OperatorLayer> second_operator;
    std::optional<Matrix> finite_weights;
    std::vector<double> finite_biases;

    std::size_t width() const;
};

double quad_integral(const SampledFunction& f, const SampledFunction& w);

std::vector<double> apply_functional(const FunctionalLayer& layer, const SampledFunction& f);
SampledFunction apply_basis(const BasisLayer& layer, std::span<const double> y);
SampledFunction apply_operator_layer(const OperatorLayer& layer, const SampledFunction& f);

// Row j of W spreads its weights over normalized indicators of the radius-r balls around the
// cover centers; the normalization is the quadrature mass of each ball on `grid`, so integrating
// a constant reproduces it exactly. Balls must be disjoint, inside the domain and hold a node.
FunctionalLayer mollified_functional_weights(const Matrix& w, const Cover& cover, double r, const GridPtr& grid,
                                             std::span<const double> biases = {});

// basis[i] = Delta*(column i of V), bias = Delta*(b).
BasisLayer basis_from_interpolation(const SampleFactorization& sf_y, const Matrix& v, std::span<const double> b);

// Lifts a trained finite network into the chosen architecture. input_grid is the quadrature grid
// on which input functions live (thm1/thm2); r is the mollifier radius.
OperatorNet assemble(Architecture arch, const TwoLayerNet& net, const SampleFactorization& sf_x,
                     const SampleFactorization& sf_y, double r, const GridPtr& input_grid);

using NetInput = std::variant<SampledFunction, std::vector<double>>;

SampledFunction net_apply(const OperatorNet& onet, const NetInput& input);

}  // namespace opfact
