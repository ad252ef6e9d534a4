#include "opfact/infinilayers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "opfact/errors.hpp"

namespace opfact {

std::string_view to_string(Architecture arch) {
    switch (arch) {
        case Architecture::thm1: return "thm1";
        case Architecture::thm2: return "thm2";
        case Architecture::thm3: return "thm3";
    }
    return "?";
}

Architecture architecture_from_string(std::string_view name) {
    if (name == "thm1") return Architecture::thm1;
    if (name == "thm2") return Architecture::thm2;
    if (name == "thm3") return Architecture::thm3;
    throw ConfigError("unknown architecture '" + std::string(name) + "'");
}

std::size_t OperatorNet::width() const {
    if (basis) return basis->basis.size();
    if (second_operator) return second_operator->kernel.cols();
    return 0;
}

double quad_integral(const SampledFunction& f, const SampledFunction& w) {
    if (!same_grid(f.grid(), w.grid())) throw ShapeError("quad_integral: grid mismatch");
    const auto q = f.grid()->quad_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) acc += f[i] * w[i] * q[i];
    return acc;
}

std::vector<double> apply_functional(const FunctionalLayer& layer, const SampledFunction& f) {
    if (layer.weights.size() != layer.biases.size()) throw ShapeError("apply_functional: weights/biases mismatch");
    std::vector<double> out(layer.weights.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = quad_integral(f, layer.weights[i]) + layer.biases[i];
    return out;
}

SampledFunction apply_basis(const BasisLayer& layer, std::span<const double> y) {
    if (y.size() != layer.basis.size())
        throw ShapeError("apply_basis: expected " + std::to_string(layer.basis.size()) + " coefficients");
    std::vector<double> values(layer.bias.values().begin(), layer.bias.values().end());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& w = layer.basis[i];
        if (!same_grid(w.grid(), layer.bias.grid())) throw ShapeError("apply_basis: basis grid mismatch");
        for (std::size_t t = 0; t < values.size(); ++t) values[t] += y[i] * w[t];
    }
    return SampledFunction(layer.bias.grid(), std::move(values), layer.bias.interp());
}

SampledFunction apply_operator_layer(const OperatorLayer& layer, const SampledFunction& f) {
    if (!same_grid(f.grid(), layer.input_grid) || layer.kernel.cols() != f.values().size())
        throw ShapeError("apply_operator_layer: kernel input side does not match the function's grid");
    if (layer.kernel.rows() != layer.bias.values().size())
        throw ShapeError("apply_operator_layer: kernel rows do not match output grid");
    const auto q = layer.input_grid->quad_weights();
    std::vector<double> weighted(f.values().size());
    for (std::size_t u = 0; u < weighted.size(); ++u) weighted[u] = f[u] * q[u];
    return SampledFunction(layer.bias.grid(), matvec(layer.kernel, weighted, layer.bias.values()),
                           layer.bias.interp());
}

FunctionalLayer mollified_functional_weights(const Matrix& w, const Cover& cover, double r, const GridPtr& grid,
                                             std::span<const double> biases) {
    if (cover.metric != Metric::euclidean) throw std::invalid_argument("mollified_functional_weights: need a Euclidean cover");
    if (w.cols() != cover.centers.size())
        throw ShapeError("mollified_functional_weights: W has " + std::to_string(w.cols()) + " columns for " +
                         std::to_string(cover.centers.size()) + " centers");
    if (!biases.empty() && biases.size() != w.rows()) throw ShapeError("mollified_functional_weights: bias length");
    if (!(r > 0.0)) throw std::invalid_argument("mollified_functional_weights: r must be positive");

    const auto& centers = cover.centers;
    const BoxDomain& dom = grid->domain();
    for (std::size_t i = 0; i < centers.size(); ++i) {
        for (std::size_t a = 0; a < dom.dim(); ++a) {
            if (centers[i][a] - r < dom.lower()[a] || centers[i][a] + r > dom.upper()[a])
                throw DomainError("mollified_functional_weights: ball around center " + std::to_string(i) +
                                  " leaves the domain");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (euclidean_distance(centers[i], centers[j]) <= 2.0 * r)
                throw std::invalid_argument("mollified_functional_weights: balls overlap");
        }
    }

    // Normalized indicator of each ball, sampled on the grid.
    const auto q = grid->quad_weights();
    std::vector<std::vector<double>> bumps(centers.size(), std::vector<double>(grid->size(), 0.0));
    const double tol = 1e-12 * r;
    for (std::size_t node = 0; node < grid->size(); ++node) {
        const Point u = grid->node(node);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (euclidean_distance(u, centers[c]) <= r + tol) {
                bumps[c][node] = 1.0;
                break;
            }
        }
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
        double mass = 0.0;
        for (std::size_t node = 0; node < grid->size(); ++node) mass += bumps[c][node] * q[node];
        if (!(mass > 0.0))
            throw std::invalid_argument("mollified_functional_weights: ball around center " + std::to_string(c) +
                                        " contains no quadrature node");
        for (double& v : bumps[c]) v /= mass;
    }

    FunctionalLayer layer;
    layer.biases = biases.empty() ? std::vector<double>(w.rows(), 0.0)
                                  : std::vector<double>(biases.begin(), biases.end());
    layer.weights.reserve(w.rows());
    for (std::size_t j = 0; j < w.rows(); ++j) {
        std::vector<double> values(grid->size(), 0.0);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double wc = w(j, c);
            if (wc == 0.0) continue;
            for (std::size_t node = 0; node < values.size(); ++node) values[node] += wc * bumps[c][node];
        }
        layer.weights.emplace_back(grid, std::move(values), Interp::multilinear);
    }
    return layer;
}

BasisLayer basis_from_interpolation(const SampleFactorization& sf_y, const Matrix& v, std::span<const double> b) {
    if (v.rows() != sf_y.order() || b.size() != sf_y.order())
        throw ShapeError("basis_from_interpolation: V rows and b must match the factorization order " +
                         std::to_string(sf_y.order()));
    std::vector<SampledFunction> basis;
    basis.reserve(v.cols());
    for (std::size_t i = 0; i < v.cols(); ++i) basis.push_back(sf_y.delta_star(v.column(i)));
    return BasisLayer{std::move(basis), sf_y.delta_star(b)};
}

OperatorNet assemble(Architecture arch, const TwoLayerNet& net, const SampleFactorization& sf_x,
                     const SampleFactorization& sf_y, double r, const GridPtr& input_grid) {
    if (net.outputs() != sf_y.order())
        throw ShapeError("assemble: network output width " + std::to_string(net.outputs()) +
                         " != output factorization order " + std::to_string(sf_y.order()));
    if (arch != Architecture::thm3 && net.inputs() != sf_x.order())
        throw ShapeError("assemble: network input width " + std::to_string(net.inputs()) +
                         " != input factorization order " + std::to_string(sf_x.order()));

    OperatorNet onet;
    onet.architecture = arch;
    onet.activation = net.activation;
    BasisLayer basis = basis_from_interpolation(sf_y, net.w2, net.b2);

    switch (arch) {
        case Architecture::thm2:
            onet.functional = mollified_functional_weights(net.w1, sf_x.cover(), r, input_grid, net.b1);
            onet.basis = std::move(basis);
            break;
        case Architecture::thm3:
            onet.finite_weights = net.w1;
            onet.finite_biases = net.b1;
            onet.basis = std::move(basis);
            break;
        case Architecture::thm1: {
            const FunctionalLayer fl = mollified_functional_weights(net.w1, sf_x.cover(), r, input_grid, net.b1);
            const std::size_t n = net.hidden();
            const GridPtr latent = make_latent_grid(n);

            OperatorLayer first{input_grid, Matrix(n, input_grid->size()),
                                SampledFunction(latent, fl.biases, Interp::nearest)};
            for (std::size_t v = 0; v < n; ++v) {
                const auto w = fl.weights[v].values();
                std::copy(w.begin(), w.end(), first.kernel.row(v).begin());
            }

            const GridPtr out_grid = basis.bias.grid();
            OperatorLayer second{latent, Matrix(out_grid->size(), n), basis.bias};
            for (std::size_t v = 0; v < n; ++v) {
                const auto w = basis.basis[v].values();
                for (std::size_t t = 0; t < w.size(); ++t) second.kernel(t, v) = w[t];
            }
            onet.first_operator = std::move(first);
            onet.second_operator = std::move(second);
            break;
        }
    }
    return onet;
}

SampledFunction net_apply(const OperatorNet& onet, const NetInput& input) {
    const Activation g = onet.activation;
    auto activate_all = [g](std::vector<double> v) {
        for (double& x : v) x = activate(g, x);
        return v;
    };

    switch (onet.architecture) {
        case Architecture::thm2: {
            const auto* f = std::get_if<SampledFunction>(&input);
            if (!f) throw std::invalid_argument("net_apply: thm2 networks take a function input");
            return apply_basis(*onet.basis, activate_all(apply_functional(*onet.functional, *f)));
        }
        case Architecture::thm3: {
            const auto* x = std::get_if<std::vector<double>>(&input);
            if (!x) throw std::invalid_argument("net_apply: thm3 networks take a vector input");
            return apply_basis(*onet.basis, activate_all(matvec(*onet.finite_weights, *x, onet.finite_biases)));
        }
        case Architecture::thm1: {
            const auto* f = std::get_if<SampledFunction>(&input);
            if (!f) throw std::invalid_argument("net_apply: thm1 networks take a function input");
            const SampledFunction hidden = apply_operator_layer(*onet.first_operator, *f);
            const SampledFunction activated(hidden.grid(), activate_all({hidden.values().begin(), hidden.values().end()}),
                                            hidden.interp());
            return apply_operator_layer(*onet.second_operator, activated);
        }
    }
    throw std::logic_error("net_apply: unknown architecture");
}

}  // namespace opfact
