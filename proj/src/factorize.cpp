#include "opfact/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "opfact/errors.hpp"

namespace opfact {

namespace {

struct AxisWeights {
    std::vector<std::size_t> index;
    std::vector<double> weight;
};

// Weights of the centers along one axis for reconstruction node j. Positions are measured in
// units of 1/(2m) center steps from center 0, so node j sits at p = j - m and center k at 2mk.
AxisWeights axis_weights(std::size_t j, std::size_t n_centers, std::size_t m, Interp rule) {
    const auto p = static_cast<long long>(j) - static_cast<long long>(m);
    const auto two_m = static_cast<long long>(2 * m);
    const auto last = static_cast<long long>(n_centers) - 1;
    if (rule == Interp::nearest) {
        long long k = p <= 0 ? 0 : (p + static_cast<long long>(m) - 1) / two_m;
        k = std::clamp(k, 0LL, last);
        return {{static_cast<std::size_t>(k)}, {1.0}};
    }
    if (p <= 0 || last == 0) return {{0}, {1.0}};
    if (p >= last * two_m) return {{static_cast<std::size_t>(last)}, {1.0}};
    const long long k = p / two_m;
    const long long rem = p % two_m;
    if (rem == 0) return {{static_cast<std::size_t>(k)}, {1.0}};
    const double frac = static_cast<double>(rem) / static_cast<double>(two_m);
    return {{static_cast<std::size_t>(k), static_cast<std::size_t>(k + 1)}, {1.0 - frac, frac}};
}

}  // namespace

SampleFactorization::SampleFactorization(const BoxDomain& domain, double gamma, Interp rule,
                                         std::size_t min_nodes_per_axis)
    : cover_(cover_box(domain, gamma)), rule_(rule) {
    const std::size_t d = domain.dim();
    const auto& counts = cover_.lattice_counts;

    std::vector<std::size_t> refine(d);
    std::vector<std::size_t> nodes(d);
    for (std::size_t a = 0; a < d; ++a) {
        const std::size_t n = counts[a];
        const std::size_t want = std::max<std::size_t>(min_nodes_per_axis, 2);
        refine[a] = std::max<std::size_t>(1, (want - 1 + 2 * n - 1) / (2 * n));
        nodes[a] = 2 * n * refine[a] + 1;
    }
    grid_ = make_grid(domain, nodes);

    // Centers are flattened row-major over the lattice, like grid nodes.
    std::vector<std::size_t> center_stride(d);
    std::size_t s = 1;
    for (std::size_t a = d; a-- > 0;) {
        center_stride[a] = s;
        s *= counts[a];
    }

    center_nodes_.resize(cover_.size());
    for (std::size_t c = 0; c < cover_.size(); ++c) {
        std::size_t rem = c;
        std::size_t node = 0;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t k = rem / center_stride[a];
            rem %= center_stride[a];
            node += (2 * k + 1) * refine[a] * grid_->stride(a);
        }
        center_nodes_[c] = node;
    }

    row_start_.reserve(grid_->size() + 1);
    row_start_.push_back(0);
    std::vector<AxisWeights> per_axis(d);
    for (std::size_t node = 0; node < grid_->size(); ++node) {
        const auto mi = grid_->multi_index(node);
        std::size_t combos = 1;
        for (std::size_t a = 0; a < d; ++a) {
            per_axis[a] = axis_weights(mi[a], counts[a], refine[a], rule_);
            combos *= per_axis[a].index.size();
        }
        for (std::size_t combo = 0; combo < combos; ++combo) {
            std::size_t rem = combo;
            std::size_t center = 0;
            double w = 1.0;
            for (std::size_t a = d; a-- > 0;) {
                const std::size_t choices = per_axis[a].index.size();
                const std::size_t pick = rem % choices;
                rem /= choices;
                center += per_axis[a].index[pick] * center_stride[a];
                w *= per_axis[a].weight[pick];
            }
            col_.push_back(center);
            weight_.push_back(w);
        }
        row_start_.push_back(col_.size());
    }
}

std::vector<double> SampleFactorization::delta(const SampledFunction& f) const {
    std::vector<double> out(order());
    if (same_grid(f.grid(), grid_)) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[center_nodes_[i]];
        return out;
    }
    if (!(f.grid()->domain() == domain())) throw DomainError("delta: function domain differs from factorization domain");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate(f, cover_.centers[i]);
    return out;
}

SampledFunction SampleFactorization::delta_star(std::span<const double> v) const {
    if (v.size() != order())
        throw ShapeError("delta_star: expected " + std::to_string(order()) + " coordinates, got " +
                         std::to_string(v.size()));
    std::vector<double> values(grid_->size());
    for (std::size_t node = 0; node < values.size(); ++node) {
        double acc = 0.0;
        for (std::size_t e = row_start_[node]; e < row_start_[node + 1]; ++e) acc += weight_[e] * v[col_[e]];
        values[node] = acc;
    }
    return SampledFunction(grid_, std::move(values), Interp::multilinear);
}

SampleFactorization build_factorization(const BoxDomain& domain, double gamma, Interp rule,
                                        std::size_t min_nodes_per_axis) {
    return SampleFactorization(domain, gamma, rule, min_nodes_per_axis);
}

double check_diagram_b(const SampleFactorization& sf, std::size_t trials, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> v(sf.order());
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (double& x : v) x = scale * unit(rng);
        const auto back = sf.delta(sf.delta_star(v));
        for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back[i] - v[i]));
    }
    return worst;
}

double check_reconstruction(const SampleFactorization& sf, std::span<const SampledFunction> testset) {
    double worst = 0.0;
    for (const auto& f : testset) {
        const SampledFunction on_grid = resample(f, sf.grid());
        worst = std::max(worst, sup_distance(on_grid, sf.delta_star(sf.delta(on_grid))));
    }
    return worst;
}

double map_factorization_error(const TargetOperator& opr, const SampleFactorization& sf_x,
                               const SampleFactorization& sf_y, std::span<const SampledFunction> testset) {
    double worst = 0.0;
    for (const auto& f : testset) {
        const SampledFunction truth = resample(apply(opr, f), sf_y.grid());
        const SampledFunction input = sf_x.delta_star(sf_x.delta(resample(f, sf_x.grid())));
        const SampledFunction output = sf_y.delta_star(sf_y.delta(apply(opr, input)));
        worst = std::max(worst, sup_distance(output, truth));
    }
    return worst;
}

}  // namespace opfact
