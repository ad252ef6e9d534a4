#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "opfact/funcspace.hpp"

namespace opfact {

enum class Metric { euclidean, sup };

/// Finite gamma-cover of a compact set.
///
/// Euclidean covers carry their center coordinates; covers built by cover_box also carry the
/// lattice shape so interpolation can use the tensor structure. Sup-metric covers refer to
/// centers by index into the item set they were built from.
struct Cover {
    Metric metric = Metric::euclidean;
    double radius = 0.0;
    std::vector<Point> centers;
    std::vector<std::size_t> center_indices;

    // Set only for lattice covers of a box.
    std::optional<BoxDomain> box;
    std::vector<std::size_t> lattice_counts;

    std::size_t size() const { return metric == Metric::euclidean ? centers.size() : center_indices.size(); }
};

// Lattice cover: ceil(side * sqrt(d) / (2 gamma)) centers per axis, offset half a step inward.
Cover cover_box(const BoxDomain& domain, double gamma);

// Greedy farthest-point cover over n abstract items. Starts from item 0; each round adds the item
// farthest from the current centers (lowest index on ties) until every item is within gamma.
Cover cover_greedy(std::size_t n, const std::function<double(std::size_t, std::size_t)>& distance, double gamma,
                   Metric metric);

Cover cover_greedy(std::span<const Point> points, double gamma);
Cover cover_greedy(std::span<const SampledFunction> functions, double gamma);

// Largest distance from a probe to its nearest center.
double verify_cover(const Cover& cover, std::span<const Point> probes);
double verify_cover(const Cover& cover, std::span<const SampledFunction> items,
                    std::span<const SampledFunction> probes);

// ceil((2 + 2 diam / gamma)^d): upper bound on the size of a minimal gamma-cover of a set of diameter diam.
std::uint64_t box_covering_bound(double diam, double gamma, std::size_t d);

// ceil that forgives floating-point noise of a few ulps above an integer.
std::uint64_t ceil_count(double x);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace opfact
