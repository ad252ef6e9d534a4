#include "opfact/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "opfact/errors.hpp"

namespace opfact {

std::uint64_t ceil_count(double x) {
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("ceil_count: need finite nonnegative value");
    if (x >= 9.2e18) throw std::overflow_error("ceil_count: count exceeds 64-bit range");
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(x));
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("euclidean_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

Cover cover_box(const BoxDomain& domain, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("cover_box: gamma must be positive");
    const std::size_t d = domain.dim();
    const double root_d = std::sqrt(static_cast<double>(d));

    Cover cover;
    cover.metric = Metric::euclidean;
    cover.radius = gamma;
    cover.box = domain;
    cover.lattice_counts.resize(d);
    std::vector<std::vector<double>> axis(d);
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) {
        const std::size_t n = std::max<std::uint64_t>(1, ceil_count(domain.side(a) * root_d / (2.0 * gamma)));
        cover.lattice_counts[a] = n;
        const double step = domain.side(a) / static_cast<double>(n);
        axis[a].resize(n);
        for (std::size_t k = 0; k < n; ++k)
            axis[a][k] = domain.lower()[a] + step * (static_cast<double>(k) + 0.5);
        total *= n;
    }

    cover.centers.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point p(d);
        std::size_t rem = flat;
        for (std::size_t a = d; a-- > 0;) {
            p[a] = axis[a][rem % axis[a].size()];
            rem /= axis[a].size();
        }
        cover.centers.push_back(std::move(p));
    }
    return cover;
}

Cover cover_greedy(std::size_t n, const std::function<double(std::size_t, std::size_t)>& distance, double gamma,
                   Metric metric) {
    if (!(gamma > 0.0)) throw std::invalid_argument("cover_greedy: gamma must be positive");
    Cover cover;
    cover.metric = metric;
    cover.radius = gamma;
    if (n == 0) return cover;

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (true) {
        cover.center_indices.push_back(next);
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], distance(next, i));
        // max_element returns the first maximum, i.e. the lowest index on ties.
        const auto far = std::max_element(nearest.begin(), nearest.end());
        if (*far <= gamma) break;
        next = static_cast<std::size_t>(far - nearest.begin());
    }
    return cover;
}

Cover cover_greedy(std::span<const Point> points, double gamma) {
    Cover cover = cover_greedy(
        points.size(), [&](std::size_t i, std::size_t j) { return euclidean_distance(points[i], points[j]); }, gamma,
        Metric::euclidean);
    for (std::size_t idx : cover.center_indices) cover.centers.push_back(points[idx]);
    return cover;
}

Cover cover_greedy(std::span<const SampledFunction> functions, double gamma) {
    // Pairwise sup distances are symmetric; cache them so each pair is computed once.
    const std::size_t n = functions.size();
    std::vector<double> cache(n * n, -1.0);
    auto dist = [&](std::size_t i, std::size_t j) {
        double& slot = cache[std::min(i, j) * n + std::max(i, j)];
        if (slot < 0.0) slot = sup_distance(functions[i], functions[j]);
        return slot;
    };
    return cover_greedy(n, dist, gamma, Metric::sup);
}

double verify_cover(const Cover& cover, std::span<const Point> probes) {
    if (cover.metric != Metric::euclidean) throw std::invalid_argument("verify_cover: cover is not Euclidean");
    if (cover.centers.empty()) return probes.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (const auto& p : probes) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cover.centers) best = std::min(best, euclidean_distance(p, c));
        gap = std::max(gap, best);
    }
    return gap;
}

double verify_cover(const Cover& cover, std::span<const SampledFunction> items,
                    std::span<const SampledFunction> probes) {
    if (cover.metric != Metric::sup) throw std::invalid_argument("verify_cover: cover is not a sup-metric cover");
    if (cover.center_indices.empty()) return probes.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (const auto& p : probes) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t idx : cover.center_indices) {
            if (idx >= items.size()) throw ShapeError("verify_cover: center index out of range");
            best = std::min(best, sup_distance(p, items[idx]));
        }
        gap = std::max(gap, best);
    }
    return gap;
}

std::uint64_t box_covering_bound(double diam, double gamma, std::size_t d) {
    if (!(diam > 0.0) || !(gamma > 0.0) || d == 0)
        throw std::invalid_argument("box_covering_bound: diam, gamma and d must be positive");
    return ceil_count(std::pow(2.0 + 2.0 * diam / gamma, static_cast<double>(d)));
}

}  // namespace opfact
