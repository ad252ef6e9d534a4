#include "opfact/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "opfact/errors.hpp"

namespace opfact {

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw std::invalid_argument("BoxDomain: dimension must be positive");
    if (lower_.size() != upper_.size()) throw ShapeError("BoxDomain: lower/upper length mismatch");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i]))
            throw std::invalid_argument("BoxDomain: need finite lower < upper on axis " + std::to_string(i));
    }
}

double BoxDomain::diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += side(i) * side(i);
    return std::sqrt(s);
}

double BoxDomain::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= side(i);
    return v;
}

bool BoxDomain::contains(std::span<const double> t, double rel_tol) const {
    if (t.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        const double tol = rel_tol * side(i);
        if (!(t[i] >= lower_[i] - tol && t[i] <= upper_[i] + tol)) return false;
    }
    return true;
}

Grid::Grid(BoxDomain domain, std::vector<std::vector<double>> axis_coords, GridKind kind)
    : domain_(std::move(domain)), coords_(std::move(axis_coords)), kind_(kind) {
    if (coords_.size() != domain_.dim()) throw ShapeError("Grid: one coordinate list per axis required");
    const std::size_t d = coords_.size();
    spacing_.resize(d);
    strides_.resize(d);
    std::size_t total = 1;
    for (std::size_t a = d; a-- > 0;) {
        const auto& c = coords_[a];
        if (c.empty()) throw std::invalid_argument("Grid: empty axis");
        strides_[a] = total;
        total *= c.size();
        spacing_[a] = c.size() > 1 ? (c.back() - c.front()) / static_cast<double>(c.size() - 1) : 0.0;
    }

    std::vector<std::vector<double>> axis_weights(d);
    for (std::size_t a = 0; a < d; ++a) {
        const auto& c = coords_[a];
        auto& w = axis_weights[a];
        w.assign(c.size(), 0.0);
        if (kind_ == GridKind::latent) {
            std::fill(w.begin(), w.end(), 1.0);
            continue;
        }
        for (std::size_t k = 0; k + 1 < c.size(); ++k) {
            const double half = 0.5 * (c[k + 1] - c[k]);
            w[k] += half;
            w[k + 1] += half;
        }
    }

    weights_.assign(total, 1.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        double w = 1.0;
        for (std::size_t a = 0; a < d; ++a) {
            w *= axis_weights[a][rem / strides_[a]];
            rem %= strides_[a];
        }
        weights_[flat] = w;
    }
}

Point Grid::node(std::size_t flat) const {
    Point p(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        p[a] = coords_[a][flat / strides_[a]];
        flat %= strides_[a];
    }
    return p;
}

std::vector<std::size_t> Grid::multi_index(std::size_t flat) const {
    std::vector<std::size_t> m(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        m[a] = flat / strides_[a];
        flat %= strides_[a];
    }
    return m;
}

std::size_t Grid::flat_index(std::span<const std::size_t> multi) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim(); ++a) flat += multi[a] * strides_[a];
    return flat;
}

bool Grid::operator==(const Grid& other) const {
    return kind_ == other.kind_ && domain_ == other.domain_ && coords_ == other.coords_;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    return a == b || (a && b && *a == *b);
}

std::string_view to_string(Interp rule) {
    return rule == Interp::nearest ? "nearest" : "multilinear";
}

Interp interp_from_string(std::string_view name) {
    if (name == "nearest") return Interp::nearest;
    if (name == "multilinear") return Interp::multilinear;
    throw ConfigError("unknown interpolation rule '" + std::string(name) + "'");
}

SampledFunction::SampledFunction(GridPtr grid, std::vector<double> values, Interp interp)
    : grid_(std::move(grid)), values_(std::move(values)), interp_(interp) {
    if (!grid_) throw std::invalid_argument("SampledFunction: null grid");
    if (values_.size() != grid_->size())
        throw ShapeError("SampledFunction: " + std::to_string(values_.size()) + " values for " +
                         std::to_string(grid_->size()) + " nodes");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("SampledFunction: non-finite value");
}

GridPtr make_grid(const BoxDomain& domain, std::size_t nodes_per_axis) {
    const std::vector<std::size_t> counts(domain.dim(), nodes_per_axis);
    return make_grid(domain, counts);
}

GridPtr make_grid(const BoxDomain& domain, std::span<const std::size_t> nodes_per_axis) {
    if (nodes_per_axis.size() != domain.dim()) throw ShapeError("make_grid: one node count per axis required");
    std::vector<std::vector<double>> coords(domain.dim());
    for (std::size_t a = 0; a < domain.dim(); ++a) {
        const std::size_t n = nodes_per_axis[a];
        if (n < 2) throw std::invalid_argument("make_grid: nodes_per_axis must be >= 2");
        auto& c = coords[a];
        c.resize(n);
        const double last = static_cast<double>(n - 1);
        const double lo = domain.lower()[a];
        const double side = domain.side(a);
        for (std::size_t k = 0; k < n; ++k) c[k] = lo + side * (static_cast<double>(k) / last);
        c.back() = domain.upper()[a];
    }
    return std::make_shared<const Grid>(domain, std::move(coords), GridKind::trapezoid);
}

GridPtr make_latent_grid(std::size_t n) {
    if (n == 0) throw std::invalid_argument("make_latent_grid: n must be positive");
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<double>(i) + 0.5;
    return std::make_shared<const Grid>(BoxDomain({0.0}, {static_cast<double>(n)}),
                                        std::vector<std::vector<double>>{std::move(c)}, GridKind::latent);
}

SampledFunction sample(const GridPtr& grid, const std::function<double(std::span<const double>)>& fn,
                       Interp interp) {
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Point p = grid->node(i);
        values[i] = fn(p);
    }
    return SampledFunction(grid, std::move(values), interp);
}

namespace {

// Per-axis interpolation stencil: up to two node indices with weights.
struct AxisStencil {
    std::size_t lo = 0;
    std::size_t hi = 0;
    double w_hi = 0.0;
};

AxisStencil axis_stencil(std::span<const double> c, double t, Interp rule) {
    const std::size_t n = c.size();
    if (n == 1 || t <= c.front()) return {0, 0, 0.0};
    if (t >= c.back()) return {n - 1, n - 1, 0.0};
    // First node strictly greater than t; c[k] <= t < c[k+1].
    const auto it = std::upper_bound(c.begin(), c.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - c.begin()) - 1;
    const double frac = (t - c[k]) / (c[k + 1] - c[k]);
    if (rule == Interp::nearest) {
        const std::size_t pick = frac > 0.5 ? k + 1 : k;
        return {pick, pick, 0.0};
    }
    if (frac == 0.0) return {k, k, 0.0};
    return {k, k + 1, frac};
}

}  // namespace

double evaluate(const SampledFunction& f, std::span<const double> t) {
    const Grid& g = *f.grid();
    if (!g.domain().contains(t)) throw DomainError("evaluate: point outside the function's domain");
    const std::size_t d = g.dim();
    std::vector<AxisStencil> st(d);
    for (std::size_t a = 0; a < d; ++a) st[a] = axis_stencil(g.coords(a), t[a], f.interp());

    // Sum over the 2^d cell corners; corners with zero weight are skipped.
    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << d;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        std::size_t flat = 0;
        for (std::size_t a = 0; a < d && w != 0.0; ++a) {
            const bool upper = (mask >> a) & 1U;
            w *= upper ? st[a].w_hi : 1.0 - st[a].w_hi;
            flat += (upper ? st[a].hi : st[a].lo) * g.stride(a);
        }
        if (w != 0.0) acc += w * f[flat];
    }
    return acc;
}

SampledFunction resample(const SampledFunction& f, const GridPtr& grid) {
    if (same_grid(f.grid(), grid)) return SampledFunction(grid, {f.values().begin(), f.values().end()}, f.interp());
    if (!(grid->domain() == f.grid()->domain())) throw ShapeError("resample: domain mismatch");
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = evaluate(f, grid->node(i));
    return SampledFunction(grid, std::move(values), f.interp());
}

double estimate_lipschitz(const SampledFunction& f) {
    const Grid& g = *f.grid();
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto m = g.multi_index(i);
        for (std::size_t a = 0; a < g.dim(); ++a) {
            if (m[a] + 1 >= g.count(a)) continue;
            const auto c = g.coords(a);
            const double slope = std::abs(f[i + g.stride(a)] - f[i]) / (c[m[a] + 1] - c[m[a]]);
            best = std::max(best, slope);
        }
    }
    return best;
}

namespace {

// Exact integral of a piecewise-constant slope profile, evaluated at each coordinate.
std::vector<double> random_profile(std::span<const double> coords, double lo, double hi, double max_slope,
                                   std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pieces_dist(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int pieces = pieces_dist(rng);
    std::vector<double> breaks{lo, hi};
    for (int i = 1; i < pieces; ++i) breaks.push_back(lo + (hi - lo) * unit(rng));
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> slopes(breaks.size() - 1);
    for (double& s : slopes) s = max_slope * (2.0 * unit(rng) - 1.0);

    std::vector<double> out(coords.size());
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const double x = coords[k];
        double v = 0.0;
        for (std::size_t j = 0; j < slopes.size(); ++j) {
            const double a = breaks[j];
            const double b = std::min(breaks[j + 1], x);
            if (b <= a) break;
            v += slopes[j] * (b - a);
        }
        out[k] = v;
    }
    return out;
}

}  // namespace

SampledFunction random_lipschitz(const LipschitzClass& cls, const GridPtr& grid, std::uint64_t seed) {
    if (!(grid->domain() == cls.domain)) throw ShapeError("random_lipschitz: grid domain differs from class domain");
    if (cls.lipschitz_bound < 0.0 || cls.amplitude_bound < 0.0)
        throw std::invalid_argument("random_lipschitz: bounds must be nonnegative");

    std::mt19937_64 rng(seed);
    const std::size_t d = grid->dim();
    // Per-axis slopes of lambda/sqrt(d) keep the Euclidean Lipschitz constant of the sum within lambda.
    const double axis_slope = cls.lipschitz_bound / std::sqrt(static_cast<double>(d));
    std::vector<std::vector<double>> profiles(d);
    for (std::size_t a = 0; a < d; ++a)
        profiles[a] = random_profile(grid->coords(a), cls.domain.lower()[a], cls.domain.upper()[a], axis_slope, rng);

    std::vector<double> values(grid->size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto m = grid->multi_index(i);
        for (std::size_t a = 0; a < d; ++a) values[i] += profiles[a][m[a]];
    }

    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double mid = 0.5 * (*mn + *mx);
    double half_range = 0.5 * (*mx - *mn);
    double scale = 1.0;
    if (half_range > cls.amplitude_bound) {
        scale = half_range > 0.0 ? cls.amplitude_bound / half_range : 0.0;
        half_range = cls.amplitude_bound;
    }
    const double room = std::max(0.0, cls.amplitude_bound - half_range);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double offset = room * (2.0 * unit(rng) - 1.0);
    for (double& v : values) {
        v = (v - mid) * scale + offset;
        v = std::clamp(v, -cls.amplitude_bound, cls.amplitude_bound);
    }
    return SampledFunction(grid, std::move(values), Interp::multilinear);
}

double sup_distance(const SampledFunction& f, const SampledFunction& g) {
    if (!same_grid(f.grid(), g.grid())) throw ShapeError("sup_distance: functions live on different grids");
    double best = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i) best = std::max(best, std::abs(f[i] - g[i]));
    return best;
}

SampledFunction linear_combination(double a, const SampledFunction& f, double b, const SampledFunction& g) {
    if (!same_grid(f.grid(), g.grid())) throw ShapeError("linear_combination: grid mismatch");
    std::vector<double> values(f.values().size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = a * f[i] + b * g[i];
    return SampledFunction(f.grid(), std::move(values), f.interp());
}

}  // namespace opfact
