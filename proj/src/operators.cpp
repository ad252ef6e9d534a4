#include "opfact/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "opfact/errors.hpp"

namespace opfact {

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::antiderivative: return "antiderivative";
        case OperatorKind::pointwise: return "pointwise";
        case OperatorKind::moving_average: return "moving_average";
        case OperatorKind::shift: return "shift";
    }
    return "?";
}

std::string_view to_string(ScalarMap map) {
    switch (map) {
        case ScalarMap::identity: return "identity";
        case ScalarMap::sin: return "sin";
        case ScalarMap::tanh: return "tanh";
        case ScalarMap::abs: return "abs";
    }
    return "?";
}

ScalarMap scalar_map_from_string(std::string_view name) {
    if (name == "identity") return ScalarMap::identity;
    if (name == "sin") return ScalarMap::sin;
    if (name == "tanh") return ScalarMap::tanh;
    if (name == "abs") return ScalarMap::abs;
    throw ConfigError("unknown pointwise map '" + std::string(name) + "'");
}

TargetOperator::TargetOperator(OperatorKind kind, BoxDomain domain, ScalarMap map, double param)
    : kind_(kind), domain_(std::move(domain)), map_(map), param_(param) {
    if (kind_ != OperatorKind::pointwise && domain_.dim() != 1)
        throw std::invalid_argument(std::string(to_string(kind_)) + " requires a one-dimensional domain");
    if (!std::isfinite(param_)) throw std::invalid_argument("TargetOperator: non-finite parameter");
}

TargetOperator TargetOperator::antiderivative(BoxDomain domain) {
    return {OperatorKind::antiderivative, std::move(domain), ScalarMap::identity, 0.0};
}

TargetOperator TargetOperator::pointwise(BoxDomain domain, ScalarMap map, double scale) {
    return {OperatorKind::pointwise, std::move(domain), map, scale};
}

TargetOperator TargetOperator::moving_average(BoxDomain domain, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("moving_average: window must be positive");
    return {OperatorKind::moving_average, std::move(domain), ScalarMap::identity, window};
}

TargetOperator TargetOperator::shift(BoxDomain domain, double s) {
    return {OperatorKind::shift, std::move(domain), ScalarMap::identity, s};
}

std::string TargetOperator::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == OperatorKind::pointwise) os << '(' << to_string(map_) << ", scale=" << param_ << ')';
    if (kind_ == OperatorKind::moving_average) os << "(window=" << param_ << ')';
    if (kind_ == OperatorKind::shift) os << "(s=" << param_ << ')';
    return os.str();
}

namespace {

double scalar(ScalarMap map, double x) {
    switch (map) {
        case ScalarMap::identity: return x;
        case ScalarMap::sin: return std::sin(x);
        case ScalarMap::tanh: return std::tanh(x);
        case ScalarMap::abs: return std::abs(x);
    }
    return x;
}

std::vector<double> cumulative_trapezoid(std::span<const double> c, std::span<const double> v) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t k = 1; k < v.size(); ++k) out[k] = out[k - 1] + 0.5 * (c[k] - c[k - 1]) * (v[k] + v[k - 1]);
    return out;
}

}  // namespace

SampledFunction apply(const TargetOperator& opr, const SampledFunction& f) {
    const Grid& g = *f.grid();
    if (!(g.domain() == opr.domain())) throw DomainError("apply: function domain differs from operator domain");
    const auto v = f.values();
    std::vector<double> out(v.size());

    switch (opr.kind()) {
        case OperatorKind::pointwise:
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = opr.parameter() * scalar(opr.scalar_map(), v[i]);
            break;
        case OperatorKind::antiderivative:
            out = cumulative_trapezoid(g.coords(0), v);
            break;
        case OperatorKind::moving_average: {
            const auto c = g.coords(0);
            const std::size_t n = v.size();
            const auto half = static_cast<std::size_t>(std::llround(opr.parameter() / (2.0 * g.spacing(0))));
            const auto cum = cumulative_trapezoid(c, v);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t lo = i >= half ? i - half : 0;
                const std::size_t hi = std::min(n - 1, i + half);
                out[i] = hi == lo ? v[i] : (cum[hi] - cum[lo]) / (c[hi] - c[lo]);
            }
            break;
        }
        case OperatorKind::shift: {
            const std::size_t n = v.size();
            if (n < 2) {
                out.assign(v.begin(), v.end());
                break;
            }
            // Nodes 0 and n-1 are the same point of the circle; the period is n-1 cells.
            const auto period = static_cast<long long>(n - 1);
            long long k = std::llround(opr.parameter() / g.spacing(0)) % period;
            if (k < 0) k += period;
            for (long long i = 0; i < period; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(((i - k) % period + period) % period)];
            out[n - 1] = out[0];
            break;
        }
    }
    return SampledFunction(f.grid(), std::move(out), f.interp());
}

ModulusSpec declared_modulus(const TargetOperator& opr) {
    switch (opr.kind()) {
        case OperatorKind::antiderivative: return ModulusSpec::lipschitz(opr.domain().side(0));
        case OperatorKind::pointwise: return ModulusSpec::lipschitz(std::abs(opr.parameter()));
        case OperatorKind::moving_average:
        case OperatorKind::shift: return ModulusSpec::lipschitz(1.0);
    }
    return ModulusSpec::lipschitz(1.0);
}

double image_lipschitz(const TargetOperator& opr, double lambda_in, double amplitude) {
    if (!(lambda_in >= 0.0) || !(amplitude >= 0.0))
        throw std::invalid_argument("image_lipschitz: bounds must be nonnegative");
    switch (opr.kind()) {
        case OperatorKind::antiderivative: return amplitude;
        case OperatorKind::pointwise: return std::abs(opr.parameter()) * lambda_in;
        case OperatorKind::moving_average:
        case OperatorKind::shift: return lambda_in;
    }
    return lambda_in;
}

}  // namespace opfact
