#include "opfact/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "opfact/covering.hpp"
#include "opfact/errors.hpp"

namespace opfact {

ModulusSpec ModulusSpec::lipschitz(double constant) {
    if (!(constant >= 0.0) || !std::isfinite(constant))
        throw std::invalid_argument("ModulusSpec: Lipschitz constant must be finite and nonnegative");
    ModulusSpec m;
    m.constant_ = constant;
    return m;
}

ModulusSpec ModulusSpec::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::invalid_argument("ModulusSpec: table needs at least two knots");
    if (knots.front().first != 0.0 || knots.front().second != 0.0)
        throw std::invalid_argument("ModulusSpec: table must start at (0, 0)");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first))
            throw std::invalid_argument("ModulusSpec: table deltas must be strictly increasing");
        if (knots[i].second < knots[i - 1].second)
            throw std::invalid_argument("ModulusSpec: table values must be non-decreasing");
    }
    ModulusSpec m;
    m.knots_ = std::move(knots);
    return m;
}

double ModulusSpec::operator()(double delta) const {
    if (delta < 0.0) throw std::invalid_argument("ModulusSpec: negative argument");
    if (is_lipschitz()) return constant_ * delta;
    if (delta >= knots_.back().first) {
        if (delta == knots_.back().first) return knots_.back().second;
        throw RangeError("ModulusSpec: delta beyond tabulated range");
    }
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), delta,
                                     [](double x, const auto& k) { return x < k.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (delta - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

double ModulusSpec::inverse(double value) const {
    if (!(value >= 0.0)) throw std::invalid_argument("ModulusSpec: inverse of a negative value");
    if (is_lipschitz()) return constant_ == 0.0 ? std::numeric_limits<double>::infinity() : value / constant_;
    if (value > knots_.back().second) throw RangeError("ModulusSpec: value " + std::to_string(value) +
                                                       " above tabulated modulus range");
    // Bisection for sup{delta : omega(delta) <= value}; omega is monotone piecewise linear.
    double lo = 0.0;
    double hi = knots_.back().first;
    if ((*this)(hi) <= value) return hi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) <= value)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double psi_theorem4(const ModulusSpec& modulus, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("psi_theorem4: eps must be positive");
    return modulus.inverse(eps / 4.0) / 4.0;
}

double cover_radius_theorem4(double psi, double ell, double eps) {
    if (!(psi > 0.0) || !(ell >= 0.0) || !(eps > 0.0))
        throw std::invalid_argument("cover_radius_theorem4: need psi > 0, ell >= 0, eps > 0");
    const double half = eps / 2.0;
    if (ell == 0.0 || std::isinf(psi)) return half;
    return std::min(psi / ell, half);
}

double ell_theorem4(std::span<const SampledFunction> cover_centers) {
    if (cover_centers.empty()) throw std::invalid_argument("ell_theorem4: empty cover");
    double best = 0.0;
    for (const auto& f : cover_centers) best = std::max(best, estimate_lipschitz(f));
    return best;
}

double psi_lemma8(double delta, double c) {
    if (!(delta > 0.0) || !(c >= 1.0)) throw std::invalid_argument("psi_lemma8: need delta > 0 and c >= 1");
    return delta / (2.0 * (1.0 + c));
}

std::uint64_t corollary5_bound(double diam, double lambda, double Lambda, double eps, std::size_t d,
                               Corollary5Variant variant) {
    if (!(diam > 0.0) || !(lambda > 0.0) || !(Lambda > 0.0) || !(eps > 0.0) || d == 0)
        throw std::invalid_argument("corollary5_bound: all arguments must be positive");
    const double dd = static_cast<double>(d);
    if (variant == Corollary5Variant::as_stated)
        return ceil_count(std::pow(2.0 + 32.0 * diam * lambda / (Lambda * eps), dd));
    const double ratio = std::max(32.0 * diam * lambda * Lambda, 4.0 * diam) / eps;
    return ceil_count(std::pow(2.0 + ratio, dd));
}

}  // namespace opfact
