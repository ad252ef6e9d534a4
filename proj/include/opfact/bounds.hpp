#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "opfact/funcspace.hpp"

namespace opfact {

/// Modulus of continuity omega of an operator: either Lambda * delta, or a monotone table
/// interpolated linearly between its (delta, omega) knots.
class ModulusSpec {
public:
    static ModulusSpec lipschitz(double constant);
    static ModulusSpec tabulated(std::vector<std::pair<double, double>> knots);

    bool is_lipschitz() const { return knots_.empty(); }
    double lipschitz_constant() const { return constant_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    double operator()(double delta) const;

    // Largest delta with omega(delta) <= value. Infinite for a zero Lipschitz constant.
    // Throws RangeError when value exceeds the tabulated range.
    double inverse(double value) const;

private:
    double constant_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
};

// omega^{-1}(eps / 4) / 4.
double psi_theorem4(const ModulusSpec& modulus, double eps);

// min(psi / ell, eps / 2). ell = 0 selects the eps / 2 branch.
double cover_radius_theorem4(double psi, double ell, double eps);

double ell_theorem4(std::span<const SampledFunction> cover_centers);

// delta / (2 (1 + c)).
double psi_lemma8(double delta, double c);

enum class Corollary5Variant { as_stated, derived };

// Unit-count bound M for Lambda-Lipschitz operators on lambda-Lipschitz functions.
//   as_stated: ceil((2 + 32 diam lambda / (Lambda eps))^d)
//   derived:   ceil((2 + 2 diam / gamma)^d) with gamma = min(eps / (16 Lambda lambda), eps / 2),
//              i.e. (2 + 32 diam lambda Lambda / eps)^d whenever the first branch is active.
std::uint64_t corollary5_bound(double diam, double lambda, double Lambda, double eps, std::size_t d,
                               Corollary5Variant variant = Corollary5Variant::derived);

}  // namespace opfact
