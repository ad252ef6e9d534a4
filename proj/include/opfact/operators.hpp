#pragma once

#include <string>
#include <string_view>

#include "opfact/bounds.hpp"
#include "opfact/funcspace.hpp"

namespace opfact {

enum class OperatorKind { antiderivative, pointwise, moving_average, shift };

// Scalar maps available to pointwise operators; each is 1-Lipschitz before scaling.
enum class ScalarMap { identity, sin, tanh, abs };

std::string_view to_string(OperatorKind kind);
std::string_view to_string(ScalarMap map);
ScalarMap scalar_map_from_string(std::string_view name);

/// A continuous operator D: C(K) -> C(K) with a certified modulus of continuity.
///
/// antiderivative, moving_average and shift act on one-dimensional domains; pointwise on any box.
class TargetOperator {
public:
    static TargetOperator antiderivative(BoxDomain domain);
    static TargetOperator pointwise(BoxDomain domain, ScalarMap map, double scale = 1.0);
    static TargetOperator moving_average(BoxDomain domain, double window);
    // Circular shift t -> f(t - s), quantized to whole grid steps.
    static TargetOperator shift(BoxDomain domain, double s);

    OperatorKind kind() const { return kind_; }
    const BoxDomain& domain() const { return domain_; }
    ScalarMap scalar_map() const { return map_; }
    // Pointwise scale, moving-average window, or shift amount, depending on kind.
    double parameter() const { return param_; }

    std::string describe() const;

private:
    TargetOperator(OperatorKind kind, BoxDomain domain, ScalarMap map, double param);

    OperatorKind kind_;
    BoxDomain domain_;
    ScalarMap map_ = ScalarMap::identity;
    double param_ = 0.0;
};

SampledFunction apply(const TargetOperator& opr, const SampledFunction& f);

ModulusSpec declared_modulus(const TargetOperator& opr);

// Bound on the Lipschitz constant of D f for lambda_in-Lipschitz inputs with |f| <= amplitude.
// The shift bound assumes inputs that agree at both ends of the interval (circular continuity).
double image_lipschitz(const TargetOperator& opr, double lambda_in, double amplitude);

}  // namespace opfact
