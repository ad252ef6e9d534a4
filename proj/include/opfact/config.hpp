#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfact/funcspace.hpp"
#include "opfact/netcore.hpp"
#include "opfact/operators.hpp"

namespace opfact {

enum class RadiusMode { theorem4, manual };

struct OperatorConfig {
    std::string tag = "antiderivative";
    ScalarMap phi = ScalarMap::sin;
    double scale = 1.0;
    double window = 0.1;
    double shift = 0.0;
};

struct ExperimentConfig {
    OperatorConfig op;
    BoxDomain domain{{0.0}, {1.0}};
    double lambda = 1.0;
    double amplitude = 1.0;
    double epsilon = 0.2;
    Interp interp = Interp::nearest;
    RadiusMode radius_mode = RadiusMode::theorem4;
    double manual_gamma = 0.0;
    std::vector<std::size_t> widths{4, 16, 64};
    Activation activation = Activation::tanh;
    double step = 0.05;
    double momentum = 0.9;
    std::size_t epochs = 2000;
    std::size_t restarts = 3;
    std::size_t train_n = 200;
    std::size_t heldout_n = 100;
    std::vector<double> mollify_ratios{0.2, 0.1, 0.02};
    std::size_t grid_resolution = 0;  // 0: ten nodes per cover cell
    std::uint64_t seed = 0;

    LipschitzClass function_class() const { return {domain, lambda, amplitude}; }
};

// Throws ConfigError on missing fields, wrong types or violated invariants.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

TargetOperator make_operator(const ExperimentConfig& c);

}  // namespace opfact
