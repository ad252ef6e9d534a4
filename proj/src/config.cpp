#include "opfact/config.hpp"

#include <cmath>

#include "opfact/errors.hpp"

namespace opfact {

using nlohmann::json;

namespace {

template <typename T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: field '") + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? get<T>(j, key) : fallback;
}

const json& object(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_object())
        throw ConfigError(std::string("config: '") + key + "' must be an object");
    return j.at(key);
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ExperimentConfig c;

    const json& op = object(j, "operator");
    c.op.tag = get<std::string>(op, "tag");
    const json params = op.value("params", json::object());
    c.op.phi = scalar_map_from_string(get_or<std::string>(params, "phi", "sin"));
    c.op.scale = get_or(params, "scale", 1.0);
    c.op.window = get_or(params, "window", 0.1);
    c.op.shift = get_or(params, "s", 0.0);

    const json& dom = object(j, "domain");
    try {
        c.domain = BoxDomain(get<std::vector<double>>(dom, "lower"), get<std::vector<double>>(dom, "upper"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: domain: ") + e.what());
    }

    const json& cls = object(j, "class");
    c.lambda = get<double>(cls, "lambda");
    c.amplitude = get<double>(cls, "amplitude");
    c.epsilon = get<double>(j, "epsilon");
    c.interp = interp_from_string(get_or<std::string>(j, "interp", "nearest"));

    const json& radius = object(j, "radius");
    const auto mode = get<std::string>(radius, "mode");
    if (mode == "theorem4") {
        c.radius_mode = RadiusMode::theorem4;
    } else if (mode == "manual") {
        c.radius_mode = RadiusMode::manual;
        c.manual_gamma = get<double>(radius, "gamma");
        if (!(c.manual_gamma > 0.0)) throw ConfigError("config: manual gamma must be positive");
    } else {
        throw ConfigError("config: radius mode must be 'theorem4' or 'manual'");
    }

    c.widths = get<std::vector<std::size_t>>(j, "widths");
    c.activation = activation_from_string(get_or<std::string>(j, "activation", "tanh"));

    const json& tr = object(j, "train");
    c.step = get<double>(tr, "step");
    c.momentum = get<double>(tr, "momentum");
    c.epochs = get<std::size_t>(tr, "epochs");
    c.restarts = get<std::size_t>(tr, "restarts");

    const json& ts = object(j, "testset");
    c.train_n = get<std::size_t>(ts, "train_n");
    c.heldout_n = get<std::size_t>(ts, "heldout_n");

    c.mollify_ratios = get_or(j, "mollify_ratios", std::vector<double>{});
    c.grid_resolution = get_or<std::size_t>(j, "grid_resolution", 0);
    c.seed = get_or<std::uint64_t>(j, "seed", 0);

    if (!(c.epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
    if (!(c.lambda >= 0.0) || !(c.amplitude >= 0.0)) throw ConfigError("config: class bounds must be nonnegative");
    if (c.widths.empty()) throw ConfigError("config: widths must be non-empty");
    for (auto w : c.widths)
        if (w == 0) throw ConfigError("config: widths must be positive");
    if (c.train_n == 0 || c.heldout_n == 0) throw ConfigError("config: testset sizes must be >= 1");
    if (!(c.step >= 0.0) || !(c.momentum >= 0.0 && c.momentum < 1.0) || c.restarts == 0)
        throw ConfigError("config: invalid train settings");
    for (double r : c.mollify_ratios)
        if (!(r > 0.0) || !(r < 1.0)) throw ConfigError("config: mollify ratios must lie in (0, 1)");

    try {
        (void)make_operator(c);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: operator: ") + e.what());
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json params = json::object();
    if (c.op.tag == "pointwise") {
        params["phi"] = std::string(to_string(c.op.phi));
        params["scale"] = c.op.scale;
    } else if (c.op.tag == "moving_average") {
        params["window"] = c.op.window;
    } else if (c.op.tag == "shift") {
        params["s"] = c.op.shift;
    }
    json radius = {{"mode", c.radius_mode == RadiusMode::theorem4 ? "theorem4" : "manual"}};
    if (c.radius_mode == RadiusMode::manual) radius["gamma"] = c.manual_gamma;
    return json{
        {"operator", {{"tag", c.op.tag}, {"params", params}}},
        {"domain", {{"lower", c.domain.lower()}, {"upper", c.domain.upper()}}},
        {"class", {{"lambda", c.lambda}, {"amplitude", c.amplitude}}},
        {"epsilon", c.epsilon},
        {"interp", std::string(to_string(c.interp))},
        {"radius", radius},
        {"widths", c.widths},
        {"activation", std::string(to_string(c.activation))},
        {"train", {{"step", c.step}, {"momentum", c.momentum}, {"epochs", c.epochs}, {"restarts", c.restarts}}},
        {"testset", {{"train_n", c.train_n}, {"heldout_n", c.heldout_n}}},
        {"mollify_ratios", c.mollify_ratios},
        {"grid_resolution", c.grid_resolution},
        {"seed", c.seed},
    };
}

TargetOperator make_operator(const ExperimentConfig& c) {
    if (c.op.tag == "antiderivative") return TargetOperator::antiderivative(c.domain);
    if (c.op.tag == "pointwise") return TargetOperator::pointwise(c.domain, c.op.phi, c.op.scale);
    if (c.op.tag == "identity") return TargetOperator::pointwise(c.domain, ScalarMap::identity, 1.0);
    if (c.op.tag == "moving_average") return TargetOperator::moving_average(c.domain, c.op.window);
    if (c.op.tag == "shift") return TargetOperator::shift(c.domain, c.op.shift);
    throw ConfigError("config: unknown operator tag '" + c.op.tag + "'");
}

}  // namespace opfact
