#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "opfact/factorize.hpp"
#include "opfact/funcspace.hpp"
#include "opfact/infinilayers.hpp"
#include "opfact/netcore.hpp"

namespace opfact {

// File could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// {m1, n, m2, activation, w1, b1, w2, b2}; matrices as row-major nested arrays.
nlohmann::json net_to_json(const TwoLayerNet& net);
TwoLayerNet net_from_json(const nlohmann::json& j);

/// Everything needed to rebuild an assembled operator network: the finite network, the
/// architecture, the mollifier radius, and the factorization it was lifted through.
struct OperatorNetDocument {
    TwoLayerNet net;
    Architecture architecture = Architecture::thm2;
    double r = 0.0;
    BoxDomain domain{{0.0}, {1.0}};
    double gamma = 0.0;
    Interp interp = Interp::nearest;
    std::size_t grid_resolution = 0;

    SampleFactorization factorization() const;
    OperatorNet assemble() const;
};

nlohmann::json operator_net_to_json(const OperatorNetDocument& doc);
OperatorNetDocument operator_net_from_json(const nlohmann::json& j);

// {domain: {lower, upper}, nodes_per_axis, values, interp?}
nlohmann::json function_to_json(const SampledFunction& f);
SampledFunction function_from_json(const nlohmann::json& j);

// Shortest text that parses back to exactly the same double (at most 17 significant digits).
std::string format_double(double x);

}  // namespace opfact
