#include "opfact/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "opfact/errors.hpp"

namespace opfact {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const char* name) {
    if (!j.is_array() || j.size() != rows) throw ConfigError(std::string("net: '") + name + "' has wrong row count");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = j[r].get<std::vector<double>>();
        if (row.size() != cols) throw ConfigError(std::string("net: '") + name + "' has wrong column count");
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

}  // namespace

json net_to_json(const TwoLayerNet& net) {
    return json{{"m1", net.inputs()},       {"n", net.hidden()},     {"m2", net.outputs()},
                {"activation", std::string(to_string(net.activation))},
                {"w1", matrix_to_json(net.w1)}, {"b1", net.b1},
                {"w2", matrix_to_json(net.w2)}, {"b2", net.b2}};
}

TwoLayerNet net_from_json(const json& j) {
    try {
        const auto m1 = j.at("m1").get<std::size_t>();
        const auto n = j.at("n").get<std::size_t>();
        const auto m2 = j.at("m2").get<std::size_t>();
        TwoLayerNet net;
        net.activation = activation_from_string(j.at("activation").get<std::string>());
        net.w1 = matrix_from_json(j.at("w1"), n, m1, "w1");
        net.b1 = j.at("b1").get<std::vector<double>>();
        net.w2 = matrix_from_json(j.at("w2"), m2, n, "w2");
        net.b2 = j.at("b2").get<std::vector<double>>();
        if (net.b1.size() != n || net.b2.size() != m2) throw ConfigError("net: bias length mismatch");
        return net;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("net: malformed document: ") + e.what());
    }
}

SampleFactorization OperatorNetDocument::factorization() const {
    return build_factorization(domain, gamma, interp, grid_resolution);
}

OperatorNet OperatorNetDocument::assemble() const {
    const SampleFactorization sf = factorization();
    return opfact::assemble(architecture, net, sf, sf, r, sf.grid());
}

json operator_net_to_json(const OperatorNetDocument& doc) {
    json j = net_to_json(doc.net);
    const SampleFactorization sf = doc.factorization();
    const Grid& g = *sf.grid();
    std::vector<std::size_t> counts(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a) counts[a] = g.count(a);
    j["architecture"] = std::string(to_string(doc.architecture));
    j["r"] = doc.r;
    j["cover"] = {{"gamma", doc.gamma},
                  {"interp", std::string(to_string(doc.interp))},
                  {"lattice_counts", sf.cover().lattice_counts},
                  {"centers", sf.cover().centers}};
    j["output_grid"] = {{"lower", doc.domain.lower()},
                        {"upper", doc.domain.upper()},
                        {"nodes_per_axis", counts},
                        {"min_nodes_per_axis", doc.grid_resolution}};
    return j;
}

OperatorNetDocument operator_net_from_json(const json& j) {
    OperatorNetDocument doc;
    doc.net = net_from_json(j);
    try {
        doc.architecture = architecture_from_string(j.at("architecture").get<std::string>());
        doc.r = j.at("r").get<double>();
        const json& cover = j.at("cover");
        doc.gamma = cover.at("gamma").get<double>();
        doc.interp = interp_from_string(cover.at("interp").get<std::string>());
        const json& grid = j.at("output_grid");
        doc.domain = BoxDomain(grid.at("lower").get<std::vector<double>>(), grid.at("upper").get<std::vector<double>>());
        doc.grid_resolution = grid.at("min_nodes_per_axis").get<std::size_t>();

        const SampleFactorization sf = doc.factorization();
        if (cover.at("centers").get<std::vector<Point>>() != sf.cover().centers)
            throw ConfigError("operator net: stored cover centers do not match the rebuilt cover");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("operator net: malformed document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("operator net: ") + e.what());
    }
    return doc;
}

json function_to_json(const SampledFunction& f) {
    const Grid& g = *f.grid();
    if (g.kind() != GridKind::trapezoid) throw std::invalid_argument("function_to_json: only uniform grids persist");
    std::vector<std::size_t> counts(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a) counts[a] = g.count(a);
    return json{{"domain", {{"lower", g.domain().lower()}, {"upper", g.domain().upper()}}},
                {"nodes_per_axis", counts},
                {"values", std::vector<double>(f.values().begin(), f.values().end())},
                {"interp", std::string(to_string(f.interp()))}};
}

SampledFunction function_from_json(const json& j) {
    try {
        const BoxDomain domain(j.at("domain").at("lower").get<std::vector<double>>(),
                               j.at("domain").at("upper").get<std::vector<double>>());
        const json& npa = j.at("nodes_per_axis");
        std::vector<std::size_t> counts =
            npa.is_array() ? npa.get<std::vector<std::size_t>>() : std::vector<std::size_t>(domain.dim(), npa.get<std::size_t>());
        if (counts.size() != domain.dim()) throw ConfigError("function: nodes_per_axis length mismatch");
        auto grid = make_grid(domain, counts);
        const Interp interp = interp_from_string(j.value("interp", std::string("multilinear")));
        return SampledFunction(grid, j.at("values").get<std::vector<double>>(), interp);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("function: malformed document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("function: ") + e.what());
    }
}

}  // namespace opfact
