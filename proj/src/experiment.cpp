#include "opfact/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "opfact/bounds.hpp"
#include "opfact/covering.hpp"
#include "opfact/errors.hpp"
#include "opfact/infinilayers.hpp"
#include "opfact/io.hpp"
#include "opfact/operators.hpp"
#include "opfact/random.hpp"

namespace opfact {

using nlohmann::json;

namespace {

// Seed streams; each random quantity in an experiment draws from its own stream.
enum Stream : std::uint64_t { train_functions = 1, heldout_functions = 2, net_init = 3 };

std::size_t reference_resolution(const ExperimentConfig& config, const Cover& cover) {
    std::size_t widest = 1;
    for (auto n : cover.lattice_counts) widest = std::max(widest, n);
    // Ten reference nodes per cover cell unless the config asks for more.
    return std::max(config.grid_resolution, 10 * widest + 1);
}

std::vector<SampledFunction> make_testset(const ExperimentConfig& config, const GridPtr& grid, Stream stream,
                                          std::size_t n) {
    std::vector<SampledFunction> out;
    out.reserve(n);
    const LipschitzClass cls = config.function_class();
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_lipschitz(cls, grid, derive_seed(config.seed, stream, i)));
    return out;
}

double pipeline_error(const TwoLayerNet& net, const SampleFactorization& sf, std::span<const std::vector<double>> inputs,
                      std::span<const SampledFunction> truths) {
    double worst = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        worst = std::max(worst, sup_distance(sf.delta_star(forward(net, inputs[i])), truths[i]));
    return worst;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Radii resolve_radii(const ExperimentConfig& config) {
    const TargetOperator opr = make_operator(config);
    Radii radii;
    radii.psi = psi_theorem4(declared_modulus(opr), config.epsilon);
    radii.ell = std::max(config.lambda, image_lipschitz(opr, config.lambda, config.amplitude));
    radii.gamma = config.radius_mode == RadiusMode::manual ? config.manual_gamma
                                                           : cover_radius_theorem4(radii.psi, radii.ell, config.epsilon);
    radii.m = cover_box(config.domain, radii.gamma).size();
    return radii;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    const TargetOperator opr = make_operator(config);

    ExperimentOutput out;
    Report& report = out.report;
    report.config = config_to_json(config);
    report.operator_description = opr.describe();
    report.seed = config.seed;
    report.radii = resolve_radii(config);

    const ModulusSpec modulus = declared_modulus(opr);
    if (config.lambda > 0.0 && modulus.lipschitz_constant() > 0.0) {
        const double diam = config.domain.diameter();
        report.corollary5_as_stated = corollary5_bound(diam, config.lambda, modulus.lipschitz_constant(),
                                                       config.epsilon, config.domain.dim(), Corollary5Variant::as_stated);
        report.corollary5_derived = corollary5_bound(diam, config.lambda, modulus.lipschitz_constant(), config.epsilon,
                                                     config.domain.dim(), Corollary5Variant::derived);
    }

    // S_X = S_Y: one factorization serves input and output.
    const Cover probe_cover = cover_box(config.domain, report.radii.gamma);
    report.reference_resolution = reference_resolution(config, probe_cover);
    const SampleFactorization sf(config.domain, report.radii.gamma, config.interp, report.reference_resolution);
    report.grid_nodes = sf.grid()->size();

    const auto train_set = make_testset(config, sf.grid(), train_functions, config.train_n);
    const auto heldout_set = make_testset(config, sf.grid(), heldout_functions, config.heldout_n);
    report.factorization_floor = map_factorization_error(opr, sf, sf, heldout_set);

    Dataset data;
    std::vector<SampledFunction> train_truth;
    for (const auto& f : train_set) {
        train_truth.push_back(apply(opr, f));
        data.inputs.push_back(sf.delta(f));
        data.targets.push_back(sf.delta(train_truth.back()));
    }
    std::vector<std::vector<double>> heldout_inputs;
    std::vector<SampledFunction> heldout_truth;
    for (const auto& f : heldout_set) {
        heldout_inputs.push_back(sf.delta(f));
        heldout_truth.push_back(apply(opr, f));
    }

    for (const std::size_t width : config.widths) {
        const auto t_width = std::chrono::steady_clock::now();
        WidthResult wr;
        wr.width = width;
        wr.init_seed = derive_seed(config.seed, net_init, width);
        const TwoLayerNet init = net_new(sf.order(), width, sf.order(), config.activation, wr.init_seed);
        const TrainResult trained =
            train(init, data, TrainConfig{config.step, config.momentum, config.epochs, wr.init_seed, config.restarts});
        wr.restarts = trained.restarts;
        wr.best_restart = trained.best_restart;
        wr.all_diverged = trained.all_diverged;
        wr.final_loss = trained.history.back();
        const TwoLayerNet& net = trained.net;

        wr.train_err = pipeline_error(net, sf, data.inputs, train_truth);
        wr.heldout_sup_err = pipeline_error(net, sf, heldout_inputs, heldout_truth);

        const OperatorNet thm3 = assemble(Architecture::thm3, net, sf, sf, 0.0, sf.grid());
        for (std::size_t i = 0; i < heldout_inputs.size(); ++i) {
            const auto reference = sf.delta_star(forward(net, heldout_inputs[i]));
            wr.thm3_gap = std::max(wr.thm3_gap, sup_distance(net_apply(thm3, heldout_inputs[i]), reference));
        }

        for (const double ratio : config.mollify_ratios) {
            GapEntry gap;
            gap.ratio = ratio;
            gap.r = ratio * report.radii.gamma;
            const OperatorNet thm2 = assemble(Architecture::thm2, net, sf, sf, gap.r, sf.grid());
            const OperatorNet thm1 = assemble(Architecture::thm1, net, sf, sf, gap.r, sf.grid());
            for (std::size_t i = 0; i < heldout_set.size(); ++i) {
                const auto reference = sf.delta_star(forward(net, heldout_inputs[i]));
                const auto via_thm2 = net_apply(thm2, heldout_set[i]);
                gap.thm2_gap = std::max(gap.thm2_gap, sup_distance(via_thm2, reference));
                gap.thm1_gap = std::max(gap.thm1_gap, sup_distance(net_apply(thm1, heldout_set[i]), reference));
                gap.thm2_heldout_err = std::max(gap.thm2_heldout_err, sup_distance(via_thm2, heldout_truth[i]));
            }
            wr.gaps.push_back(gap);
        }

        report.widths.push_back(std::move(wr));
        out.nets.push_back(net);
        out.timings.width_seconds.push_back(seconds_since(t_width));
    }
    out.timings.total_seconds = seconds_since(t_start);
    return out;
}

json report_to_json(const Report& r) {
    json widths = json::array();
    for (const auto& w : r.widths) {
        json restarts = json::array();
        for (const auto& o : w.restarts)
            restarts.push_back({{"seed", o.seed}, {"final_loss", o.final_loss}, {"diverged", o.diverged}});
        json gaps = json::array();
        for (const auto& g : w.gaps)
            gaps.push_back({{"ratio", g.ratio},
                            {"r", g.r},
                            {"thm2_gap", g.thm2_gap},
                            {"thm1_gap", g.thm1_gap},
                            {"thm2_heldout_err", g.thm2_heldout_err}});
        widths.push_back({{"width", w.width},
                          {"init_seed", w.init_seed},
                          {"final_loss", w.final_loss},
                          {"train_err", w.train_err},
                          {"heldout_sup_err", w.heldout_sup_err},
                          {"thm3_gap", w.thm3_gap},
                          {"best_restart", w.best_restart},
                          {"all_diverged", w.all_diverged},
                          {"restarts", restarts},
                          {"gaps", gaps}});
    }
    json j{{"config", r.config},
           {"operator", r.operator_description},
           {"radii", {{"psi", r.radii.psi}, {"ell", r.radii.ell}, {"gamma", r.radii.gamma}, {"m", r.radii.m}}},
           {"corollary5", {{"as_stated", nullptr}, {"derived", nullptr}}},
           {"reference_resolution", r.reference_resolution},
           {"grid_nodes", r.grid_nodes},
           {"factorization_floor", r.factorization_floor},
           {"widths", widths},
           {"seed", r.seed}};
    if (r.corollary5_as_stated) j["corollary5"]["as_stated"] = *r.corollary5_as_stated;
    if (r.corollary5_derived) j["corollary5"]["derived"] = *r.corollary5_derived;
    return j;
}

Report report_from_json(const json& j) {
    try {
        Report r;
        r.config = j.at("config");
        r.operator_description = j.at("operator").get<std::string>();
        const json& radii = j.at("radii");
        r.radii = {radii.at("psi").get<double>(), radii.at("ell").get<double>(), radii.at("gamma").get<double>(),
                   radii.at("m").get<std::size_t>()};
        const json& c5 = j.at("corollary5");
        if (!c5.at("as_stated").is_null()) r.corollary5_as_stated = c5.at("as_stated").get<std::uint64_t>();
        if (!c5.at("derived").is_null()) r.corollary5_derived = c5.at("derived").get<std::uint64_t>();
        r.reference_resolution = j.at("reference_resolution").get<std::size_t>();
        r.grid_nodes = j.at("grid_nodes").get<std::size_t>();
        r.factorization_floor = j.at("factorization_floor").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const json& w : j.at("widths")) {
            WidthResult wr;
            wr.width = w.at("width").get<std::size_t>();
            wr.init_seed = w.at("init_seed").get<std::uint64_t>();
            wr.final_loss = w.at("final_loss").get<double>();
            wr.train_err = w.at("train_err").get<double>();
            wr.heldout_sup_err = w.at("heldout_sup_err").get<double>();
            wr.thm3_gap = w.at("thm3_gap").get<double>();
            wr.best_restart = w.at("best_restart").get<std::size_t>();
            wr.all_diverged = w.at("all_diverged").get<bool>();
            for (const json& o : w.at("restarts"))
                wr.restarts.push_back({o.at("seed").get<std::uint64_t>(), o.at("final_loss").get<double>(),
                                       o.at("diverged").get<bool>()});
            for (const json& g : w.at("gaps"))
                wr.gaps.push_back({g.at("ratio").get<double>(), g.at("r").get<double>(), g.at("thm2_gap").get<double>(),
                                   g.at("thm1_gap").get<double>(), g.at("thm2_heldout_err").get<double>()});
            r.widths.push_back(std::move(wr));
        }
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report: malformed document: ") + e.what());
    }
}

json timings_to_json(const Timings& t) {
    return {{"total_seconds", t.total_seconds}, {"width_seconds", t.width_seconds}};
}

std::string report_to_csv(const Report& report) {
    std::ostringstream os;
    os << "width,train_err,heldout_sup_err,floor,gap_r,r_ratio,thm1_gap_r,thm3_gap\n";
    const std::string floor = format_double(report.factorization_floor);
    for (const auto& w : report.widths) {
        const std::string head = std::to_string(w.width) + ',' + format_double(w.train_err) + ',' +
                                 format_double(w.heldout_sup_err) + ',' + floor + ',';
        if (w.gaps.empty()) {
            os << head << ",,," << format_double(w.thm3_gap) << '\n';
            continue;
        }
        for (const auto& g : w.gaps)
            os << head << format_double(g.thm2_gap) << ',' << format_double(g.ratio) << ','
               << format_double(g.thm1_gap) << ',' << format_double(w.thm3_gap) << '\n';
    }
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) throw ConfigError("csv: row width differs from header");
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

}  // namespace opfact
