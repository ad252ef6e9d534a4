#include "opfact/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "opfact/bounds.hpp"
#include "opfact/covering.hpp"
#include "opfact/errors.hpp"
#include "opfact/experiment.hpp"
#include "opfact/factorize.hpp"
#include "opfact/infinilayers.hpp"
#include "opfact/io.hpp"
#include "opfact/random.hpp"

namespace opfact {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// "lo0,hi0[,lo1,hi1,...]"
BoxDomain parse_domain(const std::vector<double>& flat) {
    if (flat.empty() || flat.size() % 2 != 0) throw ConfigError("--domain expects lo,hi pairs per axis");
    std::vector<double> lo, hi;
    for (std::size_t i = 0; i < flat.size(); i += 2) {
        lo.push_back(flat[i]);
        hi.push_back(flat[i + 1]);
    }
    try {
        return BoxDomain(lo, hi);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--domain: ") + e.what());
    }
}

void emit(std::ostream& out, const fs::path& path, const std::string& text) {
    if (path.empty())
        out << text;
    else
        write_text(path, text);
}

int run_cover(const std::vector<double>& domain_flat, double gamma, std::ostream& out) {
    if (!(gamma > 0.0)) throw ConfigError("--gamma must be positive");
    const Cover cover = cover_box(parse_domain(domain_flat), gamma);
    const std::size_t d = cover.box->dim();
    for (std::size_t a = 0; a < d; ++a) out << (a ? "," : "") << 'x' << a;
    out << '\n';
    for (const auto& c : cover.centers) {
        for (std::size_t a = 0; a < d; ++a) out << (a ? "," : "") << format_double(c[a]);
        out << '\n';
    }
    return exit_ok;
}

struct BoundArgs {
    double diam = 1.0, lam = 1.0, Lam = 1.0, eps = 0.1, delta = 0.0, c = 1.0;
    std::size_t d = 1;
};

int run_bound(const BoundArgs& a, std::ostream& out) {
    if (!(a.diam > 0.0) || !(a.lam > 0.0) || !(a.Lam > 0.0) || !(a.eps > 0.0) || a.d == 0)
        throw ConfigError("bound: --diam, --lam, --Lam, --eps and --d must be positive");
    const double psi = psi_theorem4(ModulusSpec::lipschitz(a.Lam), a.eps);
    const double gamma = cover_radius_theorem4(psi, a.lam, a.eps);
    out << "quantity,value\n";
    out << "corollary5_as_stated," << corollary5_bound(a.diam, a.lam, a.Lam, a.eps, a.d, Corollary5Variant::as_stated)
        << '\n';
    out << "corollary5_derived," << corollary5_bound(a.diam, a.lam, a.Lam, a.eps, a.d, Corollary5Variant::derived)
        << '\n';
    out << "psi_theorem4," << format_double(psi) << '\n';
    out << "cover_radius_theorem4," << format_double(gamma) << '\n';
    out << "box_covering_bound," << box_covering_bound(a.diam, gamma, a.d) << '\n';
    if (a.delta > 0.0) {
        if (!(a.c >= 1.0)) throw ConfigError("bound: --c must be >= 1");
        out << "psi_lemma8," << format_double(psi_lemma8(a.delta, a.c)) << '\n';
    }
    return exit_ok;
}

struct FactorizeArgs {
    std::vector<double> domain{0.0, 1.0};
    double gamma = 0.1;
    std::string interp = "nearest";
    double lambda = 1.0;
    double amplitude = 1.0;
    std::size_t trials = 100;
    std::size_t functions = 200;
    std::size_t resolution = 0;
    std::uint64_t seed = 0;
};

int run_factorize_check(const FactorizeArgs& a, std::ostream& out) {
    if (!(a.gamma > 0.0)) throw ConfigError("--gamma must be positive");
    const BoxDomain domain = parse_domain(a.domain);
    const SampleFactorization sf(domain, a.gamma, interp_from_string(a.interp), a.resolution);
    std::vector<SampledFunction> testset;
    for (std::size_t i = 0; i < a.functions; ++i)
        testset.push_back(random_lipschitz({domain, a.lambda, a.amplitude}, sf.grid(), derive_seed(a.seed, 7, i)));
    out << "quantity,value\n";
    out << "order," << sf.order() << '\n';
    out << "grid_nodes," << sf.grid()->size() << '\n';
    out << "diagram_b_max_deviation," << format_double(check_diagram_b(sf, a.trials, a.seed)) << '\n';
    out << "reconstruction_sup_error," << format_double(check_reconstruction(sf, testset)) << '\n';
    out << "lipschitz_bound_lambda_gamma," << format_double(a.lambda * a.gamma) << '\n';
    return exit_ok;
}

int run_train(const fs::path& config_path, const fs::path& out_dir, std::ostream& out) {
    const ExperimentConfig config = config_from_json(read_json(config_path));
    const ExperimentOutput result = run_experiment(config);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    write_text(out_dir / "report.json", report_to_json(result.report).dump(2) + "\n");
    write_text(out_dir / "report.csv", report_to_csv(result.report));
    write_text(out_dir / "timings.json", timings_to_json(result.timings).dump(2) + "\n");
    const double r = config.mollify_ratios.empty() ? 0.0 : config.mollify_ratios.back() * result.report.radii.gamma;
    for (std::size_t i = 0; i < result.nets.size(); ++i) {
        const std::string w = std::to_string(result.report.widths[i].width);
        write_text(out_dir / ("net_w" + w + ".json"), net_to_json(result.nets[i]).dump(2) + "\n");
        if (r > 0.0) {
            const OperatorNetDocument doc{result.nets[i],        Architecture::thm2, r, config.domain,
                                          result.report.radii.gamma, config.interp,
                                          result.report.reference_resolution};
            write_text(out_dir / ("onet_w" + w + "_thm2.json"), operator_net_to_json(doc).dump(2) + "\n");
        }
    }
    out << report_to_csv(result.report);
    return exit_ok;
}

int run_evaluate(const fs::path& net_path, const fs::path& input_path, const fs::path& out_path, std::ostream& out) {
    const OperatorNetDocument doc = operator_net_from_json(read_json(net_path));
    const OperatorNet onet = doc.assemble();
    const json input = read_json(input_path);

    SampledFunction result = [&]() {
        if (doc.architecture == Architecture::thm3) {
            if (!input.contains("vector")) throw ConfigError("evaluate: thm3 networks need an input file with 'vector'");
            return net_apply(onet, input.at("vector").get<std::vector<double>>());
        }
        const SampledFunction f = function_from_json(input);
        if (!(f.grid()->domain() == doc.domain)) throw ConfigError("evaluate: input domain differs from the network's");
        return net_apply(onet, resample(f, doc.factorization().grid()));
    }();

    std::ostringstream os;
    const Grid& g = *result.grid();
    for (std::size_t a = 0; a < g.dim(); ++a) os << 'x' << a << ',';
    os << "value\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (double x : g.node(i)) os << format_double(x) << ',';
        os << format_double(result[i]) << '\n';
    }
    emit(out, out_path, os.str());
    return exit_ok;
}

int run_report(const fs::path& in_path, const fs::path& out_path, std::ostream& out) {
    emit(out, out_path, report_to_csv(report_from_json(read_json(in_path))));
    return exit_ok;
}

}  // namespace

int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sample-factorization operator learning toolkit", "opfact"};
    app.require_subcommand(1);

    std::vector<double> cover_domain{0.0, 1.0};
    double cover_gamma = 0.0;
    auto* cover = app.add_subcommand("cover", "Lattice gamma-cover of a box; centers as CSV");
    cover->add_option("--domain", cover_domain, "lo,hi per axis")->delimiter(',')->required();
    cover->add_option("--gamma", cover_gamma, "cover radius")->required();

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "Sampling radii and unit-count bounds");
    bound->add_option("--diam", bound_args.diam, "diameter of K")->required();
    bound->add_option("--lam", bound_args.lam, "Lipschitz bound of the input functions")->required();
    bound->add_option("--Lam", bound_args.Lam, "Lipschitz constant of the operator")->required();
    bound->add_option("--eps", bound_args.eps, "target uniform error")->required();
    bound->add_option("--d", bound_args.d, "dimension of K")->required();
    bound->add_option("--delta", bound_args.delta, "factorization error budget for the reconstruction radius (optional)");
    bound->add_option("--c", bound_args.c, "operator-norm bound of Delta-bar");

    FactorizeArgs fact_args;
    auto* fact = app.add_subcommand("factorize-check", "Measure diagram (a)/(b) errors of a sample factorization");
    fact->add_option("--domain", fact_args.domain, "lo,hi per axis")->delimiter(',');
    fact->add_option("--gamma", fact_args.gamma, "cover radius")->required();
    fact->add_option("--interp", fact_args.interp, "nearest | multilinear");
    fact->add_option("--lambda", fact_args.lambda, "Lipschitz bound of test functions");
    fact->add_option("--amplitude", fact_args.amplitude, "sup bound of test functions");
    fact->add_option("--trials", fact_args.trials, "random vectors for diagram (b)");
    fact->add_option("--functions", fact_args.functions, "random functions for diagram (a)");
    fact->add_option("--resolution", fact_args.resolution, "minimum reconstruction nodes per axis");
    fact->add_option("--seed", fact_args.seed, "random seed");

    std::string train_config, train_out = ".";
    auto* train_cmd = app.add_subcommand("train", "Run an experiment; write report and networks");
    train_cmd->add_option("--config", train_config, "experiment config JSON")->required();
    train_cmd->add_option("--out", train_out, "output directory");

    std::string eval_net, eval_input, eval_out;
    auto* eval = app.add_subcommand("evaluate", "Apply a stored operator network to a function file");
    eval->add_option("--net", eval_net, "operator network JSON")->required();
    eval->add_option("--input", eval_input, "function JSON")->required();
    eval->add_option("--out", eval_out, "CSV destination (default stdout)");

    std::string report_in, report_out;
    auto* report = app.add_subcommand("report", "Render a stored report as CSV");
    report->add_option("--in", report_in, "report JSON")->required();
    report->add_option("--out", report_out, "CSV destination (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return exit_config_error;
    }

    try {
        if (*cover) return run_cover(cover_domain, cover_gamma, out);
        if (*bound) return run_bound(bound_args, out);
        if (*fact) return run_factorize_check(fact_args, out);
        if (*train_cmd) return run_train(train_config, train_out, out);
        if (*eval) return run_evaluate(eval_net, eval_input, eval_out, out);
        if (*report) return run_report(report_in, report_out, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    }
    return exit_config_error;
}

}  // namespace opfact
