#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfact/config.hpp"
#include "opfact/factorize.hpp"
#include "opfact/netcore.hpp"

namespace opfact {

struct Radii {
    double psi = 0.0;
    double ell = 0.0;
    double gamma = 0.0;
    std::size_t m = 0;
};

// psi from the operator's declared modulus, ell = max(lambda, image Lipschitz bound),
// gamma = min(psi / ell, eps / 2) unless overridden, M = size of the lattice cover at gamma.
Radii resolve_radii(const ExperimentConfig& config);

struct GapEntry {
    double ratio = 0.0;
    double r = 0.0;
    double thm2_gap = 0.0;         // sup |thm2 net - Delta* N Delta| over held-out functions
    double thm1_gap = 0.0;
    double thm2_heldout_err = 0.0;  // sup |thm2 net - D| over held-out functions
};

struct WidthResult {
    std::size_t width = 0;
    std::uint64_t init_seed = 0;
    double final_loss = 0.0;
    double train_err = 0.0;
    double heldout_sup_err = 0.0;
    double thm3_gap = 0.0;
    std::size_t best_restart = 0;
    bool all_diverged = false;
    std::vector<RestartOutcome> restarts;
    std::vector<GapEntry> gaps;
};

struct Report {
    nlohmann::json config;
    std::string operator_description;
    Radii radii;
    std::optional<std::uint64_t> corollary5_as_stated;
    std::optional<std::uint64_t> corollary5_derived;
    std::size_t reference_resolution = 0;  // minimum nodes per axis handed to the factorization
    std::size_t grid_nodes = 0;
    double factorization_floor = 0.0;
    std::vector<WidthResult> widths;
    std::uint64_t seed = 0;
};

struct Timings {
    double total_seconds = 0.0;
    std::vector<double> width_seconds;
};

struct ExperimentOutput {
    Report report;
    Timings timings;
    std::vector<TwoLayerNet> nets;  // best net per width, in sweep order
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
nlohmann::json timings_to_json(const Timings& t);

// One row per (width, mollifier ratio); one row per width when no ratios were configured.
//   width,train_err,heldout_sup_err,floor,gap_r,r_ratio,thm1_gap_r,thm3_gap
std::string report_to_csv(const Report& report);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);

}  // namespace opfact
