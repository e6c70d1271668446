#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/spectral.hpp"

namespace avgdyn {

// Exit-code discipline shared by the tool and the harnesses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoConvergence = 3;
inline constexpr int kExitCheckFailed = 4;

// One flat, fully serializable run description. A run re-executed from the
// JSON emitted into its manifest reproduces identical numeric output.
struct RunConfig {
    std::string subcommand;  // simulate | verify | experiment

    std::string graph;       // generator spec ("cycle(8)", ...) or edge-list path
    std::string model = "node";
    double alpha = 0.5;
    int k = 1;
    bool lazy = false;
    std::string init = "plusminus";
    bool center = false;     // shift xi(0) so that M(0) = 0 before running
    double epsilon = 1e-8;   // experiment variance: 0 means predicted/1e4
    long long max_steps = 0; // 0 = theorem-based default
    long long trace_stride = 1;

    std::string suite;       // verify: duality|qchain|martingale|potential-drop|edge-identity
    int logs = 100;          // verify duality: number of random logs
    int states = 100;        // verify martingale/potential-drop/edge-identity: random states
    int log_length = 200;    // verify duality: events per log

    std::string experiment;  // experiment: variance | scaling
    std::string family = "cycle";
    std::vector<int> sizes;
    long long trials = 100000;
    int seeds = 50;

    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string out_prefix = "run";
    std::string format = "csv";  // csv | json (trace/table payload)
    bool gnuplot = false;        // also emit a gnuplot script for tables
};

nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

struct RunOutputs {
    nlohmann::json results;  // machine-readable result payload
    // (file suffix, content) pairs; the tool writes them next to the manifest.
    std::vector<std::pair<std::string, std::string>> files;
    int exit_code = kExitOk;
};

// Dispatches on cfg.subcommand. Validation problems throw
// std::invalid_argument / GraphError; the caller maps those to exit code 2.
RunOutputs execute(const RunConfig& cfg);

// Full manifest = config + results + tool metadata.
nlohmann::json make_manifest(const RunConfig& cfg, const RunOutputs& out);

ModelParams model_params_from_config(const RunConfig& cfg);
Graph make_graph_from_spec(const std::string& spec);
// Needs spectral only for eigenvector(...) inits; pass nullptr otherwise.
StateVector make_initial_state(const std::string& spec, const Graph& g,
                               const SpectralSummary* spec_summary);

// Shortest round-trippable decimal representation ("%.17g").
std::string format_double(double value);

// {n, m, regular, d | degree_histogram, lambda2_P, lambda2_L}
nlohmann::json graph_summary_json(const Graph& g);

}  // namespace avgdyn
