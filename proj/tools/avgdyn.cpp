// avgdyn: simulation and verification of asynchronous averaging dynamics.
//
// Subcommands:
//   simulate    run one trajectory to epsilon-convergence, emit trace + result
//   verify      run an exact verification suite (duality, qchain, martingale,
//               potential-drop, edge-identity)
//   experiment  variance reproduction or convergence-time scaling
//   graph-info  print the graph summary JSON
//   rerun       re-execute a run from its manifest (reproducibility contract)

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "avgdyn/config.hpp"

namespace {

using avgdyn::RunConfig;
using nlohmann::json;

int default_workers() {
    if (const char* env = std::getenv("AVGDYN_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

int run_and_emit(const RunConfig& cfg) {
    const avgdyn::RunOutputs out = avgdyn::execute(cfg);
    for (const auto& [suffix, content] : out.files)
        write_file(cfg.out_prefix + "." + suffix, content);
    const json manifest = avgdyn::make_manifest(cfg, out);
    write_file(cfg.out_prefix + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << out.results.dump(2) << std::endl;
    return out.exit_code;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--graph", cfg.graph,
                    "graph spec: cycle(n), complete(n), hypercube(d), torus(r,c), "
                    "random-regular(n,d,seed), path(n), petersen, or an edge-list file");
    cmd->add_option("--generate", cfg.graph, "alias of --graph for generator specs");
    cmd->add_option("--model", cfg.model, "node | edge")->check(CLI::IsMember({"node", "edge"}));
    cmd->add_option("--alpha", cfg.alpha, "weight kept by the updating node, in (0,1)");
    cmd->add_option("--k", cfg.k, "neighbours sampled per step (node model)");
    cmd->add_flag("--lazy", cfg.lazy, "node model: a step is a no-op with probability 1/2");
    cmd->add_option("--init", cfg.init,
                    "initial state: constant(c), plusminus, eigenvector(P|L,scale), "
                    "random-uniform(lo,hi,seed), file(path)");
    cmd->add_flag("--center", cfg.center, "shift the initial state so that M(0) = 0");
    cmd->add_option("--epsilon", cfg.epsilon, "potential threshold for convergence");
    cmd->add_option("--seed", cfg.master_seed, "64-bit master seed");
    cmd->add_option("--workers", cfg.workers, "worker threads (results are worker-independent)");
    cmd->add_option("--out", cfg.out_prefix, "output path prefix");
    cmd->add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asynchronous averaging processes: simulation, duality and variance checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = default_workers();

    auto* simulate = app.add_subcommand("simulate", "run one trajectory to convergence");
    add_common(simulate, cfg);
    simulate->add_option("--max-steps", cfg.max_steps, "step budget (0 = theorem default)");
    simulate->add_option("--trace-stride", cfg.trace_stride, "trace row stride (0 = no trace)");

    auto* verify = app.add_subcommand("verify", "run an exact verification suite");
    add_common(verify, cfg);
    verify->add_option("suite", cfg.suite,
                       "duality | qchain | martingale | potential-drop | edge-identity")
        ->required();
    verify->add_option("--logs", cfg.logs, "random event logs (duality)");
    verify->add_option("--log-length", cfg.log_length, "events per log (duality)");
    verify->add_option("--states", cfg.states, "random states (martingale/potential-drop/edge-identity)");

    auto* experiment = app.add_subcommand("experiment", "variance or scaling experiment");
    add_common(experiment, cfg);
    experiment->add_option("name", cfg.experiment, "variance | scaling")->required();
    experiment->add_option("--trials", cfg.trials, "Monte Carlo trials (variance)");
    experiment->add_option("--seeds", cfg.seeds, "seeds per size (scaling)");
    experiment->add_option("--family", cfg.family, "cycle | complete | hypercube (scaling)");
    experiment->add_option("--sizes", cfg.sizes, "graph sizes (scaling)")->delimiter(',');
    experiment->add_flag("--gnuplot", cfg.gnuplot, "emit a gnuplot script next to the CSV");

    std::string graph_spec;
    auto* info = app.add_subcommand("graph-info", "print the graph summary JSON");
    info->add_option("--graph", graph_spec, "graph spec or edge-list file")->required();

    std::string manifest_path;
    std::string rerun_out;
    auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
    rerun->add_option("manifest", manifest_path, "manifest JSON emitted by a previous run")
        ->required();
    rerun->add_option("--out", rerun_out, "override the output prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            cfg.subcommand = "simulate";
            return run_and_emit(cfg);
        }
        if (verify->parsed()) {
            cfg.subcommand = "verify";
            return run_and_emit(cfg);
        }
        if (experiment->parsed()) {
            cfg.subcommand = "experiment";
            return run_and_emit(cfg);
        }
        if (info->parsed()) {
            const avgdyn::Graph g = avgdyn::make_graph_from_spec(graph_spec);
            std::cout << avgdyn::graph_summary_json(g).dump(2) << std::endl;
            return avgdyn::kExitOk;
        }
        if (rerun->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
            json manifest;
            in >> manifest;
            RunConfig loaded = avgdyn::run_config_from_json(manifest.at("config"));
            if (!rerun_out.empty()) loaded.out_prefix = rerun_out;
            return run_and_emit(loaded);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << std::endl;
        return avgdyn::kExitValidation;
    } catch (const avgdyn::GraphError& e) {
        std::cerr << "graph error: " << e.what() << std::endl;
        return avgdyn::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 1;
}
