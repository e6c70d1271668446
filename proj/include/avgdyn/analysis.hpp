#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/qchain.hpp"

namespace avgdyn {

// Limiting variance of the convergence value on a regular graph, from the
// stationary triple of the two-walk chain:
//   exact_form = (mu0 - mu+) sum_u xi_u^2 + (mu1 - mu+) sum_{(u,v) directed edge} xi_u xi_v
// The bracketing constants come from the same triple; they coincide at k = 1:
//   upper = 2k(d-1)(1-alpha) ell ||xi||^2,  lower = 2(1-alpha)(d-k) ell ||xi||^2.
struct VariancePrediction {
    double exact_form = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double slack = 0.0;  // 1/n^5 additive mixing term
    StationaryTriple triple;
};

// Requires a regular graph and a centred initial state (|M(0)| <= 1e-12 ||xi0||_inf).
VariancePrediction variance_analytic(const Graph& g, const std::vector<double>& xi0, int k,
                                     double alpha);

struct MonteCarloEstimate {
    long long trials = 0;
    double mean_F = 0.0;
    double var_F = 0.0;        // unbiased sample variance
    double se_var = 0.0;       // moment-based standard error of var_F
    double se_mean = 0.0;
    std::uint64_t master_seed = 0;
    long long unconverged = 0;  // trials that exhausted max_steps (flagged, not fatal)
    std::vector<double> values;  // per-trial F = M(T_eps), in trial order
};

// `trials` independent runs to phi <= epsilon; F is taken as M(T_eps).
// Trial i uses the stream (master_seed, i), and the moment reduction runs in
// trial order, so results do not depend on the worker count.
MonteCarloEstimate variance_monte_carlo(const Graph& g, const std::vector<double>& xi0,
                                        const ModelParams& params, long long trials,
                                        double epsilon, std::uint64_t master_seed, int workers);

// Bootstrap cross-check of se_var (behind a flag in the harnesses).
double bootstrap_se_of_variance(const std::vector<double>& values, int resamples,
                                std::uint64_t seed);

struct TimeBounds {
    double bound_weighted_mean = 0.0;  // Var(M(t))   <= t (d_max/2m K)^2
    double bound_avg = 0.0;            // Var(Avg(t)) <= (t/n^2) K^2 (edge model)
};
TimeBounds variance_time_bounds(const Graph& g, long long t, double discrepancy);

// Sample variance of M(t) and Avg(t) over an ensemble of trajectories,
// used to hold the time-dependent bounds against simulation.
struct EnsembleVariance {
    double var_weighted_mean = 0.0;
    double var_avg = 0.0;
    long long trials = 0;
};
EnsembleVariance ensemble_variance_at(const Graph& g, const std::vector<double>& xi0,
                                      const ModelParams& params, long long t, long long trials,
                                      std::uint64_t master_seed);

enum class GraphFamily { cycle, complete, hypercube };

struct ScalingRow {
    int n = 0;
    double lambda2 = 0.0;     // lambda2(P) for node runs, lambda2(L) for edge runs
    double median_T = 0.0;
    double bound = 0.0;       // n log(n ||xi0|| / eps) / (1 - lambda2(P)), m log(...)/lambda2(L)
    double ratio = 0.0;       // median_T / bound
};

// Convergence-time scaling against the theorem expression, with the
// eigenvector initial state xi(0) = n f2 (the tightness witness).
std::vector<ScalingRow> convergence_scaling_experiment(GraphFamily family,
                                                       const std::vector<int>& sizes,
                                                       const ModelParams& params, double epsilon,
                                                       int seeds, std::uint64_t master_seed,
                                                       int workers);

Graph make_family_graph(GraphFamily family, int size);
std::string family_name(GraphFamily family);

}  // namespace avgdyn
