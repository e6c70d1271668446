#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/graph.hpp"

namespace avgdyn {

// Ordered selection sequence of a forward averaging run. The dual diffusion
// consumes it back-to-front.
struct EventLog {
    ModelParams params;
    std::vector<SelectionEvent> events;
};

// Throws std::invalid_argument unless every event is valid for g (distinct
// sources drawn from the updater's neighbourhood, |sources| = k, or a no-op).
void validate_event_log(const EventLog& log, const Graph& g);

EventLog random_event_log(const Graph& g, const ModelParams& p, int length, Rng& rng);

// JSON lines, one event per line: {"t":0,"u":2,"sources":[0,3],"noop":false}.
// Integer payload only, so round trips are bit-exact.
std::string event_log_to_jsonl(const EventLog& log);
// params come from context; the text supplies the events.
EventLog event_log_from_jsonl(const std::string& text, const ModelParams& params);

// Backward (diffusion) matrix of one event: identity outside column u;
// B(u,u) = alpha, B(s,u) = (1-alpha)/k for s in sources. Column sums are 1.
// No-ops map to the identity.
Eigen::MatrixXd event_to_backward_matrix(const SelectionEvent& ev, const ModelParams& p, int n);

// Forward update matrix of the same event; equals the transpose of the
// backward matrix entry for entry.
Eigen::MatrixXd event_to_forward_matrix(const SelectionEvent& ev, const ModelParams& p, int n);

struct DiffusionState {
    Eigen::MatrixXd load;  // column u = load vector of commodity u
    long long step = 0;
};

struct DiffusionResult {
    std::vector<double> cost;  // W = xi0^T R(T)
    DiffusionState state;
};

// Applies the events of `log` in reverse order as left-multiplications by
// their backward matrices (O(n) row operations per event) and returns the
// cost row W together with R(T).
DiffusionResult diffuse_backward(const std::vector<double>& cost0, const EventLog& log,
                                 const Graph& g);

// Replays the log forward with apply_event arithmetic.
StateVector replay_forward(const std::vector<double>& xi0, const EventLog& log, const Graph& g);

// || W(T) - xi(T)^T ||_inf between the forward replay and the backward
// diffusion of the same log. Contract: <= 1e-12 * max(1, ||xi0||_inf).
double duality_check(const std::vector<double>& xi0, const EventLog& log, const Graph& g);

// Correlated walks driven by the reversed log: a walk sitting at the updater
// moves to sources[j] with probability (1-alpha)/k each and stays with
// probability alpha; all walks of a trial share the events, coins are per
// walk. Returns one empirical occupancy column per start node (frequencies
// over `trials`).
Eigen::MatrixXd correlated_walks(const EventLog& log, const Graph& g,
                                 const std::vector<int>& start_nodes, long long trials,
                                 std::uint64_t master_seed);

struct PairProductEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};

// Monte Carlo E[ xi0(walk_u(T)) * xi0(walk_v(T)) | log ] for two walks run on
// the shared log with independent coins; matches W^(u) * W^(v).
PairProductEstimate correlated_pair_product(const EventLog& log, const Graph& g,
                                            const std::vector<double>& xi0, int start_u,
                                            int start_v, long long trials,
                                            std::uint64_t master_seed);

}  // namespace avgdyn
