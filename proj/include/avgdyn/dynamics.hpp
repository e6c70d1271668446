#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avgdyn/graph.hpp"
#include "avgdyn/rng.hpp"
#include "avgdyn/spectral.hpp"

namespace avgdyn {

enum class ModelKind { node, edge };

struct ModelParams {
    ModelKind kind = ModelKind::node;
    double alpha = 0.5;  // in (0,1)
    int k = 1;           // node kind only; edge kind is fixed k = 1
    bool lazy = false;   // node kind only: with probability 1/2 a step is a no-op

    // Throws std::invalid_argument on violations (alpha range, k vs d_min,
    // n = 2 only with k = 1, lazy/k restrictions for the edge kind).
    void validate(const Graph& g) const;
};

struct StateVector {
    std::vector<double> values;
    long long step = 0;
};

struct SelectionEvent {
    int updater = -1;
    std::vector<int> sources;  // k distinct neighbours (node) or one neighbour (edge)
    bool noop = false;         // lazy no-op marker; sources empty
};

// Samples the next event without touching the state.
void select_event(const Graph& g, const ModelParams& p, Rng& rng, SelectionEvent& ev);

// Applies an event in place: xi_u <- alpha xi_u + (1-alpha)/k * sum(sources).
// Summation runs in stored source order so replays are bit-identical.
// Returns the updater's old value (unchanged for no-ops).
double apply_event(StateVector& state, const ModelParams& p, const SelectionEvent& ev);

SelectionEvent step(StateVector& state, const Graph& g, const ModelParams& p, Rng& rng);

// phi = <xi,xi>_pi - <1,xi>_pi^2.
double potential(const StateVector& state, const Graph& g);
// phi via the pairwise form (1/2) sum_{u,v} pi_u pi_v (xi_u - xi_v)^2; the
// two routes agree to 1e-12 and tests hold them against each other.
double potential_pairwise(const StateVector& state, const Graph& g);

struct Means {
    double avg = 0.0;       // (1/n) sum xi_u
    double weighted = 0.0;  // sum (d_u/2m) xi_u; equals avg on regular graphs
};
Means weighted_mean(const StateVector& state, const Graph& g);

// Shifts all values so that the degree-weighted mean becomes 0.
void center_weighted_mean(StateVector& state, const Graph& g);

struct TraceRow {
    long long step = 0;
    int updater = -1;
    double phi = 0.0;
    double weighted_mean = 0.0;
    double avg = 0.0;
};

struct RunOptions {
    double epsilon = 1e-8;
    long long max_steps = 0;
    long long trace_stride = 0;        // 0 = no trace
    bool check_monotone_spread = false;  // assert max-min never increases
};

struct RunResult {
    bool converged = false;
    long long t_eps = 0;  // first t with phi <= epsilon (equals steps taken)
    double final_phi = 0.0;
    double final_weighted_mean = 0.0;
    double final_avg = 0.0;
    StateVector final_state;
    std::vector<TraceRow> trace;
};

// phi is tracked incrementally (O(1) per step) with a full recomputation
// every 10^6 steps; tracked-vs-recomputed drift beyond 1e-8 throws.
RunResult run_to_convergence(const StateVector& init, const Graph& g, const ModelParams& p,
                             const RunOptions& opt, Rng& rng);

// 100 * ceil(n log(n ||xi0||_2 / eps) / (1 - lambda2(P))) for the node kind,
// 100 * ceil(m log(n ||xi0||_2 / eps) / lambda2(L)) for the edge kind.
long long default_max_steps(const Graph& g, const ModelParams& p, const SpectralSummary& spec,
                            const StateVector& init, double epsilon);

struct OneStepExpectation {
    double e_weighted_mean = 0.0;  // E[M(t+1) | xi(t)]
    double e_avg = 0.0;            // E[Avg(t+1) | xi(t)]
    double e_sum_squares = 0.0;    // E[sum_u xi_u(t+1)^2 | xi(t)]
    double e_potential = 0.0;      // E[phi(xi(t+1)) | xi(t)]
    long long events = 0;          // enumerated event count (lazy branch adds one)
};

inline constexpr long long kEnumerationCap = 10'000'000;

// Exact expectation over every event of one step, matching the semantics of
// select_event/apply_event (for lazy params the no-op branch carries mass 1/2).
// Throws std::invalid_argument when the event count exceeds kEnumerationCap.
OneStepExpectation exact_one_step_expectation(const StateVector& state, const Graph& g,
                                              const ModelParams& p);

// Exact E[phi'] for the lazy-walk relaxation of the node model: the updater u
// is uniform and each of its k draws is an independent sample of the lazy
// walk row at u (stay with prob 1/2, each neighbour with prob 1/(2 d_u)).
// This is the one-step operator behind the potential-drop bound; see
// potential_drop_factor.
double exact_potential_after_lazy_walk_step(const StateVector& state, const Graph& g,
                                            double alpha, int k);

// 1 - (1-a)(1-l2)[2a + (1-a)(1+l2)(1-1/k)] / n with l2 = lambda2(P).
double potential_drop_factor(double alpha, int k, double lambda2_P, int n);

// scale * f2(P) or scale * f2(L).
enum class EigvecKind { P, L };
StateVector eigenvector_initial_state(const Graph& g, const SpectralSummary& spec,
                                      EigvecKind which, double scale);

}  // namespace avgdyn
