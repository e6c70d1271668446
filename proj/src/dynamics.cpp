#include "avgdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avgdyn {

namespace {

double subset_count(int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

// Incremental phi bookkeeping: phi = s2 - s1^2 with s1 = <1,xi>_pi and
// s2 = <xi,xi>_pi; a single-entry update touches both in O(1).
struct PhiTracker {
    double s1 = 0.0;
    double s2 = 0.0;
    long long steps_since_resync = 0;

    void reset(const StateVector& state, const std::vector<double>& pi) {
        s1 = 0.0;
        s2 = 0.0;
        for (std::size_t u = 0; u < state.values.size(); ++u) {
            s1 += pi[u] * state.values[u];
            s2 += pi[u] * state.values[u] * state.values[u];
        }
        steps_since_resync = 0;
    }

    void update(int u, double old_value, double new_value, const std::vector<double>& pi) {
        const double w = pi[static_cast<std::size_t>(u)];
        s1 += w * (new_value - old_value);
        s2 += w * (new_value * new_value - old_value * old_value);
        ++steps_since_resync;
    }

    double phi() const { return s2 - s1 * s1; }
};

constexpr long long kResyncInterval = 1'000'000;
constexpr double kDriftTolerance = 1e-8;

}  // namespace

void ModelParams::validate(const Graph& g) const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
    if (kind == ModelKind::edge) {
        if (k != 1) throw std::invalid_argument("edge model has fixed k = 1");
        if (lazy) throw std::invalid_argument("laziness is a node-model option");
        return;
    }
    if (k < 1 || k > g.min_degree())
        throw std::invalid_argument("node model requires 1 <= k <= min degree (" +
                                    std::to_string(g.min_degree()) + "), got k = " +
                                    std::to_string(k));
    if (g.n() == 2 && k != 1)
        throw std::invalid_argument("n = 2 admits only k = 1");
}

void select_event(const Graph& g, const ModelParams& p, Rng& rng, SelectionEvent& ev) {
    ev.noop = false;
    if (p.kind == ModelKind::edge) {
        const auto& de = g.directed_edges();
        const auto& [u, v] = de[rng.below(de.size())];
        ev.updater = u;
        ev.sources.assign(1, v);
        return;
    }
    if (p.lazy && rng.bernoulli(0.5)) {
        ev.updater = -1;
        ev.sources.clear();
        ev.noop = true;
        return;
    }
    ev.updater = rng.index(g.n());
    rng.sample_without_replacement(g.neighbours(ev.updater), p.k, ev.sources);
}

double apply_event(StateVector& state, const ModelParams& p, const SelectionEvent& ev) {
    ++state.step;
    if (ev.noop) return 0.0;
    double sum = 0.0;
    for (int v : ev.sources) sum += state.values[static_cast<std::size_t>(v)];
    const double old_value = state.values[static_cast<std::size_t>(ev.updater)];
    state.values[static_cast<std::size_t>(ev.updater)] =
        p.alpha * old_value + (1.0 - p.alpha) / static_cast<double>(ev.sources.size()) * sum;
    return old_value;
}

SelectionEvent step(StateVector& state, const Graph& g, const ModelParams& p, Rng& rng) {
    SelectionEvent ev;
    select_event(g, p, rng, ev);
    apply_event(state, p, ev);
    return ev;
}

double potential(const StateVector& state, const Graph& g) {
    const auto& pi = g.stationary_pi();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t u = 0; u < state.values.size(); ++u) {
        s1 += pi[u] * state.values[u];
        s2 += pi[u] * state.values[u] * state.values[u];
    }
    return s2 - s1 * s1;
}

double potential_pairwise(const StateVector& state, const Graph& g) {
    const auto& pi = g.stationary_pi();
    const int n = g.n();
    double acc = 0.0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            const double diff = state.values[static_cast<std::size_t>(u)] -
                                state.values[static_cast<std::size_t>(v)];
            acc += pi[static_cast<std::size_t>(u)] * pi[static_cast<std::size_t>(v)] * diff * diff;
        }
    return 0.5 * acc;
}

Means weighted_mean(const StateVector& state, const Graph& g) {
    const auto& pi = g.stationary_pi();
    Means out;
    for (std::size_t u = 0; u < state.values.size(); ++u) {
        out.avg += state.values[u];
        out.weighted += pi[u] * state.values[u];
    }
    out.avg /= static_cast<double>(g.n());
    return out;
}

void center_weighted_mean(StateVector& state, const Graph& g) {
    const double m0 = weighted_mean(state, g).weighted;
    for (auto& v : state.values) v -= m0;
}

RunResult run_to_convergence(const StateVector& init, const Graph& g, const ModelParams& p,
                             const RunOptions& opt, Rng& rng) {
    p.validate(g);
    if (init.values.size() != static_cast<std::size_t>(g.n()))
        throw std::invalid_argument("state length does not match graph size");
    if (!(opt.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    RunResult res;
    res.final_state = init;
    res.final_state.step = 0;
    const auto& pi = g.stationary_pi();

    PhiTracker phi;
    phi.reset(res.final_state, pi);

    double spread_hi = 0.0, spread_lo = 0.0;
    if (opt.check_monotone_spread) {
        spread_hi = *std::max_element(init.values.begin(), init.values.end());
        spread_lo = *std::min_element(init.values.begin(), init.values.end());
    }

    const auto trace_row = [&](long long t, int updater) {
        const Means m = weighted_mean(res.final_state, g);
        res.trace.push_back({t, updater, phi.phi(), m.weighted, m.avg});
    };

    if (opt.trace_stride > 0) trace_row(0, -1);

    SelectionEvent ev;
    long long t = 0;
    while (phi.phi() > opt.epsilon) {
        if (t >= opt.max_steps) {
            res.converged = false;
            res.t_eps = t;
            const Means m = weighted_mean(res.final_state, g);
            res.final_phi = phi.phi();
            res.final_weighted_mean = m.weighted;
            res.final_avg = m.avg;
            return res;
        }
        select_event(g, p, rng, ev);
        const double old_value = apply_event(res.final_state, p, ev);
        ++t;
        if (!ev.noop) {
            phi.update(ev.updater, old_value,
                       res.final_state.values[static_cast<std::size_t>(ev.updater)], pi);
            if (opt.check_monotone_spread) {
                const double nv = res.final_state.values[static_cast<std::size_t>(ev.updater)];
                const double slack = 1e-12 * std::max(1.0, spread_hi - spread_lo);
                if (nv > spread_hi + slack || nv < spread_lo - slack)
                    throw std::logic_error("max-min spread increased along trajectory");
            }
        }
        if (phi.steps_since_resync >= kResyncInterval) {
            const double tracked = phi.phi();
            phi.reset(res.final_state, pi);
            if (std::abs(tracked - phi.phi()) > kDriftTolerance * std::max(1.0, std::abs(phi.s2)))
                throw std::logic_error("incremental potential drifted beyond 1e-8");
        }
        if (opt.trace_stride > 0 && t % opt.trace_stride == 0) trace_row(t, ev.updater);
    }

    res.converged = true;
    res.t_eps = t;
    if (opt.trace_stride > 0 && (res.trace.empty() || res.trace.back().step != t))
        trace_row(t, -1);
    const Means m = weighted_mean(res.final_state, g);
    res.final_phi = phi.phi();
    res.final_weighted_mean = m.weighted;
    res.final_avg = m.avg;
    return res;
}

long long default_max_steps(const Graph& g, const ModelParams& p, const SpectralSummary& spec,
                            const StateVector& init, double epsilon) {
    double norm2 = 0.0;
    for (double v : init.values) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    const double log_term = std::max(1.0, std::log(g.n() * std::max(norm, 1e-300) / epsilon));
    double scale;
    if (p.kind == ModelKind::node)
        scale = static_cast<double>(g.n()) / std::max(1e-15, 1.0 - spec.lambda2_P);
    else
        scale = static_cast<double>(g.m()) / std::max(1e-15, spec.lambda2_L);
    return 100LL * static_cast<long long>(std::ceil(scale * log_term));
}

OneStepExpectation exact_one_step_expectation(const StateVector& state, const Graph& g,
                                              const ModelParams& p) {
    p.validate(g);
    const int n = g.n();
    const auto& pi = g.stationary_pi();

    double sum_all = 0.0, sumsq_all = 0.0, s1 = 0.0, s2 = 0.0;
    for (int u = 0; u < n; ++u) {
        const double x = state.values[static_cast<std::size_t>(u)];
        sum_all += x;
        sumsq_all += x * x;
        s1 += pi[static_cast<std::size_t>(u)] * x;
        s2 += pi[static_cast<std::size_t>(u)] * x * x;
    }

    OneStepExpectation acc;
    // One enumerated outcome: node u takes value y with probability weight.
    const auto add_outcome = [&](double weight, int u, double y) {
        const double x = state.values[static_cast<std::size_t>(u)];
        const double w = pi[static_cast<std::size_t>(u)];
        const double ns1 = s1 + w * (y - x);
        const double ns2 = s2 + w * (y * y - x * x);
        acc.e_weighted_mean += weight * ns1;
        acc.e_avg += weight * (sum_all + (y - x)) / n;
        acc.e_sum_squares += weight * (sumsq_all + (y * y - x * x));
        acc.e_potential += weight * (ns2 - ns1 * ns1);
        ++acc.events;
    };

    if (p.kind == ModelKind::edge) {
        const auto& de = g.directed_edges();
        const double w = 1.0 / static_cast<double>(de.size());
        for (const auto& [u, v] : de)
            add_outcome(w, u,
                        p.alpha * state.values[static_cast<std::size_t>(u)] +
                            (1.0 - p.alpha) * state.values[static_cast<std::size_t>(v)]);
        return acc;
    }

    long long total_events = 0;
    for (int u = 0; u < n; ++u) {
        const double c = subset_count(g.degree(u), p.k);
        if (c > static_cast<double>(kEnumerationCap)) total_events = kEnumerationCap + 1;
        else total_events += static_cast<long long>(c);
        if (total_events > kEnumerationCap)
            throw std::invalid_argument("one-step enumeration exceeds the 10^7 event cap");
    }

    const double branch = p.lazy ? 0.5 : 1.0;
    for (int u = 0; u < n; ++u) {
        const auto& nb = g.neighbours(u);
        const int d = static_cast<int>(nb.size());
        const double weight = branch / (n * subset_count(d, p.k));
        // Iterate k-subsets of the neighbour list with an index odometer.
        std::vector<int> idx(static_cast<std::size_t>(p.k));
        for (int i = 0; i < p.k; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (;;) {
            double sum = 0.0;
            for (int i : idx) sum += state.values[static_cast<std::size_t>(nb[static_cast<std::size_t>(i)])];
            add_outcome(weight, u,
                        p.alpha * state.values[static_cast<std::size_t>(u)] +
                            (1.0 - p.alpha) / p.k * sum);
            int pos = p.k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == d - p.k + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < p.k; ++i)
                idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
        }
    }
    if (p.lazy) {
        // No-op branch: state unchanged with probability 1/2.
        acc.e_weighted_mean += 0.5 * s1;
        acc.e_avg += 0.5 * sum_all / n;
        acc.e_sum_squares += 0.5 * sumsq_all;
        acc.e_potential += 0.5 * (s2 - s1 * s1);
        ++acc.events;
    }
    return acc;
}

double exact_potential_after_lazy_walk_step(const StateVector& state, const Graph& g,
                                            double alpha, int k) {
    const int n = g.n();
    const auto& pi = g.stationary_pi();
    double s1 = 0.0, s2 = 0.0;
    for (int u = 0; u < n; ++u) {
        s1 += pi[static_cast<std::size_t>(u)] * state.values[static_cast<std::size_t>(u)];
        s2 += pi[static_cast<std::size_t>(u)] * state.values[static_cast<std::size_t>(u)] *
              state.values[static_cast<std::size_t>(u)];
    }

    long long total = 0;
    for (int u = 0; u < n; ++u) {
        double t = std::pow(static_cast<double>(g.degree(u) + 1), k);
        if (t > static_cast<double>(kEnumerationCap) ||
            (total += static_cast<long long>(t)) > kEnumerationCap)
            throw std::invalid_argument("lazy-walk enumeration exceeds the 10^7 event cap");
    }

    double e_phi = 0.0;
    for (int u = 0; u < n; ++u) {
        const auto& nb = g.neighbours(u);
        const int d = static_cast<int>(nb.size());
        const double p_self = 0.5;
        const double p_nb = 0.5 / d;
        // Draw i of k picks option 0 (stay at u) or neighbour j (option j+1),
        // independently with replacement.
        std::vector<int> pick(static_cast<std::size_t>(k), 0);
        for (;;) {
            double prob = 1.0 / n;
            double sum = 0.0;
            for (int i : pick) {
                prob *= (i == 0) ? p_self : p_nb;
                sum += (i == 0) ? state.values[static_cast<std::size_t>(u)]
                                : state.values[static_cast<std::size_t>(nb[static_cast<std::size_t>(i - 1)])];
            }
            const double x = state.values[static_cast<std::size_t>(u)];
            const double y = alpha * x + (1.0 - alpha) / k * sum;
            const double w = pi[static_cast<std::size_t>(u)];
            const double ns1 = s1 + w * (y - x);
            const double ns2 = s2 + w * (y * y - x * x);
            e_phi += prob * (ns2 - ns1 * ns1);
            int pos = k - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == d) --pos;
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < k; ++i) pick[static_cast<std::size_t>(i)] = 0;
        }
    }
    return e_phi;
}

double potential_drop_factor(double alpha, int k, double lambda2_P, int n) {
    const double a = alpha, l2 = lambda2_P;
    return 1.0 - (1.0 - a) * (1.0 - l2) *
                     (2.0 * a + (1.0 - a) * (1.0 + l2) * (1.0 - 1.0 / k)) / n;
}

StateVector eigenvector_initial_state(const Graph& g, const SpectralSummary& spec,
                                      EigvecKind which, double scale) {
    StateVector out;
    const auto& f2 = (which == EigvecKind::P) ? spec.f2_P : spec.f2_L;
    out.values.resize(static_cast<std::size_t>(g.n()));
    for (std::size_t u = 0; u < out.values.size(); ++u) out.values[u] = scale * f2[u];
    return out;
}

}  // namespace avgdyn
