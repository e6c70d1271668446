#include "avgdyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace avgdyn {

VariancePrediction variance_analytic(const Graph& g, const std::vector<double>& xi0, int k,
                                     double alpha) {
    if (!g.is_regular())
        throw GraphError(GraphErrorKind::infeasible,
                         "the variance closed form is stated for regular graphs");
    if (static_cast<int>(xi0.size()) != g.n())
        throw std::invalid_argument("state length does not match graph size");

    double norm_inf = 0.0, norm2 = 0.0, weighted = 0.0;
    const auto& pi = g.stationary_pi();
    for (std::size_t u = 0; u < xi0.size(); ++u) {
        norm_inf = std::max(norm_inf, std::abs(xi0[u]));
        norm2 += xi0[u] * xi0[u];
        weighted += pi[u] * xi0[u];
    }
    if (std::abs(weighted) > 1e-12 * std::max(1.0, norm_inf))
        throw std::invalid_argument("initial state must be centred: M(0) = " +
                                    std::to_string(weighted));

    VariancePrediction pred;
    pred.triple = stationary_closed_form(g.n(), g.min_degree(), k, alpha);
    const auto& t = pred.triple;

    double edge_sum = 0.0;  // sum over directed edges of xi_u xi_v
    for (const auto& [u, v] : g.directed_edges())
        edge_sum += xi0[static_cast<std::size_t>(u)] * xi0[static_cast<std::size_t>(v)];

    pred.exact_form = (t.mu0 - t.mu_plus) * norm2 + (t.mu1 - t.mu_plus) * edge_sum;
    pred.upper_bound = 2.0 * k * (t.d - 1) * (1.0 - alpha) * t.ell * norm2;
    pred.lower_bound = 2.0 * (1.0 - alpha) * (t.d - k) * t.ell * norm2;
    pred.slack = std::pow(static_cast<double>(g.n()), -5.0);
    return pred;
}

MonteCarloEstimate variance_monte_carlo(const Graph& g, const std::vector<double>& xi0,
                                        const ModelParams& params, long long trials,
                                        double epsilon, std::uint64_t master_seed, int workers) {
    if (trials < 2) throw std::invalid_argument("need trials >= 2");
    params.validate(g);
    const SpectralSummary spec = spectral(g);
    const StateVector init{xi0, 0};
    const long long max_steps = default_max_steps(g, params, spec, init, epsilon);

    MonteCarloEstimate est;
    est.trials = trials;
    est.master_seed = master_seed;
    est.values.assign(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> failed(static_cast<std::size_t>(trials), 0);

    const auto run_range = [&](long long lo, long long hi) {
        RunOptions opt;
        opt.epsilon = epsilon;
        opt.max_steps = max_steps;
        for (long long i = lo; i < hi; ++i) {
            Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(i));
            const RunResult r = run_to_convergence(init, g, params, opt, rng);
            est.values[static_cast<std::size_t>(i)] = r.final_weighted_mean;
            if (!r.converged) failed[static_cast<std::size_t>(i)] = 1;
        }
    };

    const int nworkers = std::max(1, workers);
    if (nworkers == 1 || trials < 2 * nworkers) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        const long long chunk = (trials + nworkers - 1) / nworkers;
        for (int w = 0; w < nworkers; ++w) {
            const long long lo = w * chunk;
            const long long hi = std::min(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (char f : failed) est.unconverged += f;

    // Trial-order reduction keeps the estimate independent of the worker count.
    double mean = 0.0;
    for (double v : est.values) mean += v;
    mean /= static_cast<double>(trials);
    double m2 = 0.0, m4 = 0.0;
    for (double v : est.values) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double nt = static_cast<double>(trials);
    est.mean_F = mean;
    est.var_F = m2 / (nt - 1.0);
    m4 /= nt;
    // Var(s^2) = (m4 - s^4 (n-3)/(n-1)) / n, with the sample fourth central moment.
    const double var_of_var = std::max(0.0, (m4 - est.var_F * est.var_F * (nt - 3.0) / (nt - 1.0)) / nt);
    est.se_var = std::sqrt(var_of_var);
    est.se_mean = std::sqrt(std::max(0.0, est.var_F / nt));
    return est;
}

double bootstrap_se_of_variance(const std::vector<double>& values, int resamples,
                                std::uint64_t seed) {
    if (values.size() < 2 || resamples < 2) throw std::invalid_argument("bootstrap needs data");
    Rng rng = Rng::for_stream(seed, 0);
    const std::size_t n = values.size();
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < resamples; ++r) {
        double mean = 0.0;
        std::vector<double> sample(n);
        for (std::size_t i = 0; i < n; ++i) {
            sample[i] = values[rng.below(n)];
            mean += sample[i];
        }
        mean /= static_cast<double>(n);
        double m2 = 0.0;
        for (double v : sample) m2 += (v - mean) * (v - mean);
        const double var = m2 / static_cast<double>(n - 1);
        sum += var;
        sumsq += var * var;
    }
    const double mean_var = sum / resamples;
    return std::sqrt(std::max(0.0, sumsq / resamples - mean_var * mean_var));
}

TimeBounds variance_time_bounds(const Graph& g, long long t, double discrepancy) {
    if (t < 0 || discrepancy < 0) throw std::invalid_argument("need t >= 0 and K >= 0");
    TimeBounds b;
    const double per_step = static_cast<double>(g.max_degree()) /
                            static_cast<double>(2 * g.m()) * discrepancy;
    b.bound_weighted_mean = static_cast<double>(t) * per_step * per_step;
    b.bound_avg = static_cast<double>(t) / (static_cast<double>(g.n()) * g.n()) * discrepancy *
                  discrepancy;
    return b;
}

EnsembleVariance ensemble_variance_at(const Graph& g, const std::vector<double>& xi0,
                                      const ModelParams& params, long long t, long long trials,
                                      std::uint64_t master_seed) {
    params.validate(g);
    if (trials < 2) throw std::invalid_argument("need trials >= 2");
    EnsembleVariance out;
    out.trials = trials;
    double sw = 0.0, sw2 = 0.0, sa = 0.0, sa2 = 0.0;
    SelectionEvent ev;
    for (long long trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(trial));
        StateVector state{xi0, 0};
        for (long long s = 0; s < t; ++s) {
            select_event(g, params, rng, ev);
            apply_event(state, params, ev);
        }
        const Means m = weighted_mean(state, g);
        sw += m.weighted;
        sw2 += m.weighted * m.weighted;
        sa += m.avg;
        sa2 += m.avg * m.avg;
    }
    const double nt = static_cast<double>(trials);
    out.var_weighted_mean = std::max(0.0, (sw2 - sw * sw / nt) / (nt - 1.0));
    out.var_avg = std::max(0.0, (sa2 - sa * sa / nt) / (nt - 1.0));
    return out;
}

Graph make_family_graph(GraphFamily family, int size) {
    switch (family) {
        case GraphFamily::cycle: return make_cycle(size);
        case GraphFamily::complete: return make_complete(size);
        case GraphFamily::hypercube: return make_hypercube(size);
    }
    throw std::logic_error("unknown family");
}

std::string family_name(GraphFamily family) {
    switch (family) {
        case GraphFamily::cycle: return "cycle";
        case GraphFamily::complete: return "complete";
        case GraphFamily::hypercube: return "hypercube";
    }
    return "?";
}

std::vector<ScalingRow> convergence_scaling_experiment(GraphFamily family,
                                                       const std::vector<int>& sizes,
                                                       const ModelParams& params, double epsilon,
                                                       int seeds, std::uint64_t master_seed,
                                                       int workers) {
    if (seeds < 1) throw std::invalid_argument("need at least one seed");
    std::vector<ScalingRow> rows;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const Graph g = make_family_graph(family, sizes[si]);
        params.validate(g);
        const SpectralSummary spec = spectral(g);
        const StateVector init = eigenvector_initial_state(
            g, spec, params.kind == ModelKind::node ? EigvecKind::P : EigvecKind::L,
            static_cast<double>(g.n()));

        double norm2 = 0.0;
        for (double v : init.values) norm2 += v * v;
        const double norm = std::sqrt(norm2);
        const double log_term = std::log(g.n() * norm / epsilon);

        ScalingRow row;
        row.n = g.n();
        if (params.kind == ModelKind::node) {
            row.lambda2 = spec.lambda2_P;
            row.bound = g.n() * log_term / (1.0 - spec.lambda2_P);
        } else {
            row.lambda2 = spec.lambda2_L;
            row.bound = static_cast<double>(g.m()) * log_term / spec.lambda2_L;
        }

        const double phi0 = potential(init, g);
        std::vector<double> times(static_cast<std::size_t>(seeds), 0.0);
        if (phi0 > epsilon) {
            const long long max_steps = default_max_steps(g, params, spec, init, epsilon);
            const auto run_range = [&](int lo, int hi) {
                RunOptions opt;
                opt.epsilon = epsilon;
                opt.max_steps = max_steps;
                for (int s = lo; s < hi; ++s) {
                    Rng rng = Rng::for_stream(master_seed,
                                              (static_cast<std::uint64_t>(si) << 32) |
                                                  static_cast<std::uint64_t>(s));
                    const RunResult r = run_to_convergence(init, g, params, opt, rng);
                    if (!r.converged) throw std::runtime_error("scaling run exhausted max_steps");
                    times[static_cast<std::size_t>(s)] = static_cast<double>(r.t_eps);
                }
            };
            const int nworkers = std::max(1, workers);
            if (nworkers == 1 || seeds < 2 * nworkers) {
                run_range(0, seeds);
            } else {
                std::vector<std::thread> pool;
                const int chunk = (seeds + nworkers - 1) / nworkers;
                for (int w = 0; w < nworkers; ++w) {
                    const int lo = w * chunk, hi = std::min(seeds, lo + chunk);
                    if (lo >= hi) break;
                    pool.emplace_back(run_range, lo, hi);
                }
                for (auto& th : pool) th.join();
            }
        }
        std::sort(times.begin(), times.end());
        row.median_T = (seeds % 2 == 1)
                           ? times[static_cast<std::size_t>(seeds / 2)]
                           : 0.5 * (times[static_cast<std::size_t>(seeds / 2 - 1)] +
                                    times[static_cast<std::size_t>(seeds / 2)]);
        row.ratio = row.median_T / row.bound;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace avgdyn
