#include "avgdyn/qchain.hpp"

#include <cmath>
#include <stdexcept>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/rng.hpp"

namespace avgdyn {

StationaryTriple stationary_closed_form(int n, int d, int k, double alpha) {
    if (n < 2 || d < 1 || d >= n)
        throw std::invalid_argument("need 1 <= d < n for a d-regular graph");
    if (k < 1 || k > d) throw std::invalid_argument("need 1 <= k <= d");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    StationaryTriple t;
    t.n = n;
    t.d = d;
    t.k = k;
    t.alpha = alpha;
    t.gamma = k * (1.0 + alpha) - (1.0 - alpha);
    t.ell = 1.0 / (n * (n * (d * t.gamma - 2.0 * alpha * k) + 2.0 * (1.0 - alpha) * (d - k)));
    t.mu0 = 2.0 * k * (d - 1) * t.ell;
    t.mu1 = (d - 1) * t.gamma * t.ell;
    t.mu_plus = (d * t.gamma - 2.0 * alpha * k) * t.ell;
    return t;
}

QMatrix build_q_matrix(const Graph& g, int k, double alpha) {
    if (!g.is_regular())
        throw GraphError(GraphErrorKind::infeasible,
                         "the two-walk chain closed form is stated for regular graphs");
    if (g.n() > kQChainSizeCap)
        throw GraphError(GraphErrorKind::size_cap,
                         "Q matrix capped at n = " + std::to_string(kQChainSizeCap));
    const int n = g.n();
    const int d = g.min_degree();
    if (k < 1 || k > d) throw std::invalid_argument("need 1 <= k <= d");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");

    QMatrix qm;
    qm.n = n;
    qm.d = d;
    qm.k = k;
    qm.alpha = alpha;
    const int size = n * n;
    qm.q = Eigen::MatrixXd::Zero(size, size);
    const double pi = 1.0 / n;
    const double beta = 1.0 - alpha;

    for (int x = 0; x < n; ++x) {
        // Same node: both walks sit at x and can only move when x is selected.
        const int s = qm.index(x, x);
        qm.q(s, s) += alpha * alpha * pi + (1.0 - pi);
        for (int u : g.neighbours(x)) {
            qm.q(s, qm.index(x, u)) += alpha * beta * pi / d;
            qm.q(s, qm.index(u, x)) += alpha * beta * pi / d;
            qm.q(s, qm.index(u, u)) += beta * beta * pi / (k * d);
        }
        if (k >= 2) {
            const double both = beta * beta * pi * (k - 1) / (static_cast<double>(k) * d * (d - 1));
            for (int u : g.neighbours(x))
                for (int v : g.neighbours(x))
                    if (u != v) qm.q(s, qm.index(u, v)) += both;
        }
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            // Different nodes: at most one walk moves per step.
            const int s = qm.index(x, y);
            qm.q(s, s) += (1.0 - 2.0 * pi) + 2.0 * pi * alpha;
            for (int u : g.neighbours(x)) qm.q(s, qm.index(u, y)) += beta * pi / d;
            for (int v : g.neighbours(y)) qm.q(s, qm.index(x, v)) += beta * pi / d;
        }
    return qm;
}

Eigen::VectorXd solve_stationary_numeric(const QMatrix& qm) {
    const int size = qm.n * qm.n;
    Eigen::MatrixXd a = qm.q - Eigen::MatrixXd::Identity(size, size);
    a.col(size - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    rhs[size - 1] = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a.transpose());
    const Eigen::VectorXd mu = lu.solve(rhs);
    const double residual = (a.transpose() * mu - rhs).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-9)
        throw std::runtime_error("stationary solve is singular; Q construction is broken");
    return mu;
}

StationaryReport verify_stationary(const Graph& g, int k, double alpha) {
    const QMatrix qm = build_q_matrix(g, k, alpha);
    const DistanceClasses classes = distance_classes(g);
    StationaryReport rep;
    rep.triple = stationary_closed_form(qm.n, qm.d, k, alpha);

    const int size = qm.n * qm.n;
    Eigen::VectorXd mu_cf(size);
    const double by_class[3] = {rep.triple.mu0, rep.triple.mu1, rep.triple.mu_plus};
    for (int x = 0; x < qm.n; ++x)
        for (int y = 0; y < qm.n; ++y)
            mu_cf[qm.index(x, y)] = by_class[classes.cls(x, y)];

    rep.closed_form_residual = (mu_cf.transpose() * qm.q - mu_cf.transpose()).cwiseAbs().maxCoeff();
    rep.sum_error = std::abs(mu_cf.sum() - 1.0);

    const Eigen::VectorXd mu_num = solve_stationary_numeric(qm);
    rep.numeric_residual = (mu_num.transpose() * qm.q - mu_num.transpose()).cwiseAbs().maxCoeff();

    double lo[3], hi[3];
    for (int c = 0; c < 3; ++c) {
        lo[c] = 1.0;
        hi[c] = -1.0;
    }
    for (int x = 0; x < qm.n; ++x)
        for (int y = 0; y < qm.n; ++y) {
            const int c = classes.cls(x, y);
            const double v = mu_num[qm.index(x, y)];
            lo[c] = std::min(lo[c], v);
            hi[c] = std::max(hi[c], v);
            rep.class_agreement = std::max(rep.class_agreement, std::abs(v - mu_cf[qm.index(x, y)]));
        }
    for (int c = 0; c < 3; ++c)
        if (hi[c] >= lo[c]) rep.class_spread = std::max(rep.class_spread, hi[c] - lo[c]);
    return rep;
}

TwoWalkOccupancy two_walk_class_occupancy(const Graph& g, int k, double alpha, long long burn_in,
                                          long long samples, std::uint64_t seed, int batches) {
    if (!g.is_regular())
        throw GraphError(GraphErrorKind::infeasible, "two-walk occupancy requires a regular graph");
    if (samples < batches || batches < 2)
        throw std::invalid_argument("need samples >= batches >= 2");
    const DistanceClasses classes = distance_classes(g);
    ModelParams params{ModelKind::node, alpha, k, false};
    params.validate(g);

    Rng rng = Rng::for_stream(seed, 0);
    SelectionEvent ev;
    int a = 0, b = 0;
    const auto advance = [&]() {
        select_event(g, params, rng, ev);
        const int kk = static_cast<int>(ev.sources.size());
        if (a == ev.updater && rng.bernoulli(1.0 - alpha))
            a = ev.sources[static_cast<std::size_t>(rng.index(kk))];
        if (b == ev.updater && rng.bernoulli(1.0 - alpha))
            b = ev.sources[static_cast<std::size_t>(rng.index(kk))];
    };

    for (long long t = 0; t < burn_in; ++t) advance();

    const long long batch_len = samples / batches;
    const long long used = batch_len * batches;
    std::array<double, 3> total{};
    std::array<double, 3> batch_mean_sq{};
    std::array<double, 3> batch_sum{};
    for (int bi = 0; bi < batches; ++bi) {
        std::array<long long, 3> counts{};
        for (long long t = 0; t < batch_len; ++t) {
            advance();
            ++counts[static_cast<std::size_t>(classes.cls(a, b))];
        }
        for (int c = 0; c < 3; ++c) {
            const double f = static_cast<double>(counts[static_cast<std::size_t>(c)]) / batch_len;
            batch_sum[static_cast<std::size_t>(c)] += f;
            batch_mean_sq[static_cast<std::size_t>(c)] += f * f;
            total[static_cast<std::size_t>(c)] += static_cast<double>(counts[static_cast<std::size_t>(c)]);
        }
    }

    TwoWalkOccupancy out;
    out.burn_in = burn_in;
    out.samples = used;
    for (int c = 0; c < 3; ++c) {
        out.freq[static_cast<std::size_t>(c)] = total[static_cast<std::size_t>(c)] / used;
        const double mean = batch_sum[static_cast<std::size_t>(c)] / batches;
        const double var = std::max(
            0.0, (batch_mean_sq[static_cast<std::size_t>(c)] - batches * mean * mean) / (batches - 1));
        out.se[static_cast<std::size_t>(c)] = std::sqrt(var / batches);
    }
    return out;
}

}  // namespace avgdyn
