#include "avgdyn/duality.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace avgdyn {

using nlohmann::json;

void validate_event_log(const EventLog& log, const Graph& g) {
    log.params.validate(g);
    const int expected = log.params.kind == ModelKind::edge ? 1 : log.params.k;
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& ev = log.events[i];
        if (ev.noop) {
            if (!log.params.lazy || !ev.sources.empty())
                throw std::invalid_argument("event " + std::to_string(i) +
                                            ": no-op in a non-lazy log");
            continue;
        }
        if (ev.updater < 0 || ev.updater >= g.n())
            throw std::invalid_argument("event " + std::to_string(i) + ": updater out of range");
        if (static_cast<int>(ev.sources.size()) != expected)
            throw std::invalid_argument("event " + std::to_string(i) + ": expected " +
                                        std::to_string(expected) + " sources");
        std::set<int> distinct;
        for (int v : ev.sources) {
            if (!g.has_edge(ev.updater, v))
                throw std::invalid_argument("event " + std::to_string(i) +
                                            ": source is not a neighbour of the updater");
            if (!distinct.insert(v).second)
                throw std::invalid_argument("event " + std::to_string(i) + ": repeated source");
        }
    }
}

EventLog random_event_log(const Graph& g, const ModelParams& p, int length, Rng& rng) {
    p.validate(g);
    EventLog log;
    log.params = p;
    log.events.resize(static_cast<std::size_t>(length));
    for (auto& ev : log.events) select_event(g, p, rng, ev);
    return log;
}

std::string event_log_to_jsonl(const EventLog& log) {
    std::ostringstream out;
    for (std::size_t t = 0; t < log.events.size(); ++t) {
        const auto& ev = log.events[t];
        json j;
        j["t"] = t;
        j["u"] = ev.noop ? -1 : ev.updater;
        j["sources"] = ev.sources;
        j["noop"] = ev.noop;
        out << j.dump() << '\n';
    }
    return out.str();
}

EventLog event_log_from_jsonl(const std::string& text, const ModelParams& params) {
    EventLog log;
    log.params = params;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        SelectionEvent ev;
        ev.noop = j.at("noop").get<bool>();
        ev.updater = j.at("u").get<int>();
        ev.sources = j.at("sources").get<std::vector<int>>();
        log.events.push_back(std::move(ev));
    }
    return log;
}

Eigen::MatrixXd event_to_backward_matrix(const SelectionEvent& ev, const ModelParams& p, int n) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    if (ev.noop) return b;
    const double share = (1.0 - p.alpha) / static_cast<double>(ev.sources.size());
    b(ev.updater, ev.updater) = p.alpha;
    for (int s : ev.sources) b(s, ev.updater) = share;
    return b;
}

Eigen::MatrixXd event_to_forward_matrix(const SelectionEvent& ev, const ModelParams& p, int n) {
    return event_to_backward_matrix(ev, p, n).transpose();
}

DiffusionResult diffuse_backward(const std::vector<double>& cost0, const EventLog& log,
                                 const Graph& g) {
    const int n = g.n();
    if (static_cast<int>(cost0.size()) != n)
        throw std::invalid_argument("cost vector length does not match graph size");
    DiffusionResult res;
    res.state.load = Eigen::MatrixXd::Identity(n, n);
    auto& load = res.state.load;
    const double alpha = log.params.alpha;
    for (auto it = log.events.rbegin(); it != log.events.rend(); ++it) {
        const auto& ev = *it;
        ++res.state.step;
        if (ev.noop) continue;
        const double share = (1.0 - alpha) / static_cast<double>(ev.sources.size());
        for (int s : ev.sources) load.row(s) += share * load.row(ev.updater);
        load.row(ev.updater) *= alpha;
    }
    Eigen::Map<const Eigen::RowVectorXd> c(cost0.data(), n);
    Eigen::RowVectorXd w = c * load;
    res.cost.assign(w.data(), w.data() + n);
    return res;
}

StateVector replay_forward(const std::vector<double>& xi0, const EventLog& log, const Graph& g) {
    if (static_cast<int>(xi0.size()) != g.n())
        throw std::invalid_argument("state length does not match graph size");
    StateVector state{xi0, 0};
    for (const auto& ev : log.events) apply_event(state, log.params, ev);
    return state;
}

double duality_check(const std::vector<double>& xi0, const EventLog& log, const Graph& g) {
    validate_event_log(log, g);
    const StateVector forward = replay_forward(xi0, log, g);
    const DiffusionResult dual = diffuse_backward(xi0, log, g);
    double diff = 0.0;
    for (int u = 0; u < g.n(); ++u)
        diff = std::max(diff, std::abs(forward.values[static_cast<std::size_t>(u)] -
                                       dual.cost[static_cast<std::size_t>(u)]));
    return diff;
}

Eigen::MatrixXd correlated_walks(const EventLog& log, const Graph& g,
                                 const std::vector<int>& start_nodes, long long trials,
                                 std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const double alpha = log.params.alpha;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(g.n(), static_cast<int>(start_nodes.size()));
    std::vector<int> pos(start_nodes.size());
    for (long long trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(trial));
        for (std::size_t i = 0; i < start_nodes.size(); ++i) pos[i] = start_nodes[i];
        for (auto it = log.events.rbegin(); it != log.events.rend(); ++it) {
            const auto& ev = *it;
            if (ev.noop) continue;
            const int k = static_cast<int>(ev.sources.size());
            for (auto& x : pos) {
                if (x != ev.updater) continue;
                if (rng.bernoulli(1.0 - alpha)) x = ev.sources[static_cast<std::size_t>(rng.index(k))];
            }
        }
        for (std::size_t i = 0; i < pos.size(); ++i)
            counts(pos[i], static_cast<int>(i)) += 1.0;
    }
    return counts / static_cast<double>(trials);
}

PairProductEstimate correlated_pair_product(const EventLog& log, const Graph& g,
                                            const std::vector<double>& xi0, int start_u,
                                            int start_v, long long trials,
                                            std::uint64_t master_seed) {
    if (trials < 2) throw std::invalid_argument("trials must be >= 2");
    const double alpha = log.params.alpha;
    double sum = 0.0, sumsq = 0.0;
    for (long long trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(trial));
        int a = start_u, b = start_v;
        for (auto it = log.events.rbegin(); it != log.events.rend(); ++it) {
            const auto& ev = *it;
            if (ev.noop) continue;
            const int k = static_cast<int>(ev.sources.size());
            if (a == ev.updater && rng.bernoulli(1.0 - alpha))
                a = ev.sources[static_cast<std::size_t>(rng.index(k))];
            if (b == ev.updater && rng.bernoulli(1.0 - alpha))
                b = ev.sources[static_cast<std::size_t>(rng.index(k))];
        }
        const double product = xi0[static_cast<std::size_t>(a)] * xi0[static_cast<std::size_t>(b)];
        sum += product;
        sumsq += product * product;
    }
    PairProductEstimate est;
    est.trials = trials;
    est.mean = sum / static_cast<double>(trials);
    const double var =
        std::max(0.0, (sumsq - sum * sum / static_cast<double>(trials)) /
                          static_cast<double>(trials - 1));
    est.std_error = std::sqrt(var / static_cast<double>(trials));
    return est;
}

}  // namespace avgdyn
