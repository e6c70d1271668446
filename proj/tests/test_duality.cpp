#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "avgdyn/duality.hpp"

using namespace avgdyn;

namespace {

std::vector<double> random_values(int n, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

// Two-step pull sequence on the path u0 - u1 - u2: u0 pulls u1, then u1 pulls u0.
EventLog path_pull_log() {
    EventLog log;
    log.params = ModelParams{ModelKind::node, 0.5, 1, false};
    log.events.push_back({0, {1}, false});
    log.events.push_back({1, {0}, false});
    return log;
}

// Two-step k=2 sequence on the triangle: u0 pulls {u1,u2}, then u1 pulls {u0,u2}.
EventLog triangle_k2_log() {
    EventLog log;
    log.params = ModelParams{ModelKind::node, 0.5, 2, false};
    log.events.push_back({0, {1, 2}, false});
    log.events.push_back({1, {0, 2}, false});
    return log;
}

}  // namespace

TEST_CASE("backward matrices") {
    const int n = 3;
    SUBCASE("k=1 column") {
        const ModelParams p{ModelKind::node, 0.5, 1, false};
        const SelectionEvent ev{1, {0}, false};
        const Eigen::MatrixXd b = event_to_backward_matrix(ev, p, n);
        CHECK(b(0, 1) == 0.5);
        CHECK(b(1, 1) == 0.5);
        CHECK(b(2, 1) == 0.0);
        CHECK(b(0, 0) == 1.0);
        CHECK(b(2, 2) == 1.0);
    }
    SUBCASE("k=2 column") {
        const ModelParams p{ModelKind::node, 0.5, 2, false};
        const SelectionEvent ev{0, {1, 2}, false};
        const Eigen::MatrixXd b = event_to_backward_matrix(ev, p, n);
        CHECK(b(0, 0) == 0.5);
        CHECK(b(1, 0) == 0.25);
        CHECK(b(2, 0) == 0.25);
    }
    SUBCASE("no-op maps to the identity") {
        const ModelParams p{ModelKind::node, 0.5, 1, true};
        const SelectionEvent ev{-1, {}, true};
        CHECK(event_to_backward_matrix(ev, p, n) == Eigen::MatrixXd::Identity(n, n));
    }
    SUBCASE("backward equals forward transpose, columns sum to 1") {
        const Graph g = make_random_regular(8, 3, 2);
        Rng rng(5);
        for (double alpha : {0.3, 0.5, 0.77}) {
            const ModelParams p{ModelKind::node, alpha, 2, false};
            SelectionEvent ev;
            for (int i = 0; i < 30; ++i) {
                select_event(g, p, rng, ev);
                const Eigen::MatrixXd b = event_to_backward_matrix(ev, p, g.n());
                const Eigen::MatrixXd f = event_to_forward_matrix(ev, p, g.n());
                CHECK(b == f.transpose());
                for (int c = 0; c < g.n(); ++c)
                    CHECK(b.col(c).sum() == doctest::Approx(1.0).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("golden coupling instances") {
    SUBCASE("path, k=1: commodity column (1/4, 3/4, 0)") {
        const Graph g = make_path(3);
        const EventLog log = path_pull_log();
        const std::vector<double> xi0{0.8, -0.4, 0.1};
        const DiffusionResult res = diffuse_backward(xi0, log, g);
        CHECK(res.state.load(0, 1) == 0.25);
        CHECK(res.state.load(1, 1) == 0.75);
        CHECK(res.state.load(2, 1) == 0.0);
        CHECK(duality_check(xi0, log, g) <= 1e-12);
        // every commodity conserves mass
        for (int c = 0; c < 3; ++c)
            CHECK(res.state.load.col(c).sum() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("triangle, k=2: commodity column (1/8, 9/16, 5/16)") {
        const Graph g = make_complete(3);
        const EventLog log = triangle_k2_log();
        const std::vector<double> xi0{1.0, 0.0, -1.0};
        const DiffusionResult res = diffuse_backward(xi0, log, g);
        CHECK(res.state.load(0, 1) == 0.125);
        CHECK(res.state.load(1, 1) == 0.5625);
        CHECK(res.state.load(2, 1) == 0.3125);
        CHECK(duality_check(xi0, log, g) <= 1e-12);
    }
    SUBCASE("empty log: W = xi0, R = I") {
        const Graph g = make_path(3);
        EventLog log;
        log.params = ModelParams{ModelKind::node, 0.5, 1, false};
        const std::vector<double> xi0{1.0, 2.0, 3.0};
        const DiffusionResult res = diffuse_backward(xi0, log, g);
        CHECK(res.state.load == Eigen::MatrixXd::Identity(3, 3));
        CHECK(res.cost == xi0);
        CHECK(duality_check(xi0, log, g) == 0.0);
    }
}

TEST_CASE("duality holds for random logs") {
    const Graph g = make_random_regular(12, 4, 7);
    int checked = 0;
    for (double alpha : {0.1, 0.5, 0.9}) {
        for (int k : {1, 2, 3}) {
            for (bool lazy : {false, true}) {
                const ModelParams p{ModelKind::node, alpha, k, lazy};
                for (int i = 0; i < 12; ++i) {
                    Rng rng = Rng::for_stream(1000 + checked, 0);
                    const EventLog log = random_event_log(g, p, 150, rng);
                    const std::vector<double> xi0 = random_values(g.n(), rng);
                    double norm_inf = 0.0;
                    for (double v : xi0) norm_inf = std::max(norm_inf, std::abs(v));
                    CHECK(duality_check(xi0, log, g) <= 1e-12 * std::max(1.0, norm_inf));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked == 216);
    // diffusion state stays a column-stochastic matrix with entries in [0,1]
    Rng rng(77);
    const ModelParams p{ModelKind::node, 0.3, 2, false};
    const EventLog log = random_event_log(g, p, 400, rng);
    const DiffusionResult res = diffuse_backward(random_values(g.n(), rng), log, g);
    for (int c = 0; c < g.n(); ++c) {
        CHECK(res.state.load.col(c).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.state.load.col(c).minCoeff() >= 0.0);
        CHECK(res.state.load.col(c).maxCoeff() <= 1.0);
    }
}

TEST_CASE("event log JSONL round trip") {
    const Graph g = make_petersen();
    const ModelParams p{ModelKind::node, 0.5, 2, true};
    Rng rng(9);
    const EventLog log = random_event_log(g, p, 120, rng);
    const std::string text = event_log_to_jsonl(log);
    const EventLog back = event_log_from_jsonl(text, p);
    REQUIRE(back.events.size() == log.events.size());
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        CHECK(back.events[i].updater == log.events[i].updater);
        CHECK(back.events[i].sources == log.events[i].sources);
        CHECK(back.events[i].noop == log.events[i].noop);
    }
    CHECK(event_log_to_jsonl(back) == text);  // bit-exact
    CHECK_NOTHROW(validate_event_log(back, g));
}

TEST_CASE("event log validation rejects corrupt logs") {
    const Graph g = make_cycle(6);
    EventLog log;
    log.params = ModelParams{ModelKind::node, 0.5, 1, false};
    log.events.push_back({0, {3}, false});  // 3 is not a neighbour of 0
    CHECK_THROWS_AS(validate_event_log(log, g), std::invalid_argument);
    log.events.clear();
    log.events.push_back({0, {1, 1}, false});  // repeated source and wrong k
    CHECK_THROWS_AS(validate_event_log(log, g), std::invalid_argument);
}

TEST_CASE("correlated walks") {
    SUBCASE("path golden log: occupancy approaches (1/4, 3/4, 0)") {
        const Graph g = make_path(3);
        const EventLog log = path_pull_log();
        const long long trials = 1000000;
        const Eigen::MatrixXd occ = correlated_walks(log, g, {1}, trials, 99);
        const double expect[3] = {0.25, 0.75, 0.0};
        for (int u = 0; u < 3; ++u) {
            const double se = std::sqrt(expect[u] * (1 - expect[u]) / trials) + 1e-9;
            CHECK(std::abs(occ(u, 0) - expect[u]) <= 3 * se);
        }
        CHECK(occ(2, 0) == 0.0);  // node 2 is unreachable under this log
    }
    SUBCASE("a walk whose node is never the updater stays put") {
        const Graph g = make_path(3);
        const EventLog log = path_pull_log();  // updaters are 0 and 1 only
        const Eigen::MatrixXd occ = correlated_walks(log, g, {2}, 2000, 5);
        CHECK(occ(2, 0) == 1.0);
    }
    SUBCASE("pair product matches the diffusion product") {
        const Graph g = make_random_regular(8, 3, 4);
        const ModelParams p{ModelKind::node, 0.5, 1, false};
        Rng rng(12);
        const EventLog log = random_event_log(g, p, 60, rng);
        const std::vector<double> xi0 = random_values(g.n(), rng);
        const DiffusionResult res = diffuse_backward(xi0, log, g);
        const int u = 2, v = 2;  // same start: correlated walks, independent coins
        const PairProductEstimate est = correlated_pair_product(log, g, xi0, u, v, 200000, 31);
        const double target = res.cost[static_cast<std::size_t>(u)] *
                              res.cost[static_cast<std::size_t>(v)];
        CHECK(std::abs(est.mean - target) <= 3 * est.std_error + 1e-9);
    }
}
