#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "avgdyn/graph.hpp"
#include "avgdyn/rng.hpp"
#include "avgdyn/spectral.hpp"

using namespace avgdyn;

namespace {

// Dense lazy walk matrix, built independently of the spectral module.
std::vector<std::vector<double>> lazy_walk_matrix(const Graph& g) {
    const int n = g.n();
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (int u = 0; u < n; ++u) {
        p[u][u] = 0.5;
        for (int v : g.neighbours(u)) p[u][v] = 0.5 / g.degree(u);
    }
    return p;
}

void check_basic_invariants(const Graph& g) {
    long long degree_sum = 0;
    for (int u = 0; u < g.n(); ++u) {
        degree_sum += g.degree(u);
        for (int v : g.neighbours(u)) {
            CHECK(v != u);
            CHECK(g.has_edge(v, u));  // adjacency symmetric
        }
    }
    CHECK(degree_sum == 2 * g.m());
    const auto& pi = g.stationary_pi();
    CHECK(std::accumulate(pi.begin(), pi.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

}  // namespace

TEST_CASE("edge list loading") {
    SUBCASE("triangle") {
        const LoadedGraph lg = load_edge_list("0 1\n1 2\n2 0");
        CHECK(lg.graph.n() == 3);
        CHECK(lg.graph.m() == 3);
        CHECK(lg.graph.is_regular());
        CHECK(lg.graph.degree(0) == 2);
        CHECK_FALSE(lg.relabeled);
    }
    SUBCASE("path with comments and blank lines") {
        const LoadedGraph lg = load_edge_list("# a path\n0 1\n\n1 2   # tail edge\n");
        CHECK(lg.graph.n() == 3);
        CHECK(lg.graph.m() == 2);
        CHECK(lg.graph.degree(0) == 1);
        CHECK(lg.graph.degree(1) == 2);
        CHECK(lg.graph.degree(2) == 1);
    }
    SUBCASE("disconnected input is rejected") {
        try {
            load_edge_list("0 1\n2 3");
            FAIL("expected throw");
        } catch (const GraphError& e) {
            CHECK(e.kind() == GraphErrorKind::disconnected);
        }
    }
    SUBCASE("self-loop") {
        try {
            load_edge_list("0 0\n0 1");
            FAIL("expected throw");
        } catch (const GraphError& e) {
            CHECK(e.kind() == GraphErrorKind::self_loop);
        }
    }
    SUBCASE("duplicate edge, either orientation") {
        try {
            load_edge_list("0 1\n1 0");
            FAIL("expected throw");
        } catch (const GraphError& e) {
            CHECK(e.kind() == GraphErrorKind::duplicate_edge);
        }
    }
    SUBCASE("malformed line") {
        try {
            load_edge_list("0 1\n1 two");
            FAIL("expected throw");
        } catch (const GraphError& e) {
            CHECK(e.kind() == GraphErrorKind::malformed_line);
        }
    }
    SUBCASE("non-contiguous ids are remapped and reported") {
        const LoadedGraph lg = load_edge_list("5 9\n9 7\n7 5");
        CHECK(lg.relabeled);
        CHECK(lg.graph.n() == 3);
        REQUIRE(lg.original_labels.size() == 3);
        CHECK(lg.original_labels[0] == 5);
        CHECK(lg.original_labels[1] == 7);
        CHECK(lg.original_labels[2] == 9);
    }
    SUBCASE("single node is rejected") {
        CHECK_THROWS_AS(Graph::from_edges(1, {}), GraphError);
    }
}

TEST_CASE("generators") {
    const Graph c4 = make_cycle(4);
    CHECK(c4.n() == 4);
    CHECK(c4.m() == 4);
    CHECK(c4.is_regular());
    CHECK(c4.min_degree() == 2);

    const Graph k4 = make_complete(4);
    CHECK(k4.n() == 4);
    CHECK(k4.m() == 6);
    CHECK(k4.min_degree() == 3);

    const Graph h3 = make_hypercube(3);
    CHECK(h3.n() == 8);
    CHECK(h3.m() == 12);
    CHECK(h3.min_degree() == 3);

    const Graph t34 = make_torus(3, 4);
    CHECK(t34.n() == 12);
    CHECK(t34.m() == 24);
    CHECK(t34.is_regular());
    CHECK(t34.min_degree() == 4);

    const Graph pet = make_petersen();
    CHECK(pet.n() == 10);
    CHECK(pet.m() == 15);
    CHECK(pet.min_degree() == 3);

    for (const Graph* g : {&c4, &k4, &h3, &t34, &pet}) check_basic_invariants(*g);

    CHECK_THROWS_AS(make_cycle(2), GraphError);
    CHECK_THROWS_AS(make_torus(2, 5), GraphError);
    CHECK_THROWS_AS(make_hypercube(0), GraphError);
}

TEST_CASE("random regular generator") {
    const Graph g = make_random_regular(12, 4, 7);
    CHECK(g.n() == 12);
    CHECK(g.is_regular());
    CHECK(g.min_degree() == 4);
    check_basic_invariants(g);

    // seed-reproducible
    const Graph g2 = make_random_regular(12, 4, 7);
    for (int u = 0; u < 12; ++u) CHECK(g.neighbours(u) == g2.neighbours(u));

    CHECK_THROWS_AS(make_random_regular(5, 3, 1), GraphError);   // nd odd
    CHECK_THROWS_AS(make_random_regular(4, 4, 1), GraphError);   // d >= n

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Graph r = make_random_regular(10, 3, seed);
        check_basic_invariants(r);
    }
}

TEST_CASE("spectral quantities") {
    SUBCASE("complete(4): lambda2(P) = 1/3 and lambda2(L) = 4") {
        const SpectralSummary s = spectral(make_complete(4));
        CHECK(s.lambda2_P == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
        CHECK(s.lambda2_L == doctest::Approx(4.0).epsilon(1e-10));
    }
    SUBCASE("cycle(4): lambda2(L) = 2") {
        const SpectralSummary s = spectral(make_cycle(4));
        CHECK(s.lambda2_L == doctest::Approx(2.0).epsilon(1e-10));
        // lazy cycle: (1 + cos(2 pi / n)) / 2
        CHECK(s.lambda2_P == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("eigenvector residuals and normalisation") {
        for (const Graph& g : {make_cycle(6), make_petersen(), load_edge_list("0 1\n1 2\n2 3\n3 0\n0 2").graph}) {
            const SpectralSummary s = spectral(g);
            const int n = g.n();
            CHECK(s.lambda2_P >= 0.0);
            CHECK(s.lambda2_P < 1.0);
            CHECK(s.lambda2_L > 0.0);
            CHECK(s.lambda2_L <= 2.0 * g.max_degree());

            const auto p = lazy_walk_matrix(g);
            double max_residual_p = 0.0;
            for (int u = 0; u < n; ++u) {
                double acc = 0.0;
                for (int v = 0; v < n; ++v) acc += p[u][v] * s.f2_P[v];
                max_residual_p = std::max(max_residual_p, std::abs(acc - s.lambda2_P * s.f2_P[u]));
            }
            CHECK(max_residual_p <= 1e-10);

            double pi_norm = 0.0, pi_mean = 0.0;
            for (int u = 0; u < n; ++u) {
                pi_norm += s.pi[u] * s.f2_P[u] * s.f2_P[u];
                pi_mean += s.pi[u] * s.f2_P[u];
            }
            CHECK(pi_norm == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(std::abs(pi_mean) <= 1e-10);

            double max_residual_l = 0.0, l_norm = 0.0, l_sum = 0.0;
            for (int u = 0; u < n; ++u) {
                double acc = g.degree(u) * s.f2_L[u];
                for (int v : g.neighbours(u)) acc -= s.f2_L[v];
                max_residual_l = std::max(max_residual_l, std::abs(acc - s.lambda2_L * s.f2_L[u]));
                l_norm += s.f2_L[u] * s.f2_L[u];
                l_sum += s.f2_L[u];
            }
            CHECK(max_residual_l <= 1e-10);
            CHECK(l_norm == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(std::abs(l_sum) <= 1e-10);
        }
    }
    SUBCASE("pi is stationary for the lazy walk") {
        const Graph g = load_edge_list("0 1\n1 2\n2 3\n3 0\n0 2").graph;  // irregular
        const auto p = lazy_walk_matrix(g);
        const auto& pi = g.stationary_pi();
        for (int v = 0; v < g.n(); ++v) {
            double acc = 0.0;
            for (int u = 0; u < g.n(); ++u) acc += pi[u] * p[u][v];
            CHECK(acc == doctest::Approx(pi[v]).epsilon(1e-12));
        }
        // row sums of the lazy matrix
        for (int u = 0; u < g.n(); ++u) {
            double acc = 0.0;
            for (int v = 0; v < g.n(); ++v) acc += p[u][v];
            CHECK(acc == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("size cap") {
        CHECK_THROWS_AS(spectral(make_path(kSpectralSizeCap + 1)), GraphError);
    }
}

TEST_CASE("distance classes") {
    const DistanceClasses k4 = distance_classes(make_complete(4));
    CHECK(k4.s0 == 4);
    CHECK(k4.s1 == 12);
    CHECK(k4.s_plus == 0);

    const DistanceClasses c4 = distance_classes(make_cycle(4));
    CHECK(c4.s0 == 4);
    CHECK(c4.s1 == 8);
    CHECK(c4.s_plus == 4);

    const DistanceClasses h3 = distance_classes(make_hypercube(3));
    CHECK(h3.s0 == 8);
    CHECK(h3.s1 == 24);
    CHECK(h3.s_plus == 32);

    for (const Graph& g : {make_cycle(9), make_petersen(), make_random_regular(10, 3, 3)}) {
        const DistanceClasses dc = distance_classes(g);
        CHECK(dc.s0 == g.n());
        CHECK(dc.s1 == 2 * g.m());
        CHECK(dc.s0 + dc.s1 + dc.s_plus == static_cast<long long>(g.n()) * g.n());
    }
}
