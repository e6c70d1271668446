#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace avgdyn {

enum class GraphErrorKind {
    malformed_line,
    self_loop,
    duplicate_edge,
    disconnected,
    infeasible,
    size_cap,
};

class GraphError : public std::runtime_error {
public:
    GraphError(GraphErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    GraphErrorKind kind() const { return kind_; }

private:
    GraphErrorKind kind_;
};

// Immutable connected simple undirected graph over nodes 0..n-1.
// Safe to share read-only across threads once constructed.
class Graph {
public:
    // Validates: n >= 2, no self-loops, no duplicate edges, connected.
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    long long m() const { return m_; }
    const std::vector<int>& neighbours(int u) const { return adj_[static_cast<std::size_t>(u)]; }
    int degree(int u) const { return static_cast<int>(adj_[static_cast<std::size_t>(u)].size()); }
    int min_degree() const { return min_degree_; }
    int max_degree() const { return max_degree_; }
    bool is_regular() const { return min_degree_ == max_degree_; }

    // Ordered pairs (u,v) with {u,v} in E; size 2m. Index order is fixed:
    // sorted by u, then by the adjacency order of v.
    const std::vector<std::pair<int, int>>& directed_edges() const { return directed_edges_; }

    // pi_u = d_u / 2m, the stationary vector of the (lazy) walk.
    const std::vector<double>& stationary_pi() const { return pi_; }

    bool has_edge(int u, int v) const;

private:
    Graph() = default;

    int n_ = 0;
    long long m_ = 0;
    int min_degree_ = 0;
    int max_degree_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> directed_edges_;
    std::vector<double> pi_;
};

struct LoadedGraph {
    Graph graph;
    // original_labels[i] is the input id that became node i; identity when
    // the input was already contiguous 0-based.
    std::vector<long long> original_labels;
    bool relabeled = false;
};

// Edge-list text: one "u v" pair per line, '#' starts a comment, blank lines
// ignored. Distinct diagnostics for malformed lines, self-loops, duplicate
// edges and disconnected inputs.
LoadedGraph load_edge_list(const std::string& text);
LoadedGraph load_edge_list_file(const std::string& path);

Graph make_cycle(int n);
Graph make_complete(int n);
Graph make_path(int n);
Graph make_hypercube(int dim);
Graph make_torus(int rows, int cols);
// Configuration-model pairing with rejection of self-loops, multi-edges and
// disconnected outcomes; throws GraphErrorKind::infeasible after 1000 tries.
Graph make_random_regular(int n, int d, std::uint64_t seed);
Graph make_petersen();

// Ordered-pair partition of V x V by shortest-path distance: S0 (diagonal),
// S1 (adjacent pairs), S+ (distance >= 2). Dense all-pairs BFS.
struct DistanceClasses {
    std::vector<std::vector<int>> dist;  // hop distance, dist[u][v] >= 0
    long long s0 = 0;
    long long s1 = 0;
    long long s_plus = 0;

    // 0, 1 or 2 (meaning S+).
    int cls(int u, int v) const {
        const int d = dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        return d == 0 ? 0 : (d == 1 ? 1 : 2);
    }
};

DistanceClasses distance_classes(const Graph& g);

}  // namespace avgdyn
