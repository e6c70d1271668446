#include "avgdyn/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "avgdyn/rng.hpp"

namespace avgdyn {

namespace {

void check_connected(int n, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    if (reached != n)
        throw GraphError(GraphErrorKind::disconnected,
                         "graph is disconnected: BFS from node 0 reached " +
                             std::to_string(reached) + " of " + std::to_string(n) + " nodes");
}

}  // namespace

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 2)
        throw GraphError(GraphErrorKind::infeasible,
                         "graph must have at least 2 nodes, got " + std::to_string(n));
    Graph g;
    g.n_ = n;
    g.adj_.assign(static_cast<std::size_t>(n), {});
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw GraphError(GraphErrorKind::malformed_line,
                             "edge endpoint out of range: " + std::to_string(a) + " " +
                                 std::to_string(b));
        if (a == b)
            throw GraphError(GraphErrorKind::self_loop, "self-loop at node " + std::to_string(a));
        const auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            throw GraphError(GraphErrorKind::duplicate_edge,
                             "duplicate edge " + std::to_string(key.first) + "-" +
                                 std::to_string(key.second));
        g.adj_[static_cast<std::size_t>(a)].push_back(b);
        g.adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
    g.m_ = static_cast<long long>(edges.size());
    check_connected(n, g.adj_);

    g.min_degree_ = n;
    g.max_degree_ = 0;
    for (int u = 0; u < n; ++u) {
        const int d = g.degree(u);
        g.min_degree_ = std::min(g.min_degree_, d);
        g.max_degree_ = std::max(g.max_degree_, d);
    }
    g.directed_edges_.reserve(static_cast<std::size_t>(2 * g.m_));
    for (int u = 0; u < n; ++u)
        for (int v : g.adj_[static_cast<std::size_t>(u)]) g.directed_edges_.emplace_back(u, v);
    g.pi_.resize(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
        g.pi_[static_cast<std::size_t>(u)] =
            static_cast<double>(g.degree(u)) / static_cast<double>(2 * g.m_);
    return g;
}

bool Graph::has_edge(int u, int v) const {
    const auto& nb = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(nb.begin(), nb.end(), v);
}

LoadedGraph load_edge_list(const std::string& text) {
    std::vector<std::pair<long long, long long>> raw;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        long long a, b;
        if (!(ls >> a)) continue;  // blank or comment-only line
        std::string trailing;
        if (!(ls >> b) || (ls >> trailing))
            throw GraphError(GraphErrorKind::malformed_line,
                             "line " + std::to_string(line_no) +
                                 ": expected exactly two integer node ids");
        if (a < 0 || b < 0)
            throw GraphError(GraphErrorKind::malformed_line,
                             "line " + std::to_string(line_no) + ": negative node id");
        raw.emplace_back(a, b);
    }
    if (raw.empty())
        throw GraphError(GraphErrorKind::malformed_line, "edge list contains no edges");

    std::map<long long, int> remap;
    for (const auto& [a, b] : raw) {
        remap.emplace(a, 0);
        remap.emplace(b, 0);
    }
    int next = 0;
    bool contiguous = true;
    std::vector<long long> labels;
    labels.reserve(remap.size());
    for (auto& [label, id] : remap) {
        if (label != next) contiguous = false;
        id = next++;
        labels.push_back(label);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    for (const auto& [a, b] : raw) edges.emplace_back(remap[a], remap[b]);

    LoadedGraph out{Graph::from_edges(next, edges), std::move(labels), !contiguous};
    return out;
}

LoadedGraph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_edge_list(buf.str());
}

Graph make_cycle(int n) {
    if (n < 3) throw GraphError(GraphErrorKind::infeasible, "cycle requires n >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, edges);
}

Graph make_path(int n) {
    if (n < 2) throw GraphError(GraphErrorKind::infeasible, "path requires n >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

Graph make_complete(int n) {
    if (n < 2) throw GraphError(GraphErrorKind::infeasible, "complete graph requires n >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

Graph make_hypercube(int dim) {
    if (dim < 1 || dim > 20)
        throw GraphError(GraphErrorKind::infeasible, "hypercube dimension must be in 1..20");
    const int n = 1 << dim;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < dim; ++b) {
            const int j = i ^ (1 << b);
            if (i < j) edges.emplace_back(i, j);
        }
    return Graph::from_edges(n, edges);
}

Graph make_torus(int rows, int cols) {
    if (rows < 3 || cols < 3)
        throw GraphError(GraphErrorKind::infeasible,
                         "torus requires rows >= 3 and cols >= 3 (smaller sides create parallel edges)");
    const auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            edges.emplace_back(id(r, c), id((r + 1) % rows, c));
            edges.emplace_back(id(r, c), id(r, (c + 1) % cols));
        }
    return Graph::from_edges(rows * cols, edges);
}

Graph make_random_regular(int n, int d, std::uint64_t seed) {
    if (n < 2 || d < 1 || d >= n || (static_cast<long long>(n) * d) % 2 != 0)
        throw GraphError(GraphErrorKind::infeasible,
                         "random regular graph needs 1 <= d < n and n*d even");
    Rng rng(splitmix64(seed));
    const int retry_cap = 1000;
    std::vector<int> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        for (int u = 0; u < n; ++u)
            for (int j = 0; j < d; ++j)
                stubs[static_cast<std::size_t>(u) * d + j] = u;
        // Fisher-Yates over the stub list, then pair consecutive entries.
        for (std::size_t i = stubs.size(); i > 1; --i) {
            const std::size_t j = rng.below(i);
            std::swap(stubs[i - 1], stubs[j]);
        }
        std::set<std::pair<int, int>> seen;
        std::vector<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            const int a = stubs[i], b = stubs[i + 1];
            if (a == b) { ok = false; break; }
            const auto key = std::minmax(a, b);
            if (!seen.insert(key).second) { ok = false; break; }
            edges.emplace_back(a, b);
        }
        if (!ok) continue;
        try {
            return Graph::from_edges(n, edges);
        } catch (const GraphError& e) {
            if (e.kind() != GraphErrorKind::disconnected) throw;
        }
    }
    throw GraphError(GraphErrorKind::infeasible,
                     "configuration model failed to produce a simple connected graph in 1000 tries");
}

Graph make_petersen() {
    const std::vector<std::pair<int, int>> edges = {
        {0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},   // outer 5-cycle
        {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},   // spokes
        {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5},   // inner pentagram
    };
    return Graph::from_edges(10, edges);
}

DistanceClasses distance_classes(const Graph& g) {
    const int n = g.n();
    DistanceClasses out;
    out.dist.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int s = 0; s < n; ++s) {
        auto& dist = out.dist[static_cast<std::size_t>(s)];
        dist[static_cast<std::size_t>(s)] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : g.neighbours(u)) {
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            const int c = out.cls(u, v);
            if (c == 0) ++out.s0;
            else if (c == 1) ++out.s1;
            else ++out.s_plus;
        }
    return out;
}

}  // namespace avgdyn
