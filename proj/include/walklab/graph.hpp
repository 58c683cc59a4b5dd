#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "walklab/error.hpp"

namespace walklab {

/// Finite simple graph.  Nodes are 0..n-1 after compaction; the original
/// integer labels from an edge-list file are kept for reporting.  Adjacency
/// lists are sorted, the edge list is lexicographic with u < v, and graphs
/// with self-loops, duplicate edges or isolated nodes are rejected.
class Graph {
public:
    Graph() = default;

    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges,
                            std::vector<long long> labels = {});

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    bool has_edge(int u, int v) const {
        if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return false;
        const auto& a = adj_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    /// Undirected edges as (u, v) with u < v, lexicographic.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<long long>& labels() const { return labels_; }
    long long label(int v) const { return labels_[v]; }

    /// Number of common neighbors of u and v (sorted-list intersection).
    int common_neighbors(int u, int v) const {
        const auto& a = adj_[u];
        const auto& b = adj_[v];
        int count = 0;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) { ++count; ++i; ++j; }
            else if (a[i] < b[j]) ++i;
            else ++j;
        }
        return count;
    }

    int min_degree() const {
        int d = n_ > 0 ? degree(0) : 0;
        for (int v = 1; v < n_; ++v) d = std::min(d, degree(v));
        return d;
    }

    int max_degree() const {
        int d = 0;
        for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
        return d;
    }

    bool is_regular() const { return min_degree() == max_degree(); }

    bool is_connected() const {
        if (n_ == 0) return false;
        std::vector<char> seen(n_, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj_[v])
                if (!seen[w]) { seen[w] = 1; ++reached; stack.push_back(w); }
        }
        return reached == n_;
    }

    /// First triangle (a < b < c) in lexicographic order, or empty.
    std::vector<int> find_triangle() const {
        for (const auto& [u, v] : edges_)
            for (int w : adj_[u])
                if (w > v && has_edge(v, w)) return {u, v, w};
        return {};
    }

    /// BFS distances from source (-1 where unreachable).
    std::vector<int> bfs_distances(int source) const {
        std::vector<int> dist(n_, -1);
        std::queue<int> q;
        dist[source] = 0;
        q.push(source);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj_[v])
                if (dist[w] < 0) { dist[w] = dist[v] + 1; q.push(w); }
        }
        return dist;
    }

    int diameter() const {
        int d = 0;
        for (int v = 0; v < n_; ++v) {
            auto dist = bfs_distances(v);
            for (int x : dist) {
                if (x < 0) fail(Errc::Disconnected, "diameter of a disconnected graph");
                d = std::max(d, x);
            }
        }
        return d;
    }

private:
    int n_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<long long> labels_;
};

inline Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges,
                               std::vector<long long> labels) {
    if (n <= 0) fail(Errc::InvalidSize, "graph needs at least one node");
    Graph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            fail(Errc::UnknownState, "edge endpoint out of range");
        if (u == v) fail(Errc::SelfLoop, "self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] == edges[i - 1])
            fail(Errc::DuplicateEdge, "duplicate edge " + std::to_string(edges[i].first) +
                                          "-" + std::to_string(edges[i].second));
    for (const auto& [u, v] : edges) {
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (int v = 0; v < n; ++v) {
        if (g.adj_[v].empty())
            fail(Errc::IsolatedNode, "node " + std::to_string(v) + " has no incident edge");
        std::sort(g.adj_[v].begin(), g.adj_[v].end());
    }
    g.edges_ = std::move(edges);
    if (labels.empty()) {
        g.labels_.resize(n);
        std::iota(g.labels_.begin(), g.labels_.end(), 0LL);
    } else {
        if (static_cast<int>(labels.size()) != n)
            fail(Errc::InvalidSize, "label count does not match node count");
        g.labels_ = std::move(labels);
    }
    return g;
}

/// Parse the whitespace edge-list format: one "u v" pair per line, '#'
/// comments and blank lines ignored, labels nonnegative integers compacted
/// to 0..n-1 in order of first appearance.
inline Graph load_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    std::vector<long long> labels;
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<long long, int>> label_index;  // sorted label -> id
    auto intern = [&](long long lab) {
        auto it = std::lower_bound(label_index.begin(), label_index.end(),
                                   std::make_pair(lab, -1));
        if (it != label_index.end() && it->first == lab) return it->second;
        int id = static_cast<int>(labels.size());
        labels.push_back(lab);
        label_index.insert(it, {lab, id});
        return id;
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        long long a, b;
        if (!(ls >> a)) continue;  // blank or comment-only line
        std::string where = "line " + std::to_string(line_no);
        if (!(ls >> b)) fail(Errc::Malformed, where + ": expected two integers");
        std::string extra;
        if (ls >> extra) fail(Errc::Malformed, where + ": trailing token '" + extra + "'");
        if (a < 0 || b < 0) fail(Errc::Malformed, where + ": negative node label");
        if (a == b) fail(Errc::SelfLoop, where + ": node " + std::to_string(a));
        int u = intern(a), v = intern(b);
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            fail(Errc::DuplicateEdge, where + ": " + std::to_string(a) + " " + std::to_string(b));
        edges.emplace_back(u, v);
    }
    if (edges.empty()) fail(Errc::Malformed, "edge list holds no edges");
    // Canonical ids: ascending label order, independent of line order.
    int n = static_cast<int>(labels.size());
    std::vector<int> order(n), new_id(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return labels[x] < labels[y]; });
    for (int r = 0; r < n; ++r) new_id[order[r]] = r;
    for (auto& [u, v] : edges) {
        u = new_id[u];
        v = new_id[v];
    }
    std::sort(labels.begin(), labels.end());
    return Graph::from_edges(n, std::move(edges), std::move(labels));
}

inline void save_edge_list(const Graph& g, std::ostream& out) {
    for (const auto& [u, v] : g.edges())
        out << g.label(u) << ' ' << g.label(v) << '\n';
}

// ---------------------------------------------------------------------------
// Generators.  All of them produce compact ids 0..n-1 with identity labels.
// ---------------------------------------------------------------------------
namespace gen {

inline Graph complete(int n) {
    if (n < 2) fail(Errc::InvalidSize, "complete graph needs n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph::from_edges(n, std::move(e));
}

inline Graph cycle(int n) {
    if (n < 3) fail(Errc::InvalidSize, "cycle needs n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
    return Graph::from_edges(n, std::move(e));
}

inline Graph path(int n) {
    if (n < 2) fail(Errc::InvalidSize, "path needs n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return Graph::from_edges(n, std::move(e));
}

inline Graph circulant(int n, const std::vector<int>& offsets) {
    if (n < 3) fail(Errc::InvalidSize, "circulant needs n >= 3");
    if (offsets.empty()) fail(Errc::InvalidSize, "circulant needs at least one offset");
    std::set<std::pair<int, int>> e;
    for (int o : offsets) {
        if (o < 1 || 2 * o > n)
            fail(Errc::InvalidSize, "circulant offset " + std::to_string(o) +
                                        " outside 1..n/2");
        for (int v = 0; v < n; ++v) {
            int w = (v + o) % n;
            e.insert(std::minmax(v, w));
        }
    }
    return Graph::from_edges(n, {e.begin(), e.end()});
}

inline Graph complete_bipartite(int a, int b) {
    if (a < 1 || b < 1) fail(Errc::InvalidSize, "complete bipartite needs both sides nonempty");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v) e.emplace_back(u, a + v);
    return Graph::from_edges(a + b, std::move(e));
}

inline Graph petersen() {
    // Outer 5-cycle, inner pentagram, spokes.
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v < 5; ++v) {
        e.emplace_back(v, (v + 1) % 5);
        e.emplace_back(5 + v, 5 + (v + 2) % 5);
        e.emplace_back(v, 5 + v);
    }
    return Graph::from_edges(10, std::move(e));
}

/// 6-regular torus: nodes (i, j) on Z_rows x Z_cols, neighbors at
/// (+-1, 0), (0, +-1), (+1, -1), (-1, +1).
inline Graph triangular_torus(int rows, int cols) {
    if (rows < 3 || cols < 3) fail(Errc::InvalidSize, "triangular torus needs rows, cols >= 3");
    auto id = [cols](int i, int j) { return i * cols + j; };
    std::set<std::pair<int, int>> e;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            int v = id(i, j);
            int a = id((i + 1) % rows, j);
            int b = id(i, (j + 1) % cols);
            int c = id((i + 1) % rows, (j + cols - 1) % cols);
            e.insert(std::minmax(v, a));
            e.insert(std::minmax(v, b));
            e.insert(std::minmax(v, c));
        }
    return Graph::from_edges(rows * cols, {e.begin(), e.end()});
}

/// Triangle 0-1-2 with a pendant edge 2-3.
inline Graph fig3_triangle_arm() {
    return Graph::from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
}

/// K4 on nodes 0..3 with the edge {0, 2} removed; degrees (2, 3, 2, 3).
inline Graph clique4_minus_edge() {
    return Graph::from_edges(4, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

namespace detail {
// splitmix64: the same generator the simulator uses (see simulate.hpp).
inline std::uint64_t mix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

inline Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 2) fail(Errc::InvalidSize, "erdos-renyi needs n >= 2");
    if (p < 0.0 || p > 1.0) fail(Errc::InvalidSize, "edge probability outside [0, 1]");
    std::uint64_t s = seed;
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double r = static_cast<double>(detail::mix64(s) >> 11) * 0x1.0p-53;
            if (r < p) e.emplace_back(u, v);
        }
    return Graph::from_edges(n, std::move(e));  // may reject isolated nodes
}

/// Finite patch of a lattice together with its center node and the set of
/// nodes on the outermost ring (used as a glued super-node in resistance
/// experiments).
struct Patch {
    Graph graph;
    int center = 0;
    std::vector<int> boundary;
};

/// Ball of the triangular (6-regular) lattice: axial coordinates (q, r) with
/// hex distance <= radius from the origin.
inline Patch triangular_patch(int radius) {
    if (radius < 1) fail(Errc::InvalidSize, "triangular patch needs radius >= 1");
    auto dist = [](int q, int r) { return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2; };
    std::vector<std::pair<int, int>> coords;
    for (int q = -radius; q <= radius; ++q)
        for (int r = -radius; r <= radius; ++r)
            if (dist(q, r) <= radius) coords.emplace_back(q, r);
    std::sort(coords.begin(), coords.end());
    auto index_of = [&](int q, int r) {
        auto it = std::lower_bound(coords.begin(), coords.end(), std::make_pair(q, r));
        if (it == coords.end() || *it != std::make_pair(q, r)) return -1;
        return static_cast<int>(it - coords.begin());
    };
    static constexpr int dirs[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (const auto& d : dirs) {
            int j = index_of(coords[i].first + d[0], coords[i].second + d[1]);
            if (j > static_cast<int>(i)) e.emplace_back(static_cast<int>(i), j);
        }
    Patch patch;
    patch.graph = Graph::from_edges(static_cast<int>(coords.size()), std::move(e));
    patch.center = index_of(0, 0);
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (dist(coords[i].first, coords[i].second) == radius)
            patch.boundary.push_back(static_cast<int>(i));
    return patch;
}

/// Truncation of the infinite tree in which every node has the given degree:
/// the root has `degree` children and every other internal node has
/// `degree - 1` children, out to the given depth.
inline Patch tree_patch(int degree, int radius) {
    if (degree < 3) fail(Errc::InvalidSize, "tree patch needs degree >= 3");
    if (radius < 1) fail(Errc::InvalidSize, "tree patch needs radius >= 1");
    std::vector<std::pair<int, int>> e;
    std::vector<int> level{0};
    std::vector<int> depth_of{0};
    int next = 1;
    for (int depth = 1; depth <= radius; ++depth) {
        std::vector<int> fresh;
        for (int parent : level) {
            int kids = (parent == 0) ? degree : degree - 1;
            for (int k = 0; k < kids; ++k) {
                e.emplace_back(parent, next);
                fresh.push_back(next);
                depth_of.push_back(depth);
                ++next;
            }
        }
        level = std::move(fresh);
    }
    Patch patch;
    patch.graph = Graph::from_edges(next, std::move(e));
    patch.center = 0;
    for (int v = 0; v < next; ++v)
        if (depth_of[v] == radius) patch.boundary.push_back(v);
    return patch;
}

}  // namespace gen
}  // namespace walklab
