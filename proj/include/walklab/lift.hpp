#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

/// Walk weights: alpha for an immediate reversal, beta for a move closing a
/// triangle with the previous node, gamma for any other move.
struct Params {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
};

inline void validate(const Params& p) {
    if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha))
        fail(Errc::InvalidParams, "alpha must be finite and >= 0");
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
        fail(Errc::InvalidParams, "beta must be finite and > 0");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
        fail(Errc::InvalidParams, "gamma must be finite and > 0");
}

inline bool integer_params(const Params& p) {
    auto whole = [](double x) { return std::floor(x) == x; };
    return whole(p.alpha) && whole(p.beta) && whole(p.gamma);
}

struct DirectedEdge {
    int tail = -1;
    int head = -1;
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

inline DirectedEdge reversed(DirectedEdge e) { return {e.head, e.tail}; }

/// Wedge kinds: Flat folds back on itself (w1 == w3), Triangle closes a
/// triangle ({w1, w3} an edge), Open is everything else.
enum class WedgeKind { Flat, Triangle, Open };

inline const char* kind_name(WedgeKind k) {
    switch (k) {
        case WedgeKind::Flat: return "flat";
        case WedgeKind::Triangle: return "triangle";
        case WedgeKind::Open: return "open";
    }
    return "?";
}

/// Two concatenated directed edges (a, b), (b, c).
struct Wedge {
    int a = -1;
    int b = -1;
    int c = -1;
    WedgeKind kind = WedgeKind::Open;
    friend bool operator==(const Wedge& x, const Wedge& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
};

inline Wedge reversed(const Wedge& w) { return {w.c, w.b, w.a, w.kind}; }

inline double lambda(const Params& p, WedgeKind k) {
    switch (k) {
        case WedgeKind::Flat: return p.alpha;
        case WedgeKind::Triangle: return p.beta;
        case WedgeKind::Open: return p.gamma;
    }
    return 0.0;
}

inline std::string to_string(DirectedEdge e) {
    return "(" + std::to_string(e.tail) + "->" + std::to_string(e.head) + ")";
}

inline std::string to_string(const Wedge& w) {
    return "(" + std::to_string(w.a) + "," + std::to_string(w.b) + "," +
           std::to_string(w.c) + ")";
}

/// The 2|E| directed edges of a graph in lexicographic (tail, head) order.
/// Index arithmetic: edges with tail v occupy a contiguous block of size
/// deg(v) starting at offset(v), ordered by head.
class EdgeSpace {
public:
    EdgeSpace(Graph&&) = delete;  // the space only references the graph
    explicit EdgeSpace(const Graph& g) : g_(&g) {
        offset_.resize(g.node_count() + 1, 0);
        for (int v = 0; v < g.node_count(); ++v)
            offset_[v + 1] = offset_[v] + g.degree(v);
        edges_.reserve(offset_.back());
        for (int v = 0; v < g.node_count(); ++v)
            for (int w : g.neighbors(v)) edges_.push_back({v, w});
        rev_.resize(edges_.size());
        for (int i = 0; i < size(); ++i) rev_[i] = index(edges_[i].head, edges_[i].tail);
    }

    const Graph& graph() const { return *g_; }
    int size() const { return static_cast<int>(edges_.size()); }
    DirectedEdge edge(int i) const { return edges_[i]; }
    int reverse(int i) const { return rev_[i]; }

    int index(int tail, int head) const {
        if (!g_->has_edge(tail, head))
            fail(Errc::UnknownState, "no directed edge " + to_string(DirectedEdge{tail, head}));
        const auto& a = g_->neighbors(tail);
        auto it = std::lower_bound(a.begin(), a.end(), head);
        return offset_[tail] + static_cast<int>(it - a.begin());
    }
    int index(DirectedEdge e) const { return index(e.tail, e.head); }

    /// First index of the block of edges with the given tail.
    int block_start(int tail) const { return offset_[tail]; }

private:
    const Graph* g_;
    std::vector<int> offset_;
    std::vector<DirectedEdge> edges_;
    std::vector<int> rev_;
};

/// All sum(deg^2) wedges of a graph in lexicographic (a, b, c) order, which
/// groups them by their first directed edge.  Keeps per-wedge component edge
/// indices and the reversal involution.
class WedgeSpace {
public:
    WedgeSpace(Graph&&) = delete;  // the space only references the graph
    explicit WedgeSpace(const Graph& g) : g_(&g), es_(g) {
        first_of_edge_.resize(es_.size() + 1, 0);
        for (int i = 0; i < es_.size(); ++i)
            first_of_edge_[i + 1] = first_of_edge_[i] + g.degree(es_.edge(i).head);
        wedges_.reserve(first_of_edge_.back());
        e1_.reserve(first_of_edge_.back());
        e2_.reserve(first_of_edge_.back());
        for (int i = 0; i < es_.size(); ++i) {
            auto [a, b] = es_.edge(i);
            for (int c : g.neighbors(b)) {
                WedgeKind kind = (a == c)           ? WedgeKind::Flat
                                 : g.has_edge(a, c) ? WedgeKind::Triangle
                                                    : WedgeKind::Open;
                wedges_.push_back({a, b, c, kind});
                e1_.push_back(i);
                e2_.push_back(es_.index(b, c));
            }
        }
        rev_.resize(wedges_.size());
        for (int i = 0; i < size(); ++i) {
            const Wedge& w = wedges_[i];
            rev_[i] = index(w.c, w.b, w.a);
        }
    }

    const Graph& graph() const { return *g_; }
    const EdgeSpace& edge_space() const { return es_; }
    int size() const { return static_cast<int>(wedges_.size()); }
    const Wedge& wedge(int i) const { return wedges_[i]; }
    int reverse(int i) const { return rev_[i]; }
    int first_edge(int i) const { return e1_[i]; }
    int second_edge(int i) const { return e2_[i]; }

    int index(int a, int b, int c) const {
        int e = es_.index(a, b);  // throws UnknownState if (a, b) missing
        const auto& nb = g_->neighbors(b);
        auto it = std::lower_bound(nb.begin(), nb.end(), c);
        if (it == nb.end() || *it != c)
            fail(Errc::UnknownState, "no wedge (" + std::to_string(a) + "," +
                                         std::to_string(b) + "," + std::to_string(c) + ")");
        return first_of_edge_[e] + static_cast<int>(it - nb.begin());
    }
    int index(const Wedge& w) const { return index(w.a, w.b, w.c); }

    /// Wedges sharing the first directed edge with wedge/edge i (the
    /// out-neighborhood of any wedge over that edge), as a contiguous range.
    std::pair<int, int> block_of_edge(int edge_index) const {
        return {first_of_edge_[edge_index], first_of_edge_[edge_index + 1]};
    }

    std::array<int, 3> kind_counts() const {
        std::array<int, 3> c{0, 0, 0};
        for (const auto& w : wedges_) ++c[static_cast<int>(w.kind)];
        return c;  // {flat, triangle, open}
    }

private:
    const Graph* g_;
    EdgeSpace es_;
    std::vector<Wedge> wedges_;
    std::vector<int> first_of_edge_;
    std::vector<int> e1_, e2_, rev_;
};

// ---------------------------------------------------------------------------
// Neighborhood queries.
// ---------------------------------------------------------------------------

/// Wedges that can precede w in one step: (x, w.a, w.b) for x ~ w.a.
inline std::vector<int> in_wedges(const WedgeSpace& ws, const Wedge& w) {
    std::vector<int> out;
    for (int x : ws.graph().neighbors(w.a)) out.push_back(ws.index(x, w.a, w.b));
    return out;
}

/// Wedges sharing the first directed edge with w (w included).
inline std::vector<int> on_wedges(const WedgeSpace& ws, const Wedge& w) {
    auto [lo, hi] = ws.block_of_edge(ws.edge_space().index(w.a, w.b));
    std::vector<int> out(hi - lo);
    std::iota(out.begin(), out.end(), lo);
    return out;
}

/// Wedges whose second directed edge is e: (x, e.tail, e.head) for x ~ e.tail.
inline std::vector<int> in_wedges_of_edge(const WedgeSpace& ws, DirectedEdge e) {
    if (!ws.graph().has_edge(e.tail, e.head))
        fail(Errc::UnknownState, "no directed edge " + to_string(e));
    std::vector<int> out;
    for (int x : ws.graph().neighbors(e.tail)) out.push_back(ws.index(x, e.tail, e.head));
    return out;
}

/// Wedges ending at node v: (x, u, v) for u ~ v, x ~ u.
inline std::vector<int> in_wedges_of_node(const WedgeSpace& ws, int v) {
    if (v < 0 || v >= ws.graph().node_count())
        fail(Errc::UnknownState, "no node " + std::to_string(v));
    std::vector<int> out;
    for (int u : ws.graph().neighbors(v))
        for (int x : ws.graph().neighbors(u)) out.push_back(ws.index(x, u, v));
    return out;
}

/// Directed edges ending at node v.
inline std::vector<int> in_edges_of_node(const EdgeSpace& es, int v) {
    if (v < 0 || v >= es.graph().node_count())
        fail(Errc::UnknownState, "no node " + std::to_string(v));
    std::vector<int> out;
    for (int u : es.graph().neighbors(v)) out.push_back(es.index(u, v));
    return out;
}

// ---------------------------------------------------------------------------
// Weight sums.
// ---------------------------------------------------------------------------

/// How the out-wedges over a directed edge split by kind: one flat
/// continuation, one triangle continuation per common neighbor of the
/// endpoints, the rest open.
struct OutWedgeTally {
    int flat = 1;
    int triangle = 0;
    int open = 0;
};

inline OutWedgeTally out_wedge_tally(const Graph& g, DirectedEdge e) {
    OutWedgeTally t;
    t.triangle = g.common_neighbors(e.tail, e.head);
    t.open = g.degree(e.head) - 1 - t.triangle;
    return t;
}

inline double tally_weight(const OutWedgeTally& t, const Params& p) {
    return p.alpha * t.flat + p.beta * t.triangle + p.gamma * t.open;
}

/// Total lambda-weight of the out-wedges over each directed edge; this is
/// the choice-probability denominator shared by every wedge on that edge.
inline std::vector<double> on_weight_sums(const EdgeSpace& es, const Params& p) {
    validate(p);
    std::vector<double> sums(es.size());
    for (int i = 0; i < es.size(); ++i)
        sums[i] = tally_weight(out_wedge_tally(es.graph(), es.edge(i)), p);
    return sums;
}

/// Total lambda-weight over the in-wedges of wedge w.
inline double in_weight_sum(const WedgeSpace& ws, const Params& p, const Wedge& w) {
    double s = 0.0;
    for (int i : in_wedges(ws, w)) s += lambda(p, ws.wedge(i).kind);
    return s;
}

}  // namespace walklab
