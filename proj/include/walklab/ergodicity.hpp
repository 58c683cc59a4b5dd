#pragma once

#include <numeric>
#include <optional>
#include <queue>

#include "walklab/kernel.hpp"

namespace walklab {

/// Strongly connected components of the kernel's support digraph.
/// Returns component ids (0-based, in reverse topological discovery order).
inline std::vector<int> strongly_connected_components(const Kernel& k, int* count_out = nullptr) {
    // Iterative Tarjan.
    int n = k.dim();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_index = 0, comp_count = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    std::vector<Frame> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& row = k.row(f.v);
            if (f.edge < row.size()) {
                int w = row[f.edge++].first;
                if (index[w] < 0) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = comp_count;
                    } while (w != f.v);
                    ++comp_count;
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    if (count_out) *count_out = comp_count;
    return comp;
}

inline bool is_irreducible(const Kernel& k) {
    int count = 0;
    strongly_connected_components(k, &count);
    return count == 1;
}

/// Period of the states listed in `members`, which must form one strongly
/// connected component of the support digraph: gcd over arcs inside the
/// component of level(u) + 1 - level(v) for BFS levels from any root.
inline int component_period(const Kernel& k, const std::vector<int>& members) {
    if (members.empty()) fail(Errc::InvalidSize, "empty component");
    std::vector<char> in(k.dim(), 0);
    for (int v : members) in[v] = 1;
    std::vector<int> level(k.dim(), -1);
    std::queue<int> q;
    level[members[0]] = 0;
    q.push(members[0]);
    long long g = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& [w, p] : k.row(v)) {
            (void)p;
            if (!in[w]) continue;
            if (level[w] < 0) {
                level[w] = level[v] + 1;
                q.push(w);
            }
            g = std::gcd(g, static_cast<long long>(level[v]) + 1 - level[w]);
        }
    }
    for (int v : members)
        if (level[v] < 0) fail(Errc::NotIrreducible, "states are not one strongly connected component");
    return static_cast<int>(g);
}

/// Period of an irreducible kernel (gcd of all closed-walk lengths).
inline int period(const Kernel& k) {
    if (!is_irreducible(k)) fail(Errc::NotIrreducible, "period needs an irreducible kernel");
    std::vector<int> all(k.dim());
    std::iota(all.begin(), all.end(), 0);
    return component_period(k, all);
}

/// With alpha = 0 nothing ever moves *into* a flat wedge, so the walk lives
/// on the non-flat states; restrict the kernel to that closed class before
/// measuring irreducibility or period.  Rows keep their exact entries (arcs
/// into flats carry zero weight and are never stored).
inline Kernel live_wedge_kernel(const WedgeSpace& ws, const Kernel& k) {
    std::vector<int> id(ws.size(), -1);
    std::vector<int> keep;
    for (int i = 0; i < ws.size(); ++i)
        if (ws.wedge(i).kind != WedgeKind::Flat) {
            id[i] = static_cast<int>(keep.size());
            keep.push_back(i);
        }
    std::vector<std::vector<std::pair<int, double>>> rows(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        for (const auto& [j, prob] : k.row(keep[r])) {
            if (id[j] < 0)
                fail(Errc::PreconditionFailed, "flat wedge still enterable; is alpha zero?");
            rows[r].emplace_back(id[j], prob);
        }
    }
    return Kernel::from_rows(StateSpace::WedgeSpace, std::move(rows));
}

/// What the parameter regime predicts for the wedge chain of (g, p), side
/// by side with what the constructed kernel actually does.
struct ErgodicityVerdict {
    enum class Case { AlphaPositive, AlphaPositiveTriangle, AlphaZero, None };
    Case regime = Case::None;
    bool outside_hypotheses = false;     // no sufficient condition applies
    bool predicts_irreducible = false;
    bool predicts_aperiodic = false;     // only claimed for AlphaPositiveTriangle
    std::vector<int> triangle;           // witness when one exists
    std::optional<int> degree_one_node;  // witness when alpha = 0 fails min-degree
    bool cycle_graph = false;            // max degree == 2 (degenerate for alpha = 0)

    std::optional<bool> irreducible;     // measured on the wedge kernel
    std::optional<int> measured_period;  // measured when irreducible
    bool agrees = true;                  // predictions consistent with measurement
};

inline const char* case_name(ErgodicityVerdict::Case c) {
    using Case = ErgodicityVerdict::Case;
    switch (c) {
        case Case::AlphaPositive: return "alpha-positive";
        case Case::AlphaPositiveTriangle: return "alpha-positive-triangle";
        case Case::AlphaZero: return "alpha-zero";
        case Case::None: return "none";
    }
    return "?";
}

/// Evaluate the sufficient ergodicity conditions for the wedge chain:
/// alpha > 0 on a connected graph gives irreducibility, plus aperiodicity
/// when a triangle exists; alpha = 0 with min degree >= 2 and max degree > 2
/// gives irreducibility.  Conditions are treated as sufficient only; when
/// none applies the kernel is still measured and reported.
inline ErgodicityVerdict check_ergodicity(const Graph& g, const Params& p) {
    validate(p);
    ErgodicityVerdict v;
    if (!g.is_connected()) fail(Errc::Disconnected, "ergodicity checks need a connected graph");
    v.triangle = g.find_triangle();
    v.cycle_graph = g.max_degree() <= 2;
    for (int x = 0; x < g.node_count(); ++x)
        if (g.degree(x) == 1) { v.degree_one_node = x; break; }

    using Case = ErgodicityVerdict::Case;
    if (p.alpha > 0.0) {
        v.regime = v.triangle.empty() ? Case::AlphaPositive : Case::AlphaPositiveTriangle;
        v.predicts_irreducible = true;
        v.predicts_aperiodic = !v.triangle.empty();
    } else if (!v.degree_one_node && !v.cycle_graph) {
        v.regime = Case::AlphaZero;
        v.predicts_irreducible = true;
    } else {
        v.regime = Case::None;
        v.outside_hypotheses = true;
    }

    if (p.alpha > 0.0 || !v.degree_one_node) {
        WedgeSpace ws(g);
        Kernel k = build_wedge_kernel(ws, p);
        if (p.alpha == 0.0) k = live_wedge_kernel(ws, k);
        v.irreducible = is_irreducible(k);
        if (*v.irreducible) v.measured_period = period(k);
    }

    if (v.predicts_irreducible && v.irreducible && !*v.irreducible) v.agrees = false;
    if (v.predicts_aperiodic && v.measured_period && *v.measured_period != 1) v.agrees = false;
    return v;
}

/// gcd of the lengths of all simple cycles of g (0 when g is acyclic).
/// Plain DFS enumeration rooted at the smallest node of each cycle; fine at
/// the few-node scale this is used for.
inline long long graph_cycle_gcd(const Graph& g, long long budget = 1'000'000) {
    long long gcd_len = 0;
    long long visited_paths = 0;
    int n = g.node_count();
    std::vector<char> on_path(n, 0);
    std::vector<int> path;
    // Enumerate simple cycles whose smallest node is `root`; to count each
    // cycle once, require the second node to be smaller than the last.
    auto dfs = [&](auto&& self, int root, int v) -> void {
        if (++visited_paths > budget)
            fail(Errc::BudgetExceeded, "cycle enumeration exceeded budget");
        for (int w : g.neighbors(v)) {
            if (w == root && path.size() >= 3) {
                if (path[1] < path.back()) gcd_len = std::gcd(gcd_len, (long long)path.size());
            } else if (w > root && !on_path[w]) {
                on_path[w] = 1;
                path.push_back(w);
                self(self, root, w);
                path.pop_back();
                on_path[w] = 0;
            }
        }
    };
    for (int root = 0; root < n; ++root) {
        on_path[root] = 1;
        path = {root};
        dfs(dfs, root, root);
        on_path[root] = 0;
    }
    return gcd_len;
}

/// Empirical pairing for the open question of whether "the graph has two
/// cycles with coprime lengths" matches aperiodicity of the alpha = 0 wedge
/// chain.  Recorded, not asserted.
struct AperiodicityPair {
    bool graph_aperiodic = false;   // gcd of simple-cycle lengths == 1
    bool kernel_aperiodic = false;  // measured period of the alpha = 0 wedge chain == 1
};

inline AperiodicityPair aperiodic_graph_conjecture_check(const Graph& g) {
    AperiodicityPair out;
    out.graph_aperiodic = graph_cycle_gcd(g) == 1;
    WedgeSpace ws(g);
    Kernel k = live_wedge_kernel(ws, build_wedge_kernel(ws, Params{0.0, 1.0, 1.0}));
    if (!is_irreducible(k))
        fail(Errc::NotIrreducible, "alpha = 0 wedge chain is reducible on this graph");
    out.kernel_aperiodic = period(k) == 1;
    return out;
}

}  // namespace walklab
