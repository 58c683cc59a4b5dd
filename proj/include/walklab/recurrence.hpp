#pragma once

#include <map>
#include <tuple>

#include "walklab/balance.hpp"

namespace walklab {

/// Smallest immediate-reversal probability of the edge chain.  Positive
/// whenever alpha > 0; the conditioned chain below subtracts exactly this
/// much reversal mass from every state.
inline double backtrack_floor(const EdgeSpace& es, const Kernel& edge_kernel) {
    double p = 2.0;
    for (int i = 0; i < es.size(); ++i) p = std::min(p, edge_kernel.prob(i, es.reverse(i)));
    if (p <= 0.0)
        fail(Errc::ZeroBacktrack, "some edge has no immediate-reversal mass (alpha = 0?)");
    return p;
}

/// Split off a p-sized reversal component: K(e, e') = (P(e, e') - p 1{e' = -e}) / (1 - p).
/// Requires p to be at most the backtrack floor of P (entries would otherwise
/// go negative) and strictly below one.
inline Kernel conditioned_kernel(const EdgeSpace& es, const Kernel& edge_kernel, double p) {
    if (!(p > 0.0) || p >= 1.0) fail(Errc::InvalidParams, "conditioning level must lie in (0, 1)");
    std::vector<std::vector<std::pair<int, double>>> rows(edge_kernel.dim());
    for (int i = 0; i < edge_kernel.dim(); ++i) {
        int rev = es.reverse(i);
        for (auto [j, prob] : edge_kernel.row(i)) {
            if (j == rev) {
                if (prob < p - 1e-15)
                    fail(Errc::NegativeEntry, "conditioning level exceeds reversal mass at edge " +
                                                  to_string(es.edge(i)));
                prob -= p;
                if (prob <= 0.0) continue;
            }
            rows[i].emplace_back(j, prob / (1.0 - p));
        }
        if (edge_kernel.prob(i, rev) == 0.0 && p > 0.0)
            fail(Errc::NegativeEntry, "no reversal mass to remove at edge " + to_string(es.edge(i)));
    }
    return Kernel::from_rows(StateSpace::EdgeSpace, std::move(rows));
}

/// Chain on unordered edges {e, -e}: run the lazy conditioned chain for a
/// geometric(p) number of steps and then forget orientation.  The closed
/// form sums (p/2) (I - (1-p) K_L)^{-1} over the four orientation pairs.
struct CollapsedChain {
    Kernel kbar;
    Measure pi_bar;
    std::vector<std::pair<int, int>> orientation;  // undirected index -> (e, -e)
    double max_row_sum_error = 0.0;  // worst |row sum - 1| of the solve, before cleanup
};

inline CollapsedChain collapse_to_undirected(const EdgeSpace& es, const Kernel& k_lazy,
                                             double p, const Measure& pi_edge) {
    if (pi_edge.space != StateSpace::EdgeSpace ||
        static_cast<int>(pi_edge.values.size()) != es.size())
        fail(Errc::InvalidSize, "directed-edge measure expected");
    int m2 = es.size();
    int m = m2 / 2;
    // Undirected edge x <-> the directed pair (forward, reverse), forward
    // being the lexicographically smaller orientation.
    std::vector<std::pair<int, int>> orient(m);
    std::vector<int> undirected_of(m2);
    {
        const Graph& g = es.graph();
        int x = 0;
        for (const auto& [u, v] : g.edges()) {
            int f = es.index(u, v), r = es.index(v, u);
            orient[x] = {f, r};
            undirected_of[f] = undirected_of[r] = x;
            ++x;
        }
    }
    Dense A(m2, m2);
    for (int i = 0; i < m2; ++i) A.at(i, i) = 1.0;
    for (int i = 0; i < m2; ++i)
        for (const auto& [j, prob] : k_lazy.row(i)) A.at(i, j) -= (1.0 - p) * prob;
    Dense X = Dense::identity(m2);
    lu_solve_in_place(A, X);  // X = (I - (1-p) K_L)^{-1}

    std::vector<std::vector<std::pair<int, double>>> rows(m);
    double row_sum_error = 0.0;
    for (int x = 0; x < m; ++x) {
        auto [f, r] = orient[x];
        std::vector<double> mass(m, 0.0);
        for (int j = 0; j < m2; ++j)
            mass[undirected_of[j]] += 0.5 * p * (X.at(f, j) + X.at(r, j));
        double total = 0.0;
        for (int y = 0; y < m; ++y)
            if (mass[y] > 0.0) { rows[x].emplace_back(y, mass[y]); total += mass[y]; }
        row_sum_error = std::max(row_sum_error, std::abs(total - 1.0));
        for (auto& [y, v] : rows[x]) v /= total;  // scrub solver round-off
    }
    CollapsedChain out{Kernel::from_rows(StateSpace::UndirectedEdgeSpace, std::move(rows)),
                       Measure{StateSpace::UndirectedEdgeSpace, std::vector<double>(m, 0.0)},
                       std::move(orient), row_sum_error};
    for (int x = 0; x < m; ++x) {
        auto [f, r] = out.orientation[x];
        out.pi_bar.values[x] = pi_edge.values[f] + pi_edge.values[r];
    }
    return out;
}

/// max |pi(x) K(x, y) - pi(y) K(y, x)| over stored transitions.
inline double reversibility_residual(const Kernel& k, const Measure& pi) {
    if (static_cast<int>(pi.values.size()) != k.dim())
        fail(Errc::InvalidSize, "measure dimension does not match kernel");
    double r = 0.0;
    for (int x = 0; x < k.dim(); ++x)
        for (const auto& [y, prob] : k.row(x))
            r = std::max(r, std::abs(pi.values[x] * prob - pi.values[y] * k.prob(y, x)));
    return r;
}

/// max over n = 1..n_max and all edge pairs of
/// |pi(e) P^n(e, e') - pi(e') P^n(-e', -e)|.
inline double verify_nstep_directed_balance(const EdgeSpace& es, const Kernel& edge_kernel,
                                            const Measure& pi_edge, int n_max) {
    if (n_max < 1) fail(Errc::InvalidSize, "need n_max >= 1");
    Dense pw = to_dense(edge_kernel);
    Dense step = pw;
    double r = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) pw = matmul(pw, step);
        for (int e = 0; e < es.size(); ++e)
            for (int ep = 0; ep < es.size(); ++ep) {
                double lhs = pi_edge.values[e] * pw.at(e, ep);
                double rhs = pi_edge.values[ep] * pw.at(es.reverse(ep), es.reverse(e));
                r = std::max(r, std::abs(lhs - rhs));
            }
    }
    return r;
}

/// Surrogate reversal floor for alpha = 0: average the edge chain over
/// horizons 0..M, where M is the worst-case shortest support path from any
/// edge to its reversal.  The averaged kernel D then has D(e, -e) >= 2p for
/// the reported p.
struct AlphaZeroSetup {
    int m = 0;         // worst-case turnaround distance (transitions)
    double p = 0.0;    // conditioning level for D
    Kernel averaged;   // D = (M+1)^{-1} sum_{i<=M} P^i
};

inline AlphaZeroSetup alpha_zero_setup(const EdgeSpace& es, const Params& params,
                                       int r_cap = 0) {
    validate(params);
    if (params.alpha != 0.0)
        fail(Errc::PreconditionFailed, "averaging setup applies to alpha = 0 walks");
    const Graph& g = es.graph();
    Kernel base = build_edge_kernel(es, params);  // DeadEnd on degree-1 heads

    if (r_cap <= 0) r_cap = g.diameter();
    for (int v = 0; v < g.node_count(); ++v) {
        auto dist = g.bfs_distances(v);
        int nodes = 0, edge_twice = 0;
        for (int x = 0; x < g.node_count(); ++x) {
            if (dist[x] < 0 || dist[x] > r_cap) continue;
            ++nodes;
            for (int y : g.neighbors(x))
                if (dist[y] >= 0 && dist[y] <= r_cap) ++edge_twice;
        }
        if (edge_twice / 2 < nodes)  // a connected subgraph has a cycle iff |E| >= |V|
            fail(Errc::NoCycleInBall, "ball of radius " + std::to_string(r_cap) + " around node " +
                                          std::to_string(v) + " is cycle-free");
    }

    // BFS on the support digraph from every edge to its reversal.
    int m2 = es.size();
    int M = 0;
    std::vector<int> dist(m2);
    for (int s = 0; s < m2; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        int goal = es.reverse(s);
        while (!q.empty() && dist[goal] < 0) {
            int v = q.front();
            q.pop();
            for (const auto& [w, prob] : base.row(v)) {
                (void)prob;
                if (dist[w] < 0) { dist[w] = dist[v] + 1; q.push(w); }
            }
        }
        if (dist[goal] < 0)
            fail(Errc::NotIrreducible, "edge chain cannot reach the reversal of " +
                                           to_string(es.edge(s)));
        M = std::max(M, dist[goal]);
    }

    double lo = std::min(params.beta, params.gamma);
    double hi = std::max(params.beta, params.gamma);
    double q_step = lo / (lo + (g.max_degree() - 1) * hi);
    double p = std::pow(q_step, M) / (2.0 * (M + 1));

    Dense avg(m2, m2);
    for (int i = 0; i < m2; ++i) avg.at(i, i) = 1.0;  // P^0
    Dense pw = Dense::identity(m2);
    Dense step = to_dense(base);
    for (int i = 1; i <= M; ++i) {
        pw = matmul(pw, step);
        for (std::size_t t = 0; t < avg.a.size(); ++t) avg.a[t] += pw.a[t];
    }
    std::vector<std::vector<std::pair<int, double>>> rows(m2);
    for (int i = 0; i < m2; ++i) {
        double total = 0.0;
        for (int j = 0; j < m2; ++j) {
            double v = avg.at(i, j) / (M + 1);
            if (v > 0.0) { rows[i].emplace_back(j, v); total += v; }
        }
        for (auto& [j, v] : rows[i]) v /= total;
    }
    return {M, p, Kernel::from_rows(StateSpace::EdgeSpace, std::move(rows))};
}

/// Smallest reversal entry K(e, -e) of a directed-edge kernel.
inline double min_reversal_prob(const EdgeSpace& es, const Kernel& k) {
    double r = 2.0;
    for (int i = 0; i < es.size(); ++i) r = std::min(r, k.prob(i, es.reverse(i)));
    return r;
}

/// One self-contained bundle of the auxiliary machinery for a graph: the
/// conditioned chain, its lazy version and the collapsed reversible chain,
/// in either the alpha > 0 or the averaged alpha = 0 flavor.
struct AuxChain {
    enum class Mode { AlphaPositive, AlphaZero };
    Mode mode = Mode::AlphaPositive;
    double p = 0.0;
    int alpha_zero_m = 0;
    Kernel base;         // P (alpha > 0) or the averaged D (alpha = 0)
    Kernel conditioned;  // K
    Kernel cond_lazy;    // K_L
    Measure pi_edge;     // stationary for P (and hence for D)
    CollapsedChain collapsed;
};

inline AuxChain build_aux_chain(const EdgeSpace& es, const Params& params, int r_cap = 0) {
    validate(params);
    Kernel edge_kernel = build_edge_kernel(es, params);
    Measure pi_edge = stationary(edge_kernel);
    if (params.alpha > 0.0) {
        double p = backtrack_floor(es, edge_kernel);
        Kernel cond = conditioned_kernel(es, edge_kernel, p);
        Kernel cond_lazy = lazy(cond);
        CollapsedChain col = collapse_to_undirected(es, cond_lazy, p, pi_edge);
        return {AuxChain::Mode::AlphaPositive, p,    0,
                std::move(edge_kernel),        std::move(cond), std::move(cond_lazy),
                std::move(pi_edge),            std::move(col)};
    }
    AlphaZeroSetup setup = alpha_zero_setup(es, params, r_cap);
    Kernel cond = conditioned_kernel(es, setup.averaged, setup.p);
    Kernel cond_lazy = lazy(cond);
    CollapsedChain col = collapse_to_undirected(es, cond_lazy, setup.p, pi_edge);
    return {AuxChain::Mode::AlphaZero, setup.p, setup.m,
            std::move(setup.averaged), std::move(cond), std::move(cond_lazy),
            std::move(pi_edge),        std::move(col)};
}

// ---------------------------------------------------------------------------
// Resistor networks.
// ---------------------------------------------------------------------------

/// Finite resistor network: symmetric positive conductances on unordered
/// node pairs (u < v, no duplicates).
struct Network {
    int n = 0;
    std::vector<std::tuple<int, int, double>> conductances;
};

inline Network validate_network(Network net) {
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v, c] : net.conductances) {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= net.n || u == v) fail(Errc::UnknownState, "bad conductance pair");
        if (!(c > 0.0)) fail(Errc::NegativeEntry, "conductances must be positive");
        if (!seen.insert({u, v}).second) fail(Errc::DuplicateEdge, "duplicate conductance pair");
    }
    return net;
}

/// Identify all nodes in `glued` as one terminal.  Returns the quotient
/// network plus the new ids of `keep` and of the glued terminal.
inline Network glue_nodes(const Network& net, const std::vector<int>& glued, int keep,
                          int* keep_id, int* glued_id) {
    std::vector<int> remap(net.n, -1);
    std::vector<char> is_glued(net.n, 0);
    for (int v : glued) is_glued[v] = 1;
    if (is_glued[keep]) fail(Errc::InvalidSize, "kept terminal lies inside the glued set");
    int next = 0;
    for (int v = 0; v < net.n; ++v)
        if (!is_glued[v]) remap[v] = next++;
    int super = next++;
    std::map<std::pair<int, int>, double> acc;
    for (const auto& [u, v, c] : net.conductances) {
        int a = is_glued[u] ? super : remap[u];
        int b = is_glued[v] ? super : remap[v];
        if (a == b) continue;  // interior to the glued set
        acc[std::minmax(a, b)] += c;
    }
    Network out;
    out.n = next;
    for (const auto& [pair, c] : acc) out.conductances.emplace_back(pair.first, pair.second, c);
    *keep_id = remap[keep];
    *glued_id = super;
    return out;
}

/// Two-terminal effective resistance via the grounded Laplacian solve.
inline double effective_resistance(const Network& net, int source, int sink) {
    if (source == sink) return 0.0;
    if (source < 0 || sink < 0 || source >= net.n || sink >= net.n)
        fail(Errc::UnknownState, "terminal out of range");
    // Connectivity between the terminals.
    {
        std::vector<std::vector<int>> adj(net.n);
        for (const auto& [u, v, c] : net.conductances) {
            (void)c;
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        std::vector<char> seen(net.n, 0);
        std::vector<int> stack{source};
        seen[source] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
        }
        if (!seen[sink]) fail(Errc::Disconnected, "terminals lie in different components");
    }
    // Grounded Laplacian: drop the sink row/column, inject unit current at
    // the source; the source potential is the resistance.
    std::vector<int> idx(net.n, -1);
    int next = 0;
    for (int v = 0; v < net.n; ++v)
        if (v != sink) idx[v] = next++;
    Dense L(next, next);
    for (const auto& [u, v, c] : net.conductances) {
        if (u != sink && v != sink) {
            L.at(idx[u], idx[v]) -= c;
            L.at(idx[v], idx[u]) -= c;
        }
        if (u != sink) L.at(idx[u], idx[u]) += c;
        if (v != sink) L.at(idx[v], idx[v]) += c;
    }
    Dense b(next, 1);
    b.at(idx[source], 0) = 1.0;
    lu_solve_in_place(L, b);
    return b.at(idx[source], 0);
}

/// Unit-conductance network of a graph.
inline Network srw_network(const Graph& g) {
    Network net;
    net.n = g.node_count();
    for (const auto& [u, v] : g.edges()) net.conductances.emplace_back(u, v, 1.0);
    return net;
}

/// Network of the collapsed chain: states are unordered edges, conductance
/// pi_bar(x) kbar(x, y).  The chain is exactly reversible on regular graphs
/// and on trees; on other patches the two orientations of each conductance
/// are averaged and the worst asymmetry is reported.
inline Network collapsed_network(const CollapsedChain& col, double* max_asymmetry = nullptr) {
    const Kernel& k = col.kbar;
    Network net;
    net.n = k.dim();
    double asym = 0.0;
    for (int x = 0; x < k.dim(); ++x)
        for (const auto& [y, prob] : k.row(x)) {
            if (y <= x) continue;
            double cf = col.pi_bar.values[x] * prob;
            double cb = col.pi_bar.values[y] * k.prob(y, x);
            asym = std::max(asym, std::abs(cf - cb));
            double c = 0.5 * (cf + cb);
            if (c > 0.0) net.conductances.emplace_back(x, y, c);
        }
    if (max_asymmetry) *max_asymmetry = asym;
    return net;
}

// ---------------------------------------------------------------------------
// Growth experiment.
// ---------------------------------------------------------------------------

enum class LatticeFamily { Triangular, Tree3 };

inline const char* family_name(LatticeFamily f) {
    return f == LatticeFamily::Triangular ? "triangular" : "tree3";
}

inline gen::Patch make_patch(LatticeFamily family, int radius) {
    return family == LatticeFamily::Triangular ? gen::triangular_patch(radius)
                                               : gen::tree_patch(3, radius);
}

/// One row of the growth table: effective resistance from the patch center
/// to the glued outer ring, for the unit network and for the collapsed-chain
/// network.
struct GrowthRow {
    int radius = 0;
    int nodes = 0;
    double r_srw = 0.0;
    double r_kbar = 0.0;
    double ratio = 0.0;            // r_kbar / r_srw
    double kbar_asymmetry = 0.0;   // worst conductance asymmetry before averaging
};

inline GrowthRow growth_row(LatticeFamily family, int radius, const Params& params) {
    gen::Patch patch = make_patch(family, radius);
    const Graph& g = patch.graph;
    GrowthRow row;
    row.radius = radius;
    row.nodes = g.node_count();
    {
        Network net = srw_network(g);
        int a, b;
        Network glued = glue_nodes(net, patch.boundary, patch.center, &a, &b);
        row.r_srw = effective_resistance(glued, a, b);
    }
    {
        EdgeSpace es(g);
        AuxChain aux = build_aux_chain(es, params);
        Network net = collapsed_network(aux.collapsed, &row.kbar_asymmetry);
        // Terminals on the edge states: the first edge at the center versus
        // everything touching the outer ring.
        int center_state = -1;
        std::vector<char> on_boundary(g.node_count(), 0);
        for (int v : patch.boundary) on_boundary[v] = 1;
        std::vector<int> boundary_states;
        const auto& edges = g.edges();
        for (int x = 0; x < static_cast<int>(edges.size()); ++x) {
            auto [u, v] = edges[x];
            if (center_state < 0 && (u == patch.center || v == patch.center)) center_state = x;
            if (on_boundary[u] || on_boundary[v]) boundary_states.push_back(x);
        }
        int a, b;
        Network glued = glue_nodes(net, boundary_states, center_state, &a, &b);
        row.r_kbar = effective_resistance(glued, a, b);
    }
    row.ratio = row.r_kbar / row.r_srw;
    return row;
}

inline std::vector<GrowthRow> recurrence_proxy_experiment(LatticeFamily family, int radius_lo,
                                                          int radius_hi, const Params& params) {
    if (radius_lo < 1 || radius_hi < radius_lo)
        fail(Errc::InvalidSize, "bad radius range");
    std::vector<GrowthRow> rows;
    for (int r = radius_lo; r <= radius_hi; ++r) rows.push_back(growth_row(family, r, params));
    return rows;
}

}  // namespace walklab
