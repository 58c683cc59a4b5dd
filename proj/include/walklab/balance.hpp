#pragma once

#include <optional>

#include "walklab/stationary.hpp"

namespace walklab {

/// Outcome of the weighted-Eulerianity check: for every wedge, the total
/// lambda-weight over its out-wedges equals the total over its in-wedges.
struct EulerianityResult {
    bool holds = true;
    double max_violation = 0.0;
    std::optional<Wedge> witness;
};

/// Comparisons between lambda-sums are exact for integer parameters and use
/// a 1e-12 relative tolerance otherwise.
inline bool weights_equal(double x, double y, bool exact) {
    if (exact) return x == y;
    double scale = std::max({std::abs(x), std::abs(y), 1.0});
    return std::abs(x - y) <= 1e-12 * scale;
}

inline EulerianityResult check_eulerianity(const WedgeSpace& ws, const Params& p) {
    validate(p);
    auto on_sum = on_weight_sums(ws.edge_space(), p);
    bool exact = integer_params(p);
    EulerianityResult r;
    for (int i = 0; i < ws.size(); ++i) {
        const Wedge& w = ws.wedge(i);
        double in_sum = in_weight_sum(ws, p, w);
        double out_sum = on_sum[ws.first_edge(i)];
        if (!weights_equal(out_sum, in_sum, exact)) {
            r.holds = false;
            double gap = std::abs(out_sum - in_sum);
            if (gap > r.max_violation) {
                r.max_violation = gap;
                r.witness = w;
            }
        }
    }
    return r;
}

/// Degree-regularity of a connected graph.
inline bool check_regular(const Graph& g) {
    if (!g.is_connected()) fail(Errc::Disconnected, "regularity check expects a connected graph");
    return g.is_regular();
}

/// Directed detailed balance on edges: max over edge pairs joined by a wedge
/// of |pi(e) P(e, e') - pi(e') P(-e', -e)|.
inline double check_edb(const WedgeSpace& ws, const Kernel& edge_kernel, const Measure& pi_edge) {
    if (pi_edge.space != StateSpace::EdgeSpace)
        fail(Errc::InvalidSize, "directed-edge measure expected");
    const EdgeSpace& es = ws.edge_space();
    double r = 0.0;
    for (int i = 0; i < ws.size(); ++i) {
        int e = ws.first_edge(i), ep = ws.second_edge(i);
        double lhs = pi_edge.values[e] * edge_kernel.prob(e, ep);
        double rhs = pi_edge.values[ep] * edge_kernel.prob(es.reverse(ep), es.reverse(e));
        r = std::max(r, std::abs(lhs - rhs));
    }
    return r;
}

/// Directed detailed balance on wedges: max over concatenated wedge pairs of
/// |pi(w) P(w, w') - pi(w') P(-w', -w)|.
inline double check_wdb(const WedgeSpace& ws, const Kernel& wedge_kernel, const Measure& pi_hat) {
    if (pi_hat.space != StateSpace::WedgeSpace)
        fail(Errc::InvalidSize, "wedge measure expected");
    double r = 0.0;
    for (int w = 0; w < ws.size(); ++w) {
        for (const auto& [wp, prob] : wedge_kernel.row(w)) {
            double lhs = pi_hat.values[w] * prob;
            double rhs = pi_hat.values[wp] * wedge_kernel.prob(ws.reverse(wp), ws.reverse(w));
            r = std::max(r, std::abs(lhs - rhs));
        }
    }
    return r;
}

/// max over states of |m(s) - m(-s)| for a measure on edges or wedges.
inline double check_reversal_symmetry(const EdgeSpace& es, const Measure& m) {
    if (m.space != StateSpace::EdgeSpace || static_cast<int>(m.values.size()) != es.size())
        fail(Errc::InvalidSize, "directed-edge measure expected");
    double r = 0.0;
    for (int i = 0; i < es.size(); ++i)
        r = std::max(r, std::abs(m.values[i] - m.values[es.reverse(i)]));
    return r;
}

inline double check_reversal_symmetry(const WedgeSpace& ws, const Measure& m) {
    if (m.space != StateSpace::WedgeSpace || static_cast<int>(m.values.size()) != ws.size())
        fail(Errc::InvalidSize, "wedge measure expected");
    double r = 0.0;
    for (int i = 0; i < ws.size(); ++i)
        r = std::max(r, std::abs(m.values[i] - m.values[ws.reverse(i)]));
    return r;
}

/// Factorization property of concatenated wedges: for every wedge w2 and
/// every w1 that can precede it, the out-weight sum of w2 equals the
/// in-weight sum of the reversal of w1.  Exact for integer parameters.
struct WedgeFactResult {
    bool holds = true;
    double max_violation = 0.0;
};

inline WedgeFactResult check_wedgefact(const WedgeSpace& ws, const Params& p) {
    validate(p);
    auto on_sum = on_weight_sums(ws.edge_space(), p);
    bool exact = integer_params(p);
    WedgeFactResult r;
    for (int w2 = 0; w2 < ws.size(); ++w2) {
        double out_sum = on_sum[ws.first_edge(w2)];
        for (int w1 : in_wedges(ws, ws.wedge(w2))) {
            double in_rev = in_weight_sum(ws, p, reversed(ws.wedge(w1)));
            if (!weights_equal(out_sum, in_rev, exact)) {
                r.holds = false;
                r.max_violation = std::max(r.max_violation, std::abs(out_sum - in_rev));
            }
        }
    }
    return r;
}

/// Detailed balance transfers to invariance: requires the measure to pass
/// the edge balance check first, then reports the invariance residual.
inline double edb_implies_invariance(const WedgeSpace& ws, const Kernel& edge_kernel,
                                     const Measure& pi_edge, double tol = 1e-10) {
    double edb = check_edb(ws, edge_kernel, pi_edge);
    if (edb > tol)
        fail(Errc::PreconditionFailed,
             "measure fails edge detailed balance (residual " + std::to_string(edb) + ")");
    return invariance_residual(pi_edge, edge_kernel);
}

/// The wedge measure built from an edge measure by the product rule
/// pi_hat(w) = pi_edge(e1(w)) * P(e1(w), e2(w)).
inline Measure product_wedge_measure(const WedgeSpace& ws, const Kernel& edge_kernel,
                                     const Measure& pi_edge) {
    if (pi_edge.space != StateSpace::EdgeSpace)
        fail(Errc::InvalidSize, "directed-edge measure expected");
    Measure out{StateSpace::WedgeSpace, std::vector<double>(ws.size(), 0.0)};
    for (int i = 0; i < ws.size(); ++i)
        out.values[i] = pi_edge.values[ws.first_edge(i)] *
                        edge_kernel.prob(ws.first_edge(i), ws.second_edge(i));
    return out;
}

/// Cycle-product criterion used when alpha = 0: over every directed-edge
/// cycle in the support of the edge chain (length 3..max_len), the product
/// of out-weight sums equals the product of in-weight sums.
struct CycleConditionResult {
    bool holds = true;
    long long cycles_checked = 0;
    int max_len = 0;
    double max_violation = 0.0;          // absolute gap between the two products
    std::vector<int> worst_cycle;        // directed-edge indices
};

inline CycleConditionResult check_cycle_condition(const WedgeSpace& ws, const Params& p,
                                                  int max_len = 8,
                                                  long long budget = 1'000'000) {
    validate(p);
    if (p.alpha != 0.0)
        fail(Errc::PreconditionFailed, "cycle condition is an alpha = 0 criterion");
    const EdgeSpace& es = ws.edge_space();
    const Graph& g = es.graph();
    auto out_sum = on_weight_sums(es, p);
    std::vector<double> in_sum(es.size());
    for (int i = 0; i < es.size(); ++i) {
        DirectedEdge e = es.edge(i);
        double s = 0.0;
        for (int x : g.neighbors(e.tail))
            s += lambda(p, ws.wedge(ws.index(x, e.tail, e.head)).kind);
        in_sum[i] = s;
    }
    // Support arcs of the alpha = 0 edge chain: e -> e' when they
    // concatenate and e' is not the reversal of e.
    std::vector<std::vector<int>> succ(es.size());
    for (int i = 0; i < es.size(); ++i) {
        DirectedEdge e = es.edge(i);
        for (int v : g.neighbors(e.head))
            if (v != e.tail) succ[i].push_back(es.index(e.head, v));
    }

    CycleConditionResult res;
    res.max_len = max_len;
    bool exact = integer_params(p);
    std::vector<char> on_path(es.size(), 0);
    std::vector<int> path;
    auto dfs = [&](auto&& self, int root, int v) -> void {
        for (int w : succ[v]) {
            if (w == root && path.size() >= 3) {
                if (++res.cycles_checked > budget)
                    fail(Errc::BudgetExceeded, "cycle condition exceeded the cycle budget");
                double po = 1.0, pi = 1.0;
                for (int e : path) { po *= out_sum[e]; pi *= in_sum[e]; }
                if (!weights_equal(po, pi, exact)) {
                    res.holds = false;
                    if (std::abs(po - pi) > res.max_violation) {
                        res.max_violation = std::abs(po - pi);
                        res.worst_cycle = path;
                    }
                }
            } else if (w > root && !on_path[w] && static_cast<int>(path.size()) < max_len) {
                on_path[w] = 1;
                path.push_back(w);
                self(self, root, w);
                path.pop_back();
                on_path[w] = 0;
            }
        }
    };
    for (int root = 0; root < es.size(); ++root) {
        on_path[root] = 1;
        path = {root};
        dfs(dfs, root, root);
        on_path[root] = 0;
    }
    return res;
}

}  // namespace walklab
