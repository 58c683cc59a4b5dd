#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "walklab/ergodicity.hpp"
#include "walklab/linalg.hpp"

namespace walklab {

/// Probability measure (or general nonnegative vector) over one of the
/// state spaces.
struct Measure {
    StateSpace space = StateSpace::EdgeSpace;
    std::vector<double> values;

    double total() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
};

inline double tv_distance(const Measure& a, const Measure& b) {
    if (a.values.size() != b.values.size())
        fail(Errc::InvalidSize, "total-variation distance over mismatched spaces");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return 0.5 * s;
}

/// max_j |(m K)_j - m_j|
inline double invariance_residual(const Measure& m, const Kernel& k) {
    if (static_cast<int>(m.values.size()) != k.dim())
        fail(Errc::InvalidSize, "measure dimension does not match kernel");
    std::vector<double> out(k.dim(), 0.0);
    for (int i = 0; i < k.dim(); ++i)
        for (const auto& [j, p] : k.row(i)) out[j] += m.values[i] * p;
    double r = 0.0;
    for (int j = 0; j < k.dim(); ++j) r = std::max(r, std::abs(out[j] - m.values[j]));
    return r;
}

enum class SolveMethod { Direct, Power };

struct StationaryOptions {
    SolveMethod method = SolveMethod::Direct;
    double tol = 1e-10;          // power-iteration L1 stopping criterion
    long max_iter = 1'000'000;   // power-iteration cap
    int direct_dim_cap = 20'000; // beyond this the direct method falls back to power
};

namespace detail {

inline Measure stationary_power(const Kernel& k, const StationaryOptions& opt) {
    int n = k.dim();
    std::vector<double> x(n, 1.0 / n), y(n);
    for (long it = 1; it <= opt.max_iter; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            double xi = x[i];
            if (xi == 0.0) continue;
            for (const auto& [j, p] : k.row(i)) y[j] += xi * p;
        }
        double diff = 0.0;
        for (int j = 0; j < n; ++j) diff += std::abs(y[j] - x[j]);
        x.swap(y);
        if (diff < opt.tol) {
            double s = 0.0;
            for (double v : x) s += v;
            for (double& v : x) v /= s;
            return {k.space(), std::move(x)};
        }
    }
    fail(Errc::NoConvergence, "power iteration did not reach tol " + std::to_string(opt.tol) +
                                  " in " + std::to_string(opt.max_iter) +
                                  " iterations (periodic kernel?)");
}

inline Measure stationary_direct(const Kernel& k) {
    // pi K = pi with the last balance equation replaced by sum(pi) = 1,
    // i.e. solve (K^T - I) pi = 0 subject to the normalization row.
    int n = k.dim();
    Dense A(n, n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, p] : k.row(i)) A.at(j, i) += p;
    for (int i = 0; i < n; ++i) A.at(i, i) -= 1.0;
    for (int j = 0; j < n; ++j) A.at(n - 1, j) = 1.0;
    Dense b(n, 1);
    b.at(n - 1, 0) = 1.0;
    lu_solve_in_place(A, b);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        double v = b.at(i, 0);
        if (v < -1e-12)
            fail(Errc::SolveFailure, "direct solve produced a negative stationary mass");
        x[i] = std::max(v, 0.0);
    }
    double s = 0.0;
    for (double v : x) s += v;
    for (double& v : x) v /= s;
    return {k.space(), std::move(x)};
}

}  // namespace detail

/// Unique stationary distribution of an irreducible kernel.  The direct
/// method works for periodic chains too; the power method needs
/// aperiodicity to converge and reports NoConvergence otherwise.
inline Measure stationary(const Kernel& k, StationaryOptions opt = {}) {
    if (!is_irreducible(k))
        fail(Errc::NotIrreducible, "stationary distribution of a reducible kernel");
    Measure m = (opt.method == SolveMethod::Direct && k.dim() <= opt.direct_dim_cap)
                    ? detail::stationary_direct(k)
                    : detail::stationary_power(k, opt);
    double residual = invariance_residual(m, k);
    if (residual > 1e-8)
        fail(Errc::SolveFailure, "stationary solve residual " + std::to_string(residual));
    return m;
}

/// Residual of the one-equation form of wedge invariance: the mass of w must
/// equal its choice probability times the mass of its in-wedges.
inline double verify_simplified_invariance(const WedgeSpace& ws, const Params& p,
                                           const Measure& pi_hat) {
    if (pi_hat.space != StateSpace::WedgeSpace ||
        static_cast<int>(pi_hat.values.size()) != ws.size())
        fail(Errc::InvalidSize, "wedge measure expected");
    const EdgeSpace& es = ws.edge_space();
    auto denom = on_weight_sums(es, p);
    // in-mass of wedge (a, b, c) = sum over x ~ a of pi_hat(x, a, b): this is
    // a function of the first edge (a, b) alone; accumulate per edge.
    std::vector<double> in_mass(es.size(), 0.0);
    for (int i = 0; i < ws.size(); ++i) in_mass[ws.second_edge(i)] += pi_hat.values[i];
    double r = 0.0;
    for (int i = 0; i < ws.size(); ++i) {
        int e1 = ws.first_edge(i);
        double choice = lambda(p, ws.wedge(i).kind) / denom[e1];
        r = std::max(r, std::abs(pi_hat.values[i] - choice * in_mass[e1]));
    }
    return r;
}

/// Push a wedge measure down to directed edges by summing over each edge's
/// in-wedges (equivalently, grouping wedges by their second edge).
inline Measure pullback_to_edges(const WedgeSpace& ws, const Measure& pi_hat) {
    if (pi_hat.space != StateSpace::WedgeSpace ||
        static_cast<int>(pi_hat.values.size()) != ws.size())
        fail(Errc::InvalidSize, "wedge measure expected");
    Measure out{StateSpace::EdgeSpace, std::vector<double>(ws.edge_space().size(), 0.0)};
    for (int i = 0; i < ws.size(); ++i) out.values[ws.second_edge(i)] += pi_hat.values[i];
    return out;
}

/// Push a wedge measure down to nodes (each wedge contributes to its final
/// node).  Returns a plain vector indexed by node.
inline std::vector<double> pullback_to_nodes(const WedgeSpace& ws, const Measure& pi_hat) {
    if (pi_hat.space != StateSpace::WedgeSpace ||
        static_cast<int>(pi_hat.values.size()) != ws.size())
        fail(Errc::InvalidSize, "wedge measure expected");
    std::vector<double> out(ws.graph().node_count(), 0.0);
    for (int i = 0; i < ws.size(); ++i) out[ws.wedge(i).c] += pi_hat.values[i];
    return out;
}

/// Push a directed-edge measure down to nodes by edge heads.
inline std::vector<double> edge_measure_to_nodes(const EdgeSpace& es, const Measure& pi_edge) {
    if (pi_edge.space != StateSpace::EdgeSpace ||
        static_cast<int>(pi_edge.values.size()) != es.size())
        fail(Errc::InvalidSize, "directed-edge measure expected");
    std::vector<double> out(es.graph().node_count(), 0.0);
    for (int i = 0; i < es.size(); ++i) out[es.edge(i).head] += pi_edge.values[i];
    return out;
}

/// Residual of the product coupling between the stationary wedge and edge
/// measures: pi_hat(w) = pi_edge(e1(w)) * P_edge(e1(w), e2(w)).
inline double verify_edge_wedge_product(const WedgeSpace& ws, const Kernel& edge_kernel,
                                        const Measure& pi_edge, const Measure& pi_hat) {
    if (pi_edge.space != StateSpace::EdgeSpace || pi_hat.space != StateSpace::WedgeSpace)
        fail(Errc::InvalidSize, "expected an edge measure and a wedge measure");
    double r = 0.0;
    for (int i = 0; i < ws.size(); ++i) {
        int e1 = ws.first_edge(i);
        double product = pi_edge.values[e1] * edge_kernel.prob(e1, ws.second_edge(i));
        r = std::max(r, std::abs(pi_hat.values[i] - product));
    }
    return r;
}

struct EmpiricalLimit {
    std::vector<double> nodes;       // node pullback of the n-step row from the first start
    double max_tv_to_stationary = 0; // over all requested start states
    double max_tv_between_starts = 0;
};

/// Push rows of K^n from selected start states down to nodes and compare
/// against the stationary node profile.  Needs an ergodic (irreducible and
/// aperiodic) kernel to mean anything.
inline EmpiricalLimit limiting_distribution_empirical(const WedgeSpace& ws, const Kernel& k,
                                                      const std::vector<int>& starts, int n,
                                                      const Measure& pi_hat) {
    if (k.space() != StateSpace::WedgeSpace)
        fail(Errc::InvalidSize, "empirical limit is computed on the wedge kernel");
    if (starts.empty()) fail(Errc::InvalidSize, "need at least one start state");
    for (int s : starts)
        if (s < 0 || s >= k.dim()) fail(Errc::UnknownState, "start state out of range");
    if (!is_irreducible(k) || period(k) != 1)
        fail(Errc::NotErgodic, "kernel is not irreducible and aperiodic");
    Kernel kn = n_step(k, n);
    std::vector<double> target = pullback_to_nodes(ws, pi_hat);
    EmpiricalLimit out;
    std::vector<std::vector<double>> rows;
    for (int s : starts) {
        Measure row{StateSpace::WedgeSpace, std::vector<double>(k.dim(), 0.0)};
        for (const auto& [j, p] : kn.row(s)) row.values[j] = p;
        auto nodes = pullback_to_nodes(ws, row);
        double tv = 0.0;
        for (std::size_t v = 0; v < nodes.size(); ++v) tv += std::abs(nodes[v] - target[v]);
        out.max_tv_to_stationary = std::max(out.max_tv_to_stationary, 0.5 * tv);
        rows.push_back(std::move(nodes));
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double tv = 0.0;
            for (std::size_t v = 0; v < rows[i].size(); ++v)
                tv += std::abs(rows[i][v] - rows[j][v]);
            out.max_tv_between_starts = std::max(out.max_tv_between_starts, 0.5 * tv);
        }
    out.nodes = rows.front();
    return out;
}

}  // namespace walklab
