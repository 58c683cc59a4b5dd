#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "walklab/lift.hpp"

namespace walklab {

enum class StateSpace { EdgeSpace, WedgeSpace, UndirectedEdgeSpace };

inline const char* space_name(StateSpace s) {
    switch (s) {
        case StateSpace::EdgeSpace: return "directed-edge";
        case StateSpace::WedgeSpace: return "wedge";
        case StateSpace::UndirectedEdgeSpace: return "undirected-edge";
    }
    return "?";
}

/// Row-stochastic sparse kernel.  Structural zeros are omitted: an absent
/// entry is an impossible transition, every stored probability lies in
/// (0, 1], and each row sums to one within 1e-12 (checked at construction).
class Kernel {
public:
    static constexpr double kRowSumTol = 1e-12;

    Kernel(StateSpace space, int dim) : space_(space), rows_(dim) {}

    static Kernel from_rows(StateSpace space,
                            std::vector<std::vector<std::pair<int, double>>> rows) {
        Kernel k(space, static_cast<int>(rows.size()));
        k.rows_ = std::move(rows);
        k.check();
        return k;
    }

    StateSpace space() const { return space_; }
    int dim() const { return static_cast<int>(rows_.size()); }

    const std::vector<std::pair<int, double>>& row(int i) const { return rows_[i]; }

    /// Probability of i -> j (0 when the transition is structurally absent).
    double prob(int i, int j) const {
        const auto& r = rows_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& e, int col) { return e.first < col; });
        return (it != r.end() && it->first == j) ? it->second : 0.0;
    }

    double row_sum(int i) const {
        double s = 0.0;
        for (const auto& [j, p] : rows_[i]) s += p;
        return s;
    }

private:
    void check() const {
        for (int i = 0; i < dim(); ++i) {
            double s = 0.0;
            int prev = -1;
            for (const auto& [j, p] : rows_[i]) {
                if (j <= prev || j < 0 || j >= dim())
                    fail(Errc::Malformed, "kernel row " + std::to_string(i) +
                                              " has unsorted or out-of-range columns");
                prev = j;
                if (!(p > 0.0) || p > 1.0 + kRowSumTol)
                    fail(Errc::NegativeEntry, "kernel entry outside (0, 1] at row " +
                                                  std::to_string(i));
                s += p;
            }
            if (std::abs(s - 1.0) > kRowSumTol)
                fail(Errc::Malformed, "kernel row " + std::to_string(i) +
                                          " sums to " + std::to_string(s));
        }
    }

    StateSpace space_;
    std::vector<std::vector<std::pair<int, double>>> rows_;
};

/// Probability that the walk sitting on the first edge of w picks w among
/// the wedges over that edge: lambda(w) normalized over the block.
inline double wedge_choice_prob(const WedgeSpace& ws, const Params& p, const Wedge& w) {
    validate(p);
    const EdgeSpace& es = ws.edge_space();
    int e1 = es.index(w.a, w.b);
    double denom = tally_weight(out_wedge_tally(ws.graph(), es.edge(e1)), p);
    if (denom <= 0.0)
        fail(Errc::DeadEnd, "walk has no continuation from edge " + to_string(es.edge(e1)));
    ws.index(w);  // validates the wedge exists
    return lambda(p, w.kind) / denom;
}

/// One-step kernel on directed edges: from (s, u) the walk moves to (u, v)
/// with probability proportional to lambda of the wedge (s, u, v).
inline Kernel build_edge_kernel(const EdgeSpace& es, const Params& p) {
    validate(p);
    const Graph& g = es.graph();
    std::vector<std::vector<std::pair<int, double>>> rows(es.size());
    for (int i = 0; i < es.size(); ++i) {
        auto [s, u] = es.edge(i);
        double denom = tally_weight(out_wedge_tally(g, es.edge(i)), p);
        if (denom <= 0.0)
            fail(Errc::DeadEnd, "walk has no continuation from edge " + to_string(es.edge(i)) +
                                    " (alpha = 0 at a degree-1 head)");
        auto& row = rows[i];
        for (int v : g.neighbors(u)) {
            WedgeKind k = (v == s)            ? WedgeKind::Flat
                          : g.has_edge(s, v)  ? WedgeKind::Triangle
                                              : WedgeKind::Open;
            double w = lambda(p, k);
            if (w > 0.0) row.emplace_back(es.index(u, v), w / denom);
        }
        std::sort(row.begin(), row.end());
    }
    return Kernel::from_rows(StateSpace::EdgeSpace, std::move(rows));
}

/// One-step kernel on wedges: w = (a, b, c) moves to w' = (b, c, d) with the
/// choice probability of w', which depends on w only through feasibility.
inline Kernel build_wedge_kernel(const WedgeSpace& ws, const Params& p) {
    validate(p);
    const Graph& g = ws.graph();
    const EdgeSpace& es = ws.edge_space();
    auto denom = on_weight_sums(es, p);
    std::vector<std::vector<std::pair<int, double>>> rows(ws.size());
    for (int i = 0; i < ws.size(); ++i) {
        const Wedge& w = ws.wedge(i);
        int e2 = ws.second_edge(i);
        if (denom[e2] <= 0.0)
            fail(Errc::DeadEnd, "walk has no continuation from wedge " + to_string(w));
        auto [lo, hi] = ws.block_of_edge(e2);
        auto& row = rows[i];
        for (int j = lo; j < hi; ++j) {
            double wt = lambda(p, ws.wedge(j).kind);
            if (wt > 0.0) row.emplace_back(j, wt / denom[e2]);
        }
    }
    return Kernel::from_rows(StateSpace::WedgeSpace, std::move(rows));
}

/// Lazy version (I + K) / 2.
inline Kernel lazy(const Kernel& k) {
    std::vector<std::vector<std::pair<int, double>>> rows(k.dim());
    for (int i = 0; i < k.dim(); ++i) {
        auto& row = rows[i];
        bool placed = false;
        for (const auto& [j, p] : k.row(i)) {
            if (j == i) { row.emplace_back(i, 0.5 + 0.5 * p); placed = true; continue; }
            if (j > i && !placed) { row.emplace_back(i, 0.5); placed = true; }
            row.emplace_back(j, 0.5 * p);
        }
        if (!placed) row.emplace_back(i, 0.5);
        std::sort(row.begin(), row.end());
    }
    return Kernel::from_rows(k.space(), std::move(rows));
}

/// n-step kernel by repeated dense multiplication.  The work budget bounds
/// n * dim^2 to keep accidental blow-ups loud.
inline Kernel n_step(const Kernel& k, int n, double work_budget = 1e10) {
    if (n < 1) fail(Errc::InvalidSize, "step count must be >= 1");
    double dim = k.dim();
    if (static_cast<double>(n) * dim * dim > work_budget)
        fail(Errc::Overflow, "n-step work " + std::to_string(n * dim * dim) +
                                 " exceeds budget");
    int d = k.dim();
    std::vector<double> acc(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i) * d + i] = 1.0;
    std::vector<double> next(static_cast<std::size_t>(d) * d);
    for (int step = 0; step < n; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < d; ++i) {
            const double* arow = &acc[static_cast<std::size_t>(i) * d];
            double* nrow = &next[static_cast<std::size_t>(i) * d];
            for (int t = 0; t < d; ++t) {
                double a = arow[t];
                if (a == 0.0) continue;
                for (const auto& [j, p] : k.row(t)) nrow[j] += a * p;
            }
        }
        acc.swap(next);
    }
    std::vector<std::vector<std::pair<int, double>>> rows(d);
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            double v = acc[static_cast<std::size_t>(i) * d + j];
            if (v > 0.0) { rows[i].emplace_back(j, v); s += v; }
        }
        // Renormalize the accumulated floating error so the row-sum
        // invariant keeps holding for large n.
        if (s > 0.0)
            for (auto& [j, v] : rows[i]) v /= s;
    }
    return Kernel::from_rows(k.space(), std::move(rows));
}

struct BistochasticVerdict {
    bool doubly_stochastic = false;
    double max_column_deviation = 0.0;
};

/// A row-stochastic kernel is doubly stochastic when all column sums are one
/// as well; equivalently the uniform measure is invariant.
inline BistochasticVerdict is_bistochastic(const Kernel& k, double tol = 1e-10) {
    std::vector<double> col(k.dim(), 0.0);
    for (int i = 0; i < k.dim(); ++i)
        for (const auto& [j, p] : k.row(i)) col[j] += p;
    BistochasticVerdict v;
    for (double c : col) v.max_column_deviation = std::max(v.max_column_deviation, std::abs(c - 1.0));
    v.doubly_stochastic = v.max_column_deviation <= tol;
    return v;
}

}  // namespace walklab
