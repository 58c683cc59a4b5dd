#pragma once

#include <cstdint>

#include "walklab/stationary.hpp"

namespace walklab {

/// splitmix64: tiny counter-style 64-bit generator with a one-word state.
/// Reference sequence from seed 42 (first three draws):
/// 0xbdd732262feb6e95, 0x28efe333b266f103, 0x47526757130f9f52.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// A realized walk: the node sequence starts with the two endpoints of the
/// start edge, then one node per step.
struct Trajectory {
    std::vector<int> nodes;
    Params params;
    DirectedEdge start;
    std::uint64_t seed = 0;
    long long steps = 0;
};

/// Sample the walk for `steps` transitions from the given start edge.
/// Deterministic in (graph, params, start, steps, seed).  Each step draws
/// one uniform variate and inverts the cumulative lambda-weights over the
/// current edge's continuations in neighbor order.
inline Trajectory walk(const Graph& g, const Params& params, DirectedEdge start,
                       long long steps, std::uint64_t seed) {
    validate(params);
    if (steps < 0) fail(Errc::InvalidSize, "negative step count");
    if (!g.has_edge(start.tail, start.head))
        fail(Errc::UnknownState, "start edge " + to_string(start) + " is not in the graph");
    SplitMix64 rng(seed);
    Trajectory tr;
    tr.params = params;
    tr.start = start;
    tr.seed = seed;
    tr.steps = steps;
    tr.nodes.reserve(steps + 2);
    tr.nodes.push_back(start.tail);
    tr.nodes.push_back(start.head);
    int prev = start.tail, cur = start.head;
    for (long long n = 0; n < steps; ++n) {
        const auto& nb = g.neighbors(cur);
        double total = 0.0;
        for (int v : nb) {
            WedgeKind k = (v == prev)             ? WedgeKind::Flat
                          : g.has_edge(prev, v)   ? WedgeKind::Triangle
                                                  : WedgeKind::Open;
            total += lambda(params, k);
        }
        if (total <= 0.0)
            fail(Errc::DeadEnd, "walk stuck on edge " + to_string(DirectedEdge{prev, cur}) + " after " +
                                    std::to_string(n) + " steps");
        double r = rng.next_double() * total;
        double cum = 0.0;
        int chosen = -1;
        for (int v : nb) {
            WedgeKind k = (v == prev)             ? WedgeKind::Flat
                          : g.has_edge(prev, v)   ? WedgeKind::Triangle
                                                  : WedgeKind::Open;
            double w = lambda(params, k);
            if (w <= 0.0) continue;  // zero-weight moves must stay unreachable
            cum += w;
            if (r < cum) { chosen = v; break; }
        }
        if (chosen < 0) chosen = nb.back();  // r landed on the rounding edge of 1.0
        tr.nodes.push_back(chosen);
        prev = cur;
        cur = chosen;
    }
    return tr;
}

/// Empirical occupation frequencies of a trajectory at all three state
/// levels (consecutive nodes, pairs and triples after the burn-in).
struct Occupation {
    std::vector<double> nodes;
    Measure edges;
    Measure wedges;
};

inline Occupation occupation(const WedgeSpace& ws, const Trajectory& tr, long long burn_in = 0) {
    const Graph& g = ws.graph();
    const EdgeSpace& es = ws.edge_space();
    if (burn_in < 0 || burn_in + 2 > static_cast<long long>(tr.nodes.size()))
        fail(Errc::InvalidSize, "burn-in leaves no samples");
    Occupation occ;
    occ.nodes.assign(g.node_count(), 0.0);
    occ.edges = {StateSpace::EdgeSpace, std::vector<double>(es.size(), 0.0)};
    occ.wedges = {StateSpace::WedgeSpace, std::vector<double>(ws.size(), 0.0)};
    std::size_t first = static_cast<std::size_t>(burn_in);
    for (std::size_t i = first; i < tr.nodes.size(); ++i) occ.nodes[tr.nodes[i]] += 1.0;
    for (std::size_t i = first; i + 1 < tr.nodes.size(); ++i)
        occ.edges.values[es.index(tr.nodes[i], tr.nodes[i + 1])] += 1.0;
    for (std::size_t i = first; i + 2 < tr.nodes.size(); ++i)
        occ.wedges.values[ws.index(tr.nodes[i], tr.nodes[i + 1], tr.nodes[i + 2])] += 1.0;
    auto normalize = [](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        if (s > 0.0)
            for (double& x : v) x /= s;
    };
    normalize(occ.nodes);
    normalize(occ.edges.values);
    normalize(occ.wedges.values);
    return occ;
}

/// Gaps between successive visits of the walk to a target node.
struct ReturnStats {
    long long visits = 0;  // total visits to the target
    std::vector<long long> gaps;
    double mean_gap = 0.0;
    long long max_gap = 0;
};

inline ReturnStats return_times(const Trajectory& tr, int target) {
    ReturnStats st;
    long long last = -1;
    for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
        if (tr.nodes[i] != target) continue;
        ++st.visits;
        if (last >= 0) st.gaps.push_back(static_cast<long long>(i) - last);
        last = static_cast<long long>(i);
    }
    if (st.gaps.empty())
        fail(Errc::NeverReturned, "walk visited node " + std::to_string(target) +
                                      (st.visits == 0 ? " zero times" : " only once"));
    double s = 0.0;
    for (long long gap : st.gaps) {
        s += static_cast<double>(gap);
        st.max_gap = std::max(st.max_gap, gap);
    }
    st.mean_gap = s / static_cast<double>(st.gaps.size());
    return st;
}

}  // namespace walklab
