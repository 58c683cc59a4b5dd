#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "walklab/ergodicity.hpp"

using namespace walklab;

namespace {

using Rows = std::vector<std::vector<std::pair<int, double>>>;

// Reference period of state 0: gcd of the lengths (up to max_len) of closed
// walks through it, read off boolean powers of the support matrix.
long long closed_walk_gcd(const Kernel& k, int max_len = 12) {
    int n = k.dim();
    std::vector<char> adj(static_cast<std::size_t>(n) * n, 0), cur, next;
    for (int i = 0; i < n; ++i)
        for (const auto& [j, p] : k.row(i)) adj[static_cast<std::size_t>(i) * n + j] = (p > 0.0);
    cur = adj;
    long long g = 0;
    for (int len = 1; len <= max_len; ++len) {
        if (cur[0]) g = std::gcd(g, static_cast<long long>(len));
        if (len == max_len) break;
        next.assign(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < n; ++t)
                if (cur[static_cast<std::size_t>(i) * n + t])
                    for (const auto& [j, p] : k.row(t)) {
                        (void)p;
                        next[static_cast<std::size_t>(i) * n + j] = 1;
                    }
        cur.swap(next);
    }
    return g;
}

// Reference irreducibility: transitive closure of the support digraph.
bool closure_irreducible(const Kernel& k) {
    int n = k.dim();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        reach[i][i] = 1;
        for (const auto& [j, p] : k.row(i)) reach[i][j] = (p > 0.0);
    }
    for (int t = 0; t < n; ++t)
        for (int i = 0; i < n; ++i)
            if (reach[i][t])
                for (int j = 0; j < n; ++j)
                    if (reach[t][j]) reach[i][j] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    return true;
}

}  // namespace

TEST_CASE("strongly connected components") {
    // 0 <-> 1 -> 2 (absorbing)
    Kernel k = Kernel::from_rows(StateSpace::EdgeSpace,
                                 Rows{{{1, 1.0}}, {{0, 0.5}, {2, 0.5}}, {{2, 1.0}}});
    int count = 0;
    auto comp = strongly_connected_components(k, &count);
    CHECK(count == 2);
    CHECK(comp[0] == comp[1]);
    CHECK(comp[1] != comp[2]);
    CHECK(comp[1] > comp[2]);  // successor components finish first
    CHECK_FALSE(is_irreducible(k));
}

TEST_CASE("irreducibility agrees with a transitive-closure oracle") {
    struct Case {
        Graph g;
        Params p;
    };
    std::vector<Case> cases = {{gen::complete(4), {1, 1, 1}},
                               {gen::cycle(6), {0, 1, 1}},
                               {gen::path(4), {1, 2, 3}},
                               {gen::clique4_minus_edge(), {0, 1, 2}},
                               {gen::cycle(4), {0, 1, 1}}};
    for (const auto& c : cases) {
        Kernel ek = build_edge_kernel(EdgeSpace(c.g), c.p);
        CHECK(is_irreducible(ek) == closure_irreducible(ek));
        Kernel wk = build_wedge_kernel(WedgeSpace(c.g), c.p);
        CHECK(is_irreducible(wk) == closure_irreducible(wk));
    }
    // the alpha = 0 chain on a cycle cannot turn around
    Graph c6 = gen::cycle(6);
    Kernel oneway = build_edge_kernel(EdgeSpace(c6), Params{0, 1, 1});
    CHECK_FALSE(is_irreducible(oneway));
    CHECK(thrown_code([&] { period(oneway); }) == Errc::NotIrreducible);
}

TEST_CASE("kernel periods") {
    struct Case {
        Graph g;
        int expect;
    };
    std::vector<Case> cases = {{gen::cycle(4), 2},
                               {gen::complete_bipartite(3, 3), 2},
                               {gen::cycle(5), 1},
                               {gen::complete(4), 1},
                               {gen::petersen(), 1}};
    for (const auto& c : cases) {
        Kernel wk = build_wedge_kernel(WedgeSpace(c.g), Params{1, 1, 1});
        CHECK(period(wk) == c.expect);
        CHECK(closed_walk_gcd(wk) == c.expect);
    }
}

TEST_CASE("component period needs one strongly connected piece") {
    // two disjoint 2-cycles: 0 <-> 1, 2 <-> 3
    Kernel k = Kernel::from_rows(
        StateSpace::EdgeSpace, Rows{{{1, 1.0}}, {{0, 1.0}}, {{3, 1.0}}, {{2, 1.0}}});
    CHECK(component_period(k, {0, 1}) == 2);
    CHECK(component_period(k, {2, 3}) == 2);
    CHECK(thrown_code([&] { component_period(k, {0, 2}); }) == Errc::NotIrreducible);
    CHECK(thrown_code([&] { component_period(k, {}); }) == Errc::InvalidSize);
}

TEST_CASE("ergodicity sufficient conditions: positive backtrack") {
    auto v = check_ergodicity(gen::complete(4), Params{1, 1, 1});
    CHECK(v.regime == ErgodicityVerdict::Case::AlphaPositiveTriangle);
    CHECK(std::string(case_name(v.regime)) == "alpha-positive-triangle");
    CHECK(v.predicts_irreducible);
    CHECK(v.predicts_aperiodic);
    CHECK(v.triangle == std::vector<int>{0, 1, 2});
    CHECK(v.irreducible == true);
    CHECK(v.measured_period == 1);
    CHECK(v.agrees);

    auto c4 = check_ergodicity(gen::cycle(4), Params{1, 1, 1});
    CHECK(c4.regime == ErgodicityVerdict::Case::AlphaPositive);
    CHECK(c4.predicts_irreducible);
    CHECK_FALSE(c4.predicts_aperiodic);  // no triangle, no aperiodicity claim
    CHECK(c4.cycle_graph);
    CHECK(c4.irreducible == true);
    CHECK(c4.measured_period == 2);
    CHECK(c4.agrees);

    auto fig3 = check_ergodicity(gen::fig3_triangle_arm(), Params{1, 2, 3});
    CHECK(fig3.regime == ErgodicityVerdict::Case::AlphaPositiveTriangle);
    CHECK(fig3.degree_one_node == 3);
    CHECK(fig3.irreducible == true);
    CHECK(fig3.measured_period == 1);
    CHECK(fig3.agrees);
}

TEST_CASE("ergodicity sufficient conditions: zero backtrack") {
    auto torus = check_ergodicity(gen::triangular_torus(3, 3), Params{0, 1, 2});
    CHECK(torus.regime == ErgodicityVerdict::Case::AlphaZero);
    CHECK(std::string(case_name(torus.regime)) == "alpha-zero");
    CHECK(torus.predicts_irreducible);
    CHECK_FALSE(torus.predicts_aperiodic);
    CHECK(torus.irreducible == true);
    CHECK(torus.agrees);

    // leaf: outside every hypothesis and the kernel is not even constructible
    auto p4 = check_ergodicity(gen::path(4), Params{0, 1, 2});
    CHECK(p4.regime == ErgodicityVerdict::Case::None);
    CHECK(p4.outside_hypotheses);
    CHECK(p4.degree_one_node == 0);
    CHECK_FALSE(p4.irreducible.has_value());

    // cycles degenerate: measured reducible, no prediction contradicted
    auto c5 = check_ergodicity(gen::cycle(5), Params{0, 1, 2});
    CHECK(c5.regime == ErgodicityVerdict::Case::None);
    CHECK(c5.outside_hypotheses);
    CHECK(c5.cycle_graph);
    CHECK(c5.irreducible == false);
    CHECK_FALSE(c5.measured_period.has_value());
    CHECK(c5.agrees);

    CHECK(thrown_code([] {
        check_ergodicity(Graph::from_edges(4, {{0, 1}, {2, 3}}), Params{1, 1, 1});
    }) == Errc::Disconnected);
}

TEST_CASE("gcd of simple cycle lengths") {
    CHECK(graph_cycle_gcd(gen::complete(4)) == 1);
    CHECK(graph_cycle_gcd(gen::cycle(6)) == 6);
    CHECK(graph_cycle_gcd(gen::complete_bipartite(3, 3)) == 2);
    CHECK(graph_cycle_gcd(gen::petersen()) == 1);
    CHECK(graph_cycle_gcd(gen::path(4)) == 0);
    CHECK(thrown_code([] { graph_cycle_gcd(gen::petersen(), 10); }) == Errc::BudgetExceeded);
}

TEST_CASE("coprime-cycle heuristic tracks measured aperiodicity") {
    for (Graph g : {gen::complete(4), gen::complete_bipartite(3, 3), gen::clique4_minus_edge(),
                    gen::petersen(), gen::triangular_torus(3, 3)}) {
        auto pair = aperiodic_graph_conjecture_check(g);
        CHECK(pair.graph_aperiodic == pair.kernel_aperiodic);
    }
    CHECK(thrown_code([] { aperiodic_graph_conjecture_check(gen::cycle(5)); }) ==
          Errc::NotIrreducible);
}
