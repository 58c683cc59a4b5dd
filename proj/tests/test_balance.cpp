#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "walklab/balance.hpp"

using namespace walklab;

TEST_CASE("out-minus-in weight gap is gamma times the degree gap") {
    // independent closed form: for wedge (a, b, c) the out-weight sum over
    // (a, b) exceeds the in-weight sum by gamma * (deg(b) - deg(a)), because
    // the flat and triangle tallies on the two sides coincide
    for (Graph g : {gen::fig3_triangle_arm(), gen::clique4_minus_edge(), gen::petersen(),
                    gen::tree_patch(3, 2).graph}) {
        for (Params p : {Params{1, 2, 3}, Params{2, 1, 1}}) {
            WedgeSpace ws(g);
            auto on_sum = on_weight_sums(ws.edge_space(), p);
            for (int i = 0; i < ws.size(); ++i) {
                const Wedge& w = ws.wedge(i);
                double gap = on_sum[ws.first_edge(i)] - in_weight_sum(ws, p, w);
                CHECK(gap == p.gamma * (g.degree(w.b) - g.degree(w.a)));
            }
        }
    }
}

TEST_CASE("weight comparisons") {
    CHECK(weights_equal(0.3, 0.3, true));
    CHECK_FALSE(weights_equal(0.1 + 0.2, 0.3, true));  // exact mode sees the ulp
    CHECK(weights_equal(0.1 + 0.2, 0.3, false));
    CHECK_FALSE(weights_equal(1.0, 1.1, false));
}

TEST_CASE("weighted eulerianity holds exactly on regular graphs") {
    for (Graph g : {gen::complete(4), gen::cycle(5), gen::complete_bipartite(3, 3),
                    gen::petersen(), gen::triangular_torus(3, 3)}) {
        REQUIRE(check_regular(g));
        for (Params p : {Params{1, 2, 3}, Params{0, 1, 2}, Params{0.5, 1.25, 2.5}}) {
            auto r = check_eulerianity(WedgeSpace(g), p);
            CHECK(r.holds);
            CHECK(r.max_violation == 0.0);
            CHECK_FALSE(r.witness.has_value());
        }
    }
}

TEST_CASE("weighted eulerianity fails on irregular graphs with a degree-gap witness") {
    Graph fig3 = gen::fig3_triangle_arm();
    auto r = check_eulerianity(WedgeSpace(fig3), Params{1, 2, 3});
    CHECK_FALSE(r.holds);
    CHECK(r.max_violation == 6.0);  // gamma * (deg 3 - deg 1) across edge {2,3}
    REQUIRE(r.witness.has_value());
    bool across_leaf_edge = (r.witness->a == 2 && r.witness->b == 3) ||
                            (r.witness->a == 3 && r.witness->b == 2);
    CHECK(across_leaf_edge);

    Graph c4m = gen::clique4_minus_edge();
    auto r2 = check_eulerianity(WedgeSpace(c4m), Params{1, 2, 3});
    CHECK_FALSE(r2.holds);
    CHECK(r2.max_violation == 3.0);

    CHECK(thrown_code([] {
        check_regular(Graph::from_edges(4, {{0, 1}, {2, 3}}));
    }) == Errc::Disconnected);
}

TEST_CASE("eulerianity is equivalent to regularity across a mixed sweep") {
    std::vector<Graph> sweep = {gen::complete(4),   gen::complete(5),
                                gen::cycle(6),      gen::path(4),
                                gen::petersen(),    gen::fig3_triangle_arm(),
                                gen::clique4_minus_edge(), gen::complete_bipartite(2, 3),
                                gen::complete_bipartite(3, 3), gen::tree_patch(3, 2).graph,
                                gen::triangular_patch(1).graph};
    for (const Graph& g : sweep)
        for (Params p : {Params{1, 1, 1}, Params{1, 2, 3}, Params{2, 1, 1}})
            CHECK(check_eulerianity(WedgeSpace(g), p).holds == check_regular(g));
}

TEST_CASE("edge detailed balance outcomes") {
    Params p{1, 2, 3};
    // degenerate simple-walk weights satisfy balance on any graph
    for (Graph g : {gen::complete(4), gen::clique4_minus_edge(), gen::fig3_triangle_arm(),
                    gen::triangular_patch(2).graph}) {
        WedgeSpace ws(g);
        Kernel ek = build_edge_kernel(ws.edge_space(), Params{1, 1, 1});
        Measure pi = stationary(ek);
        CHECK(check_edb(ws, ek, pi) < 1e-12);
    }
    // with distinct weights some graphs keep it and some lose it
    for (Graph g : {gen::fig3_triangle_arm(), gen::path(4), gen::tree_patch(3, 2).graph}) {
        WedgeSpace ws(g);
        Kernel ek = build_edge_kernel(ws.edge_space(), p);
        Measure pi = stationary(ek);
        CHECK(check_edb(ws, ek, pi) < 1e-12);
        CHECK(check_reversal_symmetry(ws.edge_space(), pi) < 1e-12);
    }
    {
        Graph g = gen::triangular_patch(2).graph;
        WedgeSpace ws(g);
        Kernel ek = build_edge_kernel(ws.edge_space(), p);
        Measure pi = stationary(ek);
        CHECK(check_edb(ws, ek, pi) > 1e-5);
    }
}

TEST_CASE("wedge detailed balance follows the edge-level verdicts") {
    Params p{1, 2, 3};
    for (Graph g : {gen::fig3_triangle_arm(), gen::complete(4), gen::cycle(5)}) {
        WedgeSpace ws(g);
        Kernel wk = build_wedge_kernel(ws, p);
        Measure pi_hat = stationary(wk);
        CHECK(check_wdb(ws, wk, pi_hat) < 1e-12);
        CHECK(check_reversal_symmetry(ws, pi_hat) < 1e-12);
    }
    Graph bad = gen::triangular_patch(2).graph;
    WedgeSpace ws(bad);
    Kernel wk = build_wedge_kernel(ws, p);
    Measure pi_hat = stationary(wk);
    CHECK(check_wdb(ws, wk, pi_hat) > 1e-6);

    Measure wrong{StateSpace::EdgeSpace, std::vector<double>(ws.size(), 1.0 / ws.size())};
    CHECK(thrown_code([&] { check_wdb(ws, wk, wrong); }) == Errc::InvalidSize);
    CHECK(thrown_code([&] {
        check_reversal_symmetry(ws.edge_space(), wrong);
    }) == Errc::InvalidSize);
}

TEST_CASE("a worked wedge balance pair on the lopsided clique") {
    Graph g = gen::clique4_minus_edge();
    WedgeSpace ws(g);
    Params p{1, 2, 3};
    Kernel wk = build_wedge_kernel(ws, p);
    Measure pi_hat = stationary(wk);

    int open_in = ws.index(0, 1, 2);    // (0,1,2) -> (1,2,1) closes with a backtrack
    int flat_mid = ws.index(1, 2, 1);
    double lhs = pi_hat.values[open_in] * wk.prob(open_in, flat_mid);
    double rhs = pi_hat.values[flat_mid] *
                 wk.prob(ws.reverse(flat_mid), ws.reverse(open_in));
    CHECK(std::abs(lhs - 1.0 / 58.0) < 1e-14);
    CHECK(std::abs(rhs - 1.0 / 58.0) < 1e-14);
    CHECK(std::abs(pi_hat.values[flat_mid] * wk.prob(ws.reverse(flat_mid), ws.index(2, 1, 0)) -
                   1.0 / 58.0) < 1e-14);
}

TEST_CASE("wedge factorization identity holds on every graph") {
    for (Graph g : {gen::fig3_triangle_arm(), gen::clique4_minus_edge(), gen::complete(4),
                    gen::petersen(), gen::triangular_patch(2).graph}) {
        auto exact = check_wedgefact(WedgeSpace(g), Params{1, 2, 3});
        CHECK(exact.holds);
        CHECK(exact.max_violation == 0.0);
        auto fuzzy = check_wedgefact(WedgeSpace(g), Params{0.5, 1.25, 2.5});
        CHECK(fuzzy.holds);
    }
}

TEST_CASE("detailed balance hands off to invariance") {
    Graph g = gen::fig3_triangle_arm();
    WedgeSpace ws(g);
    Params p{1, 2, 3};
    Kernel ek = build_edge_kernel(ws.edge_space(), p);
    Measure pi = stationary(ek);
    CHECK(edb_implies_invariance(ws, ek, pi) < 1e-10);

    Measure skewed = pi;
    skewed.values[0] += 0.01;
    skewed.values[1] -= 0.01;
    CHECK(thrown_code([&] { edb_implies_invariance(ws, ek, skewed); }) ==
          Errc::PreconditionFailed);

    Graph bad = gen::triangular_patch(2).graph;
    WedgeSpace wsb(bad);
    Kernel ekb = build_edge_kernel(wsb.edge_space(), p);
    Measure pib = stationary(ekb);
    CHECK(thrown_code([&] { edb_implies_invariance(wsb, ekb, pib); }) ==
          Errc::PreconditionFailed);
}

TEST_CASE("product measure reconstructs the stationary wedge law") {
    for (Graph g : {gen::clique4_minus_edge(), gen::fig3_triangle_arm()}) {
        WedgeSpace ws(g);
        Params p{1, 2, 3};
        Kernel ek = build_edge_kernel(ws.edge_space(), p);
        Kernel wk = build_wedge_kernel(ws, p);
        Measure pi_edge = stationary(ek);
        Measure built = product_wedge_measure(ws, ek, pi_edge);
        CHECK(std::abs(built.total() - 1.0) < 1e-12);

        Measure pi_hat = stationary(wk);
        for (int i = 0; i < ws.size(); ++i)
            CHECK(std::abs(built.values[i] - pi_hat.values[i]) < 1e-12);
    }
}

TEST_CASE("cycle products are an alpha-zero criterion") {
    Graph k4 = gen::complete(4);
    WedgeSpace ws(k4);
    CHECK(thrown_code([&] { check_cycle_condition(ws, Params{1, 1, 1}); }) ==
          Errc::PreconditionFailed);
}

TEST_CASE("cycle products balance exactly where reversal symmetry holds") {
    struct Case {
        Graph g;
        long long cycles;
    };
    std::vector<Case> good = {{gen::clique4_minus_edge(), 6},
                              {gen::complete(4), 20},
                              {gen::complete_bipartite(3, 3), 30},
                              {gen::triangular_patch(1).graph, 206}};
    Params p{0, 1, 2};
    for (const auto& c : good) {
        WedgeSpace ws(c.g);
        auto r = check_cycle_condition(ws, p);
        CHECK(r.holds);
        CHECK(r.cycles_checked == c.cycles);
        CHECK(r.max_violation == 0.0);
        Measure pi = stationary(build_edge_kernel(ws.edge_space(), p));
        CHECK(check_reversal_symmetry(ws.edge_space(), pi) < 1e-10);
    }
}

TEST_CASE("cycle products and reversal symmetry fail together") {
    Graph g = gen::triangular_patch(2).graph;
    WedgeSpace ws(g);
    Params p{0, 1, 2};
    auto r = check_cycle_condition(ws, p);
    CHECK_FALSE(r.holds);
    CHECK(r.cycles_checked == 5600);
    CHECK(r.max_violation > 1e4);
    REQUIRE_FALSE(r.worst_cycle.empty());

    // the recorded worst cycle really is a closed backtrack-free edge walk
    const EdgeSpace& es = ws.edge_space();
    for (std::size_t i = 0; i < r.worst_cycle.size(); ++i) {
        DirectedEdge cur = es.edge(r.worst_cycle[i]);
        DirectedEdge nxt = es.edge(r.worst_cycle[(i + 1) % r.worst_cycle.size()]);
        CHECK(cur.head == nxt.tail);
        CHECK(nxt.head != cur.tail);
    }

    Measure pi = stationary(build_edge_kernel(es, p));
    CHECK(check_reversal_symmetry(es, pi) > 1e-4);

    CHECK(thrown_code([&] { check_cycle_condition(ws, p, 8, 100); }) == Errc::BudgetExceeded);
}
