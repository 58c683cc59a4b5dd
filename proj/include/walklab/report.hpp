#pragma once

#include <chrono>
#include <json.hpp>

#include "walklab/recurrence.hpp"
#include "walklab/simulate.hpp"

namespace walklab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

using json = nlohmann::json;

inline json residual_entry(double value, double tol) {
    return json{{"value", value}, {"tol", tol}};
}

/// Debug dump of a kernel: state labels, sparse rows and the weight-sum
/// audit trail behind every denominator.
inline json kernel_dump(const WedgeSpace& ws, const Kernel& k, const Params& p) {
    const EdgeSpace& es = ws.edge_space();
    json dump;
    dump["space"] = space_name(k.space());
    dump["dim"] = k.dim();
    json states = json::array();
    if (k.space() == StateSpace::EdgeSpace) {
        for (int i = 0; i < es.size(); ++i)
            states.push_back({es.edge(i).tail, es.edge(i).head});
    } else if (k.space() == StateSpace::WedgeSpace) {
        for (int i = 0; i < ws.size(); ++i) {
            const Wedge& w = ws.wedge(i);
            states.push_back({w.a, w.b, w.c});
        }
    }
    dump["states"] = std::move(states);
    json denom = json::array();
    for (int i = 0; i < es.size(); ++i) {
        auto t = out_wedge_tally(ws.graph(), es.edge(i));
        denom.push_back({{"edge", {es.edge(i).tail, es.edge(i).head}},
                         {"flat", t.flat},
                         {"triangle", t.triangle},
                         {"open", t.open},
                         {"weight_sum", tally_weight(t, p)}});
    }
    dump["denominators"] = std::move(denom);
    json rows = json::array();
    for (int i = 0; i < k.dim(); ++i) {
        json row = json::array();
        for (const auto& [j, prob] : k.row(i)) row.push_back({{"to", j}, {"p", prob}});
        rows.push_back(std::move(row));
    }
    dump["rows"] = std::move(rows);
    return dump;
}

struct AnalysisOptions {
    Params params;
    double tol = 1e-10;
    SolveMethod method = SolveMethod::Direct;
    bool recurrence_lab = false;
    int max_cycle_len = 8;
    int r_cap = 0;  // alpha = 0 ball radius; 0 means graph diameter
};

/// Everything the analyze command verifies for one graph, plus the list of
/// structural checks whose failure flips the exit code.
inline json analyze_graph(const Graph& g, const AnalysisOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    validate(opt.params);
    if (!g.is_connected()) fail(Errc::Disconnected, "analysis expects a connected graph");
    const Params& p = opt.params;
    double tol = opt.tol;

    WedgeSpace ws(g);
    const EdgeSpace& es = ws.edge_space();
    auto kinds = ws.kind_counts();

    json rep;
    rep["schema_version"] = kReportSchemaVersion;
    rep["tool"] = {{"name", "walklab"}, {"version", kToolVersion}};
    rep["params"] = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
    rep["tolerances"] = {{"verdict", tol}, {"construction", Kernel::kRowSumTol}};
    {
        json labels = json::array();
        for (long long l : g.labels()) labels.push_back(l);
        rep["graph"] = {{"nodes", g.node_count()},
                        {"edges", g.edge_count()},
                        {"directed_edges", es.size()},
                        {"wedges", ws.size()},
                        {"wedge_kinds",
                         {{"flat", kinds[0]}, {"triangle", kinds[1]}, {"open", kinds[2]}}},
                        {"min_degree", g.min_degree()},
                        {"max_degree", g.max_degree()},
                        {"regular", g.is_regular()},
                        {"labels", std::move(labels)}};
    }

    std::vector<std::pair<std::string, bool>> checks;
    auto record = [&checks](const std::string& name, bool ok) { checks.emplace_back(name, ok); };

    // Ergodicity.
    ErgodicityVerdict erg = check_ergodicity(g, p);
    rep["ergodicity"] = {{"case", case_name(erg.regime)},
                         {"outside_hypotheses", erg.outside_hypotheses},
                         {"predicts_irreducible", erg.predicts_irreducible},
                         {"predicts_aperiodic", erg.predicts_aperiodic},
                         {"agrees", erg.agrees}};
    if (!erg.triangle.empty()) rep["ergodicity"]["triangle"] = erg.triangle;
    if (erg.irreducible) rep["ergodicity"]["irreducible"] = *erg.irreducible;
    if (erg.measured_period) rep["ergodicity"]["period"] = *erg.measured_period;
    record("ergodicity_prediction_agrees", erg.agrees);

    // Kernels.
    Kernel ke = build_edge_kernel(es, p);
    Kernel kw = build_wedge_kernel(ws, p);
    auto bist_e = is_bistochastic(ke, tol);
    auto bist_w = is_bistochastic(kw, tol);
    rep["bistochastic"] = {
        {"edge",
         {{"holds", bist_e.doubly_stochastic},
          {"max_column_deviation", residual_entry(bist_e.max_column_deviation, tol)}}},
        {"wedge",
         {{"holds", bist_w.doubly_stochastic},
          {"max_column_deviation", residual_entry(bist_w.max_column_deviation, tol)}}}};
    if (p.beta == p.gamma)
        record("beta_eq_gamma_implies_bistochastic", bist_e.doubly_stochastic);

    // Balance facts that need no stationary measure.
    EulerianityResult euler = check_eulerianity(ws, p);
    bool regular = g.is_regular();
    rep["balance"]["eulerian"] = {{"holds", euler.holds},
                                  {"max_violation", euler.max_violation}};
    if (euler.witness)
        rep["balance"]["eulerian"]["witness"] = {euler.witness->a, euler.witness->b,
                                                 euler.witness->c};
    rep["balance"]["regular"] = regular;
    record("eulerian_iff_regular", euler.holds == regular);
    WedgeFactResult wf = check_wedgefact(ws, p);
    rep["balance"]["wedge_factorization"] = {{"holds", wf.holds},
                                             {"max_violation", wf.max_violation}};
    record("wedge_factorization", wf.holds);
    if (p.alpha == 0.0) {
        CycleConditionResult cyc = check_cycle_condition(ws, p, opt.max_cycle_len);
        rep["balance"]["cycle_condition"] = {{"holds", cyc.holds},
                                             {"cycles_checked", cyc.cycles_checked},
                                             {"max_len", cyc.max_len},
                                             {"max_violation", cyc.max_violation}};
    }

    // Stationary measures (when the chains are irreducible).
    StationaryOptions sopt;
    sopt.method = opt.method;
    bool edge_irreducible = is_irreducible(ke);
    bool wedge_irreducible = is_irreducible(kw);
    rep["stationary"]["edge_irreducible"] = edge_irreducible;
    rep["stationary"]["wedge_irreducible"] = wedge_irreducible;
    if (edge_irreducible && wedge_irreducible) {
        Measure pi_edge = stationary(ke, sopt);
        Measure pi_hat = stationary(kw, sopt);
        rep["stationary"]["method"] = opt.method == SolveMethod::Direct ? "direct" : "power";
        rep["stationary"]["edge"] = pi_edge.values;
        rep["stationary"]["wedge"] = pi_hat.values;
        rep["stationary"]["node"] = pullback_to_nodes(ws, pi_hat);
        {
            json edge_states = json::array();
            for (int i = 0; i < es.size(); ++i)
                edge_states.push_back({es.edge(i).tail, es.edge(i).head});
            json wedge_states = json::array();
            for (int i = 0; i < ws.size(); ++i)
                wedge_states.push_back({ws.wedge(i).a, ws.wedge(i).b, ws.wedge(i).c});
            rep["stationary"]["state_labels"] = {{"edge", std::move(edge_states)},
                                                 {"wedge", std::move(wedge_states)}};
        }

        double inv = verify_simplified_invariance(ws, p, pi_hat);
        rep["stationary"]["simplified_invariance_residual"] = residual_entry(inv, tol);
        record("simplified_invariance", inv <= tol);

        Measure pulled = pullback_to_edges(ws, pi_hat);
        double pull_gap = tv_distance(pulled, pi_edge);
        double product = verify_edge_wedge_product(ws, ke, pi_edge, pi_hat);
        rep["stationary"]["edge_pullback_tv"] = residual_entry(pull_gap, tol);
        rep["stationary"]["edge_wedge_product_residual"] = residual_entry(product, tol);
        record("wedge_measure_pulls_back_to_edge_measure", pull_gap <= tol);
        record("edge_wedge_product_rule", product <= tol);

        double edb = check_edb(ws, ke, pi_edge);
        double wdb = check_wdb(ws, kw, pi_hat);
        double rev_e = check_reversal_symmetry(es, pi_edge);
        double rev_w = check_reversal_symmetry(ws, pi_hat);
        rep["balance"]["edb_residual"] = residual_entry(edb, tol);
        rep["balance"]["wdb_residual"] = residual_entry(wdb, tol);
        rep["balance"]["edge_reversal_residual"] = residual_entry(rev_e, tol);
        rep["balance"]["wedge_reversal_residual"] = residual_entry(rev_w, tol);

        if (regular) {
            // Closed form on regular graphs: wedge mass is lambda / Z.
            double z = 0.0;
            for (int i = 0; i < ws.size(); ++i) z += lambda(p, ws.wedge(i).kind);
            double gap = 0.0;
            for (int i = 0; i < ws.size(); ++i)
                gap = std::max(gap,
                               std::abs(pi_hat.values[i] - lambda(p, ws.wedge(i).kind) / z));
            rep["stationary"]["regular_closed_form_residual"] = residual_entry(gap, tol);
            record("regular_closed_form", gap <= tol);
            record("regular_wdb", wdb <= tol);
        }
        if (p.beta == p.gamma) {
            double gap = 0.0;
            for (int i = 0; i < es.size(); ++i)
                gap = std::max(gap, std::abs(pi_edge.values[i] - 1.0 / es.size()));
            rep["stationary"]["uniform_edge_residual"] = residual_entry(gap, tol);
            record("beta_eq_gamma_uniform_edge_measure", gap <= tol);
        }
        if (edb <= tol) {
            record("edb_implies_invariance",
                   edb_implies_invariance(ws, ke, pi_edge, tol) <= tol);
            if (p.alpha > 0.0) record("edb_implies_edge_reversal", rev_e <= tol);
        }
        if (rev_e <= tol) {
            Measure built = product_wedge_measure(ws, ke, pi_edge);
            double built_wdb = check_wdb(ws, kw, built);
            double built_rev = check_reversal_symmetry(ws, built);
            rep["balance"]["constructed_wedge_measure_wdb"] = residual_entry(built_wdb, tol);
            record("reversal_symmetric_edge_measure_gives_wdb", built_wdb <= tol);
            record("constructed_wedge_measure_reversal", built_rev <= tol);
        }
        if (wdb <= tol && p.alpha > 0.0)
            record("wdb_implies_wedge_reversal", rev_w <= tol);

        if (opt.recurrence_lab) {
            AuxChain aux = build_aux_chain(es, p, opt.r_cap);
            json lab;
            lab["mode"] = aux.mode == AuxChain::Mode::AlphaPositive ? "alpha-positive"
                                                                    : "alpha-zero-averaged";
            lab["p"] = aux.p;
            double rev_res = reversibility_residual(aux.collapsed.kbar, aux.collapsed.pi_bar);
            lab["collapsed_reversibility_residual"] = residual_entry(rev_res, tol);
            lab["collapsed_row_sum_error"] = residual_entry(aux.collapsed.max_row_sum_error, tol);
            double nstep = verify_nstep_directed_balance(es, ke, pi_edge, 3);
            lab["nstep_directed_balance_residual"] = residual_entry(nstep, tol);
            record("collapsed_rows_stochastic", aux.collapsed.max_row_sum_error <= tol);
            if (aux.mode == AuxChain::Mode::AlphaZero) {
                lab["turnaround_m"] = aux.alpha_zero_m;
                double min_rev = min_reversal_prob(es, aux.base);
                lab["min_averaged_reversal"] = min_rev;
                record("averaged_reversal_floor", min_rev >= 2.0 * aux.p);
            }
            if (edb <= tol) {
                record("collapsed_chain_reversible", rev_res <= tol);
                record("nstep_directed_balance", nstep <= tol);
            }
            rep["recurrence_lab"] = std::move(lab);
        }
    }

    json checks_json = json::array();
    bool all_ok = true;
    for (const auto& [name, ok] : checks) {
        checks_json.push_back({{"name", name}, {"holds", ok}});
        all_ok = all_ok && ok;
    }
    rep["checks"] = std::move(checks_json);
    rep["all_checks_pass"] = all_ok;
    auto t1 = std::chrono::steady_clock::now();
    rep["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return rep;
}

inline json growth_table_json(LatticeFamily family, const std::vector<GrowthRow>& rows,
                              const Params& p) {
    json out;
    out["family"] = family_name(family);
    out["params"] = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"radius", r.radius},
                       {"nodes", r.nodes},
                       {"r_srw", r.r_srw},
                       {"r_kbar", r.r_kbar},
                       {"ratio", r.ratio},
                       {"kbar_asymmetry", r.kbar_asymmetry}});
    out["rows"] = std::move(arr);
    return out;
}

inline std::string growth_table_csv(const std::vector<GrowthRow>& rows) {
    std::ostringstream os;
    os << "size,R_srw,R_kbar,ratio\n";
    os.precision(12);
    for (const auto& r : rows)
        os << r.nodes << ',' << r.r_srw << ',' << r.r_kbar << ',' << r.ratio << '\n';
    return os.str();
}

}  // namespace walklab
