// walklab — build node2vec-style biased walks as edge/wedge Markov chains,
// solve for their stationary measures and verify the structural identities
// (Eulerianity, detailed balance, bistochasticity, collapsed reversibility).

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>

#include "walklab/report.hpp"

using namespace walklab;

namespace {

Graph load_graph(const std::string& path) {
    if (path == "-") return load_edge_list(std::cin);
    std::ifstream in(path);
    if (!in) fail(Errc::IoError, "cannot open '" + path + "'");
    return load_edge_list(in);
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) fail(Errc::IoError, "cannot open '" + path + "' for writing");
    out << body;
}

struct GenArgs {
    std::string family;
    std::vector<int> sizes;
    int rows = 0, cols = 0;
    double p = 0.3;
    std::uint64_t seed = 1;
    std::string out = "-";
};

Graph build_family(GenArgs a) {
    if (a.rows > 0) a.sizes.push_back(a.rows);
    if (a.cols > 0) a.sizes.push_back(a.cols);
    auto need = [&](std::size_t k) {
        if (a.sizes.size() != k)
            fail(Errc::Malformed, "family '" + a.family + "' takes " + std::to_string(k) +
                                      " size argument(s)");
    };
    if (a.family == "complete") { need(1); return gen::complete(a.sizes[0]); }
    if (a.family == "cycle") { need(1); return gen::cycle(a.sizes[0]); }
    if (a.family == "path") { need(1); return gen::path(a.sizes[0]); }
    if (a.family == "complete-bipartite") {
        need(2);
        return gen::complete_bipartite(a.sizes[0], a.sizes[1]);
    }
    if (a.family == "circulant") {
        if (a.sizes.size() < 2)
            fail(Errc::Malformed, "circulant takes n followed by at least one offset");
        return gen::circulant(a.sizes[0], {a.sizes.begin() + 1, a.sizes.end()});
    }
    if (a.family == "petersen") { need(0); return gen::petersen(); }
    if (a.family == "tri-torus") { need(2); return gen::triangular_torus(a.sizes[0], a.sizes[1]); }
    if (a.family == "fig3") { need(0); return gen::fig3_triangle_arm(); }
    if (a.family == "clique4-minus-edge") { need(0); return gen::clique4_minus_edge(); }
    if (a.family == "er") { need(1); return gen::erdos_renyi(a.sizes[0], a.p, a.seed); }
    if (a.family == "tri-patch") { need(1); return gen::triangular_patch(a.sizes[0]).graph; }
    if (a.family == "tree3") { need(1); return gen::tree_patch(3, a.sizes[0]).graph; }
    fail(Errc::Malformed, "unknown family '" + a.family + "'");
}

std::vector<int> parse_radii(const std::string& spec) {
    auto dots = spec.find("..");
    std::vector<int> out;
    if (dots == std::string::npos) {
        out.push_back(std::stoi(spec));
        return out;
    }
    int lo = std::stoi(spec.substr(0, dots));
    int hi = std::stoi(spec.substr(dots + 2));
    if (lo > hi) fail(Errc::Malformed, "radius range '" + spec + "' is empty");
    for (int r = lo; r <= hi; ++r) out.push_back(r);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-order walk laboratory"};
    app.require_subcommand(1);

    GenArgs ga;
    auto* sc_gen = app.add_subcommand("gen", "emit an edge list for a named graph family");
    sc_gen->add_option("family", ga.family,
                       "complete|cycle|path|circulant|complete-bipartite|petersen|tri-torus|"
                       "fig3|clique4-minus-edge|er|tri-patch|tree3")
        ->required();
    sc_gen->add_option("sizes", ga.sizes, "size arguments (family dependent)");
    sc_gen->add_option("--rows", ga.rows, "alias for the first size argument (tri-torus)");
    sc_gen->add_option("--cols", ga.cols, "alias for the second size argument (tri-torus)");
    sc_gen->add_option("--p", ga.p, "edge probability (er only)");
    sc_gen->add_option("--seed", ga.seed, "RNG seed (er only)");
    sc_gen->add_option("-o,--out", ga.out, "output path ('-' = stdout)");

    std::string an_graph, an_out, an_method = "direct", an_dump;
    AnalysisOptions aopt;
    auto* sc_an = app.add_subcommand("analyze", "verify the chain structure for one graph");
    sc_an->add_option("graph", an_graph, "edge list path ('-' = stdin)")->required();
    sc_an->add_option("--alpha", aopt.params.alpha, "backtrack weight")->capture_default_str();
    sc_an->add_option("--beta", aopt.params.beta, "triangle-move weight")->capture_default_str();
    sc_an->add_option("--gamma", aopt.params.gamma, "outward-move weight")->capture_default_str();
    sc_an->add_option("--tol", aopt.tol, "verdict tolerance")->capture_default_str();
    sc_an->add_option("--method", an_method, "stationary solver: direct|power")
        ->check(CLI::IsMember({"direct", "power"}))
        ->capture_default_str();
    sc_an->add_option("--max-cycle-len", aopt.max_cycle_len,
                      "cycle-condition length cap (alpha = 0)")
        ->capture_default_str();
    sc_an->add_flag("--recurrence-lab", aopt.recurrence_lab,
                    "also build the conditioned / collapsed chains");
    sc_an->add_option("--r-cap", aopt.r_cap, "alpha = 0 turnaround search radius (0 = diameter)");
    sc_an->add_option("-o,--out", an_out, "report path ('-' = stdout)");
    sc_an->add_option("--dump-kernels", an_dump, "also write the kernel entries to this path");

    std::string sim_graph, sim_start, sim_out, sim_summary;
    Params sim_params;
    long long sim_steps = 100000;
    std::uint64_t sim_seed = 42;
    long long sim_burn = 0;
    auto* sc_sim = app.add_subcommand("simulate", "sample one trajectory of the walk");
    sc_sim->add_option("graph", sim_graph, "edge list path ('-' = stdin)")->required();
    sc_sim->add_option("--alpha", sim_params.alpha)->capture_default_str();
    sc_sim->add_option("--beta", sim_params.beta)->capture_default_str();
    sc_sim->add_option("--gamma", sim_params.gamma)->capture_default_str();
    sc_sim->add_option("--start", sim_start, "initial directed edge as u,v")->required();
    sc_sim->add_option("--steps", sim_steps, "number of transitions")->capture_default_str();
    sc_sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    sc_sim->add_option("--burn-in", sim_burn, "occupation burn-in (summary only)")
        ->capture_default_str();
    sc_sim->add_option("-o,--out", sim_out, "trajectory path ('-' = stdout)");
    sc_sim->add_option("--summary", sim_summary, "occupation summary JSON path");

    std::string rec_family = "triangular", rec_radii = "2..5", rec_out;
    Params rec_params;
    auto* sc_rec = app.add_subcommand("recurrence",
                                      "effective-resistance growth on expanding patches");
    sc_rec->add_option("--family", rec_family, "triangular|tree3")
        ->check(CLI::IsMember({"triangular", "tree3"}))
        ->capture_default_str();
    sc_rec->add_option("--radii", rec_radii, "radius range lo..hi")->capture_default_str();
    sc_rec->add_option("--alpha", rec_params.alpha)->capture_default_str();
    sc_rec->add_option("--beta", rec_params.beta)->capture_default_str();
    sc_rec->add_option("--gamma", rec_params.gamma)->capture_default_str();
    sc_rec->add_option("-o,--out", rec_out, "CSV path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // usage errors land on the IO/usage exit code
    }

    try {
        if (sc_gen->parsed()) {
            Graph g = build_family(ga);
            std::ostringstream os;
            save_edge_list(g, os);
            write_text(ga.out, os.str());
            return 0;
        }
        if (sc_an->parsed()) {
            aopt.method = an_method == "power" ? SolveMethod::Power : SolveMethod::Direct;
            Graph g = load_graph(an_graph);
            json rep = analyze_graph(g, aopt);
            write_text(an_out, rep.dump(2) + "\n");
            if (!an_dump.empty()) {
                WedgeSpace ws(g);
                json dump;
                dump["edge"] = kernel_dump(ws, build_edge_kernel(ws.edge_space(), aopt.params),
                                           aopt.params);
                dump["wedge"] = kernel_dump(ws, build_wedge_kernel(ws, aopt.params), aopt.params);
                write_text(an_dump, dump.dump(2) + "\n");
            }
            return rep["all_checks_pass"].get<bool>() ? 0 : 1;
        }
        if (sc_sim->parsed()) {
            Graph g = load_graph(sim_graph);
            auto comma = sim_start.find(',');
            if (comma == std::string::npos)
                fail(Errc::Malformed, "--start expects u,v");
            long long su = std::stoll(sim_start.substr(0, comma));
            long long sv = std::stoll(sim_start.substr(comma + 1));
            // --start speaks node labels, like the trajectory output does.
            auto node_of = [&g](long long lab) {
                const auto& ls = g.labels();
                auto it = std::find(ls.begin(), ls.end(), lab);
                if (it == ls.end())
                    fail(Errc::UnknownState,
                         "no node labeled " + std::to_string(lab));
                return static_cast<int>(it - ls.begin());
            };
            Trajectory tr = walk(g, sim_params, {node_of(su), node_of(sv)},
                                 sim_steps, sim_seed);
            json header = {{"start", {su, sv}},
                           {"steps", sim_steps},
                           {"seed", sim_seed},
                           {"params",
                            {{"alpha", sim_params.alpha},
                             {"beta", sim_params.beta},
                             {"gamma", sim_params.gamma}}}};
            std::ostringstream os;
            os << header.dump() << '\n';
            for (int v : tr.nodes) os << g.label(v) << '\n';
            write_text(sim_out, os.str());
            if (!sim_summary.empty()) {
                WedgeSpace ws(g);
                Occupation occ = occupation(ws, tr, sim_burn);
                json s;
                s["burn_in"] = sim_burn;
                s["node_occupation"] = occ.nodes;
                s["edge_occupation"] = occ.edges.values;
                s["wedge_occupation"] = occ.wedges.values;
                write_text(sim_summary, s.dump(2) + "\n");
            }
            return 0;
        }
        if (sc_rec->parsed()) {
            LatticeFamily fam =
                rec_family == "tree3" ? LatticeFamily::Tree3 : LatticeFamily::Triangular;
            auto radii = parse_radii(rec_radii);
            std::vector<GrowthRow> rows;
            for (int r : radii) rows.push_back(growth_row(fam, r, rec_params));
            write_text(rec_out, growth_table_csv(rows));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "walklab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "walklab: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
