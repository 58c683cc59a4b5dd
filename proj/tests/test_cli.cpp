#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

// End-to-end checks for the walklab binary.  Each test shells out to the
// executable named by WALKLAB_CLI_PATH (set by CMake) and inspects exit
// codes and emitted files.  Exit-code contract: 0 = all checks pass,
// 1 = a verifier check failed, 2 = usage or IO error.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string& cli_path() {
    static std::string path = [] {
        if (const char* p = std::getenv("WALKLAB_CLI_PATH")) return std::string(p);
#ifdef WALKLAB_CLI_PATH
        return std::string(WALKLAB_CLI_PATH);
#else
        FAIL("WALKLAB_CLI_PATH not provided");
        return std::string();
#endif
    }();
    return path;
}

const fs::path& work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("walklab_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
    REQUIRE(out.good());
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

RunResult run(const std::string& args) {
    fs::path out_file = work_dir() / "stdout.txt";
    fs::path err_file = work_dir() / "stderr.txt";
    std::string cmd = '"' + cli_path() + "\" " + args + " >" + out_file.string() +
                      " 2>" + err_file.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

// Index of a wedge label [a,b,c] in report["stationary"]["state_labels"]["wedge"].
int wedge_label_index(const json& rep, int a, int b, int c) {
    const json& labels = rep["stationary"]["state_labels"]["wedge"];
    for (int i = 0; i < static_cast<int>(labels.size()); ++i)
        if (labels[i][0] == a && labels[i][1] == b && labels[i][2] == c) return i;
    FAIL("wedge label not found");
    return -1;
}

const char* kLopsidedClique = "0 1\n0 3\n1 2\n1 3\n2 3\n";
const char* kTriangleArm = "0 1\n0 2\n1 2\n2 3\n";

}  // namespace

TEST_CASE("cli gen emits canonical edge lists") {
    fs::path out = work_dir() / "gen_clique.txt";
    RunResult r = run("gen clique4-minus-edge -o " + out.string());
    REQUIRE(r.code == 0);
    CHECK(slurp(out) == kLopsidedClique);

    r = run("gen tri-torus --rows 4 --cols 4");
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 48);  // 16 nodes, 6-regular

    r = run("gen cycle 5");
    REQUIRE(r.code == 0);
    CHECK(r.out == "0 1\n0 4\n1 2\n2 3\n3 4\n");
}

TEST_CASE("cli gen usage errors exit 2") {
    CHECK(run("gen complete").code == 2);         // missing size
    CHECK(run("gen nosuchfamily 4").code == 2);   // unknown family
    CHECK(run("gen").code == 2);                  // missing required positional
}

TEST_CASE("cli analyze reports the lopsided clique structure") {
    fs::path g = work_dir() / "clique.txt";
    fs::path rep_file = work_dir() / "clique_report.json";
    spit(g, kLopsidedClique);

    RunResult r = run("analyze " + g.string() + " -o " + rep_file.string());
    REQUIRE(r.code == 0);
    json rep = json::parse(slurp(rep_file));

    CHECK(rep["schema_version"] == 1);
    CHECK(rep["graph"]["nodes"] == 4);
    CHECK(rep["graph"]["directed_edges"] == 10);
    CHECK(rep["graph"]["wedges"] == 26);
    CHECK(rep["graph"]["wedge_kinds"]["flat"] == 10);
    CHECK(rep["graph"]["wedge_kinds"]["triangle"] == 12);
    CHECK(rep["graph"]["wedge_kinds"]["open"] == 4);
    CHECK(rep["balance"]["eulerian"]["holds"] == false);
    CHECK(rep["balance"]["regular"] == false);
    CHECK(rep["all_checks_pass"] == true);

    // Unit weights: mass 1/20 on wedges pivoting on a degree-2 node inside
    // the clique part, 1/30 elsewhere.
    const json& pi = rep["stationary"]["wedge"];
    CHECK(pi[wedge_label_index(rep, 1, 0, 1)].get<double>() == Catch::Approx(0.05).margin(1e-10));
    CHECK(pi[wedge_label_index(rep, 0, 1, 0)].get<double>() ==
          Catch::Approx(1.0 / 30.0).margin(1e-10));

    const json& node = rep["stationary"]["node"];
    REQUIRE(node.size() == 4);
    double total = 0.0;
    for (const auto& v : node) total += v.get<double>();
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("cli analyze matches the regular closed form on the 4-clique") {
    fs::path g = work_dir() / "k4.txt";
    fs::path rep_file = work_dir() / "k4_report.json";
    REQUIRE(run("gen complete 4 -o " + g.string()).code == 0);

    RunResult r = run("analyze " + g.string() +
                      " --alpha 1 --beta 2 --gamma 3 -o " + rep_file.string());
    REQUIRE(r.code == 0);
    json rep = json::parse(slurp(rep_file));
    CHECK(rep["balance"]["eulerian"]["holds"] == true);
    CHECK(rep["balance"]["regular"] == true);
    CHECK(rep["stationary"]["regular_closed_form_residual"]["value"].get<double>() < 1e-10);
    CHECK(rep["all_checks_pass"] == true);

    // Z = 12*alpha + 24*beta = 60; flat wedges weigh alpha, closed ones beta.
    const json& pi = rep["stationary"]["wedge"];
    CHECK(pi[wedge_label_index(rep, 1, 0, 1)].get<double>() ==
          Catch::Approx(1.0 / 60.0).margin(1e-10));
    CHECK(pi[wedge_label_index(rep, 2, 0, 1)].get<double>() ==
          Catch::Approx(2.0 / 60.0).margin(1e-10));
}

TEST_CASE("cli analyze surfaces edge-kernel bistochasticity") {
    fs::path g = work_dir() / "arm.txt";
    fs::path rep_file = work_dir() / "arm_report.json";
    spit(g, kTriangleArm);

    // beta != gamma: the worst column mass is 8/7 (deviation 1/7), but no
    // structural check fails, so the exit code stays 0.
    RunResult r = run("analyze " + g.string() +
                      " --alpha 1 --beta 2 --gamma 3 -o " + rep_file.string());
    REQUIRE(r.code == 0);
    json rep = json::parse(slurp(rep_file));
    CHECK(rep["bistochastic"]["edge"]["holds"] == false);
    CHECK(rep["bistochastic"]["edge"]["max_column_deviation"]["value"].get<double>() ==
          Catch::Approx(1.0 / 7.0).margin(1e-9));

    // beta == gamma forces bistochasticity and the uniform edge measure.
    r = run("analyze " + g.string() +
            " --alpha 1 --beta 3 --gamma 3 -o " + rep_file.string());
    REQUIRE(r.code == 0);
    rep = json::parse(slurp(rep_file));
    CHECK(rep["bistochastic"]["edge"]["holds"] == true);
    CHECK(rep["stationary"]["uniform_edge_residual"]["value"].get<double>() < 1e-10);
    CHECK(rep["all_checks_pass"] == true);
}

TEST_CASE("cli analyze exit codes distinguish violations from usage errors") {
    fs::path g = work_dir() / "clique_again.txt";
    spit(g, kLopsidedClique);

    // An absurdly tight tolerance turns round-off into a verifier violation.
    fs::path rep_file = work_dir() / "tight_report.json";
    RunResult r = run("analyze " + g.string() + " --tol 1e-18 -o " + rep_file.string());
    CHECK(r.code == 1);
    CHECK(json::parse(slurp(rep_file))["all_checks_pass"] == false);

    r = run("analyze " + (work_dir() / "does_not_exist.txt").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("walklab:") != std::string::npos);

    fs::path bad = work_dir() / "disconnected.txt";
    spit(bad, "0 1\n2 3\n");
    CHECK(run("analyze " + bad.string()).code == 2);
}

TEST_CASE("cli analyze power solver agrees with the direct one") {
    fs::path g = work_dir() / "k4_again.txt";
    REQUIRE(run("gen complete 4 -o " + g.string()).code == 0);
    fs::path direct_file = work_dir() / "direct.json";
    fs::path power_file = work_dir() / "power.json";
    REQUIRE(run("analyze " + g.string() + " -o " + direct_file.string()).code == 0);
    REQUIRE(run("analyze " + g.string() + " --method power -o " + power_file.string()).code == 0);

    json direct = json::parse(slurp(direct_file));
    json power = json::parse(slurp(power_file));
    CHECK(direct["stationary"]["method"] == "direct");
    CHECK(power["stationary"]["method"] == "power");
    const json& a = direct["stationary"]["wedge"];
    const json& b = power["stationary"]["wedge"];
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].get<double>() == Catch::Approx(b[i].get<double>()).margin(1e-6));
}

TEST_CASE("cli simulate is reproducible and formats trajectories") {
    fs::path g = work_dir() / "clique_sim.txt";
    spit(g, kLopsidedClique);
    const std::string common = "simulate " + g.string() +
                               " --alpha 1 --beta 2 --gamma 3 --start 0,1 --steps 500";

    fs::path t1 = work_dir() / "traj1.txt";
    fs::path t2 = work_dir() / "traj2.txt";
    fs::path t3 = work_dir() / "traj3.txt";
    REQUIRE(run(common + " --seed 7 -o " + t1.string()).code == 0);
    REQUIRE(run(common + " --seed 7 -o " + t2.string()).code == 0);
    REQUIRE(run(common + " --seed 8 -o " + t3.string()).code == 0);

    std::string a = slurp(t1);
    CHECK(a == slurp(t2));
    CHECK(a != slurp(t3));
    CHECK(count_lines(a) == 1 + 502);  // header + tail, head, one node per step

    std::istringstream lines(a);
    std::string line;
    REQUIRE(std::getline(lines, line));
    json header = json::parse(line);
    CHECK(header["start"] == json::array({0, 1}));
    CHECK(header["steps"] == 500);
    CHECK(header["seed"] == 7);
    CHECK(header["params"]["beta"] == 2.0);
    REQUIRE(std::getline(lines, line));
    CHECK(line == "0");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "1");
    while (std::getline(lines, line)) {
        int v = std::stoi(line);
        CHECK(v >= 0);
        CHECK(v <= 3);
    }
}

TEST_CASE("cli simulate summary reports normalized occupations") {
    fs::path g = work_dir() / "clique_occ.txt";
    spit(g, kLopsidedClique);
    fs::path summary = work_dir() / "summary.json";
    RunResult r = run("simulate " + g.string() +
                      " --start 0,1 --steps 2000 --seed 3 --burn-in 100 -o " +
                      (work_dir() / "occ_traj.txt").string() + " --summary " +
                      summary.string());
    REQUIRE(r.code == 0);
    json s = json::parse(slurp(summary));
    CHECK(s["burn_in"] == 100);
    REQUIRE(s["node_occupation"].size() == 4);
    REQUIRE(s["edge_occupation"].size() == 10);
    REQUIRE(s["wedge_occupation"].size() == 26);
    for (const char* key : {"node_occupation", "edge_occupation", "wedge_occupation"}) {
        double total = 0.0;
        for (const auto& v : s[key]) {
            total += v.get<double>();
            CHECK(v.get<double>() >= 0.0);
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("cli simulate rejects bad start edges") {
    fs::path g = work_dir() / "path4.txt";
    REQUIRE(run("gen path 4 -o " + g.string()).code == 0);
    CHECK(run("simulate " + g.string() + " --start 01 --steps 10").code == 2);
    CHECK(run("simulate " + g.string() + " --start 0,2 --steps 10").code == 2);
    CHECK(run("simulate " + g.string() + " --steps 10").code == 2);  // --start required
}

TEST_CASE("cli simulate addresses nodes by label") {
    fs::path g = work_dir() / "labeled.txt";
    write_file(g, "7 3\n3 5\n5 7\n");  // triangle on labels {3,5,7}
    fs::path out = work_dir() / "labeled_traj.txt";

    RunResult r = run("simulate " + g.string() +
                      " --start 7,3 --steps 5 --seed 1 -o " + out.string());
    REQUIRE(r.code == 0);
    std::istringstream lines(slurp(out));
    std::string line;
    REQUIRE(std::getline(lines, line));
    json header = json::parse(line);
    CHECK(header["start"] == json::array({7, 3}));
    REQUIRE(std::getline(lines, line));
    CHECK(line == "7");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "3");
    while (std::getline(lines, line))  // every visited node is a real label
        CHECK((line == "3" || line == "5" || line == "7"));

    // internal ids are not an alias: 0 names no node here
    CHECK(run("simulate " + g.string() + " --start 0,1 --steps 5").code == 2);
}

TEST_CASE("cli recurrence emits the growth table") {
    fs::path csv = work_dir() / "growth.csv";
    RunResult r = run("recurrence --family tree3 --radii 2..3 -o " + csv.string());
    REQUIRE(r.code == 0);

    std::istringstream lines(slurp(csv));
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "size,R_srw,R_kbar,ratio");
    int expect_nodes[] = {10, 22};  // 1 + 3(2^r - 1)
    for (int i = 0; i < 2; ++i) {
        REQUIRE(std::getline(lines, line));
        int nodes = 0;
        double r_srw = 0.0, r_kbar = 0.0, ratio = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &nodes, &r_srw, &r_kbar, &ratio) == 4);
        CHECK(nodes == expect_nodes[i]);
        double closed = (2.0 / 3.0) * (1.0 - std::pow(2.0, -(i + 2)));
        CHECK(r_srw == Catch::Approx(closed).margin(1e-9));
        CHECK(r_srw < 2.0 / 3.0);
        CHECK(r_kbar > r_srw);
        CHECK(ratio == Catch::Approx(r_kbar / r_srw).margin(1e-9));
    }
    CHECK_FALSE(std::getline(lines, line));

    CHECK(run("recurrence --family nosuch").code == 2);
    CHECK(run("recurrence --radii 5..2").code == 2);
}

TEST_CASE("cli top-level usage errors exit 2 and help exits 0") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--help").code == 0);
    CHECK(run("gen --help").code == 0);
}
