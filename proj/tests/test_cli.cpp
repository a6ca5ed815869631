#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fblab-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + FBLAB_CLI_PATH + "\" " + args + " > " +
                            quoted(out) + " 2> " + quoted(err);
    const int raw = std::system(cmd.c_str());
    CliResult r;
    if (raw != -1 && WIFEXITED(raw)) r.status = WEXITSTATUS(raw);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

struct CsvTable {
    std::vector<std::string> metadata;  // '#'-prefixed lines, prefix stripped
    std::string header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& p) {
    REQUIRE(fs::exists(p));
    CsvTable t;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            t.metadata.push_back(line.substr(line.find_first_not_of("# ")));
        } else if (t.header.empty()) {
            t.header = line;
        } else {
            t.rows.push_back(split_cells(line));
        }
    }
    return t;
}

bool has_metadata(const CsvTable& t, const std::string& entry) {
    for (const auto& m : t.metadata)
        if (m == entry) return true;
    return false;
}

double cell(const CsvTable& t, std::size_t row, std::size_t col) {
    REQUIRE(row < t.rows.size());
    REQUIRE(col < t.rows[row].size());
    return std::stod(t.rows[row][col]);
}

}  // namespace

TEST_CASE("cli rejects bad invocations with exit code 1", "[cli]") {
    const fs::path dir = fresh_dir("usage");
    CHECK(run_cli("--help", dir).status == 0);
    CHECK(run_cli("", dir).status == 1);              // a subcommand is required
    CHECK(run_cli("frobnicate", dir).status == 1);    // unknown subcommand
    CHECK(run_cli("selfsim --nope", dir).status == 1);
    CHECK(run_cli("solve --preset bogus", dir).status == 1);
    CHECK(run_cli("solve --source wat:3", dir).status == 1);
}

TEST_CASE("cli help lists every subcommand", "[cli]") {
    const fs::path dir = fresh_dir("help");
    const CliResult r = run_cli("--help", dir);
    REQUIRE(r.status == 0);
    for (const char* sub : {"selfsim", "solve", "probe", "convergence", "arrhenius"})
        CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("selfsim writes the exponent and profile tables", "[cli]") {
    const fs::path dir = fresh_dir("selfsim");
    const CliResult r = run_cli("selfsim --out " + quoted(dir / "out"), dir);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("sigma = ") != std::string::npos);
    CHECK(r.out.find("c1 = ") != std::string::npos);

    const CsvTable sigma = read_csv(dir / "out" / "sigma.csv");
    CHECK(has_metadata(sigma, "command=selfsim"));
    CHECK(sigma.header == "h,alpha,sigma,c1");
    REQUIRE(sigma.rows.size() == 1);
    CHECK(cell(sigma, 0, 2) == Catch::Approx(-1.6863111126345594).epsilon(1e-12));

    const CsvTable prof = read_csv(dir / "out" / "profile.csv");
    CHECK(prof.header == "y,w,w_prime,residual");
    REQUIRE(prof.rows.size() >= 100);
    // The profile starts on the front: w = 0 and w' = alpha.
    CHECK(cell(prof, 0, 0) == Catch::Approx(cell(sigma, 0, 2)).epsilon(1e-12));
    CHECK(std::abs(cell(prof, 0, 1)) < 1e-12);
    CHECK(cell(prof, 0, 2) == Catch::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 0; i < prof.rows.size(); ++i)
        CHECK(std::abs(cell(prof, i, 3)) < 1e-8);
}

TEST_CASE("selfsim sweep tabulates a decreasing exponent", "[cli]") {
    const fs::path dir = fresh_dir("sweep");
    const CliResult r = run_cli("selfsim --sweep 0.05:5:10 --out " + quoted(dir / "out"), dir);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("selfsim sweep: 10 profiles") != std::string::npos);

    const CsvTable sigma = read_csv(dir / "out" / "sigma.csv");
    REQUIRE(sigma.rows.size() == 10);
    CHECK(cell(sigma, 0, 0) == Catch::Approx(0.05));
    CHECK(cell(sigma, 9, 0) == Catch::Approx(5.0));
    for (std::size_t i = 1; i < sigma.rows.size(); ++i) {
        CHECK(cell(sigma, i, 0) > cell(sigma, i - 1, 0));
        CHECK(cell(sigma, i, 2) < cell(sigma, i - 1, 2));
    }
}

TEST_CASE("selfsim svg plot is emitted on request", "[cli]") {
    const fs::path dir = fresh_dir("svg");
    REQUIRE(run_cli("selfsim --svg --out " + quoted(dir / "out"), dir).status == 0);
    const std::string svg = slurp(dir / "out" / "profile.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("solve runs the traveling-wave preset to completion", "[cli]") {
    const fs::path dir = fresh_dir("solve-tw");
    const CliResult r = run_cli(
        "solve --preset traveling-wave --n 200 --dt 1e-3 --t-end 0.05 --out " +
            quoted(dir / "out"),
        dir);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("status = Completed") != std::string::npos);

    const CsvTable fronts = read_csv(dir / "out" / "fronts.csv");
    CHECK(has_metadata(fronts, "status=Completed"));
    CHECK(fronts.header == "t,s,sdot,flux_residual,min_U,max_U,front_error");
    REQUIRE(fronts.rows.size() == 51);  // initial state plus 50 steps
    CHECK(cell(fronts, 50, 0) == Catch::Approx(0.05));
    for (std::size_t i = 0; i < fronts.rows.size(); ++i)
        CHECK(std::abs(cell(fronts, i, 6)) < 1e-3);

    const CsvTable fields = read_csv(dir / "out" / "fields.csv");
    CHECK(fields.header == "t,x,u");
    CHECK(fields.rows.size() > 200);
}

TEST_CASE("solve reports an unreachable flux target with exit code 2", "[cli]") {
    const fs::path dir = fresh_dir("solve-infeasible");
    const CliResult r = run_cli(
        "solve --source const:0.5 --t-end 0.05 --n 100 --L 10 --out " + quoted(dir / "out"),
        dir);
    CHECK(r.status == 2);
    CHECK(r.err.find("flux target unreachable") != std::string::npos);
    CHECK(has_metadata(read_csv(dir / "out" / "fronts.csv"), "status=FluxInfeasible"));
}

TEST_CASE("probe certifies all preset trajectories at the default threshold", "[cli]") {
    const fs::path dir = fresh_dir("probe");
    const CliResult r = run_cli("probe --out " + quoted(dir / "out"), dir);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("lambda_threshold = 2, lambda = 2") != std::string::npos);

    const CsvTable w = read_csv(dir / "out" / "witness.csv");
    CHECK(w.header == "trajectory_id,lambda,t,scaled_u_hat,certificate");
    REQUIRE(w.rows.size() == 4);
    const std::vector<std::string> ids = {"zero", "linear", "neg-sqrt", "sine"};
    for (std::size_t i = 0; i < w.rows.size(); ++i) {
        CHECK(w.rows[i][0] == ids[i]);
        CHECK(std::stod(w.rows[i][3]) < 0.0);
        CHECK(w.rows[i][4] == "Negative");
    }
}

TEST_CASE("probe interval variant sits strictly below the half-line value", "[cli]") {
    const fs::path half_dir = fresh_dir("probe-half");
    const fs::path gap_dir = fresh_dir("probe-gap");
    REQUIRE(run_cli("probe --t 0.5 --out " + quoted(half_dir / "out"), half_dir).status == 0);
    REQUIRE(run_cli("probe --t 0.5 --gap 0.8 --out " + quoted(gap_dir / "out"), gap_dir).status ==
            0);
    const CsvTable half = read_csv(half_dir / "out" / "witness.csv");
    const CsvTable gap = read_csv(gap_dir / "out" / "witness.csv");
    REQUIRE(half.rows.size() == gap.rows.size());
    for (std::size_t i = 0; i < half.rows.size(); ++i)
        CHECK(cell(gap, i, 3) < cell(half, i, 3));
}

TEST_CASE("probe refuses an unbounded source without an explicit lambda", "[cli]") {
    const fs::path dir = fresh_dir("probe-unbounded");
    const CliResult r = run_cli("probe --source invsqrt:1 --out " + quoted(dir / "out"), dir);
    CHECK(r.status == 1);
    CHECK(r.err.find("--lambda") != std::string::npos);
    CHECK(run_cli("probe --source invsqrt:1 --lambda 3 --out " + quoted(dir / "out2"), dir)
              .status == 0);
}

TEST_CASE("convergence emits one refinement row per level", "[cli]") {
    const fs::path dir = fresh_dir("convergence");
    const CliResult r = run_cli(
        "convergence --benchmark traveling-wave --dt0 4e-3 --dx0 0.05 --t-end 0.1 "
        "--levels 3 --out " +
            quoted(dir / "out"),
        dir);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("order") != std::string::npos);

    const CsvTable t = read_csv(dir / "out" / "convergence.csv");
    CHECK(t.header == "dt,dx,front_error,field_error,observed_order");
    REQUIRE(t.rows.size() == 3);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        CHECK(cell(t, i, 2) < cell(t, i - 1, 2));
        CHECK(cell(t, i, 4) > 0.8);
        CHECK(cell(t, i, 4) < 1.3);
    }
}

TEST_CASE("arrhenius writes one series per regularization width", "[cli]") {
    const fs::path dir = fresh_dir("arrhenius");
    const CliResult r = run_cli(
        "arrhenius --eps 0.2 0.1 --t-end 0.05 --L 5 --n 100 --out " + quoted(dir / "out"), dir);
    REQUIRE(r.status == 0);
    for (const char* name : {"arrhenius_eps0.2.csv", "arrhenius_eps0.1.csv"}) {
        const CsvTable t = read_csv(dir / "out" / name);
        CHECK(t.header == "t,min_u,mass,sink_total");
        REQUIRE(t.rows.size() >= 2);
        for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(cell(t, i, 1) >= 0.0);
        // The cumulative sink only grows.
        for (std::size_t i = 1; i < t.rows.size(); ++i)
            CHECK(cell(t, i, 3) >= cell(t, i - 1, 3));
    }
    CHECK(r.out.find("final mass") != std::string::npos);
}

TEST_CASE("config file seeds options and flags override it", "[cli]") {
    const fs::path dir = fresh_dir("config");
    {
        std::ofstream cfg(dir / "cfg.ini");
        cfg << "[selfsim]\nh=2.0\n";
    }
    const std::string base = "--config " + quoted(dir / "cfg.ini") + " selfsim --out ";
    REQUIRE(run_cli(base + quoted(dir / "from-config"), dir).status == 0);
    CHECK(cell(read_csv(dir / "from-config" / "sigma.csv"), 0, 0) == Catch::Approx(2.0));

    REQUIRE(run_cli(base + quoted(dir / "overridden") + " --h 1.0", dir).status == 0);
    CHECK(cell(read_csv(dir / "overridden" / "sigma.csv"), 0, 0) == Catch::Approx(1.0));
}

TEST_CASE("reruns produce byte-identical tables", "[cli]") {
    const fs::path dir = fresh_dir("determinism");
    const std::string args = "solve --preset selfsim --n 200 --dt 1e-3 --t-end 0.3 --out ";
    REQUIRE(run_cli(args + quoted(dir / "a"), dir).status == 0);
    REQUIRE(run_cli(args + quoted(dir / "b"), dir).status == 0);
    CHECK(slurp(dir / "a" / "fronts.csv") == slurp(dir / "b" / "fronts.csv"));
    CHECK(slurp(dir / "a" / "fields.csv") == slurp(dir / "b" / "fields.csv"));
}
