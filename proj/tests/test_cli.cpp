#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_path() {
#ifdef AMCMC_CLI_PATH
    return AMCMC_CLI_PATH;
#else
    return "./amcmc";
#endif
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("amcmc_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("toy-exact subcommand emits the expected CSV artifacts") {
    const fs::path dir = fresh_dir("toy_exact");
    write_file(dir / "config.json", R"({
        "subcommand": "toy-exact",
        "K": 6, "M": 3,
        "pmf": {"kind": "linear"},
        "p_schedule": {"kind": "one_over_n"},
        "horizon": 200,
        "start": {"x": 1, "theta": 1},
        "power_profile": {"theta": [1, 3], "n_max": 50}
    })");
    const int rc = run_cli("toy-exact --config " + (dir / "config.json").string() +
                           " --out " + dir.string());
    CHECK(rc == 0);
    REQUIRE(fs::exists(dir / "tv_to_pi.csv"));
    REQUIRE(fs::exists(dir / "exact_d.csv"));
    REQUIRE(fs::exists(dir / "power_profile.csv"));

    const std::string tv = slurp(dir / "tv_to_pi.csv");
    CHECK(tv.rfind("# config_hash=", 0) == 0);
    CHECK(tv.find("version=0.1.0") != std::string::npos);
    CHECK(tv.find("n,tv_l1") != std::string::npos);
    // metadata line + header + horizon+1 rows
    CHECK(std::count(tv.begin(), tv.end(), '\n') == 203);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    const fs::path dir1 = fresh_dir("det1");
    const fs::path dir2 = fresh_dir("det2");
    const std::string config = R"({
        "subcommand": "coupling-test",
        "pairs": [
            {"mu": [0.5, 0.5], "nu": [1.0, 0.0]},
            {"mu": [0.25, 0.75], "nu": [0.75, 0.25]}
        ],
        "n_draws": 20000,
        "chi_square_draws": 20000,
        "seed": 99
    })";
    write_file(dir1 / "config.json", config);
    CHECK(run_cli("coupling-test --config " + (dir1 / "config.json").string() +
                  " --out " + dir1.string()) == 0);
    CHECK(run_cli("coupling-test --config " + (dir1 / "config.json").string() +
                  " --out " + dir2.string()) == 0);
    CHECK(slurp(dir1 / "coupling.csv") == slurp(dir2 / "coupling.csv"));
    CHECK(!slurp(dir1 / "coupling.csv").empty());
}

TEST_CASE("seed override changes the stream and is recorded") {
    const fs::path dir1 = fresh_dir("seed1");
    const fs::path dir2 = fresh_dir("seed2");
    const std::string config = R"({
        "subcommand": "toy-simulate",
        "K": 6, "M": 3,
        "pmf": {"kind": "uniform"},
        "p_schedule": {"kind": "one_over_n"},
        "n_steps": 5000,
        "start": {"x": 1, "theta": 1},
        "f": {"kind": "indicator", "x": 6},
        "seeds": [5]
    })";
    write_file(dir1 / "config.json", config);
    CHECK(run_cli("toy-simulate --config " + (dir1 / "config.json").string() +
                  " --out " + dir1.string()) == 0);
    CHECK(run_cli("toy-simulate --config " + (dir1 / "config.json").string() +
                  " --seed 123 --out " + dir2.string()) == 0);
    const std::string first = slurp(dir1 / "lln.csv");
    const std::string second = slurp(dir2 / "lln.csv");
    CHECK(first.find("seed=5") != std::string::npos);
    CHECK(second.find("seed=123") != std::string::npos);
    CHECK(first != second);
}

TEST_CASE("invalid configuration exits nonzero without writing files") {
    const fs::path dir = fresh_dir("invalid");
    write_file(dir / "config.json", R"({
        "subcommand": "am-run",
        "target": {"kind": "gaussian", "mean": [0.0], "covariance": [[1.0]]},
        "theta_space": {"mu_lower": [-1.0], "mu_upper": [1.0],
                        "kappa_lower": 2.0, "kappa_upper": 2.0},
        "theta0": {"mu": [0.0], "sigma": [[1.0]], "c": 0.0},
        "x0": [0.0],
        "n_steps": 100,
        "seeds": [1, 2],
        "f": {"kind": "coordinate", "index": 0},
        "reference": {"kind": "value", "value": 0.0}
    })");
    const fs::path out = dir / "out";
    const int rc = run_cli("am-run --config " + (dir / "config.json").string() +
                           " --out " + out.string());
    CHECK(rc != 0);
    CHECK((!fs::exists(out) || fs::is_empty(out)));
}

TEST_CASE("config subcommand mismatch is rejected") {
    const fs::path dir = fresh_dir("mismatch");
    write_file(dir / "config.json", R"({"subcommand": "winkler", "horizon": 10,
        "schedule": {"kind": "constant", "value": 0.5}, "f": [1.0, 0.0]})");
    CHECK(run_cli("toy-exact --config " + (dir / "config.json").string() +
                  " --out " + dir.string()) != 0);
}

TEST_CASE("winkler subcommand emits the enumeration cross-check") {
    const fs::path dir = fresh_dir("winkler");
    write_file(dir / "config.json", R"({
        "subcommand": "winkler",
        "schedule": {"kind": "harmonic", "offset": 2},
        "horizon": 500,
        "f": [0.0, 1.0],
        "initial_p0": 1.0,
        "enumeration_check_n": 10
    })");
    CHECK(run_cli("winkler --config " + (dir / "config.json").string() +
                  " --out " + dir.string()) == 0);
    REQUIRE(fs::exists(dir / "winkler.csv"));
    REQUIRE(fs::exists(dir / "enumeration.csv"));
    // the |recursion - enumeration| column stays at exact-arithmetic scale
    std::ifstream in(dir / "enumeration.csv");
    std::string line;
    std::getline(in, line);  // metadata
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
        const auto pos = line.rfind(',');
        CHECK(std::stod(line.substr(pos + 1)) <= 1e-12);
        ++rows;
    }
    CHECK(rows == 10);
}

TEST_CASE("drift-check subcommand reports a positive c_star") {
    const fs::path dir = fresh_dir("drift");
    write_file(dir / "config.json", R"({
        "subcommand": "drift-check",
        "target": {"kind": "smoothed_weibull", "m": 0.5, "beta": 1.0},
        "drift": {"s": 0.05, "c": 1e-6, "c_bound": 5.0},
        "proposal_variances": [1.0],
        "x_grid": [20.0, -20.0],
        "quad_tol": 1e-8
    })");
    CHECK(run_cli("drift-check --config " + (dir / "config.json").string() +
                  " --out " + dir.string()) == 0);
    std::ifstream in(dir / "summary.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);  // worst_margin,c_star,pass
    const auto first_comma = line.find(',');
    const auto second_comma = line.find(',', first_comma + 1);
    CHECK(std::stod(line.substr(first_comma + 1, second_comma - first_comma - 1)) > 0.0);
    CHECK(line.substr(second_comma + 1) == "1");
}
