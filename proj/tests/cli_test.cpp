#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
#ifdef CONVPDE_CLI_PATH
    return CONVPDE_CLI_PATH;
#else
    const char* p = std::getenv("CONVPDE_CLI_PATH");
    REQUIRE_MESSAGE(p != nullptr, "CONVPDE_CLI_PATH not set");
    return p;
#endif
}

int run_cli(const std::string& args) {
    const int rc = std::system((cli_path() + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("convpde_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST_CASE("run: a short dissipative run writes the series and summary") {
    const fs::path dir = fresh_dir("run");
    write_file(dir / "cfg", "model: burgers\np: 1\nq: 1\nf: signed_power\namplitude: 2\n"
                            "grid.n_cells: 64\ncontrols.t_max: 3\n");
    const int rc = run_cli("run --config " + (dir / "cfg").string() + " --out " + dir.string());
    CHECK(rc == 0);
    REQUIRE(fs::exists(dir / "series.csv"));
    REQUIRE(fs::exists(dir / "summary.json"));
    const std::string series = read_file(dir / "series.csv");
    CHECK(series.rfind("t,", 0) == 0);
    CHECK(count_lines(series) > 10);
    const std::string summary = read_file(dir / "summary.json");
    CHECK(summary.find("\"outcome\"") != std::string::npos);
    CHECK(summary.find("completed") != std::string::npos);
}

TEST_CASE("run: outputs are byte-identical across repeats") {
    const fs::path d1 = fresh_dir("rep1");
    const fs::path d2 = fresh_dir("rep2");
    const std::string cfg = "model: burgers\nf: signed_power\namplitude: 3\n"
                            "grid.n_cells: 64\ncontrols.t_max: 2\n";
    write_file(d1 / "cfg", cfg);
    write_file(d2 / "cfg", cfg);
    CHECK(run_cli("run --config " + (d1 / "cfg").string() + " --out " + d1.string()) == 0);
    CHECK(run_cli("run --config " + (d2 / "cfg").string() + " --out " + d2.string()) == 0);
    CHECK(read_file(d1 / "series.csv") == read_file(d2 / "series.csv"));
    CHECK(read_file(d1 / "summary.json") == read_file(d2 / "summary.json"));
}

TEST_CASE("run: blow-up is reported with exit 0 and a detection time") {
    const fs::path dir = fresh_dir("blow");
    write_file(dir / "cfg", "model: burgers\np: 1\nq: 2\nf: abs_power\namplitude: 20\n"
                            "grid.n_cells: 64\ncontrols.t_max: 5\n");
    CHECK(run_cli("run --config " + (dir / "cfg").string() + " --out " + dir.string()) == 0);
    const std::string summary = read_file(dir / "summary.json");
    CHECK(summary.find("blowup") != std::string::npos);
    CHECK(summary.find("t_detect") != std::string::npos);
}

TEST_CASE("run: command-line overrides beat the config file") {
    const fs::path dir = fresh_dir("override");
    write_file(dir / "cfg", "model: burgers\nf: signed_power\namplitude: 1\n"
                            "grid.n_cells: 64\ncontrols.t_max: 50\n");
    CHECK(run_cli("run --config " + (dir / "cfg").string() + " --out " + dir.string() +
                  " --t-max 1 --n-cells 32") == 0);
    const std::string summary = read_file(dir / "summary.json");
    CHECK(summary.find("\"t_final\": 1.0") != std::string::npos);
}

TEST_CASE("sweep: 2x2x1 grid gives a 4-row regime map") {
    const fs::path dir = fresh_dir("sweep");
    write_file(dir / "cfg", "model: burgers\nf: abs_power\ngrid.n_cells: 64\n"
                            "controls.t_max: 5\nsweep.p_values: 1, 2\nsweep.q_values: 1, 2\n"
                            "sweep.amplitudes: 20\n");
    CHECK(run_cli("sweep --config " + (dir / "cfg").string() + " --out " + dir.string() +
                  " --jobs 2") == 0);
    REQUIRE(fs::exists(dir / "regime_map.csv"));
    const std::string csv = read_file(dir / "regime_map.csv");
    CHECK(count_lines(csv) == 5);  // header + 4 cells
    CHECK(csv.find("blowup") != std::string::npos);
    CHECK(csv.find("dissipative") != std::string::npos);
}

TEST_CASE("converge: writes per-resolution errors and the fitted order") {
    const fs::path dir = fresh_dir("conv");
    write_file(dir / "cfg", "model: burgers\np: 1\nq: 1\nf: signed_power\n"
                            "converge.resolutions: 32, 64\nconverge.t_end: 0.25\n");
    CHECK(run_cli("converge --config " + (dir / "cfg").string() + " --out " + dir.string()) == 0);
    REQUIRE(fs::exists(dir / "orders.csv"));
    const std::string csv = read_file(dir / "orders.csv");
    CHECK(csv.rfind("n_cells,", 0) == 0);
    CHECK(count_lines(csv) == 3);
    CHECK(csv.find("fitted_order") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
    const fs::path dir = fresh_dir("badcfg");
    write_file(dir / "cfg", "model: burgers\nwavespeed: 3\n");
    CHECK(run_cli("run --config " + (dir / "cfg").string() + " --out " + dir.string()) == 2);
    CHECK(run_cli("run --config " + (dir / "missing.cfg").string()) == 2);
}
