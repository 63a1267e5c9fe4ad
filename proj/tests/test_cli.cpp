#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sqmap/mesh_io.hpp"

using namespace sqmap;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return SQMAP_CLI_PATH; }

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "sqmap_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string command = std::string("'") + cli_path() + "' " + args + " >" +
                                out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    return RunResult{WEXITSTATUS(status), slurp(out), slurp(err)};
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "sqmap_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("generate writes the advertised grids") {
    const fs::path obj = work_dir() / "flat3.obj";
    const RunResult r = run_cli("generate flat-grid --resolution 3 --output " + obj.string());
    CHECK(r.exit_code == 0);
    const Mesh mesh = load_mesh(obj.string());
    CHECK(mesh.vertex_count() == 9);
    CHECK(mesh.face_count() == 8);

    const fs::path bump = work_dir() / "bump33.obj";
    CHECK(run_cli("generate bump-grid --resolution 33 --output " + bump.string()).exit_code == 0);
    const Mesh bump_mesh = load_mesh(bump.string());
    CHECK(bump_mesh.vertex_count() == 1089);
    CHECK(bump_mesh.face_count() == 2048);
}

TEST_CASE("generate rejects resolution below 2") {
    const fs::path obj = work_dir() / "bad.obj";
    const RunResult r = run_cli("generate flat-grid --resolution 1 --output " + obj.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("resolution") != std::string::npos);
}

TEST_CASE("parameterize end to end on the flat grid") {
    const fs::path obj = work_dir() / "flat9.obj";
    REQUIRE(run_cli("generate flat-grid --resolution 9 --output " + obj.string()).exit_code == 0);

    const fs::path mapped = work_dir() / "flat9_mapped.obj";
    const fs::path report = work_dir() / "flat9_report.json";
    const fs::path history = work_dir() / "flat9_history.csv";
    const fs::path histogram = work_dir() / "flat9_histogram.csv";
    const fs::path svg = work_dir() / "flat9.svg";
    const RunResult r = run_cli("parameterize " + obj.string() + " --output " + mapped.string() +
                                " --report " + report.string() + " --history " + history.string() +
                                " --histogram " + histogram.string() + " --svg " + svg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("termination=converged") != std::string::npos);

    std::ifstream report_in(report);
    const auto j = nlohmann::json::parse(report_in);
    CHECK(j["area_ratio"]["mean"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["area_ratio"]["sd"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(j["authalic_energy"].get<double>() <= 1e-10);
    CHECK(j["fold_count"] == 0);
    CHECK(j["wall_time_seconds"] == 0.0);  // byte-reproducible default

    // uv records round-trip and stay in the unit square
    const Mapping uv = load_obj_uv(mapped.string());
    CHECK(uv.rows() == 81);
    CHECK(uv.minCoeff() >= -1e-9);
    CHECK(uv.maxCoeff() <= 1.0 + 1e-9);

    std::ifstream history_in(history);
    std::string line;
    std::getline(history_in, line);
    CHECK(line == "iteration,stretch_energy,authalic_energy,fold_count");
    int rows = 0;
    while (std::getline(history_in, line)) ++rows;
    CHECK(rows == j["iterations"].get<int>() + 1);

    std::ifstream svg_in(svg);
    std::stringstream svg_text;
    svg_text << svg_in.rdbuf();
    CHECK(svg_text.str().find("<svg") == 0);
}

TEST_CASE("parameterize converges quickly on the bump grid with defaults") {
    const fs::path obj = work_dir() / "bump33cli.obj";
    REQUIRE(run_cli("generate bump-grid --resolution 33 --output " + obj.string()).exit_code == 0);
    const fs::path report = work_dir() / "bump33cli.json";
    const RunResult r =
        run_cli("parameterize " + obj.string() + " --report " + report.string());
    CHECK(r.exit_code == 0);
    std::ifstream report_in(report);
    const auto j = nlohmann::json::parse(report_in);
    CHECK(j["termination"] == "converged");
    CHECK(j["iterations"].get<int>() <= 10);
    CHECK(j["authalic_energy"].get<double>() < 1e-3);
    CHECK(j["fold_count"] == 0);
}

TEST_CASE("parameterize honors 1-based OBJ corner indexing") {
    const fs::path obj = work_dir() / "flat3c.obj";
    REQUIRE(run_cli("generate flat-grid --resolution 3 --output " + obj.string()).exit_code == 0);
    const RunResult r =
        run_cli("parameterize " + obj.string() + " --corners 1 3 9 7");
    CHECK(r.exit_code == 0);
    // vertex 5 (0-based 4) is interior: not a legal corner
    const RunResult bad = run_cli("parameterize " + obj.string() + " --corners 1 3 5 7");
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("not on the boundary") != std::string::npos);
}

TEST_CASE("parameterize rejects a closed surface with exit 1") {
    const fs::path obj = work_dir() / "tet.obj";
    {
        std::ofstream out(obj);
        out << "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
            << "f 1 3 2\nf 1 2 4\nf 2 3 4\nf 3 1 4\n";
    }
    const RunResult r = run_cli("parameterize " + obj.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("no boundary loop") != std::string::npos);
}

TEST_CASE("check passes on a healthy mesh and fails under fault injection") {
    const fs::path obj = work_dir() / "bump9.obj";
    REQUIRE(run_cli("generate bump-grid --resolution 9 --output " + obj.string()).exit_code == 0);

    const RunResult ok = run_cli("check " + obj.string() + " --seed 1");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("PASS gradient-vs-fd") != std::string::npos);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    const RunResult bad = run_cli("check " + obj.string() + " --debug-corrupt-laplacian");
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("FAIL dirichlet-row-sums") != std::string::npos);
}

TEST_CASE("unknown arguments exit with code 1") {
    CHECK(run_cli("parameterize").exit_code == 1);
    CHECK(run_cli("frobnicate x").exit_code == 1);
}

TEST_SUITE_END();
