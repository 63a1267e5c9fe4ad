#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sqmap/energy.hpp"
#include "sqmap/laplacian.hpp"
#include "sqmap/mesh_io.hpp"
#include "sqmap/metrics.hpp"
#include "sqmap/pipeline.hpp"
#include "sqmap/svg.hpp"
#include "sqmap/synthetic.hpp"

namespace {

using namespace sqmap;

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << content;
}

MeshFormat resolve_format(const std::string& path, const std::string& override_name) {
    if (override_name == "obj") return MeshFormat::Obj;
    if (override_name == "off") return MeshFormat::Off;
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "off") return MeshFormat::Off;
    return MeshFormat::Obj;
}

struct ParameterizeOptions {
    std::string input;
    std::string format = "auto";
    std::vector<int> corners;  // input-file indexing: 1-based for OBJ, 0-based for OFF
    int max_iterations = SolverConfig{}.max_iterations;
    double tolerance = SolverConfig{}.energy_tolerance;
    std::string output_path, report_path, history_path, histogram_path, svg_path;
    bool timing = false;
};

int cmd_parameterize(const ParameterizeOptions& opt) {
    const MeshFormat format = resolve_format(opt.input, opt.format);
    const Mesh loaded = load_mesh(opt.input, format);
    for (const auto& w : loaded.warnings()) std::cerr << "warning: " << w << "\n";

    const Mesh mesh = normalize_area(loaded);

    SolverConfig config;
    config.max_iterations = opt.max_iterations;
    config.energy_tolerance = opt.tolerance;
    if (!opt.corners.empty()) {
        std::array<int, 4> corners{};
        const int base = format == MeshFormat::Obj ? 1 : 0;
        for (size_t c = 0; c < 4; ++c) corners[c] = opt.corners[c] - base;
        config.corner_indices = corners;
        // surface corner diagnostics (run_sem repeats this partition)
        for (const auto& w : partition_boundary(mesh, config.corner_indices).warnings)
            std::cerr << "warning: " << w << "\n";
    }

    const auto started = std::chrono::steady_clock::now();
    const SolveResult result = run_sem(mesh, config);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const QualityReport report =
        summarize(mesh, result.mapping, result, opt.timing ? elapsed : 0.0);

    if (!opt.output_path.empty()) save_obj_with_uv(mesh, result.mapping, opt.output_path);
    if (!opt.report_path.empty()) write_text_file(opt.report_path, to_json(report));
    if (!opt.history_path.empty()) {
        std::string csv = "iteration,stretch_energy,authalic_energy,fold_count\n";
        for (size_t i = 0; i < result.energy_history.size(); ++i) {
            const auto& s = result.energy_history[i];
            csv += std::to_string(i) + ',' + format_number(s.stretch_energy) + ',' +
                   format_number(s.authalic_energy) + ',' + std::to_string(s.fold_count) + '\n';
        }
        write_text_file(opt.history_path, csv);
    }
    if (!opt.histogram_path.empty()) {
        std::string csv = "bin_low,bin_high,count\n";
        for (size_t b = 0; b < report.histogram_counts.size(); ++b) {
            csv += format_number(report.histogram_edges[b]) + ',' +
                   format_number(report.histogram_edges[b + 1]) + ',' +
                   std::to_string(report.histogram_counts[b]) + '\n';
        }
        write_text_file(opt.histogram_path, csv);
    }
    if (!opt.svg_path.empty()) write_parameterization_svg(mesh, result.mapping, opt.svg_path);

    std::printf(
        "%s: vertices=%d faces=%d iterations=%d E_A=%.4e mean=%.4f sd=%.4f folds=%d "
        "time=%.2fs termination=%s\n",
        opt.input.c_str(), report.vertex_count, report.face_count, report.iterations,
        report.authalic_energy, report.area_ratio_mean, report.area_ratio_sd, report.fold_count,
        elapsed, report.termination.c_str());

    return result.termination == Termination::solver_failure ? 2 : 0;
}

int cmd_generate(const std::string& kind, int resolution, const std::string& output) {
    const Mesh mesh =
        make_grid(kind == "bump-grid" ? GridKind::Bump : GridKind::Flat, resolution);
    save_obj(mesh, output);
    std::printf("%s: vertices=%d faces=%d -> %s\n", kind.c_str(), mesh.vertex_count(),
                mesh.face_count(), output.c_str());
    return 0;
}

struct CheckOptions {
    std::string input;
    std::string format = "auto";
    uint64_t seed = 0;
    bool corrupt_laplacian = false;
};

struct CheckOutcome {
    bool ok = true;
    void report(const std::string& name, bool pass, double measured, double limit) {
        std::printf("%s %s: measured=%.3e limit=%.3e\n", pass ? "PASS" : "FAIL", name.c_str(),
                    measured, limit);
        ok = ok && pass;
    }
};

double worst_row_sum(const Eigen::SparseMatrix<double>& m) {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(m.rows());
    Eigen::VectorXd maxima = Eigen::VectorXd::Zero(m.rows());
    for (int c = 0; c < m.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) {
            sums(it.row()) += it.value();
            maxima(it.row()) = std::max(maxima(it.row()), std::abs(it.value()));
        }
    }
    double worst = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (maxima(r) > 0.0) worst = std::max(worst, std::abs(sums(r)) / maxima(r));
    return worst;
}

int cmd_check(const CheckOptions& opt) {
    const Mesh loaded = load_mesh(opt.input, resolve_format(opt.input, opt.format));
    const Mesh mesh = normalize_area(loaded);
    std::printf("checking %s (vertices=%d faces=%d seed=%llu)\n", opt.input.c_str(),
                mesh.vertex_count(), mesh.face_count(),
                static_cast<unsigned long long>(opt.seed));

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 2.0);
    Mapping f(mesh.vertex_count(), 2);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        f(v, 0) = uniform(rng);
        f(v, 1) = uniform(rng);
    }

    CheckOutcome outcome;

    SparseLaplacian dirichlet = assemble_dirichlet(mesh);
    if (opt.corrupt_laplacian) dirichlet.matrix.coeffRef(0, mesh.faces()(0, 1)) += 1e-3;
    const SparseLaplacian stretch = assemble_stretch(mesh, f);
    const double dirichlet_row_sum = worst_row_sum(dirichlet.matrix);
    const double stretch_row_sum = worst_row_sum(stretch.matrix);
    outcome.report("dirichlet-row-sums", dirichlet_row_sum < 1e-10, dirichlet_row_sum, 1e-10);
    outcome.report("stretch-row-sums", stretch_row_sum < 1e-10, stretch_row_sum, 1e-10);
    const double asymmetry_d =
        Eigen::MatrixXd(dirichlet.matrix - Eigen::SparseMatrix<double>(dirichlet.matrix.transpose()))
            .cwiseAbs()
            .maxCoeff();
    outcome.report("dirichlet-symmetry", asymmetry_d == 0.0, asymmetry_d, 0.0);

    const EnergyBreakdown energy = stretch_energy(mesh, f);
    const double equivalence = std::abs(energy.stretch_quadratic - energy.stretch_geometric);
    const double equivalence_limit = 1e-10 * std::max(1.0, energy.stretch_geometric);
    outcome.report("energy-form-equivalence", equivalence <= equivalence_limit, equivalence,
                   equivalence_limit);

    const GradientField halves = stretch_gradient_halves(mesh, f);
    double identity_err = 0.0, identity_limit = 0.0;
    for (int s = 0; s < 2; ++s) {
        const Eigen::VectorXd product = stretch.matrix * f.col(s);
        identity_err = std::max(identity_err, (halves.col(s) - product).cwiseAbs().maxCoeff());
        identity_limit = std::max(identity_limit,
                                  1e-12 * product.cwiseAbs().maxCoeff() + 1e-14);
    }
    outcome.report("facewise-gradient-identity", identity_err <= identity_limit, identity_err,
                   identity_limit);

    const GradientField grad = stretch_gradient(mesh, f);
    const GradientField fd = gradient_fd_oracle(mesh, f);
    const double rel_err = (grad - fd).cwiseAbs().maxCoeff() /
                           std::max(1.0, grad.cwiseAbs().maxCoeff());
    outcome.report("gradient-vs-fd", rel_err < 1e-5, rel_err, 1e-5);

    return outcome.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Square-shaped area-preserving mesh parameterization by stretch energy "
                 "minimization"};
    app.require_subcommand(1);

    ParameterizeOptions popt;
    auto* parameterize =
        app.add_subcommand("parameterize", "Compute the square-shaped area-preserving mapping");
    parameterize->add_option("input", popt.input, "Input mesh (OBJ or OFF)")->required();
    parameterize->add_option("--format", popt.format, "Input format override")
        ->check(CLI::IsMember({"auto", "obj", "off"}));
    parameterize
        ->add_option("--corners", popt.corners,
                     "Corner vertex indices C1 C2 C3 C4 in input-file indexing "
                     "(1-based for OBJ, 0-based for OFF)")
        ->expected(4);
    parameterize->add_option("--max-iterations", popt.max_iterations, "Iteration budget")
        ->check(CLI::Range(1, 1000000));
    parameterize
        ->add_option("--tolerance", popt.tolerance,
                     "Stop once the authalic energy decrease falls below this")
        ->check(CLI::PositiveNumber);
    parameterize->add_option("--output", popt.output_path, "Write the mapping as OBJ vt records");
    parameterize->add_option("--report", popt.report_path, "Write the quality report (JSON)");
    parameterize->add_option("--history", popt.history_path, "Write per-iteration energies (CSV)");
    parameterize->add_option("--histogram", popt.histogram_path,
                             "Write the area-ratio histogram (CSV)");
    parameterize->add_option("--svg", popt.svg_path, "Write a wireframe of the image mesh (SVG)");
    parameterize->add_flag("--timing", popt.timing,
                           "Include measured wall time in the JSON report (off keeps reports "
                           "byte-reproducible)");

    std::string gen_kind;
    int gen_resolution = 33;
    std::string gen_output;
    auto* generate = app.add_subcommand("generate", "Write a synthetic test mesh");
    generate->add_option("kind", gen_kind, "flat-grid or bump-grid")
        ->required()
        ->check(CLI::IsMember({"flat-grid", "bump-grid"}));
    generate->add_option("--resolution", gen_resolution, "Vertices per side (>= 2)");
    generate->add_option("--output", gen_output, "Output OBJ path")->required();

    CheckOptions copt;
    auto* check = app.add_subcommand("check", "Run the analytic self-checks on a mesh");
    check->add_option("input", copt.input, "Input mesh (OBJ or OFF)")->required();
    check->add_option("--format", copt.format, "Input format override")
        ->check(CLI::IsMember({"auto", "obj", "off"}));
    check->add_option("--seed", copt.seed, "Seed for the randomized test mapping");
    check->add_flag("--debug-corrupt-laplacian", copt.corrupt_laplacian,
                    "Fault injection: perturb one Laplacian entry so the checks must fail");

    try {
        app.parse(argc, argv);
        if (*parameterize) return cmd_parameterize(popt);
        if (*generate) return cmd_generate(gen_kind, gen_resolution, gen_output);
        return cmd_check(copt);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const sqmap::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
