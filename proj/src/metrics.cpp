#include "sqmap/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "sqmap/energy.hpp"

namespace sqmap {

std::vector<double> area_ratios(const Mesh& mesh, const Mapping& f) {
    check_mapping(mesh, f);
    std::vector<double> ratios(static_cast<size_t>(mesh.face_count()));
    for (int t = 0; t < mesh.face_count(); ++t) {
        const double image = signed_area_2d(f.row(mesh.faces()(t, 0)), f.row(mesh.faces()(t, 1)),
                                            f.row(mesh.faces()(t, 2)));
        ratios[static_cast<size_t>(t)] = image / mesh.face_areas()(t);
    }
    return ratios;
}

QualityReport summarize(const Mesh& mesh, const Mapping& f, const SolveResult& result,
                        double wall_time_seconds) {
    const std::vector<double> ratios = area_ratios(mesh, f);
    const int m = mesh.face_count();

    QualityReport report;
    report.vertex_count = mesh.vertex_count();
    report.face_count = m;

    double mean = 0.0, weighted = 0.0;
    for (int t = 0; t < m; ++t) {
        mean += ratios[static_cast<size_t>(t)];
        weighted += ratios[static_cast<size_t>(t)] * mesh.face_areas()(t);
    }
    mean /= m;
    weighted /= mesh.total_area();
    double variance = 0.0;
    for (double r : ratios) variance += (r - mean) * (r - mean);
    variance /= m;  // population SD, taken over all faces

    report.area_ratio_mean = mean;
    report.area_ratio_mean_weighted = weighted;
    report.area_ratio_sd = std::sqrt(variance);
    report.fold_count = static_cast<int>(std::count_if(
        ratios.begin(), ratios.end(), [](double r) { return r <= 0.0; }));

    const EnergyBreakdown energy = stretch_energy(mesh, f);
    report.stretch_energy = energy.stretch_geometric;
    report.authalic_energy = energy.authalic;

    constexpr int kBins = 50;
    double lo = std::max(0.0, mean - 5.0 * report.area_ratio_sd);
    double hi = mean + 5.0 * report.area_ratio_sd;
    if (!(hi > lo)) {  // degenerate spread (SD = 0)
        lo = mean - 0.5;
        hi = mean + 0.5;
    }
    report.histogram_edges.resize(kBins + 1);
    for (int b = 0; b <= kBins; ++b)
        report.histogram_edges[static_cast<size_t>(b)] = lo + (hi - lo) * b / kBins;
    report.histogram_counts.assign(kBins, 0);
    for (double r : ratios) {
        int bin = static_cast<int>(std::floor((r - lo) / (hi - lo) * kBins));
        bin = std::clamp(bin, 0, kBins - 1);
        ++report.histogram_counts[static_cast<size_t>(bin)];
    }

    report.iterations = result.iterations_used;
    report.termination = to_string(result.termination);
    report.wall_time_seconds = wall_time_seconds;
    return report;
}

std::string to_json(const QualityReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["mesh"] = {{"vertices", report.vertex_count}, {"faces", report.face_count}};
    j["area_ratio"] = {{"mean", report.area_ratio_mean},
                       {"mean_weighted", report.area_ratio_mean_weighted},
                       {"sd", report.area_ratio_sd}};
    j["stretch_energy"] = report.stretch_energy;
    j["authalic_energy"] = report.authalic_energy;
    j["fold_count"] = report.fold_count;
    j["histogram"] = {{"edges", report.histogram_edges}, {"counts", report.histogram_counts}};
    j["iterations"] = report.iterations;
    j["termination"] = report.termination;
    j["wall_time_seconds"] = report.wall_time_seconds;
    return j.dump(2) + "\n";
}

}  // namespace sqmap
