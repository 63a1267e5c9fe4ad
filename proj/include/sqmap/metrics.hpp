#pragma once

#include <string>
#include <vector>

#include "sqmap/mesh.hpp"
#include "sqmap/pipeline.hpp"

namespace sqmap {

// Area-preservation diagnostics over all faces. Statistics are taken per
// face: the mean is unweighted, the SD is the population deviation, and
// the area-weighted mean (= image area / total area) is reported alongside.
struct QualityReport {
    int vertex_count = 0;
    int face_count = 0;
    double area_ratio_mean = 0.0;
    double area_ratio_mean_weighted = 0.0;
    double area_ratio_sd = 0.0;
    double stretch_energy = 0.0;
    double authalic_energy = 0.0;
    int fold_count = 0;
    std::vector<double> histogram_edges;  // bins + 1 ascending edges
    std::vector<int> histogram_counts;    // counts sum to face_count
    int iterations = 0;
    std::string termination;
    double wall_time_seconds = 0.0;
};

// Signed image area over reference area per face, R_A(f, tau); the mesh is
// used as given (no renormalization).
std::vector<double> area_ratios(const Mesh& mesh, const Mapping& f);

// Builds the full report: ratio statistics, a 50-bin histogram over
// [max(0, mean - 5 SD), mean + 5 SD] (out-of-range ratios land in the edge
// bins), energies, fold count and the solve metadata. Timing is whatever
// the caller measured; it defaults to zero so that written reports stay
// byte-reproducible.
QualityReport summarize(const Mesh& mesh, const Mapping& f, const SolveResult& result,
                        double wall_time_seconds = 0.0);

// Stable JSON rendering of the report (schema_version 1).
std::string to_json(const QualityReport& report);

}  // namespace sqmap
