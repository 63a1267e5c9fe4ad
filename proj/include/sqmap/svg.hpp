#pragma once

#include <string>

#include "sqmap/mesh.hpp"

namespace sqmap {

// Wireframe of the image mesh in a 1000x1000 viewBox over [0,1]^2 (y up);
// folded faces are filled red.
void write_parameterization_svg(const Mesh& mesh, const Mapping& f, const std::string& path);

}  // namespace sqmap
