#pragma once

#include <array>

#include "sqmap/mesh.hpp"

namespace sqmap {

enum class GridKind { Flat, Bump };

// Unit-square grid with resolution x resolution vertices (resolution >= 2)
// and each cell split along the same diagonal; Bump displaces it by
// z = 0.5 exp(-8 ((x - 1/2)^2 + (y - 1/2)^2)). Deterministic.
Mesh make_grid(GridKind kind, int resolution);

// Indices of the four geometric corners (0,0), (1,0), (1,1), (0,1).
std::array<int, 4> grid_corner_indices(int resolution);

}  // namespace sqmap
