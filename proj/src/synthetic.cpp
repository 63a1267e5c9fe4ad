#include "sqmap/synthetic.hpp"

#include <cmath>

namespace sqmap {

Mesh make_grid(GridKind kind, int resolution) {
    if (resolution < 2) throw ValidationError("grid resolution must be >= 2");
    const int n = resolution;
    Eigen::MatrixX3d vertices(n * n, 3);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const double x = static_cast<double>(col) / (n - 1);
            const double y = static_cast<double>(row) / (n - 1);
            double z = 0.0;
            if (kind == GridKind::Bump)
                z = 0.5 * std::exp(-8.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)));
            vertices.row(row * n + col) << x, y, z;
        }
    }
    Eigen::MatrixX3i faces(2 * (n - 1) * (n - 1), 3);
    int f = 0;
    for (int row = 0; row + 1 < n; ++row) {
        for (int col = 0; col + 1 < n; ++col) {
            const int a = row * n + col;
            const int b = row * n + col + 1;
            const int c = (row + 1) * n + col + 1;
            const int d = (row + 1) * n + col;
            faces.row(f++) << a, b, c;
            faces.row(f++) << a, c, d;
        }
    }
    return Mesh(std::move(vertices), std::move(faces));
}

std::array<int, 4> grid_corner_indices(int resolution) {
    const int n = resolution;
    return {0, n - 1, n * n - 1, n * (n - 1)};
}

}  // namespace sqmap
