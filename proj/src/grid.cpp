#include "bgk/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bgk {

VelocityGrid build_velocity_grid(int nodes_per_axis, double v_max) {
    if (nodes_per_axis < 4 || nodes_per_axis % 2 != 0)
        throw std::invalid_argument("build_velocity_grid: nodes_per_axis must be even and >= 4, got " +
                                    std::to_string(nodes_per_axis));
    if (!(v_max > 0.0))
        throw std::invalid_argument("build_velocity_grid: v_max must be positive");

    VelocityGrid g;
    g.nodes_per_axis = nodes_per_axis;
    g.v_max = v_max;
    const double dv = 2.0 * v_max / nodes_per_axis;
    g.weight = dv * dv * dv;

    const int n = nodes_per_axis;
    const int half = n / 2;
    // Coordinate of axis index i is (i - n/2 + 0.5) * dv. Computing through the
    // signed half-integer keeps coord(n-1-i) == -coord(i) exact in IEEE.
    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i) axis[i] = (i - half + 0.5) * dv;

    g.nodes.resize(static_cast<std::size_t>(n) * n * n);
    g.speed2.resize(g.nodes.size());
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz) {
                const int j = (ix * n + iy) * n + iz;
                g.nodes[j] = {axis[ix], axis[iy], axis[iz]};
                g.speed2[j] = axis[ix] * axis[ix] + axis[iy] * axis[iy] + axis[iz] * axis[iz];
            }
    return g;
}

int VelocityGrid::mirror_index(int j) const {
    const int n = nodes_per_axis;
    const int iz = j % n;
    const int iy = (j / n) % n;
    const int ix = j / (n * n);
    return ((n - 1 - ix) * n + (n - 1 - iy)) * n + (n - 1 - iz);
}

SpatialGrid build_spatial_grid(int dims, int cells_per_axis) {
    if (dims < 1 || dims > 3)
        throw std::invalid_argument("build_spatial_grid: dims must be 1, 2 or 3, got " + std::to_string(dims));
    if (cells_per_axis < 2)
        throw std::invalid_argument("build_spatial_grid: cells_per_axis must be >= 2");
    SpatialGrid g;
    g.dims = dims;
    g.cells_per_axis = cells_per_axis;
    g.dx = 1.0 / cells_per_axis;
    g.cell_count = 1;
    for (int d = 0; d < dims; ++d) g.cell_count *= cells_per_axis;
    return g;
}

int SpatialGrid::neighbor(int cell, int axis, int step) const {
    auto c = coords(cell);
    c[axis] = wrap(c[axis] + step);
    return index(c[0], c[1], c[2]);
}

CollisionBasis collision_basis(const VelocityGrid& grid) {
    CollisionBasis b;
    const int nv = grid.count();
    for (auto& comp : b.e) comp.resize(nv);
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
    for (int j = 0; j < nv; ++j) {
        b.e[0][j] = 1.0;
        b.e[1][j] = grid.nodes[j][0];
        b.e[2][j] = grid.nodes[j][1];
        b.e[3][j] = grid.nodes[j][2];
        b.e[4][j] = (grid.speed2[j] - 3.0) * inv_sqrt6;
    }
    return b;
}

}  // namespace bgk
