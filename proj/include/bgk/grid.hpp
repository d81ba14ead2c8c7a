/// @file grid.hpp
/// @brief Periodic spatial grid, truncated velocity lattice, collision basis.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bgk {

using Vec3 = std::array<double, 3>;

/// Uniform cell-centered lattice on [-v_max, v_max]^3.
/// nodes_per_axis must be even so that the lattice is symmetric under
/// v -> -v with bit-exact negation of the coordinates.
struct VelocityGrid {
    int nodes_per_axis = 0;
    double v_max = 0.0;
    double weight = 0.0;  // uniform cell volume dv^3
    std::vector<Vec3> nodes;
    std::vector<double> speed2;  // |v|^2 per node, cached

    int count() const { return static_cast<int>(nodes.size()); }
    /// Index of the node at -v (exact mirror).
    int mirror_index(int j) const;
};

VelocityGrid build_velocity_grid(int nodes_per_axis, double v_max);

/// Periodic grid on the unit torus per axis; dims in {1,2,3}.
struct SpatialGrid {
    int dims = 0;
    int cells_per_axis = 0;
    double dx = 0.0;
    int cell_count = 0;

    int extent(int axis) const { return axis < dims ? cells_per_axis : 1; }
    /// Flatten (i0, i1, i2); unused axes must be 0. Axis 0 is fastest.
    int index(int i0, int i1 = 0, int i2 = 0) const {
        return (i2 * extent(1) + i1) * extent(0) + i0;
    }
    std::array<int, 3> coords(int cell) const {
        std::array<int, 3> c{0, 0, 0};
        c[0] = cell % extent(0);
        c[1] = (cell / extent(0)) % extent(1);
        c[2] = cell / (extent(0) * extent(1));
        return c;
    }
    int wrap(int i) const {
        const int n = cells_per_axis;
        i %= n;
        return i < 0 ? i + n : i;
    }
    /// Periodic neighbor of `cell` one step along `axis`.
    int neighbor(int cell, int axis, int step) const;
    /// Cell-center coordinate along an axis.
    double center(int i) const { return (i + 0.5) * dx; }
};

SpatialGrid build_spatial_grid(int dims, int cells_per_axis);

/// The five collision invariant basis functions tabulated per node:
/// e = (1, v1, v2, v3, (|v|^2 - 3)/sqrt(6)).
struct CollisionBasis {
    std::array<std::vector<double>, 5> e;
};

CollisionBasis collision_basis(const VelocityGrid& grid);

}  // namespace bgk
