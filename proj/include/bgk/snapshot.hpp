/// @file snapshot.hpp
/// @brief Binary state snapshots.
///
/// Layout (all fields little-endian 64-bit):
///   magic   "BGKSNAP1"           8 bytes
///   dims, cells_per_axis, nodes_per_axis   int64 x 3
///   v_max, time                            f64 x 2
///   values  row-major (cell-major, node fastest)  f64 x (cells * nodes)
/// Save/load round-trips bit-exactly.

#pragma once

#include <string>
#include <vector>

namespace bgk {

struct Snapshot {
    int dims = 0;
    int cells_per_axis = 0;
    int nodes_per_axis = 0;
    double v_max = 0.0;
    double time = 0.0;
    std::vector<double> values;
};

void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

}  // namespace bgk
