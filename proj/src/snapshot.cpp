#include "bgk/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bgk {

namespace {

constexpr char kMagic[8] = {'B', 'G', 'K', 'S', 'N', 'A', 'P', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(os, bits);
}

double get_f64(std::istream& is) {
    const std::uint64_t bits = get_u64(is);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

}  // namespace

void save_snapshot(const std::string& path, const Snapshot& snap) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
    os.write(kMagic, 8);
    put_u64(os, static_cast<std::uint64_t>(snap.dims));
    put_u64(os, static_cast<std::uint64_t>(snap.cells_per_axis));
    put_u64(os, static_cast<std::uint64_t>(snap.nodes_per_axis));
    put_f64(os, snap.v_max);
    put_f64(os, snap.time);
    for (double v : snap.values) put_f64(os, v);
    if (!os) throw std::runtime_error("save_snapshot: write failed for " + path);
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("load_snapshot: bad magic in " + path);
    Snapshot snap;
    snap.dims = static_cast<int>(get_u64(is));
    snap.cells_per_axis = static_cast<int>(get_u64(is));
    snap.nodes_per_axis = static_cast<int>(get_u64(is));
    snap.v_max = get_f64(is);
    snap.time = get_f64(is);
    if (snap.dims < 1 || snap.dims > 3 || snap.cells_per_axis < 2 || snap.nodes_per_axis < 4)
        throw std::runtime_error("load_snapshot: implausible grid metadata in " + path);
    std::size_t cells = 1;
    for (int d = 0; d < snap.dims; ++d) cells *= static_cast<std::size_t>(snap.cells_per_axis);
    const std::size_t nodes = static_cast<std::size_t>(snap.nodes_per_axis) * snap.nodes_per_axis *
                              snap.nodes_per_axis;
    snap.values.resize(cells * nodes);
    for (auto& v : snap.values) v = get_f64(is);
    if (!is) throw std::runtime_error("load_snapshot: truncated file " + path);
    return snap;
}

}  // namespace bgk
