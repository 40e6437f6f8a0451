#include "esbgk/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace esbgk {

std::uint64_t fnv1a64(const char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(const std::string& in, std::size_t pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    return v;
}

std::uint32_t get_u32(const std::string& in, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    return v;
}

double get_f64(const std::string& in, std::size_t pos) { return std::bit_cast<double>(get_u64(in, pos)); }

constexpr std::size_t kHeaderBytes = 16;

std::size_t cell_size_of(const GridSpec& g, int d) {
    std::size_t n = static_cast<std::size_t>(g.n_I);
    for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(g.n_v[a]);
    return n;
}

}  // namespace

std::string encode_snapshot(const SnapshotFile& s) {
    const int d = s.params.d;
    if (s.data.cell_size != cell_size_of(s.grid, d) ||
        static_cast<std::size_t>(s.data.values.size()) != s.data.cell_size * s.data.n_x)
        throw SnapshotError(SnapshotError::Kind::content, "snapshot values do not match the grid");

    std::string out;
    out.reserve(kHeaderBytes + 8 * (kSnapshotMetaFields + s.data.values.size() + 1));
    out.append(kSnapshotMagic, sizeof(kSnapshotMagic));
    put_u32(out, kSnapshotVersion);
    put_u32(out, kSnapshotMetaFields);
    put_f64(out, d);
    put_f64(out, s.params.delta);
    put_f64(out, s.params.nu);
    put_f64(out, s.params.theta);
    put_f64(out, s.params.mu);
    for (int a = 0; a < kMaxDim; ++a) put_f64(out, a < d ? s.grid.n_v[a] : 0);
    for (int a = 0; a < kMaxDim; ++a) put_f64(out, a < d ? s.grid.half_width[a] : 0.0);
    for (int a = 0; a < kMaxDim; ++a) put_f64(out, a < d ? s.grid.center[a] : 0.0);
    put_f64(out, s.grid.n_I);
    put_f64(out, s.grid.I_max);
    put_f64(out, static_cast<double>(s.data.n_x));
    put_f64(out, s.data.dx);
    for (Eigen::Index i = 0; i < s.data.values.size(); ++i) put_f64(out, s.data.values[i]);
    put_u64(out, fnv1a64(out.data(), out.size()));
    return out;
}

SnapshotFile decode_snapshot(const std::string& in) {
    using K = SnapshotError::Kind;
    if (in.size() < kHeaderBytes) throw SnapshotError(K::size, "snapshot shorter than its header");
    if (std::memcmp(in.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0)
        throw SnapshotError(K::magic, "not a snapshot file (bad magic)");
    const std::uint32_t version = get_u32(in, 8);
    if (version != kSnapshotVersion)
        throw SnapshotError(K::version, "unsupported snapshot version " + std::to_string(version));
    const std::uint32_t n_meta = get_u32(in, 12);
    if (n_meta != kSnapshotMetaFields) throw SnapshotError(K::content, "unexpected metadata field count");
    const std::size_t meta_end = kHeaderBytes + 8 * n_meta;
    if (in.size() < meta_end + 8) throw SnapshotError(K::size, "snapshot truncated inside metadata");

    std::size_t pos = kHeaderBytes;
    auto next = [&] {
        const double v = get_f64(in, pos);
        pos += 8;
        return v;
    };
    SnapshotFile s;
    s.params.d = static_cast<int>(next());
    s.params.delta = next();
    s.params.nu = next();
    s.params.theta = next();
    s.params.mu = next();
    if (s.params.d < 1 || s.params.d > kMaxDim) throw SnapshotError(K::content, "invalid dimension in snapshot");
    for (int a = 0; a < kMaxDim; ++a) s.grid.n_v[a] = static_cast<int>(next());
    for (int a = 0; a < kMaxDim; ++a) s.grid.half_width[a] = next();
    for (int a = 0; a < kMaxDim; ++a) s.grid.center[a] = next();
    s.grid.n_I = static_cast<int>(next());
    s.grid.I_max = next();
    const double n_x = next();
    const double dx = next();
    for (int a = 0; a < s.params.d; ++a)
        if (s.grid.n_v[a] < 1) throw SnapshotError(K::content, "invalid node count in snapshot");
    if (s.grid.n_I < 1 || !(n_x >= 1.0)) throw SnapshotError(K::content, "invalid node count in snapshot");

    const std::size_t cell = cell_size_of(s.grid, s.params.d);
    const auto nx = static_cast<std::size_t>(n_x);
    const std::size_t expected = meta_end + 8 * cell * nx + 8;
    if (in.size() != expected)
        throw SnapshotError(K::size, "snapshot size " + std::to_string(in.size()) + " does not match expected " +
                                         std::to_string(expected));
    if (get_u64(in, expected - 8) != fnv1a64(in.data(), expected - 8))
        throw SnapshotError(K::checksum, "snapshot checksum mismatch");

    s.data = DistSnapshot(cell, nx, dx);
    for (std::size_t i = 0; i < cell * nx; ++i) s.data.values[static_cast<Eigen::Index>(i)] = next();
    return s;
}

void write_snapshot(const std::string& path, const SnapshotFile& snap) {
    const std::string bytes = encode_snapshot(snap);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw SnapshotError(SnapshotError::Kind::io, "cannot open " + path + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw SnapshotError(SnapshotError::Kind::io, "write failed: " + path);
}

SnapshotFile read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SnapshotError(SnapshotError::Kind::io, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace esbgk
