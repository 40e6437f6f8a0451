#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "esbgk/error.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"

namespace esbgk {

/// Binary snapshot layout (all little-endian):
///   bytes 0-7    magic "ESBGKSNP"
///   bytes 8-11   u32 format version
///   bytes 12-15  u32 number of f64 metadata fields (18)
///   metadata     f64: d, delta, nu, theta, mu, n_v[3], L_v[3], c[3], n_I, I_max, n_x, dx
///   values       f64 x (n_x * cell size), cells in order, nodes in PhaseGrid order
///   footer       u64 FNV-1a hash of every preceding byte
inline constexpr char kSnapshotMagic[8] = {'E', 'S', 'B', 'G', 'K', 'S', 'N', 'P'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::uint32_t kSnapshotMetaFields = 18;

class SnapshotError : public Error {
public:
    enum class Kind { io, magic, version, size, checksum, content };
    SnapshotError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct SnapshotFile {
    GridSpec grid;
    ModelParams params;
    DistSnapshot data;
};

std::string encode_snapshot(const SnapshotFile& snap);
SnapshotFile decode_snapshot(const std::string& bytes);

void write_snapshot(const std::string& path, const SnapshotFile& snap);
SnapshotFile read_snapshot(const std::string& path);

std::uint64_t fnv1a64(const char* data, std::size_t n);

}  // namespace esbgk
