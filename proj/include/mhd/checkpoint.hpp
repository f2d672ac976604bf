#pragma once

// Checkpoint files: one JSON header line, then the raw body of little-endian
// float64 samples (rho, u, B in header order, row-major with axis 1 fastest).
// The header declares its own byte length, the body length and an FNV-1a
// checksum of the body.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mhd/mhd_system.hpp"

namespace mhd {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointHeader {
  int version = kCheckpointVersion;
  int dim = 0;
  int points_per_axis = 0;
  double period = 0.0;
  double t = 0.0;
  PhysParams params;
  std::vector<std::string> fields;
  std::uint64_t header_bytes = 0;
  std::uint64_t body_bytes = 0;
  std::uint64_t checksum = 0;
};

struct Checkpoint {
  CheckpointHeader header;
  State state;
};

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

/// Serialized file contents.
std::vector<unsigned char> encode_checkpoint(const State& s, const PhysParams& params);
/// Throws VersionMismatch, MalformedHeader, TruncatedBody or ChecksumMismatch.
Checkpoint decode_checkpoint(std::span<const unsigned char> bytes);

void write_checkpoint(const std::filesystem::path& path, const State& s, const PhysParams& params);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace mhd
