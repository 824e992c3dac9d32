#pragma once
#include <cstddef>
#include <cstdint>
#include <string>

namespace calodiff {

// FNV-1a, used for geometry fingerprints and artifact content hashes.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_file(const std::string& path);

std::string hash_hex(std::uint64_t h);

}  // namespace calodiff
