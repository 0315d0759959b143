#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>

namespace batchelor {

/// Independent seed domains so one realization's velocity, forcing noise, and
/// initial-data draws never share a stream.
enum class SeedDomain : std::uint32_t {
  velocity = 1,
  noise = 2,
  source = 3,
  misc = 4,
};

/// SHA-256(master || index || domain) -> 8 words.  Splittable: adding
/// realizations never perturbs existing streams, and distinct (index, domain)
/// pairs give independent seeds.
std::array<std::uint32_t, 8> derive_seed_words(std::uint64_t master,
                                               std::uint64_t index, SeedDomain domain);

std::uint64_t derive_seed64(std::uint64_t master, std::uint64_t index,
                            SeedDomain domain);

std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t index, SeedDomain domain);

/// SHA-256 hex digest of a byte string (config fingerprints).
std::string sha256_hex(const std::string& bytes);

}  // namespace batchelor
