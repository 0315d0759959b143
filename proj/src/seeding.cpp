#include "batchelor/seeding.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace batchelor {

namespace {

std::array<unsigned char, 32> sha256(const unsigned char* data, std::size_t len) {
  std::array<unsigned char, 32> out{};
  unsigned int out_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data, len) != 1 ||
      EVP_DigestFinal_ex(ctx, out.data(), &out_len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256: digest failure");
  }
  EVP_MD_CTX_free(ctx);
  return out;
}

}  // namespace

std::array<std::uint32_t, 8> derive_seed_words(std::uint64_t master,
                                               std::uint64_t index,
                                               SeedDomain domain) {
  unsigned char msg[20];
  for (int i = 0; i < 8; ++i) msg[i] = static_cast<unsigned char>(master >> (8 * i));
  for (int i = 0; i < 8; ++i) msg[8 + i] = static_cast<unsigned char>(index >> (8 * i));
  const auto d = static_cast<std::uint32_t>(domain);
  for (int i = 0; i < 4; ++i) msg[16 + i] = static_cast<unsigned char>(d >> (8 * i));
  const auto digest = sha256(msg, sizeof msg);
  std::array<std::uint32_t, 8> words{};
  for (int w = 0; w < 8; ++w)
    for (int i = 0; i < 4; ++i)
      words[w] |= static_cast<std::uint32_t>(digest[4 * w + i]) << (8 * i);
  return words;
}

std::uint64_t derive_seed64(std::uint64_t master, std::uint64_t index,
                            SeedDomain domain) {
  const auto words = derive_seed_words(master, index, domain);
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t index, SeedDomain domain) {
  const auto words = derive_seed_words(master, index, domain);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

std::string sha256_hex(const std::string& bytes) {
  const auto digest =
      sha256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (unsigned char b : digest) {
    out.push_back(hex[b >> 4]);
    out.push_back(hex[b & 0xf]);
  }
  return out;
}

}  // namespace batchelor
