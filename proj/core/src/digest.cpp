#include "taskforge/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstring>

namespace taskforge {

namespace {

std::array<unsigned char, 32> sha256_raw(std::string_view bytes) {
  std::array<unsigned char, 32> out{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  auto raw = sha256_raw(bytes);
  std::string hex(64, '0');
  for (std::size_t i = 0; i < raw.size(); ++i) {
    hex[2 * i] = digits[raw[i] >> 4];
    hex[2 * i + 1] = digits[raw[i] & 0xf];
  }
  return hex;
}

std::uint64_t sha256_seed(std::string_view bytes) {
  auto raw = sha256_raw(bytes);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | raw[i];
  return v;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label folded into the seed, then one splitmix64 step.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = seed ^ h;
  return splitmix64(s);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + n);
  return splitmix64(s);
}

}  // namespace taskforge
