#include "oscn/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace oscn {

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> evpDigest(const EVP_MD* md, std::string_view bytes) {
  std::array<std::uint8_t, N> out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, md, nullptr) != 1 || len != N) {
    throw std::runtime_error("digest computation failed");
  }
  return out;
}

}  // namespace

Digest sha1(std::string_view bytes) { return evpDigest<20>(EVP_sha1(), bytes); }

Sha256 sha256(std::string_view bytes) { return evpDigest<32>(EVP_sha256(), bytes); }

std::string toHex(const Digest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(digest.size() * 2);
  for (auto byte : digest) {
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xF]);
  }
  return out;
}

}  // namespace oscn
