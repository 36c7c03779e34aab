#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace oscn {

/// 160-bit SHA-1 content digest; identifies a file's exact bytes.
using Digest = std::array<std::uint8_t, 20>;
using Sha256 = std::array<std::uint8_t, 32>;

Digest sha1(std::string_view bytes);
Sha256 sha256(std::string_view bytes);

std::string toHex(const Digest& digest);

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | d[i];
    return h;
  }
};

}  // namespace oscn
