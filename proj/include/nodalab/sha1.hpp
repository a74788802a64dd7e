// Compact SHA-1, enough for git-style blob content hashes of small files.
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

namespace nodalab {

namespace detail {

inline std::uint32_t rol32(std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }

}  // namespace detail

inline std::string sha1_hex(const std::string& data) {
  std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

  std::string msg = data;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(data.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xFF));

  for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
      w[i] = 0;
      for (int b = 0; b < 4; ++b)
        w[i] = (w[i] << 8) | static_cast<std::uint8_t>(msg[chunk + 4 * static_cast<std::size_t>(i) + static_cast<std::size_t>(b)]);
    }
    for (int i = 16; i < 80; ++i) w[i] = detail::rol32(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      const std::uint32_t tmp = detail::rol32(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = detail::rol32(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  std::string out(40, '0');
  static const char* hex = "0123456789abcdef";
  for (int i = 0; i < 5; ++i)
    for (int b = 0; b < 8; ++b) out[static_cast<std::size_t>(8 * i + b)] = hex[(h[static_cast<std::size_t>(i)] >> (28 - 4 * b)) & 0xF];
  return out;
}

// Hash of "blob <len>\0<content>", matching `git hash-object`.
inline std::string git_blob_hash(const std::string& content) {
  std::string buf = "blob " + std::to_string(content.size());
  buf.push_back('\0');
  buf += content;
  return sha1_hex(buf);
}

}  // namespace nodalab
