#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swapornot {

using u128 = unsigned __int128;

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element, key or digit string lies outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter violates a precondition (round counts, query budgets).
class ParameterError : public Error {
 public:
  using Error::Error;
};

inline constexpr u128 kU128Max = ~u128{0};

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

inline u128 parse_u128(std::string_view s) {
  if (s.empty()) throw DomainError("empty integer");
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw DomainError("not a decimal integer: " + std::string(s));
    const auto digit = static_cast<unsigned>(c - '0');
    if (v > (kU128Max - digit) / 10) throw DomainError("integer exceeds 128 bits: " + std::string(s));
    v = v * 10 + digit;
  }
  return v;
}

inline std::vector<std::uint8_t> bytes_from_hex(std::string_view hex) {
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw DomainError("invalid hex character in '" + std::string(hex) + "'");
  };
  if (hex.size() % 2 != 0) throw DomainError("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

template <class Bytes>
std::string hex_from_bytes(const Bytes& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace swapornot
