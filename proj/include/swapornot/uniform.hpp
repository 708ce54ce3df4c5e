#pragma once

#include <concepts>
#include <cstdint>

#include "swapornot/domain.hpp"

namespace swapornot {

/// Draws a uniform element of [0, max_element] from a stream of uniform
/// 64-bit words by rejection sampling.
///
/// Domains with N <= 2^63 consume one word per attempt; larger domains
/// consume two words (low then high) forming a 128-bit sample. A sample s is
/// accepted when s < N * floor(2^w / N) and reduced modulo N, so the result is
/// exactly uniform whenever the words are.
template <std::invocable Next>
  requires std::convertible_to<std::invoke_result_t<Next>, std::uint64_t>
u128 uniform_below(u128 max_element, Next&& next_word) {
  constexpr u128 kTwo63 = u128{1} << 63;
  if (max_element < kTwo63) {
    const u128 n = max_element + 1;
    const u128 two64 = u128{1} << 64;
    const u128 limit = two64 - two64 % n;
    for (;;) {
      const u128 s = static_cast<std::uint64_t>(next_word());
      if (s < limit) return s % n;
    }
  }
  if (max_element == kU128Max) {
    const u128 lo = static_cast<std::uint64_t>(next_word());
    const u128 hi = static_cast<std::uint64_t>(next_word());
    return (hi << 64) | lo;
  }
  const u128 n = max_element + 1;
  // 2^128 mod n, computed as (2^128 - n) mod n.
  const u128 excess = (~n + 1) % n;
  const u128 limit = kU128Max - excess;  // last accepted value
  for (;;) {
    const u128 lo = static_cast<std::uint64_t>(next_word());
    const u128 hi = static_cast<std::uint64_t>(next_word());
    const u128 s = (hi << 64) | lo;
    if (s <= limit) return s % n;
  }
}

}  // namespace swapornot
