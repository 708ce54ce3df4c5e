#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "swapornot/domain.hpp"
#include "swapornot/round_function.hpp"

namespace swapornot {

/// Largest supported round count.
inline constexpr std::uint32_t kMaxRounds = 1u << 16;

/// One round of an enciphering trace.
struct TraceStep {
  u128 x;
  u128 partner;
  u128 canonical;
  bool bit;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct TracedResult {
  u128 output;
  std::vector<TraceStep> trace;
};

/// The swap-or-not cipher over a domain, with subkeys K_1..K_r and a round
/// function source F.
///
/// Round i pairs x with x' = K_i - x (or K_i xor x) and moves to x' iff
/// F_i(T, max(x, x')) = 1. Deciphering runs the same body for i = r..1. The
/// untweaked cipher is the tweaked one at the empty tweak.
template <RoundFunction Source>
class SwapOrNot {
 public:
  SwapOrNot(Domain domain, std::vector<u128> subkeys, Source source)
      : domain_(domain), subkeys_(std::move(subkeys)), source_(std::move(source)) {
    if (subkeys_.size() > kMaxRounds) throw ParameterError("round count exceeds 2^16");
    for (u128 k : subkeys_) domain_.check(k, "subkey");
  }

  const Domain& domain() const noexcept { return domain_; }
  std::uint32_t rounds() const noexcept { return static_cast<std::uint32_t>(subkeys_.size()); }
  std::span<const u128> subkeys() const noexcept { return subkeys_; }
  const Source& source() const noexcept { return source_; }

  u128 encipher(u128 x, TweakBytes tweak = {}) const {
    check_inputs(x, tweak);
    const auto ctx = source_.prepare(tweak);
    for (std::uint32_t i = 1; i <= rounds(); ++i) x = apply_round(ctx, i, x);
    return x;
  }

  u128 decipher(u128 y, TweakBytes tweak = {}) const {
    check_inputs(y, tweak);
    const auto ctx = source_.prepare(tweak);
    for (std::uint32_t i = rounds(); i >= 1; --i) y = apply_round(ctx, i, y);
    return y;
  }

  TracedResult encipher_traced(u128 x, TweakBytes tweak = {}) const {
    check_inputs(x, tweak);
    const auto ctx = source_.prepare(tweak);
    TracedResult out{x, {}};
    out.trace.reserve(rounds());
    for (std::uint32_t i = 1; i <= rounds(); ++i) {
      const u128 partner = domain_.partner_unchecked(subkeys_[i - 1], x);
      const u128 x_hat = canonical(x, partner);
      const bool b = source_.bit(ctx, i, x_hat);
      out.trace.push_back({x, partner, x_hat, b});
      if (b) x = partner;
    }
    out.output = x;
    return out;
  }

  /// The cipher with rounds in reverse order (K_r..K_1, F_r..F_1). Enciphering
  /// with it undoes enciphering with this one.
  SwapOrNot<ReversedRounds<Source>> reversed() const {
    std::vector<u128> keys(subkeys_.rbegin(), subkeys_.rend());
    return {domain_, std::move(keys), ReversedRounds<Source>(source_, rounds())};
  }

 private:
  u128 apply_round(const typename Source::tweak_context& ctx, std::uint32_t i, u128 x) const {
    const u128 partner = domain_.partner_unchecked(subkeys_[i - 1], x);
    // The bit is consumed even at a fixed point so every round costs the same.
    return source_.bit(ctx, i, canonical(x, partner)) ? partner : x;
  }

  void check_inputs(u128 x, TweakBytes tweak) const {
    domain_.check(x, "input");
    if (tweak.size() > kMaxTweakBytes) throw ParameterError("tweak longer than 2^32 - 1 bytes");
  }

  Domain domain_;
  std::vector<u128> subkeys_;
  Source source_;
};

/// Subkeys drawn from an ideal source.
inline std::vector<u128> ideal_subkeys(const Domain& d, std::uint32_t rounds,
                                       const IdealRoundFunction& source) {
  if (rounds > kMaxRounds) throw ParameterError("round count exceeds 2^16");
  std::vector<u128> keys(rounds);
  for (std::uint32_t i = 1; i <= rounds; ++i) keys[i - 1] = source.subkey(d, i);
  return keys;
}

/// An ideal swap-or-not instance: random subkeys and random round functions.
inline SwapOrNot<IdealRoundFunction> make_ideal_cipher(const Domain& d, std::uint32_t rounds,
                                                       const IdealSeed& seed) {
  IdealRoundFunction source(seed);
  auto keys = ideal_subkeys(d, rounds, source);
  return {d, std::move(keys), std::move(source)};
}

}  // namespace swapornot
