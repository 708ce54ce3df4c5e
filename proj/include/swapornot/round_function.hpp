#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "swapornot/domain.hpp"
#include "swapornot/uniform.hpp"

namespace swapornot {

using TweakBytes = std::span<const std::uint8_t>;

/// Largest accepted tweak, in bytes.
inline constexpr std::uint64_t kMaxTweakBytes = 0xffffffffULL;

/// A source of one-bit round functions F_i(T, x_hat).
///
/// `prepare` runs once per tweak and returns whatever per-tweak state the
/// source needs; `bit` is then called once per round with a 1-based round
/// index. Both must be deterministic and callable concurrently.
template <class S>
concept RoundFunction = requires(const S& s, TweakBytes tweak, std::uint32_t round, u128 x_hat) {
  typename S::tweak_context;
  { s.prepare(tweak) } -> std::same_as<typename S::tweak_context>;
  { s.bit(std::declval<const typename S::tweak_context&>(), round, x_hat) } -> std::same_as<bool>;
};

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Absorber {
  std::uint64_t state;
  constexpr Absorber& add(std::uint64_t word) noexcept {
    state = mix64(state ^ word);
    return *this;
  }
  constexpr Absorber& add(u128 word) noexcept {
    return add(static_cast<std::uint64_t>(word)).add(static_cast<std::uint64_t>(word >> 64));
  }
};

}  // namespace detail

/// 256-bit seed naming one ideal (uniformly random) cipher instance.
struct IdealSeed {
  std::array<std::uint8_t, 32> bytes{};

  static IdealSeed from_u64(std::uint64_t v) {
    IdealSeed s;
    for (int i = 0; i < 8; ++i) s.bytes[24 + i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
    return s;
  }
};

/// Random round functions and subkeys, sampled lazily from a seed.
///
/// Each bit is a fixed function of (seed, round, tweak, x_hat), which gives
/// the memoization of a lazily sampled random function without any table.
/// This is a statistical model of a random function, not a PRF; use the
/// PRF-backed source for anything keyed.
class IdealRoundFunction {
 public:
  struct tweak_context {
    std::uint64_t lane_a;
    std::uint64_t lane_b;
  };

  explicit IdealRoundFunction(const IdealSeed& seed) : key_(absorb_seed(seed)) {}

  /// Test hook: every round bit equals `bit`.
  static IdealRoundFunction forced(bool bit) {
    IdealRoundFunction f{IdealSeed{}};
    f.forced_ = bit;
    return f;
  }

  tweak_context prepare(TweakBytes tweak) const {
    detail::Absorber a{key_ ^ 0x5457454b41ULL};
    detail::Absorber b{key_ ^ 0x5457454b42ULL};
    a.add(static_cast<std::uint64_t>(tweak.size()));
    b.add(~static_cast<std::uint64_t>(tweak.size()));
    for (std::size_t off = 0; off < tweak.size(); off += 8) {
      std::uint64_t w = 0;
      for (std::size_t j = off; j < std::min(off + 8, tweak.size()); ++j) w = (w << 8) | tweak[j];
      a.add(w);
      b.add(w);
    }
    return {a.state, b.state};
  }

  bool bit(const tweak_context& ctx, std::uint32_t round, u128 x_hat) const {
    if (forced_) return *forced_;
    detail::Absorber h{key_};
    h.add(std::uint64_t{'B'}).add(ctx.lane_a).add(ctx.lane_b).add(std::uint64_t{round}).add(x_hat);
    return (h.state >> 63) != 0;
  }

  /// Uniform subkey K_round in the domain.
  u128 subkey(const Domain& d, std::uint32_t round) const {
    std::uint64_t counter = 0;
    return uniform_below(d.max_element(), [&] {
      detail::Absorber h{key_};
      h.add(std::uint64_t{'K'}).add(std::uint64_t{round}).add(counter++);
      return h.state;
    });
  }

 private:
  static std::uint64_t absorb_seed(const IdealSeed& seed) {
    detail::Absorber h{0x696465616c534e4fULL};
    for (std::size_t off = 0; off < seed.bytes.size(); off += 8) {
      std::uint64_t w = 0;
      for (std::size_t j = off; j < off + 8; ++j) w = (w << 8) | seed.bytes[j];
      h.add(w);
    }
    return h.state;
  }

  std::uint64_t key_;
  std::optional<bool> forced_;
};

/// Runs another source with its round indices reversed (round i reads r + 1 - i).
template <RoundFunction Inner>
class ReversedRounds {
 public:
  using tweak_context = typename Inner::tweak_context;

  ReversedRounds(Inner inner, std::uint32_t rounds) : inner_(std::move(inner)), rounds_(rounds) {}

  tweak_context prepare(TweakBytes tweak) const { return inner_.prepare(tweak); }
  bool bit(const tweak_context& ctx, std::uint32_t round, u128 x_hat) const {
    return inner_.bit(ctx, rounds_ + 1 - round, x_hat);
  }

  const Inner& inner() const noexcept { return inner_; }

 private:
  Inner inner_;
  std::uint32_t rounds_;
};

/// One fixed bit per round regardless of tweak or x_hat. Used to replay traces.
class ScriptedBits {
 public:
  struct tweak_context {};

  explicit ScriptedBits(std::vector<bool> bits) : bits_(std::move(bits)) {}

  tweak_context prepare(TweakBytes) const { return {}; }
  bool bit(const tweak_context&, std::uint32_t round, u128) const {
    if (round < 1 || round > bits_.size()) throw ParameterError("scripted round out of range");
    return bits_[round - 1];
  }

 private:
  std::vector<bool> bits_;
};

/// An explicit table of coins, one per (round, x_hat), for domains small
/// enough to materialize. Ignores the tweak.
class CoinTable {
 public:
  struct tweak_context {};

  CoinTable(std::uint32_t rounds, std::uint64_t domain_size)
      : domain_size_(domain_size), coins_(static_cast<std::size_t>(rounds) * domain_size, 0) {}

  void set(std::uint32_t round, std::uint64_t x_hat, bool coin) {
    coins_.at(index(round, x_hat)) = coin ? 1 : 0;
  }

  tweak_context prepare(TweakBytes) const { return {}; }
  bool bit(const tweak_context&, std::uint32_t round, u128 x_hat) const {
    return coins_.at(index(round, static_cast<std::uint64_t>(x_hat))) != 0;
  }

 private:
  std::size_t index(std::uint32_t round, std::uint64_t x_hat) const {
    if (round < 1 || x_hat >= domain_size_) throw ParameterError("coin table index out of range");
    return static_cast<std::size_t>(round - 1) * domain_size_ + x_hat;
  }

  std::uint64_t domain_size_;
  std::vector<std::uint8_t> coins_;
};

static_assert(RoundFunction<IdealRoundFunction>);
static_assert(RoundFunction<ScriptedBits>);
static_assert(RoundFunction<CoinTable>);
static_assert(RoundFunction<ReversedRounds<IdealRoundFunction>>);

}  // namespace swapornot
