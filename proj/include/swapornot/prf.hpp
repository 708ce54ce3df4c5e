#pragma once

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/params.h>

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swapornot/cipher.hpp"
#include "swapornot/domain.hpp"
#include "swapornot/round_function.hpp"
#include "swapornot/uniform.hpp"

namespace swapornot {

using Block = std::array<std::uint8_t, 16>;

/// A deterministic keyed function from byte strings to 16-byte blocks.
template <class P>
concept KeyedPrf = requires(const P& p, std::span<const std::uint8_t> in) {
  { p(in) } -> std::same_as<Block>;
  { P::identifier() } -> std::convertible_to<std::string_view>;
};

/// AES-256-CMAC under a 32-byte key, via OpenSSL.
///
/// Copies share one immutable keyed context; each evaluation works on a
/// private duplicate, so concurrent calls are safe.
class CmacAes256 {
 public:
  static constexpr std::size_t kKeyBytes = 32;

  explicit CmacAes256(std::span<const std::uint8_t> key) {
    if (key.size() != kKeyBytes) throw DomainError("PRF key must be 32 bytes");
    std::unique_ptr<EVP_MAC, decltype(&EVP_MAC_free)> mac(EVP_MAC_fetch(nullptr, "CMAC", nullptr),
                                                         &EVP_MAC_free);
    if (!mac) throw Error("OpenSSL CMAC unavailable");
    ctx_.reset(EVP_MAC_CTX_new(mac.get()), &EVP_MAC_CTX_free);
    if (!ctx_) throw Error("EVP_MAC_CTX_new failed");
    char cipher_name[] = "AES-256-CBC";
    const OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, cipher_name, 0),
        OSSL_PARAM_construct_end()};
    if (EVP_MAC_init(ctx_.get(), key.data(), key.size(), params) != 1) {
      throw Error("CMAC key setup failed");
    }
  }

  static CmacAes256 from_hex(std::string_view hex) {
    if (hex.size() != 2 * kKeyBytes) throw DomainError("PRF key must be 64 hex characters");
    const auto bytes = bytes_from_hex(hex);
    return CmacAes256(bytes);
  }

  static constexpr std::string_view identifier() { return "cmac-aes256"; }

  Block operator()(std::span<const std::uint8_t> in) const {
    std::unique_ptr<EVP_MAC_CTX, decltype(&EVP_MAC_CTX_free)> work(EVP_MAC_CTX_dup(ctx_.get()),
                                                                    &EVP_MAC_CTX_free);
    if (!work) throw Error("EVP_MAC_CTX_dup failed");
    Block out{};
    std::size_t len = 0;
    if (EVP_MAC_update(work.get(), in.data(), in.size()) != 1 ||
        EVP_MAC_final(work.get(), out.data(), &len, out.size()) != 1 || len != out.size()) {
      throw Error("CMAC evaluation failed");
    }
    return out;
  }

 private:
  std::shared_ptr<EVP_MAC_CTX> ctx_{nullptr, &EVP_MAC_CTX_free};
};

static_assert(KeyedPrf<CmacAes256>);

/// Reference PRF for keys handed to the cipher.
using PrfKey = CmacAes256;

/// H_K(T): a 16-byte digest of the tweak, computed once per message.
struct TweakDigest {
  Block bytes{};
  friend bool operator==(const TweakDigest&, const TweakDigest&) = default;
};

/// PRF input layouts. All integers are big-endian and fixed width:
///   subkey block:  'K' | round (4) | block counter (4)
///   round bit:     'B' | round (4) | tweak digest (16) | x_hat (16)
///   tweak digest:  'T' | tweak length (4) | tweak bytes
namespace encoding {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline void put_u128(std::vector<std::uint8_t>& out, u128 v) {
  for (int s = 120; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline std::vector<std::uint8_t> subkey_input(std::uint32_t round, std::uint32_t block) {
  std::vector<std::uint8_t> out{'K'};
  put_u32(out, round);
  put_u32(out, block);
  return out;
}

inline std::vector<std::uint8_t> round_bit_input(std::uint32_t round, const TweakDigest& digest,
                                                 u128 x_hat) {
  std::vector<std::uint8_t> out{'B'};
  out.reserve(37);
  put_u32(out, round);
  out.insert(out.end(), digest.bytes.begin(), digest.bytes.end());
  put_u128(out, x_hat);
  return out;
}

inline std::vector<std::uint8_t> tweak_input(TweakBytes tweak) {
  if (tweak.size() > kMaxTweakBytes) throw ParameterError("tweak longer than 2^32 - 1 bytes");
  std::vector<std::uint8_t> out{'T'};
  out.reserve(5 + tweak.size());
  put_u32(out, static_cast<std::uint32_t>(tweak.size()));
  out.insert(out.end(), tweak.begin(), tweak.end());
  return out;
}

}  // namespace encoding

template <KeyedPrf Prf>
TweakDigest tweak_digest(const Prf& prf, TweakBytes tweak) {
  return {prf(encoding::tweak_input(tweak))};
}

/// F_i(H_K(T), x_hat): bit 0 of the PRF block (the low bit of its last byte).
template <KeyedPrf Prf>
bool round_bit(const Prf& prf, std::uint32_t round, const TweakDigest& digest, u128 x_hat) {
  const Block b = prf(encoding::round_bit_input(round, digest, x_hat));
  return (b[15] & 1) != 0;
}

/// Subkey K_round, uniform on the domain by rejection sampling over
/// successive PRF blocks for (round, 0), (round, 1), ...
///
/// Each block is read as a 128-bit big-endian integer and split into its low
/// then high 64-bit halves, so a 128-bit sample is the whole block and a
/// power-of-two domain takes the low bits of the first block.
template <KeyedPrf Prf>
u128 derive_subkey(const Prf& prf, const Domain& d, std::uint32_t round) {
  std::uint32_t block_index = 0;
  Block block{};
  std::size_t word = 2;
  return uniform_below(d.max_element(), [&]() -> std::uint64_t {
    if (word == 2) {
      block = prf(encoding::subkey_input(round, block_index++));
      word = 0;
    }
    std::uint64_t v = 0;
    const std::size_t first = word == 0 ? 8 : 0;
    for (std::size_t j = first; j < first + 8; ++j) v = (v << 8) | block[j];
    ++word;
    return v;
  });
}

template <KeyedPrf Prf>
std::vector<u128> derive_subkeys(const Prf& prf, const Domain& d, std::uint32_t rounds) {
  if (rounds > kMaxRounds) throw ParameterError("round count exceeds 2^16");
  std::vector<u128> keys(rounds);
  for (std::uint32_t i = 1; i <= rounds; ++i) keys[i - 1] = derive_subkey(prf, d, i);
  return keys;
}

/// Round functions backed by a keyed PRF with a prehashed tweak.
template <KeyedPrf Prf>
class PrfRoundFunction {
 public:
  using tweak_context = TweakDigest;

  explicit PrfRoundFunction(Prf prf) : prf_(std::move(prf)) {}

  tweak_context prepare(TweakBytes tweak) const { return tweak_digest(prf_, tweak); }
  bool bit(const tweak_context& digest, std::uint32_t round, u128 x_hat) const {
    return round_bit(prf_, round, digest, x_hat);
  }

  const Prf& prf() const noexcept { return prf_; }

 private:
  Prf prf_;
};

static_assert(RoundFunction<PrfRoundFunction<CmacAes256>>);

template <KeyedPrf Prf>
SwapOrNot<PrfRoundFunction<Prf>> make_prf_cipher(const Domain& d, std::uint32_t rounds,
                                                  const Prf& prf) {
  auto keys = derive_subkeys(prf, d, rounds);
  return {d, std::move(keys), PrfRoundFunction<Prf>(prf)};
}

}  // namespace swapornot
