#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "swapornot/bounds.hpp"
#include "swapornot/cipher.hpp"
#include "swapornot/domain.hpp"
#include "swapornot/prf.hpp"

namespace swapornot::fpe {

inline constexpr std::string_view kAlphabet = "0123456789abcdefghijklmnopqrstuvwxyz";

/// Fewest rounds the FPE layer accepts.
inline constexpr std::uint32_t kMinRounds = 2;

/// Strings of `length` digits in base `radix`, using the lowercase 0-9a-z alphabet.
struct FormatSpec {
  unsigned radix;
  unsigned length;

  /// radix^length - 1, the largest encodable value. Throws when the format is
  /// invalid or radix^length exceeds 2^128.
  u128 max_value() const {
    if (radix < 2 || radix > 36) throw DomainError("radix must be in [2, 36]");
    if (length < 1) throw DomainError("length must be positive");
    // Builds the all-(radix-1) string's value, which is radix^length - 1.
    u128 max = 0;
    for (unsigned i = 0; i < length; ++i) {
      if (max > (kU128Max - (radix - 1)) / radix) throw DomainError("radix^length exceeds 2^128");
      max = max * radix + (radix - 1);
    }
    return max;
  }

  Domain domain(GroupLaw law = GroupLaw::mod_add) const {
    const u128 max = max_value();
    if (law == GroupLaw::mod_add) return Domain::mod_add_from_max(max);
    if ((max & (max + 1)) != 0) throw DomainError("xor law needs radix^length to be a power of two");
    unsigned bits = 0;
    for (u128 m = max; m != 0; m >>= 1) ++bits;
    return Domain::xor_bits(bits);
  }

  friend bool operator==(const FormatSpec&, const FormatSpec&) = default;
};

/// Big-endian positional value of `s`; leading zeros are significant.
inline u128 encode_digits(std::string_view s, const FormatSpec& f) {
  static_cast<void>(f.max_value());  // validates the format
  if (s.size() != f.length) {
    throw DomainError("expected " + std::to_string(f.length) + " digits, got " +
                      std::to_string(s.size()));
  }
  u128 v = 0;
  for (char c : s) {
    const auto pos = kAlphabet.find(c);
    if (pos == std::string_view::npos || pos >= f.radix) {
      throw DomainError(std::string("invalid digit '") + c + "' for radix " + std::to_string(f.radix));
    }
    v = v * f.radix + pos;
  }
  return v;
}

inline std::string decode_digits(u128 v, const FormatSpec& f) {
  if (v > f.max_value()) throw DomainError("value " + to_string(v) + " exceeds radix^length - 1");
  std::string out(f.length, '0');
  for (std::size_t i = f.length; i-- > 0;) {
    out[i] = kAlphabet[static_cast<std::size_t>(v % f.radix)];
    v /= f.radix;
  }
  return out;
}

/// Swap-or-not over [radix^length] keyed by a PRF, with string I/O.
class FpeCipher {
 public:
  FpeCipher(const PrfKey& key, FormatSpec format, std::uint32_t rounds,
            GroupLaw law = GroupLaw::mod_add)
      : format_(format), cipher_(make(key, format, rounds, law)) {}

  std::string encrypt(std::string_view plaintext, TweakBytes tweak = {}) const {
    return decode_digits(cipher_.encipher(encode_digits(plaintext, format_), tweak), format_);
  }

  std::string decrypt(std::string_view ciphertext, TweakBytes tweak = {}) const {
    return decode_digits(cipher_.decipher(encode_digits(ciphertext, format_), tweak), format_);
  }

  const FormatSpec& format() const noexcept { return format_; }
  const SwapOrNot<PrfRoundFunction<PrfKey>>& cipher() const noexcept { return cipher_; }

 private:
  static SwapOrNot<PrfRoundFunction<PrfKey>> make(const PrfKey& key, const FormatSpec& f,
                                                  std::uint32_t rounds, GroupLaw law) {
    if (rounds < kMinRounds) throw ParameterError("FPE needs at least 2 rounds");
    if (rounds > kMaxRounds) throw ParameterError("round count exceeds 2^16");
    return make_prf_cipher(f.domain(law), rounds, key);
  }

  FormatSpec format_;
  SwapOrNot<PrfRoundFunction<PrfKey>> cipher_;
};

inline std::string fpe_encrypt(std::string_view key_hex, const FormatSpec& f, TweakBytes tweak,
                               std::uint32_t rounds, std::string_view plaintext) {
  return FpeCipher(PrfKey::from_hex(key_hex), f, rounds).encrypt(plaintext, tweak);
}

inline std::string fpe_decrypt(std::string_view key_hex, const FormatSpec& f, TweakBytes tweak,
                               std::uint32_t rounds, std::string_view ciphertext) {
  return FpeCipher(PrfKey::from_hex(key_hex), f, rounds).decrypt(ciphertext, tweak);
}

/// Round planning for `--rounds auto`.
struct AutoRounds {
  double target = 1e-10;
  /// Adversary query budget; defaults to half the domain.
  std::optional<bounds::BigInt> queries;
};

inline bounds::BigInt default_queries(const FormatSpec& f) {
  return (bounds::to_bigint(f.max_value()) + 1) / 2;
}

/// Smallest even round count meeting the target CCA advantage; tweaked
/// messages use the tweakable bound. Nullopt when the 2^16 cap is not enough.
inline std::optional<std::uint32_t> plan_rounds(const FormatSpec& f, bool tweaked,
                                                const AutoRounds& plan) {
  const bounds::BigInt n = bounds::to_bigint(f.max_value()) + 1;
  const bounds::BigInt q = plan.queries.value_or(default_queries(f));
  const auto model = tweaked ? bounds::Model::cca_tweak : bounds::Model::cca;
  return bounds::min_rounds(n, q, bounds::Real(plan.target), model);
}

/// One golden-vector record: key,tweak,radix,length,rounds,plaintext,ciphertext.
struct GoldenVector {
  std::string key_hex;
  std::string tweak_hex;
  unsigned radix;
  unsigned length;
  std::uint32_t rounds;
  std::string plaintext;
  std::string ciphertext;

  friend bool operator==(const GoldenVector&, const GoldenVector&) = default;
};

inline constexpr int kGoldenFormatVersion = 1;

inline std::string golden_header() {
  return "# swap-or-not golden vectors format=" + std::to_string(kGoldenFormatVersion) +
         " prf=" + std::string(PrfKey::identifier());
}

inline std::string to_line(const GoldenVector& v) {
  return v.key_hex + "," + v.tweak_hex + "," + std::to_string(v.radix) + "," +
         std::to_string(v.length) + "," + std::to_string(v.rounds) + "," + v.plaintext + "," +
         v.ciphertext;
}

inline GoldenVector parse_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is{std::string(line)};
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  if (fields.size() != 7) throw DomainError("golden vector needs 7 fields: " + std::string(line));
  return {fields[0],
          fields[1],
          static_cast<unsigned>(std::stoul(fields[2])),
          static_cast<unsigned>(std::stoul(fields[3])),
          static_cast<std::uint32_t>(std::stoul(fields[4])),
          fields[5],
          fields[6]};
}

/// Reads records, skipping blank lines and '#' comments.
inline std::vector<GoldenVector> read_golden(std::istream& in) {
  std::vector<GoldenVector> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_line(line));
  }
  return out;
}

inline std::string compute_ciphertext(const GoldenVector& v) {
  const auto tweak = bytes_from_hex(v.tweak_hex);
  return fpe_encrypt(v.key_hex, {v.radix, v.length}, tweak, v.rounds, v.plaintext);
}

/// The fixed inputs behind the committed golden vectors, ciphertexts filled in.
inline std::vector<GoldenVector> generate_golden() {
  const std::string k1 = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
  const std::string k2 = "2b7e151628aed2a6abf7158809cf4f3c762e7160f38b4da56a784d9045190cfe";
  const std::string k3 = "ffeeddccbbaa99887766554433221100f0e1d2c3b4a5968778695a4b3c2d1e0f";
  std::vector<GoldenVector> out = {
      {k1, "", 10, 9, 340, "123456789", ""},
      {k1, "", 10, 9, 340, "000000000", ""},
      {k1, "0001", 10, 9, 340, "123456789", ""},
      {k2, "", 10, 16, 500, "4111111111111111", ""},
      {k2, "cafebabe", 10, 16, 500, "5500000000000004", ""},
      {k2, "", 36, 6, 300, "hello0", ""},
      {k3, "", 2, 8, 64, "10110011", ""},
      {k3, "00112233445566778899aabbccddeeff", 16, 32, 1200, "0123456789abcdef0123456789abcdef", ""},
      {k3, "74776561", 10, 4, 20, "0042", ""},
      {k1, "", 26, 10, 400, "abcdefghij", ""},
  };
  for (auto& v : out) v.ciphertext = compute_ciphertext(v);
  return out;
}

inline std::string render_golden(const std::vector<GoldenVector>& vectors) {
  std::string out = golden_header() + "\n";
  for (const auto& v : vectors) out += to_line(v) + "\n";
  return out;
}

}  // namespace swapornot::fpe
