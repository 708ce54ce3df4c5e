#pragma once

#include <algorithm>
#include <string>

#include "swapornot/u128.hpp"

namespace swapornot {

enum class GroupLaw { mod_add, xor_bits };

/// The message space [N] together with its group law.
///
/// The size is stored as the largest element (N - 1) so that N = 2^128 is
/// representable. XorBits domains always have N = 2^bits.
class Domain {
 public:
  /// Z_N under addition modulo `size`; requires size >= 2.
  static Domain mod_add(u128 size) {
    if (size < 2) throw DomainError("domain size must be at least 2");
    return Domain(GroupLaw::mod_add, size - 1, 0);
  }

  /// Z_N under addition modulo N where N = max_element + 1, possibly 2^128.
  static Domain mod_add_from_max(u128 max_element) {
    if (max_element < 1) throw DomainError("domain size must be at least 2");
    return Domain(GroupLaw::mod_add, max_element, 0);
  }

  /// {0,1}^bits under xor; bits in [1, 128].
  static Domain xor_bits(unsigned bits) {
    if (bits < 1 || bits > 128) throw DomainError("xor domain width must be in [1, 128]");
    const u128 max = bits == 128 ? kU128Max : (u128{1} << bits) - 1;
    return Domain(GroupLaw::xor_bits, max, bits);
  }

  GroupLaw law() const noexcept { return law_; }
  u128 max_element() const noexcept { return max_; }
  /// Bit width for XorBits domains, 0 for ModAdd.
  unsigned bits() const noexcept { return bits_; }
  /// True when N = 2^128 and therefore does not fit in a u128.
  bool is_full_width() const noexcept { return max_ == kU128Max; }
  /// N itself; throws for the 2^128 domain.
  u128 size() const {
    if (is_full_width()) throw DomainError("domain size 2^128 does not fit in 128 bits");
    return max_ + 1;
  }

  bool contains(u128 x) const noexcept { return x <= max_; }

  void check(u128 x, const char* what) const {
    if (!contains(x)) {
      throw DomainError(std::string(what) + " " + to_string(x) + " outside domain [0, " +
                        to_string(max_) + "]");
    }
  }

  /// The partner of x under key k: k - x (mod N) or k xor x.
  u128 partner(u128 k, u128 x) const {
    check(k, "key");
    check(x, "element");
    return partner_unchecked(k, x);
  }

  u128 partner_unchecked(u128 k, u128 x) const noexcept {
    if (law_ == GroupLaw::xor_bits) return k ^ x;
    // k + (N - x) without forming N, which may be 2^128.
    return x <= k ? k - x : k + (max_ - x) + 1;
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(GroupLaw law, u128 max, unsigned bits) : law_(law), max_(max), bits_(bits) {}

  GroupLaw law_;
  u128 max_;
  unsigned bits_;
};

/// Canonical representative of the pair {x, x'}.
constexpr u128 canonical(u128 x, u128 x_partner) noexcept { return std::max(x, x_partner); }

inline std::string law_name(GroupLaw law) {
  return law == GroupLaw::xor_bits ? "xor" : "modadd";
}

}  // namespace swapornot
