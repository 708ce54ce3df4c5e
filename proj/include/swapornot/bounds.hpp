#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "swapornot/cipher.hpp"
#include "swapornot/u128.hpp"

namespace swapornot::bounds {

/// 50 significant decimal digits.
using Real = boost::multiprecision::cpp_bin_float_50;
using BigInt = boost::multiprecision::cpp_int;

enum class Model { ncpa, cca, ncpa_tweak, cca_tweak, thorp };

inline std::string_view model_name(Model m) {
  switch (m) {
    case Model::ncpa: return "ncpa";
    case Model::cca: return "cca";
    case Model::ncpa_tweak: return "ncpa-tweak";
    case Model::cca_tweak: return "cca-tweak";
    case Model::thorp: return "thorp";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  for (Model m : {Model::ncpa, Model::cca, Model::ncpa_tweak, Model::cca_tweak, Model::thorp}) {
    if (s == model_name(m)) return m;
  }
  throw ParameterError("unknown bound model '" + std::string(s) +
                       "' (expected ncpa, cca, ncpa-tweak, cca-tweak or thorp)");
}

/// CCA models are stated for an even total round count.
constexpr bool needs_even_rounds(Model m) { return m == Model::cca || m == Model::cca_tweak; }

inline BigInt to_bigint(u128 v) {
  BigInt out = static_cast<std::uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(v);
  return out;
}

namespace detail {

inline void check_domain_and_queries(const BigInt& n, const BigInt& q, bool allow_zero_q = false) {
  if (n < 2) throw ParameterError("domain size N must be at least 2");
  if (q < (allow_zero_q ? 0 : 1)) throw ParameterError("query budget q must be at least 1");
  if (q > n) throw ParameterError("query budget q must not exceed N");
}

inline void check_cca_rounds(std::uint64_t total) {
  if (total < 2) throw ParameterError("CCA bounds need at least 2 rounds");
  if (total % 2 != 0) {
    throw ParameterError("CCA bounds are stated for an even round count; round " +
                         std::to_string(total) + " up to " + std::to_string(total + 1));
  }
}

/// log((q + N) / 2N)
inline Real log_base(const BigInt& n, const BigInt& q) {
  return log(Real(q + n)) - log(Real(2 * n));
}

inline Real clamp_from_log(const Real& log_value) {
  if (log_value >= 0) return Real(1);
  return exp(log_value);
}

}  // namespace detail

/// Natural log of the unclamped nonadaptive CPA bound after r rounds,
/// 2 N^{3/2} / (r + 2) * ((q + N) / 2N)^{r/2 + 1}.
inline Real log_ncpa_bound(const BigInt& n, std::uint64_t rounds, const BigInt& q) {
  detail::check_domain_and_queries(n, q);
  if (rounds < 1) throw ParameterError("bounds need at least 1 round");
  const Real r(rounds);
  return log(Real(2)) + Real(1.5) * log(Real(n)) - log(r + 2) +
         (r / 2 + 1) * detail::log_base(n, q);
}

/// log of the unclamped CCA bound for `total` (even) rounds,
/// 8 N^{3/2} / (R + 4) * ((q + N) / 2N)^{R/4 + 1}.
inline Real log_cca_bound(const BigInt& n, std::uint64_t total, const BigInt& q) {
  detail::check_domain_and_queries(n, q);
  detail::check_cca_rounds(total);
  const Real big_r(total);
  return log(Real(8)) + Real(1.5) * log(Real(n)) - log(big_r + 4) +
         (big_r / 4 + 1) * detail::log_base(n, q);
}

/// log of the unclamped tweakable CCA bound for `total` (even) rounds,
/// 8 N^{3/4} / sqrt(R + 4) * ((q + N) / 2N)^{(R + 4)/8}.
inline Real log_cca_tweak_bound(const BigInt& n, std::uint64_t total, const BigInt& q) {
  detail::check_domain_and_queries(n, q);
  detail::check_cca_rounds(total);
  const Real big_r(total);
  return log(Real(8)) + Real(0.75) * log(Real(n)) - log(big_r + 4) / 2 +
         ((big_r + 4) / 8) * detail::log_base(n, q);
}

/// log of the Thorp-shuffle comparison bound (2q/r + 1)(4 n q / N)^r for
/// N = 2^n shuffled for r passes. Returns nullopt when q = 0 (the bound is 0).
inline std::optional<Real> log_thorp_bound(const BigInt& n, std::uint64_t passes, const BigInt& q) {
  detail::check_domain_and_queries(n, q, /*allow_zero_q=*/true);
  if (passes < 1) throw ParameterError("Thorp bound needs at least 1 pass");
  const unsigned lg = boost::multiprecision::msb(n);
  if (n != (BigInt(1) << lg)) throw ParameterError("Thorp bound needs N to be a power of two");
  if (q == 0) return std::nullopt;
  const Real r(passes);
  const Real qr(q);
  return log(2 * qr / r + 1) + r * (log(4 * Real(lg) * qr) - log(Real(n)));
}

inline Real ncpa_bound(const BigInt& n, std::uint64_t rounds, const BigInt& q) {
  return detail::clamp_from_log(log_ncpa_bound(n, rounds, q));
}

/// The tweakable NCPA bound has the same expression as the plain one.
inline Real ncpa_tweak_bound(const BigInt& n, std::uint64_t rounds, const BigInt& q) {
  return ncpa_bound(n, rounds, q);
}

inline Real cca_bound(const BigInt& n, std::uint64_t total, const BigInt& q) {
  return detail::clamp_from_log(log_cca_bound(n, total, q));
}

inline Real cca_tweak_bound(const BigInt& n, std::uint64_t total, const BigInt& q) {
  return detail::clamp_from_log(log_cca_tweak_bound(n, total, q));
}

inline Real thorp_bound(const BigInt& n, std::uint64_t passes, const BigInt& q) {
  const auto l = log_thorp_bound(n, passes, q);
  return l ? detail::clamp_from_log(*l) : Real(0);
}

struct BoundQuery {
  BigInt n;
  /// Total rounds; for Model::thorp, the number of passes.
  std::uint64_t rounds;
  BigInt q;
  Model model;
};

inline Real evaluate(const BoundQuery& query) {
  switch (query.model) {
    case Model::ncpa: return ncpa_bound(query.n, query.rounds, query.q);
    case Model::ncpa_tweak: return ncpa_tweak_bound(query.n, query.rounds, query.q);
    case Model::cca: return cca_bound(query.n, query.rounds, query.q);
    case Model::cca_tweak: return cca_tweak_bound(query.n, query.rounds, query.q);
    case Model::thorp: return thorp_bound(query.n, query.rounds, query.q);
  }
  throw ParameterError("unknown model");
}

/// Smallest round count (passes for Thorp, even totals for CCA models) whose
/// bound is at most `target`. Returns nullopt when even kMaxRounds is not
/// enough.
///
/// Every bound here is nonincreasing in the round count, so an exponential
/// probe followed by binary search finds the threshold.
inline std::optional<std::uint32_t> min_rounds(const BigInt& n, const BigInt& q,
                                               const Real& target, Model model) {
  if (!(target > 0 && target < 1)) throw ParameterError("target advantage must lie in (0, 1)");
  const std::uint64_t unit = needs_even_rounds(model) ? 2 : 1;
  const std::uint64_t max_steps = kMaxRounds / unit;
  auto ok = [&](std::uint64_t steps) {
    return evaluate({n, steps * unit, q, model}) <= target;
  };
  if (!ok(max_steps)) return std::nullopt;
  std::uint64_t hi = 1;
  while (hi < max_steps && !ok(hi)) hi = std::min(hi * 2, max_steps);
  std::uint64_t lo = hi / 2;  // lo fails (or is 0), hi passes
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return static_cast<std::uint32_t>(hi * unit);
}

/// Six significant digits in printf %g style, e.g. "2.23952e-11".
inline std::string format_advantage(const Real& value) {
  std::ostringstream os;
  os << std::setprecision(6) << value;
  return os.str();
}

}  // namespace swapornot::bounds
