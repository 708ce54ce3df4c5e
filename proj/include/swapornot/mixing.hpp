#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "swapornot/bounds.hpp"
#include "swapornot/cipher.hpp"
#include "swapornot/domain.hpp"
#include "swapornot/round_function.hpp"

namespace swapornot::mixing {

/// Positions of the q tracked cards, all distinct.
using Tuple = std::vector<std::uint32_t>;

/// Largest support the exact computations accept.
inline constexpr std::uint64_t kMaxSupport = 1'000'000;
inline constexpr std::uint32_t kMaxExactRounds = 64;
inline constexpr std::uint64_t kMaxShuffleSize = 1u << 20;

/// All q-tuples of distinct positions in [N], in lexicographic order.
class Support {
 public:
  Support(std::uint64_t n, unsigned q) : n_(n), q_(q) {
    if (q < 1 || q > n) throw ParameterError("tracked card count must be in [1, N]");
    std::uint64_t count = 1;
    for (unsigned j = 0; j < q; ++j) {
      count *= n - j;
      if (count > kMaxSupport) throw ParameterError("support N(N-1)...(N-q+1) exceeds 10^6");
    }
    tuples_.reserve(count);
    Tuple t;
    std::vector<bool> used(n, false);
    enumerate(t, used);
    index_.reserve(tuples_.size());
    for (std::size_t i = 0; i < tuples_.size(); ++i) index_.emplace(key(tuples_[i]), i);
  }

  std::uint64_t n() const noexcept { return n_; }
  unsigned q() const noexcept { return q_; }
  std::size_t size() const noexcept { return tuples_.size(); }
  const Tuple& operator[](std::size_t i) const { return tuples_[i]; }

  std::size_t index_of(const Tuple& t) const {
    if (t.size() != q_) throw ParameterError("tuple length does not match q");
    const auto it = index_.find(key(t));
    if (it == index_.end()) throw DomainError("tuple is not q distinct positions in [N]");
    return it->second;
  }

 private:
  void enumerate(Tuple& t, std::vector<bool>& used) {
    if (t.size() == q_) {
      tuples_.push_back(t);
      return;
    }
    for (std::uint32_t x = 0; x < n_; ++x) {
      if (used[x]) continue;
      used[x] = true;
      t.push_back(x);
      enumerate(t, used);
      t.pop_back();
      used[x] = false;
    }
  }

  std::uint64_t key(const Tuple& t) const {
    std::uint64_t k = 0;
    for (std::uint32_t x : t) {
      if (x >= n_) return ~std::uint64_t{0};
      k = k * n_ + x;
    }
    return k;
  }

  std::uint64_t n_;
  unsigned q_;
  std::vector<Tuple> tuples_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// An exact probability table over the positions of q tracked cards.
///
/// `Prob` is double by default; boost::multiprecision::cpp_rational gives an
/// exact (slow) mode.
template <class Prob = double>
class ProjectedDistribution {
 public:
  ProjectedDistribution(std::shared_ptr<const Support> support, std::vector<Prob> probs)
      : support_(std::move(support)), probs_(std::move(probs)) {
    if (probs_.size() != support_->size()) throw ParameterError("probability table size mismatch");
  }

  static ProjectedDistribution point_mass(std::shared_ptr<const Support> support, const Tuple& at) {
    std::vector<Prob> p(support->size(), Prob(0));
    p[support->index_of(at)] = Prob(1);
    return {std::move(support), std::move(p)};
  }

  /// Sampling q positions without replacement: the stationary law.
  static ProjectedDistribution uniform(std::shared_ptr<const Support> support) {
    const Prob each = Prob(1) / Prob(static_cast<std::int64_t>(support->size()));
    std::vector<Prob> p(support->size(), each);
    return {std::move(support), std::move(p)};
  }

  const Support& support() const noexcept { return *support_; }
  const std::shared_ptr<const Support>& shared_support() const noexcept { return support_; }
  std::span<const Prob> probs() const noexcept { return probs_; }
  Prob probability(const Tuple& t) const { return probs_[support_->index_of(t)]; }

  Prob total() const { return std::accumulate(probs_.begin(), probs_.end(), Prob(0)); }

 private:
  std::shared_ptr<const Support> support_;
  std::vector<Prob> probs_;
};

/// Half the L1 distance between two distributions on the same support.
template <class Prob>
Prob total_variation(const ProjectedDistribution<Prob>& a, const ProjectedDistribution<Prob>& b) {
  if (a.support().n() != b.support().n() || a.support().q() != b.support().q()) {
    throw ParameterError("distributions have different supports");
  }
  Prob sum(0);
  for (std::size_t i = 0; i < a.probs().size(); ++i) {
    const Prob diff = a.probs()[i] - b.probs()[i];
    sum += diff < 0 ? Prob(-diff) : diff;
  }
  return sum / 2;
}

/// One round of the swap-or-not shuffle restricted to q tracked cards, as a
/// sparse transition matrix built once.
///
/// For each subkey K (uniform over [N]) the tracked positions are grouped by
/// the pair {x, K - x} they sit in. Each pair gets one fair coin, so two
/// tracked cards occupying the same pair swap together; fixed points never move.
template <class Prob = double>
class ProjectedChain {
 public:
  ProjectedChain(const Domain& d, unsigned q) : domain_(d) {
    if (d.is_full_width() || d.size() > kMaxSupport) throw ParameterError("domain too large for exact DP");
    support_ = std::make_shared<const Support>(static_cast<std::uint64_t>(d.size()), q);
    build();
  }

  const Domain& domain() const noexcept { return domain_; }
  const std::shared_ptr<const Support>& support() const noexcept { return support_; }

  ProjectedDistribution<Prob> step(const ProjectedDistribution<Prob>& in) const {
    if (in.support().n() != support_->n() || in.support().q() != support_->q()) {
      throw ParameterError("distribution does not match the chain's domain and q");
    }
    std::vector<Prob> out(support_->size(), Prob(0));
    const auto p = in.probs();
    for (std::size_t from = 0; from < support_->size(); ++from) {
      if (p[from] == 0) continue;
      for (std::size_t e = row_begin_[from]; e < row_begin_[from + 1]; ++e) {
        out[edges_[e].to] += p[from] * weights_[edges_[e].weight];
      }
    }
    return {support_, std::move(out)};
  }

 private:
  struct Edge {
    std::uint32_t to;
    std::uint8_t weight;  // index into weights_: 1 / (N 2^m)
  };

  void build() {
    const std::uint64_t n = support_->n();
    const unsigned q = support_->q();
    for (unsigned m = 0; m <= q; ++m) {
      weights_.push_back(Prob(1) / Prob(static_cast<std::int64_t>(n << m)));
    }
    row_begin_.push_back(0);
    Tuple moved(q);
    std::vector<std::uint32_t> partners(q);
    std::vector<std::uint32_t> pairs;  // canonical representative per coin
    for (std::size_t from = 0; from < support_->size(); ++from) {
      const Tuple& x = (*support_)[from];
      for (std::uint64_t k = 0; k < n; ++k) {
        pairs.clear();
        for (unsigned j = 0; j < q; ++j) {
          partners[j] = static_cast<std::uint32_t>(domain_.partner_unchecked(k, x[j]));
          if (partners[j] == x[j]) continue;
          const auto rep = static_cast<std::uint32_t>(canonical(x[j], partners[j]));
          if (std::find(pairs.begin(), pairs.end(), rep) == pairs.end()) pairs.push_back(rep);
        }
        const unsigned m = static_cast<unsigned>(pairs.size());
        for (std::uint32_t coins = 0; coins < (1u << m); ++coins) {
          for (unsigned j = 0; j < q; ++j) {
            moved[j] = x[j];
            if (partners[j] == x[j]) continue;
            const auto rep = canonical(x[j], partners[j]);
            const auto c = std::find(pairs.begin(), pairs.end(), rep) - pairs.begin();
            if ((coins >> c) & 1u) moved[j] = partners[j];
          }
          edges_.push_back({static_cast<std::uint32_t>(support_->index_of(moved)),
                            static_cast<std::uint8_t>(m)});
        }
      }
      row_begin_.push_back(edges_.size());
    }
  }

  Domain domain_;
  std::shared_ptr<const Support> support_;
  std::vector<Prob> weights_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_begin_;
};

/// One exact round of the projected shuffle.
template <class Prob>
ProjectedDistribution<Prob> step(const Domain& d, const ProjectedDistribution<Prob>& dist) {
  return ProjectedChain<Prob>(d, dist.support().q()).step(dist);
}

/// ||tau_r - pi|| for the projected chain started at `start`, for every
/// r = 0..rounds (element r of the result).
template <class Prob = double>
std::vector<Prob> exact_tvd_curve(const ProjectedChain<Prob>& chain, std::uint32_t rounds,
                                  const Tuple& start) {
  if (rounds > kMaxExactRounds) throw ParameterError("exact TVD limited to 64 rounds");
  const auto pi = ProjectedDistribution<Prob>::uniform(chain.support());
  auto tau = ProjectedDistribution<Prob>::point_mass(chain.support(), start);
  std::vector<Prob> curve{total_variation(tau, pi)};
  for (std::uint32_t t = 1; t <= rounds; ++t) {
    tau = chain.step(tau);
    curve.push_back(total_variation(tau, pi));
  }
  return curve;
}

template <class Prob = double>
Prob exact_tvd_after(const Domain& d, std::uint32_t rounds, unsigned q, const Tuple& start) {
  if (rounds > kMaxExactRounds) throw ParameterError("exact TVD limited to 64 rounds");
  const ProjectedChain<Prob> chain(d, q);
  return exact_tvd_curve(chain, rounds, start).back();
}

/// One explicit run of the r-round shuffle on a deck of N cards.
struct ShuffleRealization {
  std::vector<u128> subkeys;
  CoinTable coins;
  /// position[x] is where card x ends up.
  std::vector<std::uint64_t> position;
};

/// Samples subkeys and per-pair coins, then shuffles a physical deck: in
/// round i, for every pair {x, K_i - x} whose coin (indexed by max of the
/// pair) is 1, swap the cards at those two positions.
inline ShuffleRealization shuffle_sample(const Domain& d, std::uint32_t rounds, std::uint64_t seed) {
  if (d.is_full_width() || d.size() > kMaxShuffleSize) throw ParameterError("shuffle limited to N <= 2^20");
  if (rounds > kMaxRounds) throw ParameterError("round count exceeds 2^16");
  const auto n = static_cast<std::uint64_t>(d.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> key_dist(0, n - 1);
  std::bernoulli_distribution coin(0.5);

  ShuffleRealization out{{}, CoinTable(rounds, n), {}};
  std::vector<std::uint64_t> deck(n);  // deck[position] = card
  std::iota(deck.begin(), deck.end(), 0);
  for (std::uint32_t i = 1; i <= rounds; ++i) {
    const std::uint64_t k = key_dist(rng);
    out.subkeys.push_back(k);
    for (std::uint64_t x = 0; x < n; ++x) out.coins.set(i, x, coin(rng));
    for (std::uint64_t x = 0; x < n; ++x) {
      const auto other = static_cast<std::uint64_t>(d.partner_unchecked(k, x));
      if (other > x && out.coins.bit({}, i, other)) std::swap(deck[x], deck[other]);
    }
  }
  out.position.resize(n);
  for (std::uint64_t pos = 0; pos < n; ++pos) out.position[deck[pos]] = pos;
  return out;
}

/// One row of the rapid-mixing check: worst TVD over the tested starts.
struct GridRow {
  GroupLaw law;
  std::uint64_t n;
  unsigned q;
  std::uint32_t r;
  double tvd;
  double bound;
  /// TVD within the bound and no increase from round r - 1 for any start.
  bool pass;
};

/// Domains the grid covers for one N: ModAdd always, XorBits when N = 2^n.
inline std::vector<Domain> grid_domains(std::uint64_t n) {
  std::vector<Domain> out{Domain::mod_add(n)};
  if (std::has_single_bit(n)) out.push_back(Domain::xor_bits(static_cast<unsigned>(std::countr_zero(n))));
  return out;
}

/// Exact TVD against the NCPA bound for N in [min_n, max_n], q in [1, max_q]
/// (q <= N), r in [1, max_r]. With `all_starts`, every starting tuple is
/// tried and the worst is reported; otherwise the start is (0, 1, ..., q-1).
inline std::vector<GridRow> validate_grid(std::uint64_t min_n, std::uint64_t max_n, unsigned max_q,
                                          std::uint32_t max_r, bool all_starts = true) {
  constexpr double kSlack = 1e-12;
  if (min_n < 2) throw ParameterError("grid needs N >= 2");
  std::vector<GridRow> rows;
  for (std::uint64_t n = min_n; n <= max_n; ++n) {
    for (const Domain& d : grid_domains(n)) {
      for (unsigned q = 1; q <= std::min<std::uint64_t>(max_q, n); ++q) {
        const ProjectedChain<double> chain(d, q);
        std::vector<double> worst(max_r + 1, 0.0);
        std::vector<bool> monotone(max_r + 1, true);
        const std::size_t starts = all_starts ? chain.support()->size() : 1;
        for (std::size_t s = 0; s < starts; ++s) {
          const auto curve = exact_tvd_curve(chain, max_r, (*chain.support())[s]);
          for (std::uint32_t r = 1; r <= max_r; ++r) {
            worst[r] = std::max(worst[r], curve[r]);
            if (curve[r] > curve[r - 1] + kSlack) monotone[r] = false;
          }
        }
        for (std::uint32_t r = 1; r <= max_r; ++r) {
          const double bound = static_cast<double>(bounds::ncpa_bound(n, r, q));
          rows.push_back({d.law(), n, q, r, worst[r], bound, worst[r] <= bound && monotone[r]});
        }
      }
    }
  }
  return rows;
}

}  // namespace swapornot::mixing
