#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <map>

#include "swapornot/mixing.hpp"

namespace swapornot::mixing {
namespace {

using Rational = boost::multiprecision::cpp_rational;

ProjectedDistribution<double> start_at(const ProjectedChain<double>& chain, const Tuple& t) {
  return ProjectedDistribution<double>::point_mass(chain.support(), t);
}

TEST(MixingTest, SupportEnumeratesDistinctTuples) {
  const Support s(8, 3);
  EXPECT_EQ(s.size(), 336u);
  EXPECT_EQ(s[0], (Tuple{0, 1, 2}));
  EXPECT_EQ(s.index_of({7, 6, 5}), 335u);
  EXPECT_THROW(s.index_of({1, 1, 2}), DomainError);
  EXPECT_THROW(s.index_of({1, 2}), ParameterError);
  EXPECT_THROW(Support(5, 6), ParameterError);
}

TEST(MixingTest, SingleCardOnTwoPositions) {
  const auto d = Domain::mod_add(2);
  const ProjectedChain<double> chain(d, 1);
  const auto next = chain.step(start_at(chain, {0}));
  EXPECT_DOUBLE_EQ(next.probability({0}), 0.75);
  EXPECT_DOUBLE_EQ(next.probability({1}), 0.25);
  EXPECT_DOUBLE_EQ(step(d, start_at(chain, {0})).probability({1}), 0.25);
}

TEST(MixingTest, PartnersShareOneCoin) {
  // Both cards always sit in the same pair, so they swap together.
  const auto d = Domain::mod_add(2);
  const ProjectedChain<double> chain(d, 2);
  const auto next = chain.step(start_at(chain, {0, 1}));
  EXPECT_DOUBLE_EQ(next.probability({0, 1}) + next.probability({1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(next.probability({1, 0}), 0.25);
}

TEST(MixingTest, UniformIsStationary) {
  for (std::uint64_t n = 2; n <= 9; ++n) {
    for (const auto& d : grid_domains(n)) {
      for (unsigned q = 1; q <= std::min<std::uint64_t>(3, n); ++q) {
        const ProjectedChain<double> chain(d, q);
        const auto pi = ProjectedDistribution<double>::uniform(chain.support());
        const auto next = chain.step(pi);
        double l1 = 0;
        for (std::size_t i = 0; i < pi.probs().size(); ++i) l1 += std::abs(next.probs()[i] - pi.probs()[i]);
        EXPECT_LT(l1, 1e-12);
        EXPECT_NEAR(next.total(), 1.0, 1e-12);
      }
    }
  }
}

TEST(MixingTest, ExactTvdExamples) {
  for (std::uint64_t n : {2u, 5u, 8u}) {
    EXPECT_NEAR(exact_tvd_after(Domain::mod_add(n), 0, 1, {0}), 1.0 - 1.0 / n, 1e-15);
  }
  EXPECT_NEAR(exact_tvd_after(Domain::mod_add(2), 1, 1, {0}), 0.25, 1e-15);
  const double v = exact_tvd_after(Domain::xor_bits(2), 6, 2, {0, 1});
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, static_cast<double>(bounds::ncpa_bound(4, 6, 2)));
}

// Brute-force oracle: enumerate every subkey sequence and every round
// function table, run the cipher on each tracked card, and average.
std::map<Tuple, double> enumerate_through_cipher(const Domain& d, std::uint32_t rounds, const Tuple& start) {
  const auto n = static_cast<std::uint64_t>(d.size());
  const std::uint64_t per_round = n << n;  // subkey x coin table
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < rounds; ++i) total *= per_round;
  std::map<Tuple, double> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    std::vector<u128> keys;
    CoinTable coins(rounds, n);
    for (std::uint32_t i = 1; i <= rounds; ++i) {
      const std::uint64_t digit = rest % per_round;
      rest /= per_round;
      keys.push_back(digit % n);
      const std::uint64_t table = digit / n;
      for (std::uint64_t x = 0; x < n; ++x) coins.set(i, x, (table >> x) & 1);
    }
    const SwapOrNot<CoinTable> cipher(d, keys, coins);
    Tuple end;
    for (auto card : start) end.push_back(static_cast<std::uint32_t>(cipher.encipher(card)));
    out[end] += 1.0 / static_cast<double>(total);
  }
  return out;
}

TEST(MixingTest, DynamicProgramMatchesEnumerationThroughCipher) {
  const struct { Domain d; std::uint32_t r; Tuple start; } cases[] = {
      {Domain::mod_add(3), 2, {0, 2}},  {Domain::mod_add(3), 3, {1}},
      {Domain::mod_add(4), 2, {0, 1, 3}}, {Domain::xor_bits(2), 3, {2, 0}},
      {Domain::mod_add(5), 2, {4, 0}}};
  for (const auto& c : cases) {
    const auto oracle = enumerate_through_cipher(c.d, c.r, c.start);
    const ProjectedChain<double> chain(c.d, static_cast<unsigned>(c.start.size()));
    auto dist = start_at(chain, c.start);
    for (std::uint32_t t = 0; t < c.r; ++t) dist = chain.step(dist);
    for (std::size_t i = 0; i < chain.support()->size(); ++i) {
      const Tuple& t = (*chain.support())[i];
      const auto it = oracle.find(t);
      const double want = it == oracle.end() ? 0.0 : it->second;
      EXPECT_NEAR(dist.probs()[i], want, 1e-12);
    }
  }
}

TEST(MixingTest, RationalModeAgreesWithDouble) {
  const auto d = Domain::mod_add(5);
  const ProjectedChain<Rational> exact(d, 2);
  const ProjectedChain<double> fast(d, 2);
  auto a = ProjectedDistribution<Rational>::point_mass(exact.support(), {0, 3});
  auto b = start_at(fast, {0, 3});
  for (int t = 0; t < 6; ++t) {
    a = exact.step(a);
    b = fast.step(b);
  }
  EXPECT_EQ(a.total(), Rational(1));
  for (std::size_t i = 0; i < a.probs().size(); ++i) {
    EXPECT_NEAR(static_cast<double>(a.probs()[i]), b.probs()[i], 1e-14);
  }
  const auto pi = ProjectedDistribution<Rational>::uniform(exact.support());
  EXPECT_EQ(total_variation(exact.step(pi), pi), Rational(0));
  EXPECT_NEAR(static_cast<double>(exact_tvd_after<Rational>(d, 4, 2, {0, 3})),
              exact_tvd_after<double>(d, 4, 2, {0, 3}), 1e-14);
}

TEST(MixingTest, TractabilityGuards) {
  EXPECT_THROW(exact_tvd_after(Domain::mod_add(200), 1, 3, {0, 1, 2}), ParameterError);
  EXPECT_THROW(exact_tvd_after(Domain::mod_add(8), 65, 1, {0}), ParameterError);
  EXPECT_THROW(shuffle_sample(Domain::mod_add((1u << 20) + 1), 1, 0), ParameterError);
  EXPECT_THROW(ProjectedChain<double>(Domain::xor_bits(64), 1), ParameterError);
}

bool is_permutation_of_n(const std::vector<std::uint64_t>& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

TEST(MixingTest, ShuffleSampleBasics) {
  const auto d = Domain::mod_add(50);
  const auto identity = shuffle_sample(d, 0, 1);
  for (std::uint64_t x = 0; x < 50; ++x) EXPECT_EQ(identity.position[x], x);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_TRUE(is_permutation_of_n(shuffle_sample(d, 10, seed).position));
  }
}

TEST(MixingTest, ShuffleAndCipherAreTheSameProcess) {
  for (const auto& d : {Domain::mod_add(8), Domain::xor_bits(3), Domain::mod_add(1000), Domain::xor_bits(10)}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto s = shuffle_sample(d, 3 + static_cast<std::uint32_t>(seed % 5), seed);
      const SwapOrNot<CoinTable> cipher(d, s.subkeys, s.coins);
      for (std::uint64_t x = 0; x < s.position.size(); ++x) ASSERT_EQ(cipher.encipher(x), s.position[x]);
    }
  }
}

TEST(MixingTest, SmallGridRespectsTheBound) {
  const auto rows = validate_grid(2, 5, 3, 8);
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    EXPECT_TRUE(row.pass) << law_name(row.law) << " N=" << row.n << " q=" << row.q << " r=" << row.r
                          << " tvd=" << row.tvd << " bound=" << row.bound;
  }
  const auto canonical_only = validate_grid(3, 4, 2, 4, false);
  EXPECT_EQ(canonical_only.size(), (1 + 2) * 2 * 4u);
}

}  // namespace
}  // namespace swapornot::mixing
