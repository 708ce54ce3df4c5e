#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <thread>
#include <unordered_set>
#include <vector>

#include "swapornot/cipher.hpp"

namespace swapornot {
namespace {

// Single-step reference of the enciphering loop, written against plain
// 64-bit arithmetic and independent of Domain::partner.
std::uint64_t reference_encipher(GroupLaw law, std::uint64_t n, const std::vector<std::uint64_t>& keys,
                                 const std::function<bool(std::uint32_t, std::uint64_t)>& bit,
                                 std::uint64_t x) {
  for (std::uint32_t i = 1; i <= keys.size(); ++i) {
    const std::uint64_t k = keys[i - 1];
    const std::uint64_t other = law == GroupLaw::xor_bits ? (k ^ x) : (k + n - x) % n;
    const std::uint64_t rep = x > other ? x : other;
    if (bit(i, rep)) x = other;
  }
  return x;
}

using Forced = SwapOrNot<IdealRoundFunction>;

Forced forced(const Domain& d, std::vector<u128> keys, bool bit) {
  return Forced(d, std::move(keys), IdealRoundFunction::forced(bit));
}

TEST(CipherTest, ZeroRoundsIsIdentity) {
  const auto c = make_ideal_cipher(Domain::mod_add(10), 0, IdealSeed::from_u64(1));
  for (u128 x = 0; x < 10; ++x) {
    EXPECT_EQ(c.encipher(x), x);
    EXPECT_EQ(c.decipher(x), x);
  }
}

TEST(CipherTest, AllZeroBitsNeverSwap) {
  const auto d = Domain::mod_add(1000);
  const auto c = forced(d, {3, 999, 500, 0, 17, 42}, false);
  for (u128 x = 0; x < 1000; ++x) EXPECT_EQ(c.encipher(x), x);
}

TEST(CipherTest, HandTraceModAdd) {
  const auto c = forced(Domain::mod_add(10), {3, 8}, true);
  EXPECT_EQ(c.encipher(7), 2u);
  EXPECT_EQ(c.decipher(2), 7u);
  EXPECT_EQ(reference_encipher(GroupLaw::mod_add, 10, {3, 8}, [](auto, auto) { return true; }, 7), 2u);
}

TEST(CipherTest, HandTraceXor) {
  const auto c = forced(Domain::xor_bits(3), {5}, true);
  EXPECT_EQ(c.encipher(2), 7u);
  EXPECT_EQ(reference_encipher(GroupLaw::xor_bits, 8, {5}, [](auto, auto) { return true; }, 2), 7u);
}

TEST(CipherTest, AgreesWithReferenceLoop) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& d : {Domain::mod_add(37), Domain::mod_add(64), Domain::xor_bits(6)}) {
      const auto c = make_ideal_cipher(d, 25, IdealSeed::from_u64(seed));
      const auto ctx = c.source().prepare({});
      std::vector<std::uint64_t> keys(c.subkeys().begin(), c.subkeys().end());
      auto bit = [&](std::uint32_t i, std::uint64_t rep) { return c.source().bit(ctx, i, rep); };
      const auto n = static_cast<std::uint64_t>(d.size());
      for (std::uint64_t x = 0; x < n; ++x) {
        ASSERT_EQ(c.encipher(x), reference_encipher(d.law(), n, keys, bit, x));
      }
    }
  }
}

TEST(CipherTest, TraceRecordsEveryRound) {
  const auto c = make_ideal_cipher(Domain::mod_add(1000), 1, IdealSeed::from_u64(3));
  EXPECT_EQ(c.encipher_traced(5).trace.size(), 1u);

  const auto big = make_ideal_cipher(Domain::mod_add(1000), 40, IdealSeed::from_u64(4));
  for (u128 x : {u128{0}, u128{1}, u128{499}, u128{999}}) {
    const auto traced = big.encipher_traced(x);
    ASSERT_EQ(traced.trace.size(), 40u);
    EXPECT_EQ(traced.output, big.encipher(x));
    u128 state = x;
    for (std::size_t i = 0; i < traced.trace.size(); ++i) {
      const auto& s = traced.trace[i];
      EXPECT_EQ(s.x, state);
      EXPECT_EQ(s.partner, big.domain().partner(big.subkeys()[i], s.x));
      EXPECT_EQ(s.canonical, std::max(s.x, s.partner));
      state = s.bit ? s.partner : s.x;
    }
    EXPECT_EQ(state, traced.output);
  }
}

TEST(CipherTest, ReplayingTraceBitsReproducesOutput) {
  const auto d = Domain::mod_add(1'000'003);
  const auto c = make_ideal_cipher(d, 60, IdealSeed::from_u64(11));
  for (u128 x : {u128{0}, u128{77}, u128{1'000'002}}) {
    const auto traced = c.encipher_traced(x);
    std::vector<bool> bits;
    for (const auto& s : traced.trace) bits.push_back(s.bit);
    const SwapOrNot<ScriptedBits> replay(d, std::vector<u128>(c.subkeys().begin(), c.subkeys().end()),
                                        ScriptedBits(bits));
    EXPECT_EQ(replay.encipher(x), traced.output);
  }
}

void expect_permutation(const auto& cipher, std::uint64_t n, TweakBytes tweak) {
  std::vector<bool> seen(n, false);
  for (std::uint64_t x = 0; x < n; ++x) {
    const u128 y = cipher.encipher(x, tweak);
    ASSERT_LT(y, n);
    ASSERT_FALSE(seen[static_cast<std::size_t>(y)]) << "collision at x=" << x;
    seen[static_cast<std::size_t>(y)] = true;
    ASSERT_EQ(cipher.decipher(y, tweak), x);
  }
}

TEST(CipherTest, PermutationAndInverseExhaustive) {
  const std::vector<std::uint8_t> tweak{'t', 'w', 'k'};
  for (const auto& d : {Domain::mod_add(2), Domain::mod_add(3), Domain::mod_add(10),
                        Domain::mod_add(97), Domain::mod_add(4096), Domain::xor_bits(1),
                        Domain::xor_bits(5), Domain::xor_bits(12)}) {
    for (std::uint32_t rounds : {1u, 2u, 7u, 64u}) {
      const auto c = make_ideal_cipher(d, rounds, IdealSeed::from_u64(rounds));
      expect_permutation(c, static_cast<std::uint64_t>(d.size()), {});
      expect_permutation(c, static_cast<std::uint64_t>(d.size()), tweak);
    }
  }
}

TEST(CipherTest, SampledInjectivityOnLargeDomains) {
  std::mt19937_64 rng(99);
  for (const auto& d : {Domain::mod_add(u128{1} << 40), Domain::xor_bits(64),
                        Domain::mod_add_from_max(kU128Max)}) {
    const auto c = make_ideal_cipher(d, 200, IdealSeed::from_u64(5));
    std::unordered_set<std::uint64_t> inputs;
    std::unordered_set<std::uint64_t> outputs_low;
    std::vector<u128> outputs;
    while (inputs.size() < 10000) {
      const std::uint64_t x = d.is_full_width() ? rng() : rng() % static_cast<std::uint64_t>(
                                                                   std::min<u128>(d.size(), kU128Max >> 64));
      if (!inputs.insert(x).second) continue;
      const u128 y = c.encipher(x);
      ASSERT_TRUE(d.contains(y));
      ASSERT_EQ(c.decipher(y), x);
      outputs.push_back(y);
    }
    std::sort(outputs.begin(), outputs.end());
    EXPECT_EQ(std::adjacent_find(outputs.begin(), outputs.end()), outputs.end());
  }
}

TEST(CipherTest, ReversedMaterialInverts) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = trial % 2 ? Domain::xor_bits(10) : Domain::mod_add(1 + rng() % 5000 + 1);
    const auto c = make_ideal_cipher(d, static_cast<std::uint32_t>(rng() % 100), IdealSeed::from_u64(rng()));
    const auto rev = c.reversed();
    const std::vector<std::uint8_t> tweak{static_cast<std::uint8_t>(trial)};
    for (int i = 0; i < 200; ++i) {
      const u128 x = rng() % static_cast<std::uint64_t>(d.size());
      EXPECT_EQ(rev.encipher(c.encipher(x, tweak), tweak), x);
      EXPECT_EQ(c.encipher(rev.encipher(x)), x);
      EXPECT_EQ(rev.encipher(x), c.decipher(x));
    }
  }
}

TEST(CipherTest, EveryTweakGivesAPermutation) {
  const auto d = Domain::mod_add(300);
  const auto c = make_ideal_cipher(d, 30, IdealSeed::from_u64(8));
  for (int t = 0; t < 16; ++t) {
    std::vector<std::uint8_t> tweak(static_cast<std::size_t>(t), static_cast<std::uint8_t>(t * 7));
    expect_permutation(c, 300, tweak);
  }
}

TEST(CipherTest, DeterministicAcrossInstances) {
  const auto d = Domain::mod_add(1'000'000);
  const auto a = make_ideal_cipher(d, 50, IdealSeed::from_u64(123));
  const auto b = make_ideal_cipher(d, 50, IdealSeed::from_u64(123));
  const std::vector<std::uint8_t> tweak{1, 2, 3};
  for (u128 x = 0; x < 500; ++x) {
    EXPECT_EQ(a.encipher(x), b.encipher(x));
    EXPECT_EQ(a.encipher(x, tweak), b.encipher(x, tweak));
  }
}

TEST(CipherTest, ConcurrentCallersAgreeWithSequential) {
  const auto c = make_ideal_cipher(Domain::mod_add(100'000), 100, IdealSeed::from_u64(77));
  std::vector<u128> expected(4000);
  for (std::size_t x = 0; x < expected.size(); ++x) expected[x] = c.encipher(x);
  std::vector<std::thread> threads;
  std::vector<int> mismatches(4, 0);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t x = 0; x < expected.size(); ++x) mismatches[t] += c.encipher(x) != expected[x];
    });
  }
  for (auto& th : threads) th.join();
  for (int m : mismatches) EXPECT_EQ(m, 0);
}

TEST(CipherTest, RejectsBadInputs) {
  const auto d = Domain::mod_add(10);
  const auto c = make_ideal_cipher(d, 5, IdealSeed::from_u64(1));
  EXPECT_THROW(c.encipher(10), DomainError);
  EXPECT_THROW(c.decipher(11), DomainError);
  EXPECT_THROW(forced(d, {3, 10}, true), DomainError);
  EXPECT_THROW(forced(d, std::vector<u128>(kMaxRounds + 1, 0), true), ParameterError);
  EXPECT_NO_THROW(forced(d, std::vector<u128>(kMaxRounds, 0), true));
}

}  // namespace
}  // namespace swapornot
