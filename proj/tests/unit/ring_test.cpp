/*
 * Copyright 2026 The ckksid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ckksid/ring.hpp"

#include <gtest/gtest.h>

#include <map>

#include "ckksid/error.hpp"
#include "ckksid/random.hpp"
#include "support/oracles.hpp"

namespace ckksid {
namespace {

using testing::centered_mod;
using testing::negacyclic_oracle;

std::vector<std::int64_t> ToInt64(const RingElement& a) {
  std::vector<std::int64_t> out;
  for (const auto& c : a.coeffs()) out.push_back(c.get_si());
  return out;
}

RingElement RandomSmall(const RingParamsPtr& params, ChaChaRng& rng) {
  return uniform_ring(params, rng);
}

TEST(RingParamsTest, RejectsBadDimensions) {
  EXPECT_THROW(RingParams(3, 97), ParameterError);
  EXPECT_THROW(RingParams(1, 97), ParameterError);
  EXPECT_THROW(RingParams(8, 1), ParameterError);
  EXPECT_NO_THROW(RingParams(2, 5));
}

TEST(RingParamsTest, FactorizationProduct) {
  auto params = RingParams::from_factors(8, {{mpz_class(3), 2}, {mpz_class(7), 1}});
  EXPECT_EQ(params->modulus(), 63);
  EXPECT_THROW(RingParams(8, 64, {{mpz_class(3), 2}}), ParameterError);
}

TEST(RingTest, CanonicalReduction) {
  auto params = RingParams::create(4, 8);
  mpz_class x = 4;
  params->reduce(x);
  EXPECT_EQ(x, -4);
  x = 3;
  params->reduce(x);
  EXPECT_EQ(x, 3);
  x = -5;
  params->reduce(x);
  EXPECT_EQ(x, 3);
}

TEST(RingTest, AddIdentityAndWraparound) {
  auto params = RingParams::create(16, 97);
  ChaChaRng rng(1);
  RingElement a = uniform_ring(params, rng);
  EXPECT_EQ(a + RingElement(params), a);

  std::vector<mpz_class> minus_one(16, mpz_class(96));
  RingElement m = RingElement::from_coeffs(params, minus_one);
  std::vector<mpz_class> ones(16, mpz_class(1));
  EXPECT_TRUE((m + RingElement::from_coeffs(params, ones)).is_zero());
}

TEST(RingTest, AddMatchesCoefficientOracle) {
  auto params = RingParams::create(16, 97);
  ChaChaRng rng(2);
  for (int t = 0; t < 200; ++t) {
    RingElement a = uniform_ring(params, rng), b = uniform_ring(params, rng);
    auto sum = ToInt64(a + b), diff = ToInt64(a - b);
    auto av = ToInt64(a), bv = ToInt64(b);
    for (std::size_t i = 0; i < 16; ++i) {
      ASSERT_EQ(sum[i], centered_mod(av[i] + bv[i], 97));
      ASSERT_EQ(diff[i], centered_mod(av[i] - bv[i], 97));
    }
  }
}

TEST(RingTest, MismatchedParamsThrow) {
  auto p1 = RingParams::create(8, 97);
  auto p2 = RingParams::create(8, 101);
  EXPECT_THROW(RingElement(p1) + RingElement(p2), ParameterMismatch);
  EXPECT_THROW(RingElement(p1) * RingElement(p2), ParameterMismatch);
}

TEST(RingTest, NegProperties) {
  auto params = RingParams::create(8, 257);
  ChaChaRng rng(3);
  RingElement a = uniform_ring(params, rng);
  EXPECT_TRUE((-RingElement(params)).is_zero());
  EXPECT_EQ(-(-a), a);
  EXPECT_TRUE((-a + a).is_zero());
}

TEST(RingTest, MulIdentityAndWrap) {
  auto params = RingParams::create(8, 257);
  ChaChaRng rng(4);
  RingElement a = uniform_ring(params, rng);
  EXPECT_EQ(a * RingElement::monomial(params, 0), a);
  RingElement w = RingElement::monomial(params, 7) * RingElement::monomial(params, 1);
  EXPECT_EQ(w[0], -1);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(w[i], 0);
}

TEST(RingTest, ScalarMul) {
  auto params = RingParams::create(8, 257);
  ChaChaRng rng(5);
  RingElement a = uniform_ring(params, rng);
  EXPECT_EQ(ring_scalar_mul(1, a), a);
  EXPECT_TRUE(ring_scalar_mul(0, a).is_zero());
  EXPECT_EQ(ring_scalar_mul(2, a), a + a);
}

TEST(RingTest, MulMatchesOracleSmallPrime) {
  for (std::size_t n : {2u, 8u, 16u, 32u}) {
    auto params = RingParams::create(n, 257);
    ChaChaRng rng(100 + n);
    for (int t = 0; t < 100; ++t) {
      RingElement a = uniform_ring(params, rng), b = uniform_ring(params, rng);
      ASSERT_EQ(ToInt64(a * b), negacyclic_oracle(ToInt64(a), ToInt64(b), 257));
      ASSERT_EQ(a * b, ring_mul_schoolbook(a, b));
    }
  }
}

TEST(RingTest, MulExhaustiveN2P5) {
  auto params = RingParams::create(2, 5);
  for (int a0 = -2; a0 <= 2; ++a0)
    for (int a1 = -2; a1 <= 2; ++a1)
      for (int b0 = -2; b0 <= 2; ++b0)
        for (int b1 = -2; b1 <= 2; ++b1) {
          std::vector<std::int64_t> av{a0, a1}, bv{b0, b1};
          RingElement a = RingElement::from_int64(params, av);
          RingElement b = RingElement::from_int64(params, bv);
          ASSERT_EQ(ToInt64(a * b), negacyclic_oracle(av, bv, 5));
        }
}

TEST(RingTest, MulBigModulusMatchesSchoolbook) {
  const mpz_class p1("1099511627689"), p2("1152921504606846883");
  auto params = RingParams::from_factors(64, {{p1, 3}, {p2, 2}});
  ChaChaRng rng(6);
  for (int t = 0; t < 10; ++t) {
    RingElement a = uniform_ring(params, rng), b = uniform_ring(params, rng);
    ASSERT_EQ(a * b, ring_mul_schoolbook(a, b));
  }
}

TEST(RingTest, RingAxioms) {
  auto params = RingParams::create(32, 97);
  ChaChaRng rng(7);
  for (int t = 0; t < 20; ++t) {
    RingElement a = uniform_ring(params, rng), b = uniform_ring(params, rng),
                c = uniform_ring(params, rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(RingTest, CanonicalClosure) {
  auto params = RingParams::create(16, 97);
  ChaChaRng rng(8);
  for (int t = 0; t < 50; ++t) {
    RingElement a = uniform_ring(params, rng), b = uniform_ring(params, rng);
    for (const RingElement& r : {a + b, a - b, -a, a * b, ring_scalar_mul(1000, a)}) {
      for (const auto& c : r.coeffs()) {
        ASSERT_GE(2 * c, -97);
        ASSERT_LT(2 * c, 97);
      }
    }
  }
}

TEST(RingTest, UniformDeterministic) {
  auto params = RingParams::create(16, 97);
  ChaChaRng r1(9), r2(9);
  EXPECT_EQ(uniform_ring(params, r1), uniform_ring(params, r2));
}

TEST(RingTest, UniformChiSquareN4P8) {
  auto params = RingParams::create(4, 8);
  ChaChaRng rng(10);
  const int draws = 100000;
  std::vector<std::array<long, 8>> counts(4);
  for (auto& c : counts) c.fill(0);
  for (int t = 0; t < draws; ++t) {
    RingElement a = uniform_ring(params, rng);
    for (std::size_t i = 0; i < 4; ++i) {
      const long v = a[i].get_si();
      ASSERT_GE(v, -4);
      ASSERT_LT(v, 4);
      ++counts[i][v + 4];
    }
  }
  const double expected = draws / 8.0;
  for (const auto& c : counts) {
    double chi2 = 0;
    for (long k : c) chi2 += (k - expected) * (k - expected) / expected;
    EXPECT_LT(chi2, testing::chi2_q99(7));
  }
}

TEST(RingTest, AutomorphismIsRingHomomorphism) {
  auto params = RingParams::create(16, 257);
  ChaChaRng rng(11);
  RingElement a = uniform_ring(params, rng), b = uniform_ring(params, rng);
  for (std::size_t g : {3u, 5u, 25u, 31u}) {
    EXPECT_EQ(ring_automorphism(a * b, g), ring_automorphism(a, g) * ring_automorphism(b, g));
    EXPECT_EQ(ring_automorphism(a + b, g), ring_automorphism(a, g) + ring_automorphism(b, g));
  }
  EXPECT_EQ(ring_automorphism(a, 1), a);
}

TEST(RingSerializationTest, RoundTrip) {
  const mpz_class p1("1099511627689"), p2("1152921504606846883");
  auto params = RingParams::from_factors(32, {{p1, 3}, {p2, 2}});
  ChaChaRng rng(12);
  RingElement a = uniform_ring(params, rng);
  std::vector<std::uint8_t> buf;
  write_ring_element(buf, a);
  std::span<const std::uint8_t> in(buf);
  EXPECT_EQ(read_ring_element(in, params), a);
  EXPECT_TRUE(in.empty());
}

TEST(RingSerializationTest, BigintEdgeCases) {
  for (const char* s : {"0", "1", "-1", "127", "128", "-128", "-129", "255", "-256",
                        "340282366920938463463374607431768211455"}) {
    std::vector<std::uint8_t> buf;
    put_bigint(buf, mpz_class(s));
    std::span<const std::uint8_t> in(buf);
    EXPECT_EQ(get_bigint(in), mpz_class(s)) << s;
  }
  std::vector<std::uint8_t> buf;
  put_bigint(buf, mpz_class(-128));
  EXPECT_EQ(buf.size(), 5u);
  EXPECT_EQ(buf[4], 0x80);
}

TEST(RingSerializationTest, TruncatedInputThrows) {
  auto params = RingParams::create(8, 97);
  std::vector<std::uint8_t> buf;
  write_ring_element(buf, RingElement(params));
  buf.pop_back();
  std::span<const std::uint8_t> in(buf);
  EXPECT_THROW(read_ring_element(in, params), FormatError);
}

}  // namespace
}  // namespace ckksid
