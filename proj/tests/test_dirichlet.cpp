#include <gtest/gtest.h>

#include <random>

#include "nacl/dirichlet.hpp"

using namespace nacl;

namespace {

struct Factored {
  bool squarefree = true;
  int omega = 0;
  int three_mod_four = 0;
};

Factored factor_info(std::uint64_t n) {
  Factored f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    ++f.omega;
    if (p % 4 == 3) ++f.three_mod_four;
    if (n % p == 0) f.squarefree = false;
    while (n % p == 0) n /= p;
  }
  if (n > 1) {
    ++f.omega;
    if (n % 4 == 3) ++f.three_mod_four;
  }
  return f;
}

// Oracle: counts homomorphisms to C2^{k+1} with the odd-prime inertia condition and the real
// or imaginary condition at infinity, summed over the 2^{k+1} choices of local image per prime.
std::int64_t brute_fk(int k, std::uint64_t n, bool imaginary) {
  if (n == 1) return imaginary ? 0 : 1;
  if (n % 2 == 0) return 0;
  auto f = factor_info(n);
  if (!f.squarefree) return 0;
  // Each p | n picks one of 2^k images with nontrivial last coordinate; -1 maps to that image
  // exactly when p = 3 mod 4. The sum of those images must be 0 (real) or have last coordinate 1
  // (imaginary); its last coordinate is the parity of the count of p = 3 mod 4.
  const int m = f.three_mod_four;
  const std::int64_t all = std::int64_t{1} << (k * f.omega);
  if (imaginary) return m % 2 ? all : 0;
  if (m % 2) return 0;
  if (m == 0) return all;
  // The first k coordinates of the sum of m free choices vanish for 1 / 2^k of them.
  return all >> k;
}

// Oracle: unordered factorisations of D into two coprime fundamental discriminants other than 1.
int brute_genus(std::int64_t D) {
  int count = 0;
  std::uint64_t a = static_cast<std::uint64_t>(-D);
  for (std::uint64_t d = 1; d <= a; ++d) {
    if (a % d) continue;
    for (std::int64_t sign : {1, -1}) {
      std::int64_t d1 = sign * static_cast<std::int64_t>(d);
      if (D % d1) continue;
      std::int64_t d2 = D / d1;
      if (!is_fundamental_discriminant(d1) || !is_fundamental_discriminant(d2)) continue;
      if (std::gcd(d1 < 0 ? -d1 : d1, d2 < 0 ? -d2 : d2) != 1) continue;
      ++count;
    }
  }
  return count / 2;
}

}  // namespace

TEST(Dirichlet, EulerBasics) {
  auto one = euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{}; }, 50);
  EXPECT_EQ(one[1], 1);
  for (std::uint64_t n = 2; n <= 50; ++n) EXPECT_EQ(one[n], 0);
  auto sf = euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{1}; }, 10);
  std::vector<std::int64_t> expect{0, 1, 1, 1, 0, 1, 1, 1, 0, 0, 1};
  for (std::uint64_t n = 1; n <= 10; ++n) EXPECT_EQ(sf[n], expect[n]) << n;
  auto two = euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{2}; }, 100);
  EXPECT_EQ(two[15], 4);
  // 1 + p^-s + p^-2s: a_n = 1 iff n is cube-free.
  auto cube = euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{1, 1}; }, 100);
  EXPECT_EQ(cube[12], 1);
  EXPECT_EQ(cube[8], 0);
  EXPECT_EQ(cube[72], 0);
  EXPECT_EQ(cube[36], 1);
}

TEST(Dirichlet, Multiplicativity) {
  auto d = euler_coeffs([](std::uint64_t p) { return std::vector<std::int64_t>{static_cast<std::int64_t>(p % 5), 1}; }, 20000);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t m = 1 + rng() % 140, n = 1 + rng() % 140;
    if (std::gcd(m, n) != 1) continue;
    EXPECT_EQ(d[m * n], d[m] * d[n]);
  }
}

TEST(Dirichlet, MalleBhargavaSeries) {
  auto s3 = mb_series(1, 6, 1000);
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    auto f = factor_info(n);
    bool expect = f.squarefree && n % 2 && n % 3;
    EXPECT_EQ(s3[n], expect ? 1 : 0) << n;
  }
  auto q8 = mb_series(3, 16, 100);
  EXPECT_EQ(q8[15], 9);
  EXPECT_EQ(q8[6], 0);
}

TEST(Dirichlet, FkMatchesHomomorphismCount) {
  for (int k = 1; k <= 3; ++k) {
    auto real = f_k_coeffs(k, 5000);
    auto imag = f_k_coeffs(k, 5000, InfinityRegime::Imaginary);
    for (std::uint64_t n = 1; n <= 5000; ++n) {
      ASSERT_EQ(real[n], brute_fk(k, n, false)) << "k=" << k << " n=" << n;
      ASSERT_EQ(imag[n], brute_fk(k, n, true)) << "k=" << k << " n=" << n;
    }
  }
  auto f1 = f_k_coeffs(1, 100);
  EXPECT_EQ(f1[1], 1);
  EXPECT_EQ(f1[5], 2);
  EXPECT_EQ(f1[13], 2);
  EXPECT_EQ(f1[3], 0);
  EXPECT_EQ(f1[7], 0);
}

TEST(Dirichlet, FkRejectsBadK) {
  EXPECT_THROW(f_k_coeffs(5, 100), Error);
  EXPECT_THROW(f_k_coeffs(0, 100), Error);
}

TEST(Dirichlet, LogPowerFit) {
  auto sf = euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{1}; }, 1'000'000);
  EXPECT_NEAR(logpow_fit(sf).beta, 0.0, 0.05);
  // d(n) sums to x log x + (2 gamma - 1) x, so the fit sees an exponent close to 1.
  auto div = euler_coeffs([](std::uint64_t) {
    std::vector<std::int64_t> c(40);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = static_cast<std::int64_t>(j + 2);
    return c;
  }, 1'000'000);
  EXPECT_EQ(div[12], 6);
  EXPECT_NEAR(logpow_fit(div).beta, 1.0, 0.05);
  auto fit = logpow_fit(sf);
  EXPECT_GE(fit.checkpoints.size(), 3u);
  EXPECT_LT(fit.residual, 0.01);
  auto small = euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{1}; }, 5000);
  EXPECT_THROW(logpow_fit(small), Error);
}

TEST(Dirichlet, CapExceeded) {
  EXPECT_THROW(euler_coeffs([](std::uint64_t) { return std::vector<std::int64_t>{1}; }, kMaxDirichletX + 1), Error);
}

TEST(Dirichlet, GenusOracle) {
  auto go = genus_oracle_k1(2000);
  EXPECT_EQ(go.g[4], 0);
  EXPECT_EQ(go.g[15], 1);
  for (std::uint64_t n = 3; n <= 2000; ++n) {
    auto D = -static_cast<std::int64_t>(n);
    ASSERT_EQ(go.fundamental[n], is_fundamental_discriminant(D)) << D;
    if (go.fundamental[n]) {
      ASSERT_EQ(go.g[n], brute_genus(D)) << D;
    }
  }
  EXPECT_EQ(genus_oracle_k1(500).g[420], brute_genus(-420));
}

TEST(Dirichlet, FundamentalDiscriminants) {
  for (std::int64_t d : {-3, -4, -7, -8, 5, 8, 12, -15, -20, -420}) EXPECT_TRUE(is_fundamental_discriminant(d)) << d;
  for (std::int64_t d : {-1, 1, 4, -12, 9, -16, 18, 2}) EXPECT_FALSE(is_fundamental_discriminant(d)) << d;
}
