#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nacl/catalog.hpp"
#include "nacl/cocycle.hpp"

using namespace nacl;

namespace {

// Oracle: |H^2(G, Z/m)| = |Z^2| / |B^2| by enumerating every normalised 2-cochain.
std::uint64_t brute_h2_order(const FiniteGroup& g, std::uint64_t m) {
  const std::size_t n = g.order();
  std::vector<std::pair<Elem, Elem>> cells;
  for (Elem x = 1; x < n; ++x)
    for (Elem y = 1; y < n; ++y) cells.push_back({x, y});
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells.size(); ++i) total *= m;
  BarComplex bar{&g, m};
  std::uint64_t cocycles = 0;
  std::vector<std::uint64_t> f(n * n, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto [x, y] : cells) {
      f[x * n + y] = c % m;
      c /= m;
    }
    if (bar.is_cocycle(f)) ++cocycles;
  }
  // Normalised coboundaries: distinct d1(h) over h with h(1) = 0.
  std::set<std::vector<std::uint64_t>> bounds;
  std::uint64_t hs = 1;
  for (std::size_t i = 1; i < n; ++i) hs *= m;
  std::vector<std::uint64_t> h(n, 0);
  for (std::uint64_t code = 0; code < hs; ++code) {
    std::uint64_t c = code;
    for (Elem x = 1; x < n; ++x) {
      h[x] = c % m;
      c /= m;
    }
    bounds.insert(bar.d1(h));
  }
  return cocycles / bounds.size();
}

}  // namespace

TEST(CocycleHomology, SmallH2MatchesBruteForce) {
  struct Case {
    const char* spec;
    std::uint64_t p;
    int e;
  };
  for (auto cs : {Case{"cyclic:2", 2, 1}, Case{"cyclic:3", 3, 1}, Case{"elementary:2^2", 2, 1}, Case{"cyclic:4", 2, 1},
                  Case{"cyclic:4", 2, 2}}) {
    auto g = parse_group(cs.spec);
    auto got = h2_classes(g, cs.p, cs.e);
    EXPECT_EQ(got.invariants.order(), brute_h2_order(g, ipow(cs.p, cs.e))) << cs.spec << " mod " << ipow(cs.p, cs.e);
  }
}

TEST(CocycleHomology, RepresentativesAreNormalisedCocycles) {
  auto g = parse_group("sym:3");
  auto h = h2_classes(g, 2, 1);
  EXPECT_EQ(h.invariants.to_string(), "C2");
  BarComplex bar{&g, 2};
  for (const auto& f : h.representatives) {
    EXPECT_TRUE(bar.is_cocycle(f));
    EXPECT_TRUE(bar.is_normalized(f));
  }
}

TEST(CocycleHomology, SchurMultipliers) {
  EXPECT_EQ(schur_multiplier(parse_group("elementary:2^2")).to_string(), "C2");
  EXPECT_EQ(schur_multiplier(parse_group("elementary:3^2")).to_string(), "C3");
  EXPECT_EQ(schur_multiplier(parse_group("quaternion:8")).to_string(), "1");
  EXPECT_EQ(schur_multiplier(parse_group("alt:4")).to_string(), "C2");
  EXPECT_EQ(schur_multiplier(parse_group("sym:4")).to_string(), "C2");
  EXPECT_EQ(schur_multiplier(parse_group("elementary:2^3")).to_string(), "C2^3");
  EXPECT_EQ(schur_multiplier(parse_group("cyclic:6")).to_string(), "1");
  EXPECT_EQ(schur_multiplier(parse_group("alt:5")).to_string(), "C2");
}

TEST(CocycleHomology, StableUnderLargerCoefficients) {
  for (auto spec : {"dihedral:8", "alt:4", "direct:cyclic:4*cyclic:2"})
    EXPECT_EQ(schur_multiplier(parse_group(spec), kDefaultCocycleCap, 0), schur_multiplier(parse_group(spec), kDefaultCocycleCap, 1))
        << spec;
}

TEST(CocycleHomology, CommutatorPairingNeedsCommutingPair) {
  auto g = parse_group("sym:3");
  std::vector<std::uint64_t> f(g.order() * g.order(), 0);
  Elem a = 0, b = 0;
  for (Elem x = 1; x < g.order() && !b; ++x)
    for (Elem y = 1; y < g.order(); ++y)
      if (g.mul(x, y) != g.mul(y, x)) {
        a = x;
        b = y;
        break;
      }
  EXPECT_THROW(commutator_pairing(g, f, 2, a, b), Error);
  EXPECT_EQ(commutator_pairing(g, f, 2, a, a), 0u);
}

TEST(CocycleHomology, CapIsEnforced) { EXPECT_THROW(schur_multiplier(parse_group("sym:5"), 100), Error); }

TEST(ModularAlgebra, KernelMatchesBruteForce) {
  LocalRing r(2, 2);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 4;
    ModMatrix a(rows, cols);
    for (auto& v : a.a) v = rng() % 4;
    std::uint64_t brute = 0, total = 1;
    for (std::size_t i = 0; i < cols; ++i) total *= 4;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::uint64_t> x(cols);
      std::uint64_t c = code;
      for (auto& xi : x) {
        xi = c % 4;
        c /= 4;
      }
      bool zero = true;
      for (std::size_t i = 0; i < rows && zero; ++i) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a(i, j) * x[j];
        zero = s % 4 == 0;
      }
      brute += zero;
    }
    auto k = kernel_of(a, r);
    std::uint64_t order = 1;
    for (int v : k.log_orders) order *= ipow(2, v);
    EXPECT_EQ(order, brute);
    for (const auto& gen : k.generators)
      for (std::size_t i = 0; i < rows; ++i) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a(i, j) * gen[j];
        EXPECT_EQ(s % 4, 0u);
      }
  }
}

TEST(ModularAlgebra, SmithTransformsAreInverse) {
  LocalRing r(3, 2);
  ModMatrix a(3, 4);
  std::uint64_t vals[] = {3, 6, 1, 0, 0, 9, 4, 2, 8, 1, 1, 5};
  for (std::size_t i = 0; i < 12; ++i) a.a[i] = vals[i] % 9;
  auto sf = smith_form(a, r);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += sf.w(i, k) * sf.w_inv(k, j);
      EXPECT_EQ(s % 9, i == j ? 1u : 0u);
    }
}
