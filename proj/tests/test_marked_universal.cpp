#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "nacl/cocycle.hpp"
#include "nacl/marked.hpp"
#include "nacl/reference.hpp"

using namespace nacl;

namespace {

AdmissibleType good_type(const std::string& spec, std::size_t order) {
  for (auto& t : enumerate_admissible(parse_group(spec)))
    if (t.good && t.order() == order) return t;
  throw std::runtime_error("no such type");
}

MarkedUniversalGroup build(const std::string& spec, std::size_t order, std::size_t M = 0) {
  MarkedOptions mo;
  mo.use_cache = false;
  mo.M = M;
  return todd_coxeter(good_type(spec, order), mo);
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvariantViolation;
}

}  // namespace

TEST(MarkedUniversal, S3HasTrivialKernel) {
  auto e = build("cyclic:3", 6);
  EXPECT_EQ(e.ubar.order(), 36u);
  EXPECT_TRUE(e.kernel_invariants.trivial());
  EXPECT_EQ(e.r, 1u);
  EXPECT_EQ(e.modulus, 12u);
}

TEST(MarkedUniversal, OrderIdentityAndCocycleAgreement) {
  struct Row {
    const char* spec;
    std::size_t order;
  };
  for (auto row : {Row{"cyclic:5", 10}, Row{"elementary:3^2", 18}, Row{"alt:4", 24}, Row{"alt:4", 96}, Row{"elementary:5^2", 50}}) {
    auto e = build(row.spec, row.order);
    EXPECT_EQ(e.ubar.order(), e.fiber_order() * e.kernel.size()) << row.spec;
    auto m = materialize(good_type(row.spec, row.order));
    EXPECT_EQ(e.kernel_invariants, reduced_schur(m.group, m.c)) << row.spec << " " << row.order;
  }
}

TEST(MarkedUniversal, MarkedRelationsHoldInU) {
  auto e = build("elementary:3^2", 18);
  const auto& g = e.pair.group;
  for (Elem x : e.pair.c)
    for (Elem y : e.pair.c) {
      Elem lhs = e.ubar.mul(e.ubar.mul(e.lift(x), e.lift(y)), e.ubar.inv(e.lift(x)));
      EXPECT_EQ(lhs, e.lift(g.conj(x, y)));
    }
  for (Elem u = 0; u < e.ubar.order(); ++u)
    for (Elem v : {Elem{1}, Elem{5}, Elem{17}}) EXPECT_EQ(e.to_gprime[e.ubar.mul(u, v)], g.mul(e.to_gprime[u], e.to_gprime[v]));
}

TEST(MarkedUniversal, KernelIsCentral) {
  auto e = build("elementary:3^2", 18);
  ASSERT_EQ(e.kernel.size(), 3u);
  for (Elem z : e.kernel)
    for (Elem u = 0; u < e.ubar.order(); ++u) EXPECT_EQ(e.ubar.mul(z, u), e.ubar.mul(u, z));
}

TEST(MarkedUniversal, DoublingMScalesFiberOnly) {
  for (auto [spec, order] : {std::pair{"cyclic:3", 6}, std::pair{"elementary:3^2", 18}, std::pair{"cyclic:5", 10}}) {
    auto a = build(spec, order);
    auto b = build(spec, order, 2 * order);
    EXPECT_EQ(b.ubar.order(), a.ubar.order() * (1u << a.r)) << spec;
    EXPECT_EQ(a.kernel_invariants, b.kernel_invariants) << spec;
  }
}

TEST(MarkedUniversal, DiscreteActionIsAnAction) {
  auto e = build("elementary:3^2", 18);
  std::mt19937_64 rng(7);
  const std::uint64_t bound = exponent_bound(e);
  auto unit = [&] {
    while (true) {
      std::uint64_t a = rng() % bound;
      if (std::gcd(a, bound) == 1) return static_cast<std::int64_t>(a);
    }
  };
  for (int i = 0; i < 300; ++i) {
    Elem u = static_cast<Elem>(rng() % e.ubar.order());
    MarkedElement x{u, {static_cast<std::int64_t>(e.lattice_of(u)[0] + e.modulus * (rng() % 3))}};
    auto a = unit(), b = unit();
    auto ab = static_cast<std::int64_t>((static_cast<unsigned __int128>(a) * b) % bound);
    EXPECT_EQ(discrete_action(e, ab, x), discrete_action(e, a, discrete_action(e, b, x)));
    EXPECT_EQ(discrete_action(e, 1, x), x);
  }
}

TEST(MarkedUniversal, PropPbAgainstTorsion) {
  auto e = build("elementary:3^2", 18);
  Elem y = e.pair.classes[0][0];
  for (std::uint64_t q : {5, 7, 11, 13}) {
    auto odd = prop_pb_count(e, q, y, {3});
    auto even = prop_pb_count(e, q, 0, {4});
    EXPECT_EQ(odd.brute, odd.formula);
    EXPECT_EQ(even.brute, even.formula);
  }
  EXPECT_EQ(prop_pb_count(e, 7, y, {3}).formula, 3u);
  EXPECT_EQ(prop_pb_count(e, 5, y, {3}).formula, 1u);
}

TEST(MarkedUniversal, Errors) {
  auto e = build("cyclic:3", 6);
  Elem y = e.pair.classes[0][0];
  Elem outside = 0;
  for (Elem x = 1; x < e.pair.group.order(); ++x)
    if (e.pair.class_of[x] < 0) outside = x;
  EXPECT_EQ(code_of([&] { e.lift(outside); }), Errc::NotOverC);
  EXPECT_EQ(code_of([&] { prop_pb_count(e, 9, y, {3}); }), Errc::NotCoprime);
  EXPECT_EQ(code_of([&] { prop_pb_count(e, 5, y, {4}); }), Errc::ParityViolation);
  EXPECT_EQ(code_of([&] { discrete_action(e, 3, {0, {0}}); }), Errc::NotCoprime);
  MarkedOptions tiny;
  tiny.coset_cap = 10;
  tiny.use_cache = false;
  EXPECT_EQ(code_of([&] { todd_coxeter(good_type("alt:4", 24), tiny); }), Errc::CapExceeded);
}

TEST(MarkedUniversal, CacheRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "nacl_cache_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ::setenv("NACL_CACHE_DIR", dir.c_str(), 1);
  MarkedOptions mo;
  auto t = good_type("alt:4", 24);
  auto first = todd_coxeter(t, mo);
  auto second = todd_coxeter(t, mo);
  ::unsetenv("NACL_CACHE_DIR");
  EXPECT_FALSE(first.from_cache);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(first.ubar.order(), second.ubar.order());
  EXPECT_EQ(first.kernel_invariants, second.kernel_invariants);
  std::filesystem::remove_all(dir);
}
