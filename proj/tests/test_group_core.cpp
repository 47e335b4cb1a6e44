#include <gtest/gtest.h>

#include <set>

#include "nacl/catalog.hpp"
#include "nacl/todd_coxeter.hpp"

using namespace nacl;

namespace {

// Oracle: conjugacy classes by brute orbit computation over every conjugator.
std::size_t brute_class_count(const FiniteGroup& g) {
  std::vector<bool> seen(g.order(), false);
  std::size_t count = 0;
  for (Elem x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    ++count;
    for (Elem y = 0; y < g.order(); ++y) seen[g.conj(y, x)] = true;
  }
  return count;
}

// Oracle: |[G,G]| by closing the set of all commutators under products.
std::size_t brute_derived_order(const FiniteGroup& g) {
  std::set<Elem> s{0};
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem y = 0; y < g.order(); ++y) s.insert(g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y))));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Elem> cur(s.begin(), s.end());
    for (Elem a : cur)
      for (Elem b : cur)
        if (s.insert(g.mul(a, b)).second) grew = true;
  }
  return s.size();
}

bool is_group_table(const FiniteGroup& g) {
  for (Elem x = 0; x < g.order(); ++x) {
    if (g.mul(0, x) != x || g.mul(x, 0) != x || g.mul(x, g.inv(x)) != 0) return false;
    for (Elem y = 0; y < g.order(); ++y)
      for (Elem z = 0; z < g.order(); ++z)
        if (g.mul(g.mul(x, y), z) != g.mul(x, g.mul(y, z))) return false;
  }
  return true;
}

}  // namespace

TEST(GroupCore, CatalogOrders) {
  EXPECT_EQ(parse_group("cyclic:7").order(), 7u);
  EXPECT_EQ(parse_group("dihedral:10").order(), 10u);
  EXPECT_EQ(parse_group("quaternion:8").order(), 8u);
  EXPECT_EQ(parse_group("sym:4").order(), 24u);
  EXPECT_EQ(parse_group("alt:5").order(), 60u);
  EXPECT_EQ(parse_group("gl:2,3").order(), 48u);
  EXPECT_EQ(parse_group("sl:2,3").order(), 24u);
  EXPECT_EQ(parse_group("psl:3,2").order(), 168u);
  EXPECT_EQ(parse_group("heisenberg:3").order(), 27u);
  EXPECT_EQ(parse_group("direct:cyclic:4*cyclic:2").order(), 8u);
  EXPECT_EQ(parse_group("(1,2,3);(1,2)").order(), 6u);
}

TEST(GroupCore, TablesAreGroups) {
  for (auto spec : {"sym:3", "quaternion:8", "dicyclic:12", "alt:4", "heisenberg:3", "semicyclic:9,3"})
    EXPECT_TRUE(is_group_table(parse_group(spec))) << spec;
}

TEST(GroupCore, ConjugacyClassesMatchBruteForce) {
  for (auto spec : {"sym:3", "sym:4", "quaternion:8", "alt:5", "dihedral:14", "gl:2,3", "heisenberg:3"}) {
    auto g = parse_group(spec);
    EXPECT_EQ(conjugacy_classes(g).classes.size(), brute_class_count(g)) << spec;
  }
}

TEST(GroupCore, DerivedSubgroupAndAbelianization) {
  for (auto spec : {"sym:4", "alt:4", "quaternion:8", "dihedral:12", "gl:2,3"}) {
    auto g = parse_group(spec);
    auto d = brute_derived_order(g);
    EXPECT_EQ(derived_subgroup(g).size(), d) << spec;
    EXPECT_EQ(abelianization(g).invariants.order(), g.order() / d) << spec;
  }
  EXPECT_EQ(abelianization(parse_group("alt:4")).invariants.to_string(), "C3");
  EXPECT_EQ(abelianization(parse_group("quaternion:8")).invariants.to_string(), "C2^2");
}

TEST(GroupCore, CenterOrders) {
  EXPECT_EQ(center(parse_group("quaternion:8")).size(), 2u);
  EXPECT_EQ(center(parse_group("sl:2,3")).size(), 2u);
  EXPECT_EQ(center(parse_group("heisenberg:3")).size(), 3u);
  EXPECT_EQ(center(parse_group("alt:5")).size(), 1u);
}

TEST(GroupCore, AutomorphismCounts) {
  EXPECT_EQ(automorphism_group(parse_group("sym:3")).size(), 6u);
  EXPECT_EQ(automorphism_group(parse_group("quaternion:8")).size(), 24u);
  EXPECT_EQ(automorphism_group(parse_group("elementary:2^2")).size(), 6u);
  EXPECT_EQ(automorphism_group(parse_group("cyclic:9")).size(), 6u);
  EXPECT_EQ(automorphism_group(parse_group("alt:4")).size(), 24u);
}

TEST(GroupCore, Isomorphism) {
  EXPECT_TRUE(is_isomorphic(parse_group("cyclic:6"), parse_group("direct:cyclic:2*cyclic:3")));
  EXPECT_FALSE(is_isomorphic(parse_group("cyclic:6"), parse_group("sym:3")));
  EXPECT_FALSE(is_isomorphic(parse_group("quaternion:8"), parse_group("dihedral:8")));
  EXPECT_TRUE(is_isomorphic(parse_group("sym:3"), parse_group("(1,2);(1,2,3)")));
}

TEST(GroupCore, AbelianInvariantsArithmetic) {
  auto a = AbelianInvariants::from_cyclic({6, 4});
  EXPECT_EQ(a.to_string(), "C2 x C3 x C4");
  EXPECT_EQ(a.order(), 24u);
  EXPECT_EQ(a.torsion(2), 4u);
  EXPECT_EQ(a.invariant_factors(), (std::vector<std::uint64_t>{2, 12}));
  EXPECT_EQ(exterior_square(AbelianInvariants::from_cyclic({3, 3, 3})).to_string(), "C3^3");
  EXPECT_EQ(ext_with_prime_power(AbelianInvariants::from_cyclic({4, 2}), 2, 1).to_string(), "C2^2");
  EXPECT_THROW(AbelianInvariants::from_cyclic({2}).minus(AbelianInvariants::from_cyclic({3})), Error);
}

TEST(GroupCore, Errors) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvariantViolation;
  };
  EXPECT_EQ(code([] { parse_group("(1,2,1)"); }), Errc::InvalidPermutation);
  EXPECT_EQ(code([] { parse_group("nonsense:3"); }), Errc::InvalidSpec);
  EXPECT_EQ(code([] { parse_group("sym:9", 1000); }), Errc::CapExceeded);
}

TEST(ToddCoxeter, SmallPresentations) {
  // Generators a = 0/1, b = 2/3.
  Presentation s3{2, {{0, 0, 0}, {2, 2}, {0, 2, 0, 2}}, {}};
  EXPECT_EQ(enumerate_cosets(s3).size, 6u);
  Presentation q8{2, {{0, 0, 0, 0}, {0, 0, 3, 3}, {3, 0, 2, 0}}, {}};
  EXPECT_EQ(enumerate_cosets(q8).size, 8u);
  // Cosets of <a> in S3.
  Presentation s3_over_a = s3;
  s3_over_a.subgroup = {{0}};
  EXPECT_EQ(enumerate_cosets(s3_over_a).size, 2u);
  // (2,3,5) triangle group is A5.
  Presentation a5{2, {{0, 0}, {2, 2, 2}, {0, 2, 0, 2, 0, 2, 0, 2, 0, 2}}, {}};
  auto t = enumerate_cosets(a5);
  EXPECT_EQ(t.size, 60u);
  EXPECT_TRUE(verify_coset_table(t, a5));
}

TEST(ToddCoxeter, CapIsEnforced) {
  Presentation z{1, {}, {}};  // infinite cyclic
  EnumerationOptions opt;
  opt.coset_cap = 100;
  EXPECT_THROW(enumerate_cosets(z, opt), Error);
}
