#include <gtest/gtest.h>

#include <set>

#include "nacl/reference.hpp"

using namespace nacl;

namespace {

// Oracle: every admissible subgroup of G wr S2, found by closing each set of off-kernel
// involutions that contains sigma and testing the definition directly.
std::set<std::vector<Elem>> brute_admissible(const FiniteGroup& g) {
  WreathSquare w(g, SIZE_MAX);
  std::vector<Elem> invols;
  for (Elem x = 0; x < w.order(); ++x)
    if (w.pi(x) == 1 && w.mul(x, x) == 0 && x != w.sigma()) invols.push_back(x);
  std::set<std::vector<Elem>> out;
  for (std::uint64_t mask = 0; mask < (1ull << invols.size()); ++mask) {
    std::vector<Elem> gens{w.sigma()};
    for (std::size_t i = 0; i < invols.size(); ++i)
      if (mask >> i & 1) gens.push_back(invols[i]);
    auto set = subgroup_closure(w, std::span<const Elem>(gens));
    std::set<Elem> first;
    for (Elem x : set.members())
      if (w.pi(x) == 0) first.insert(w.proj1(x));
    if (first.size() != g.order()) continue;
    out.insert(set.members());
  }
  return out;
}

}  // namespace

TEST(WreathTypes, AdmissibleCountMatchesBruteForce) {
  for (auto spec : {"cyclic:2", "cyclic:3", "cyclic:4", "elementary:2^2", "sym:3", "quaternion:8", "dihedral:8"}) {
    auto g = parse_group(spec);
    auto types = enumerate_admissible(g);
    std::size_t total = 0;
    for (const auto& t : types) total += t.aut_orbit_size;
    EXPECT_EQ(total, brute_admissible(g).size()) << spec;
  }
}

TEST(WreathTypes, TypesOfSmallGroups) {
  auto c3 = enumerate_admissible(parse_group("cyclic:3"), reference::naming_options());
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].order(), 6u);
  EXPECT_EQ(c3[0].classes, 1u);
  EXPECT_TRUE(c3[0].good);
  EXPECT_EQ(c3[0].name, "S3");

  std::multiset<std::pair<std::size_t, std::size_t>> s3;
  for (const auto& t : enumerate_admissible(parse_group("sym:3"))) s3.insert({t.order(), t.classes});
  // Two Aut(G)-inequivalent embeddings of D12 share one label.
  EXPECT_EQ(s3, (std::multiset<std::pair<std::size_t, std::size_t>>{{12, 2}, {12, 2}, {36, 2}}));

  std::set<std::size_t> q8_classes;
  for (const auto& t : enumerate_admissible(parse_group("quaternion:8"))) q8_classes.insert(t.classes);
  EXPECT_EQ(q8_classes, (std::set<std::size_t>{3, 4}));
}

TEST(WreathTypes, ClassStructureOfC) {
  for (auto spec : {"cyclic:5", "sym:3", "alt:4", "dicyclic:12"}) {
    for (const auto& t : enumerate_admissible(parse_group(spec))) {
      const auto& w = *t.wreath;
      std::size_t inv = 0;
      for (Elem x : t.elements)
        if (w.pi(x) == 1 && w.mul(x, x) == 0) ++inv;
      EXPECT_EQ(inv, t.c.size());
      std::size_t covered = 0;
      for (const auto& cls : t.c_classes) covered += cls.size();
      EXPECT_EQ(covered, t.c.size());
      EXPECT_EQ(t.good, t.classes == 1);
      if (t.good) {
        EXPECT_EQ(t.abelianization_of_gprime->to_string(), "C2");
      }
    }
  }
}

TEST(WreathTypes, AutFixingByOrbitStabilizerAndBruteForce) {
  for (auto spec : {"cyclic:5", "sym:3", "alt:4", "quaternion:8", "elementary:3^2"})
    for (const auto& t : enumerate_admissible(parse_group(spec))) EXPECT_EQ(t.aut_fixing_order, aut_fixing(t)) << spec;
}

TEST(WreathTypes, TwistPairCount) {
  for (auto spec : {"cyclic:3", "cyclic:7", "elementary:3^2", "alt:4"})
    for (const auto& t : enumerate_admissible(parse_group(spec)))
      if (t.good) {
        EXPECT_EQ(count_twist_pairs(t), t.c.size() * t.aut_fixing_order) << spec;
      }
}

TEST(WreathTypes, GrowthAndPrediction) {
  for (const auto& t : enumerate_admissible(parse_group("elementary:2^2"))) {
    EXPECT_FALSE(t.good);
    auto g = mb_growth(t);
    EXPECT_FALSE(g.finite);
    EXPECT_EQ(g.log_exponent, t.classes - 1);
    EXPECT_TRUE(conjectured_averages(t, {}).e_tilde_minus.infinite);
  }
  for (const auto& t : enumerate_admissible(parse_group("alt:4"))) {
    if (t.order() != 96) continue;
    auto p = conjectured_averages(t, AbelianInvariants::from_cyclic({2}));
    EXPECT_EQ(p.e_tilde_minus, Extended::finite(2, 1));
    EXPECT_EQ(p.e_minus, Extended::finite(2, t.aut_fixing_order));
  }
}

TEST(WreathTypes, EmbeddingErrors) {
  auto t = enumerate_admissible(parse_group("cyclic:3"))[0];
  auto m = materialize(t);
  ElementSet delta(m.group.order());
  for (Elem x : m.kernel) delta.insert(x);
  ElementSet bad(m.group.order());
  bad.insert(0);
  EXPECT_THROW(embed_wreath(m.group, bad, m.rho, m.c[0], *t.wreath), Error);
  EXPECT_THROW(embed_wreath(m.group, delta, m.rho, 0, *t.wreath), Error);
  auto e = embed_wreath(m.group, delta, m.rho, m.c[0], *t.wreath);
  EXPECT_TRUE(e.injective);
}

TEST(WreathTypes, SimpleGroupsUseDirectConstruction) {
  auto types = enumerate_admissible(parse_group("alt:5"), reference::naming_options());
  std::multiset<std::pair<std::size_t, std::size_t>> got;
  for (const auto& t : types) {
    got.insert({t.order(), t.classes});
    if (t.classes == 2) {
      EXPECT_EQ(t.embeddings_of_class, 2u);
    }
  }
  EXPECT_EQ(got, (std::multiset<std::pair<std::size_t, std::size_t>>{{120, 1}, {120, 2}, {120, 2}, {7200, 1}}));
}
