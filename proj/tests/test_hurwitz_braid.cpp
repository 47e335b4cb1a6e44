#include <gtest/gtest.h>

#include <map>

#include "nacl/catalog.hpp"
#include "nacl/hurwitz.hpp"

using namespace nacl;

namespace {

MarkedUniversalGroup marked(const std::string& spec, std::size_t order) {
  for (auto& t : enumerate_admissible(parse_group(spec)))
    if (t.good && t.order() == order) {
      MarkedOptions mo;
      mo.use_cache = false;
      return todd_coxeter(t, mo);
    }
  throw std::runtime_error("no such type");
}

// Oracle: every tuple in c^n with the right product, by plain nested enumeration.
std::size_t brute_tuple_count(const MarkedPair& mp, std::size_t n, Elem boundary) {
  std::size_t count = 0;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Elem acc = 0;
    for (auto i : idx) acc = mp.group.mul(acc, mp.c[i]);
    if (mp.group.mul(acc, boundary) == 0) ++count;
    std::size_t k = 0;
    while (k < n && ++idx[k] == mp.c.size()) idx[k++] = 0;
    if (k == n) break;
  }
  return count;
}

}  // namespace

TEST(HurwitzBraid, TupleEnumerationMatchesBruteForce) {
  auto e = marked("cyclic:3", 6);
  Elem y = e.pair.classes[0][0];
  for (std::size_t n : {2, 3, 4, 5}) {
    Elem b = n % 2 ? y : 0;
    EXPECT_EQ(enumerate_tuples(e.pair, n, b).size(), brute_tuple_count(e.pair, n, b)) << n;
  }
}

TEST(HurwitzBraid, BraidRelationsAndProduct) {
  auto e = marked("elementary:3^2", 18);
  const auto& g = e.pair.group;
  TupleCodec codec(e.pair, 4);
  auto tuples = enumerate_tuples(e.pair, 4, 0);
  std::vector<Elem> t;
  for (std::size_t i = 0; i < tuples.size(); i += 7) {
    codec.unpack(tuples[i], t);
    auto a = t, b = t;
    braid_move(g, a, 0);
    braid_move(g, a, 1);
    braid_move(g, a, 0);
    braid_move(g, b, 1);
    braid_move(g, b, 0);
    braid_move(g, b, 1);
    EXPECT_EQ(a, b);
    auto c = t;
    braid_move(g, c, 2);
    braid_move(g, c, 2, true);
    EXPECT_EQ(c, t);
    NielsenTuple moved{a, 0, multidiscriminant(e.pair, a)};
    EXPECT_TRUE(satisfies_product(e.pair, moved));
  }
}

TEST(HurwitzBraid, S3PairsAreFixedPoints) {
  auto e = marked("cyclic:3", 6);
  auto rep = stratum_report(e, 2, 0, {2});
  EXPECT_EQ(rep.tuple_count, 3u);
  EXPECT_EQ(rep.all_orbit_count, 3u);
  EXPECT_EQ(rep.orbit_count, 0u);  // (a, a) never generates S3
}

TEST(HurwitzBraid, S3StableStrata) {
  auto e = marked("cyclic:3", 6);
  Elem y = e.pair.classes[0][0];
  for (std::size_t n = 4; n <= 7; ++n) {
    Elem b = n % 2 ? y : 0;
    auto rep = stratum_report(e, n, b, {static_cast<std::int64_t>(n)});
    EXPECT_TRUE(rep.invariant_constant_on_orbits);
    EXPECT_EQ(rep.orbit_count, 1u) << n;
    EXPECT_EQ(rep.invariant_count, 1u) << n;
  }
}

TEST(HurwitzBraid, InvariantIsBraidInvariant) {
  // Checked directly on every tuple, independently of the orbit partition.
  auto e = marked("elementary:3^2", 18);
  TupleCodec codec(e.pair, 4);
  std::vector<Elem> t;
  for (auto key : enumerate_tuples(e.pair, 4, 0)) {
    codec.unpack(key, t);
    auto before = component_invariant(e, {t, 0, {4}});
    for (std::size_t i = 0; i + 1 < 4; ++i) {
      auto m = t;
      braid_move(e.pair.group, m, i);
      EXPECT_EQ(component_invariant(e, {m, 0, {4}}), before);
    }
  }
}

TEST(HurwitzBraid, Dihedral3x3Components) {
  auto e = marked("elementary:3^2", 18);
  Elem y = e.pair.classes[0][0];
  auto rep = stratum_report(e, 5, y, {5});
  EXPECT_TRUE(rep.invariant_constant_on_orbits);
  EXPECT_EQ(rep.invariant_count, 3u);
  EXPECT_EQ(rep.orbit_count, 3u);
}

TEST(HurwitzBraid, FixedInvariantsNeverExceedPb) {
  auto e = marked("elementary:3^2", 18);
  Elem y = e.pair.classes[0][0];
  for (std::uint64_t q : {5, 7}) {
    auto fc = frobenius_fixed_components(e, q, y, {5}, true);
    EXPECT_EQ(fc.pb.brute, fc.pb.formula);
    EXPECT_LE(fc.realized_fixed, fc.pb.brute);
  }
}

TEST(HurwitzBraid, Errors) {
  auto e = marked("cyclic:3", 6);
  Elem outside = 0;
  for (Elem x = 1; x < e.pair.group.order(); ++x)
    if (e.pair.class_of[x] < 0) outside = x;
  EXPECT_THROW(enumerate_tuples(e.pair, 3, outside), Error);
  EXPECT_THROW(enumerate_tuples(e.pair, 8, 0, std::nullopt, 10), Error);
  std::vector<Elem> bad{outside};
  EXPECT_THROW(multidiscriminant(e.pair, bad), Error);
}
