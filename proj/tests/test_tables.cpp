#include <gtest/gtest.h>

#include "nacl/tables.hpp"

using namespace nacl;

TEST(Tables, ParseInvariantsRoundTrip) {
  for (auto s : {"1", "C2", "C3^2", "C2 x C4", "C3^3", "C2^2 x C3"}) EXPECT_EQ(parse_invariants(s).to_string(), s);
  EXPECT_THROW(parse_invariants("Z2"), Error);
}

TEST(Tables, TypeRowsForCyclic3AndS3) {
  auto c3 = type_entries("cyclic:3");
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].label, "S3");
  auto s3 = type_entries("sym:3");
  ASSERT_EQ(s3.size(), 2u);
  EXPECT_EQ(s3[0].label, "D12");
  EXPECT_EQ(s3[1].label, "S3xS3");
  EXPECT_EQ(s3[0].type.classes, 2u);
}

TEST(Tables, H2RowsForA4) {
  auto rows = type_entries("alt:4");
  ASSERT_EQ(rows.size(), 2u);
  auto small = h2_entry(rows[0]);
  auto big = h2_entry(rows[1]);
  EXPECT_EQ(small.h2.to_string(), "1");
  EXPECT_EQ(big.h2.to_string(), "C2");
  EXPECT_EQ(big.method, "coset");
  EXPECT_TRUE(big.routes_agree);
  EXPECT_TRUE(big.cocycle.has_value());
  EXPECT_EQ(big.center, 1u);
}

TEST(Tables, RecordedRowWhenBeyondCaps) {
  for (const auto& te : type_entries("alt:5")) {
    if (te.type.order() != 7200) continue;
    auto h = h2_entry(te);
    EXPECT_EQ(h.method, "recorded");
    EXPECT_EQ(h.h2.to_string(), "C2");
  }
}

TEST(Tables, NonGoodRowsAreRejectedForH2) {
  auto rows = type_entries("cyclic:2");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_THROW(h2_entry(rows[0]), Error);
}

TEST(Tables, PredictA4) {
  for (const auto& te : type_entries("alt:4")) {
    auto p = predict_entry(te);
    EXPECT_EQ(p.aut_fixing_orbit, p.aut_fixing_brute);
    if (te.type.order() == 96) {
      EXPECT_EQ(p.prediction.e_tilde_minus.to_string(), "2");
    }
  }
}

TEST(Tables, PbRowsCoverBothParities) {
  auto te = type_entries("elementary:3^2").at(0);
  MarkedOptions mo;
  mo.use_cache = false;
  auto e = todd_coxeter(te.type, mo);
  auto rows = pb_entries(e, te.label, {3, 5, 7});
  ASSERT_EQ(rows.size(), 4u);  // q = 3 is skipped
  for (const auto& r : rows) EXPECT_TRUE(r.ok());
  EXPECT_EQ(rows[2].count.brute, 3u);
}

TEST(Tables, ParallelMapKeepsOrderAndRethrows) {
  auto v = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (int i = 0; i < 50; ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(parallel_map<int>(10, 3, [](std::size_t i) -> int {
                 if (i == 4) fail(Errc::InvalidSpec, "boom");
                 return 0;
               }),
               Error);
}
