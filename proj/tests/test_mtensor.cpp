#include "kahler/mtensor.hpp"

#include <gtest/gtest.h>

#include <array>
#include <stdexcept>

using namespace kahler;

TEST(MTensor, RowMajorLayoutInSlotOrder) {
  MTensor t(3, {Slot::Up, Slot::Down});
  t(1, 2) = 5.0;
  EXPECT_EQ(t.size(), 9u);
  EXPECT_EQ(t.data()[1 * 3 + 2], 5.0);
  const std::array<int, 2> idx{1, 2};
  EXPECT_EQ(t.at(idx), 5.0);
}

TEST(MTensor, TransformedAxisContractsTheChosenSlot) {
  MTensor t(2, {Slot::Up, Slot::Down});
  t(0, 0) = 1.0;
  t(0, 1) = 2.0;
  t(1, 0) = 3.0;
  t(1, 1) = 4.0;
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  const MTensor swapped_rows = t.transformed_axis(0, m);
  EXPECT_EQ(swapped_rows(0, 1), 4.0);
  const MTensor swapped_cols = t.transformed_axis(1, m);
  EXPECT_EQ(swapped_cols(1, 0), 4.0);
}

TEST(MTensor, PermutedMovesAxes) {
  MTensor t(3, {Slot::Up, Slot::Down, Slot::Down});
  t(0, 1, 2) = 7.0;
  const std::array<int, 3> perm{2, 0, 1};
  const MTensor p = t.permuted(perm);
  EXPECT_EQ(p(2, 0, 1), 7.0);
  EXPECT_EQ(p.slots()[0], Slot::Down);
}

TEST(MTensor, FlattenRoundTrip) {
  MTensor t(2, {Slot::Down, Slot::Down, Slot::Down});
  for_each_index(2, 3, [&](std::span<const int> i) { t.at(i) = i[0] + 10.0 * i[1] + 100.0 * i[2]; });
  MTensor u(2, t.slots());
  u.assign_flat(t.flattened());
  EXPECT_EQ(max_abs_diff(t, u), 0.0);
}

TEST(MTensor, ArithmeticAndShapeChecks) {
  MTensor a(2, {Slot::Up});
  MTensor b(2, {Slot::Up});
  a(0) = 1.0;
  b(1) = -3.0;
  EXPECT_EQ((a + b).max_abs(), 3.0);
  EXPECT_EQ((a - b)(1), 3.0);
  a *= 4.0;
  EXPECT_EQ(a(0), 4.0);
  EXPECT_THROW(max_abs_diff(a, MTensor(2, {Slot::Down})), std::invalid_argument);
  EXPECT_THROW(max_abs_diff(a, MTensor(3, {Slot::Up})), std::invalid_argument);
}

TEST(MTensor, ForEachIndexVisitsEveryMultiIndexOnce) {
  int count = 0;
  for_each_index(3, 4, [&](std::span<const int>) { ++count; });
  EXPECT_EQ(count, 81);
}

TEST(BundleTensor, BlocksSelectHalves) {
  BundleTensor t{MTensor(4, {Slot::Up, Slot::Down}), Basis::Adapted};
  t.comps(3, 0) = 2.5;  // vertical row, horizontal column
  const MTensor vh = t.block({Part::V, Part::H});
  EXPECT_EQ(vh(1, 0), 2.5);
  MTensor hv(2, {Slot::Up, Slot::Down});
  hv(0, 1) = -1.0;
  t.set_block({Part::H, Part::V}, hv);
  EXPECT_EQ(t.comps(0, 3), -1.0);
}
