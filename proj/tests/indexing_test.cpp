#include "cgbg/indexing.hpp"

#include <gtest/gtest.h>

#include <set>

#include "cgbg/rng.hpp"

namespace cgbg {
namespace {

TEST(LocalIndex, Examples) {
  const std::vector<std::size_t> s22{2, 2};
  EXPECT_EQ(local_index(s22, std::vector<std::size_t>{0, 0}), 0u);
  EXPECT_EQ(local_index(s22, std::vector<std::size_t>{1, 0}), 2u);
  EXPECT_EQ(local_index(std::vector<std::size_t>{3, 2, 2}, std::vector<std::size_t>{2, 1, 1}), 11u);
}

TEST(LocalIndex, DimensionMismatchThrows) {
  EXPECT_THROW(local_index(std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{1}), InvalidArgument);
  EXPECT_THROW(local_index(std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{0, 2}), InvalidArgument);
}

TEST(LocalIndex, BijectiveOnRandomShapes) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> sizes(1 + rng.below(4));
    for (auto& s : sizes) s = 1 + rng.below(4);
    const std::size_t total = saturating_product(sizes);
    std::set<std::size_t> seen;
    Odometer odo(sizes);
    do {
      const std::size_t idx = local_index(sizes, odo.digits());
      EXPECT_LT(idx, total);
      EXPECT_EQ(local_unindex(sizes, idx), odo.digits());
      seen.insert(idx);
    } while (odo.next());
    EXPECT_EQ(seen.size(), total);
  }
}

TEST(Odometer, VisitsRowMajorOrder) {
  Odometer odo({2, 3});
  std::size_t k = 0;
  do {
    EXPECT_EQ(local_index(std::vector<std::size_t>{2, 3}, odo.digits()), k);
    ++k;
  } while (odo.next());
  EXPECT_EQ(k, 6u);
}

TEST(SaturatingProduct, Saturates) {
  EXPECT_EQ(saturating_pow(10, 30), std::numeric_limits<std::size_t>::max());
  EXPECT_EQ(saturating_pow(3, 4), 81u);
}

TEST(Rng, StreamIsReproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_EQ(a.below(7), b.below(7));
  }
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace cgbg
