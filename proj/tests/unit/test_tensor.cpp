#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sci/errors.hpp"
#include "sci/tensor.hpp"
#include "support/oracles.hpp"

namespace sci {
namespace {

using testing::random_cube;

TEST(VideoCube, FrameMajorRowMajorOffsets) {
  VideoCube c(1, 2, 2);
  c(0, 0, 0) = 1;  // a
  c(0, 1, 0) = 2;  // b
  c(0, 0, 1) = 3;  // c
  c(0, 1, 1) = 4;  // d
  EXPECT_EQ(vectorize(c), (std::vector<double>{1, 2, 3, 4}));
}

TEST(VideoCube, OffsetFormulaMatchesTripleLoop) {
  std::mt19937_64 rng(7);
  const VideoCube c = random_cube(rng, Shape{3, 4, 2});
  const std::vector<double> v = vectorize(c);
  std::size_t visited = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_EQ(v[((k * 3) + i) * 4 + j], c(i, j, k));
        ++visited;
      }
    }
  }
  EXPECT_EQ(visited, v.size());
}

TEST(VideoCube, ConstantCubeVectorizesToConstant) {
  const VideoCube c(2, 3, 4, 0.25);
  for (double e : vectorize(c)) EXPECT_EQ(e, 0.25);
}

TEST(VideoCube, RejectsZeroExtentsAndWrongLength) {
  EXPECT_THROW(VideoCube(0, 2, 2), DimensionError);
  EXPECT_THROW(VideoCube(2, 0, 2), DimensionError);
  EXPECT_THROW(VideoCube(2, 2, 0), DimensionError);
  EXPECT_THROW(VideoCube(Shape{2, 2, 2}, std::vector<double>(7)), DimensionError);
  EXPECT_THROW(Frame(0, 3), DimensionError);
  EXPECT_THROW(Frame(2, 2, std::vector<double>(3)), DimensionError);
}

TEST(VideoCube, FrameAccessors) {
  VideoCube c(2, 2, 3);
  Frame f(2, 2, std::vector<double>{1, 2, 3, 4});
  c.set_frame(1, f);
  EXPECT_EQ(c.frame_copy(1), f);
  EXPECT_EQ(c(1, 0, 1), 3.0);
  EXPECT_EQ(c.frame(0)[0], 0.0);
  EXPECT_THROW(c.set_frame(0, Frame(3, 2)), DimensionError);
}

TEST(Devectorize, InverseOfVectorize) {
  const VideoCube c = devectorize(std::vector<double>{1, 2, 3, 4}, 1, 2, 2);
  EXPECT_EQ(c(0, 0, 0), 1);
  EXPECT_EQ(c(0, 1, 0), 2);
  EXPECT_EQ(c(0, 0, 1), 3);
  EXPECT_EQ(c(0, 1, 1), 4);
  EXPECT_EQ(devectorize(std::vector<double>(6, 0.0), 1, 2, 3), VideoCube(1, 2, 3));
}

TEST(Devectorize, LengthMismatchThrows) {
  EXPECT_THROW(devectorize(std::vector<double>(5), 1, 2, 3), DimensionError);
}

TEST(Devectorize, RoundTripIsBitExactForAllSmallShapes) {
  std::mt19937_64 rng(11);
  for (std::size_t nx = 1; nx <= 8; ++nx) {
    for (std::size_t ny = 1; ny <= 8; ++ny) {
      for (std::size_t b = 1; b <= 8; ++b) {
        const VideoCube c = random_cube(rng, Shape{nx, ny, b}, -1e3, 1e3);
        ASSERT_EQ(devectorize(vectorize(c), nx, ny, b), c);
      }
    }
  }
}

TEST(StackFrames, StacksInOrderAndChecksSizes) {
  const std::vector<Frame> frames{Frame(2, 1, 1.0), Frame(2, 1, 2.0)};
  const VideoCube c = stack_frames(frames);
  EXPECT_EQ(c.shape(), (Shape{2, 1, 2}));
  EXPECT_EQ(c(1, 0, 1), 2.0);
  const std::vector<Frame> mixed{Frame(2, 1), Frame(1, 2)};
  EXPECT_THROW(stack_frames(mixed), DimensionError);
}

TEST(VectorHelpers, FinitenessAndNorms) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  EXPECT_EQ(dot(a, b), 32.0);
  EXPECT_EQ(squared_norm(a), 14.0);
  EXPECT_EQ(max_abs_diff(a, b), 3.0);
  EXPECT_TRUE(all_finite(a));
  const std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_FALSE(all_finite(bad));
  EXPECT_THROW(dot(a, bad), DimensionError);
}

}  // namespace
}  // namespace sci
