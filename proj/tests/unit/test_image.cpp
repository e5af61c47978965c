#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <unistd.h>

#include "morphkit/image.hpp"
#include "morphkit/image_io.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace morphkit;
using morphkit::testing::random_field;
using morphkit::testing::random_image;

namespace {

FlowField constant_field(int w, int h, double hv, double vv) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  return FlowField(w, h, std::vector<double>(n, hv), std::vector<double>(n, vv));
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("morphkit_unit_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Image, RejectsOutOfRangePixels) {
  EXPECT_ERROR_CODE(Image(2, 1, {0.0, 1.5}), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(Image(2, 1, {0.0, std::nan("")}), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(Image(2, 2, {0.0, 0.5}), ErrorCode::DimensionMismatch);
}

TEST(Image, VectorizeRoundTrip) {
  const Image img = random_image(5, 3, 11);
  const auto v = img.vectorize();
  ASSERT_EQ(v.size(), 15u);
  EXPECT_EQ(v[1 * 5 + 4], img.at(1, 4));
  EXPECT_EQ(Image::devectorize(v, 5, 3), img);
}

TEST(FlowField, RejectsNonFinite) {
  EXPECT_ERROR_CODE(FlowField(1, 1, {INFINITY}, {0.0}), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(FlowField(2, 1, {0.0}, {0.0, 0.0}), ErrorCode::DimensionMismatch);
}

TEST(Morph, ZeroFlowIsBitIdentical) {
  const Image img = random_image(17, 9, 3);
  EXPECT_EQ(morph(img, FlowField(17, 9)), img);
}

TEST(Morph, ThreeByThreeShiftClampsRightColumn) {
  Image img(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) img.set(r, c, (3.0 * r + c) / 8.0);
  const Image out = morph(img, constant_field(3, 3, 1.0, 0.0));
  for (int r = 0; r < 3; ++r) {
    EXPECT_EQ(out.at(r, 0), img.at(r, 1));
    EXPECT_EQ(out.at(r, 1), img.at(r, 2));
    EXPECT_EQ(out.at(r, 2), img.at(r, 2));
  }
}

TEST(Morph, BilinearMidpoint) {
  const Image img(2, 1, {0.0, 1.0});
  const Image out = morph(img, constant_field(2, 1, 0.5, 0.0));
  EXPECT_DOUBLE_EQ(out.at(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(out.at(0, 1), 1.0);
}

TEST(Morph, PositiveVerticalSamplesFromBelow) {
  const Image img(1, 3, {0.1, 0.2, 0.3});
  const Image out = morph(img, constant_field(1, 3, 0.0, 1.0));
  EXPECT_EQ(out.at(0, 0), 0.2);
  EXPECT_EQ(out.at(1, 0), 0.3);
  EXPECT_EQ(out.at(2, 0), 0.3);
}

TEST(Morph, DimensionMismatch) {
  EXPECT_ERROR_CODE(morph(Image(3, 3), FlowField(3, 2)), ErrorCode::DimensionMismatch);
}

TEST(FlowNorm, Examples) {
  EXPECT_EQ(flow_norm(FlowField(4, 4), Norm::L2), 0.0);
  EXPECT_EQ(flow_norm(FlowField(4, 4), Norm::Linf), 0.0);
  EXPECT_EQ(flow_norm(FlowField(1, 1, {3.0}, {4.0}), Norm::L2), 5.0);
  EXPECT_EQ(flow_norm(FlowField(2, 1, {-2.0, 0.0}, {1.5, 0.0}), Norm::Linf), 2.0);
}

TEST(FlowScale, Examples) {
  const FlowField f = random_field(6, 5, 21);
  EXPECT_EQ(flow_scale(f, 1.0), f);
  const FlowField z = flow_scale(f, 0.0);
  EXPECT_EQ(flow_norm(z, Norm::Linf), 0.0);
  const FlowField d = flow_scale(FlowField(1, 1, {3.0}, {4.0}), 2.0);
  EXPECT_EQ(d.h_at(0, 0), 6.0);
  EXPECT_EQ(d.v_at(0, 0), 8.0);
  EXPECT_EQ(flow_norm(d, Norm::L2), 10.0);
}

TEST(FlowAdd, Componentwise) {
  const FlowField a = random_field(4, 3, 1), b = random_field(4, 3, 2);
  const FlowField s = flow_add(a, b);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s.h()[i], a.h()[i] + b.h()[i]);
    EXPECT_EQ(s.v()[i], a.v()[i] + b.v()[i]);
  }
  EXPECT_ERROR_CODE(flow_add(a, FlowField(3, 4)), ErrorCode::DimensionMismatch);
}

TEST(CropRoi, FullAndEmpty) {
  const Image img = random_image(6, 4, 5);
  EXPECT_EQ(crop_roi(img, RoiMask::full(6, 4)), img);
  const Image zero = crop_roi(img, RoiMask{6, 4, 0, 0, 0, 0});
  for (double p : zero.pixels()) EXPECT_EQ(p, 0.0);
}

TEST(CropRoi, InsetZeroesBorder) {
  const FlowField f = random_field(6, 5, 8);
  const RoiMask roi = RoiMask::inset(6, 5, 1);
  const FlowField c = crop_roi(f, roi);
  for (int r = 0; r < 5; ++r) {
    for (int col = 0; col < 6; ++col) {
      const bool in = r >= 1 && r < 4 && col >= 1 && col < 5;
      EXPECT_EQ(roi.contains(r, col), in);
      EXPECT_EQ(c.h_at(r, col), in ? f.h_at(r, col) : 0.0);
      EXPECT_EQ(c.v_at(r, col), in ? f.v_at(r, col) : 0.0);
    }
  }
  EXPECT_ERROR_CODE(RoiMask::inset(4, 4, 3), ErrorCode::InvalidArgument);
}

TEST(ImageIo, PgmRoundTripOfQuantizedImage) {
  std::vector<double> px;
  for (int i = 0; i < 12; ++i) px.push_back(static_cast<double>(i * 20) / 255.0);
  const Image img(4, 3, px);
  write_pgm(scratch("a.pgm"), img);
  EXPECT_EQ(read_pgm(scratch("a.pgm")), img);
}

TEST(ImageIo, FlowRoundTripIsBitExactAfterQuantization) {
  const FlowField f = quantize_to_float32(random_field(7, 5, 9, 4.0));
  write_flow(scratch("f.amfl"), f);
  EXPECT_EQ(read_flow(scratch("f.amfl")), f);
}

TEST(ImageIo, FlowErrors) {
  EXPECT_ERROR_CODE(read_flow(scratch("missing.amfl")), ErrorCode::IoError);
  write_pgm(scratch("b.pgm"), Image(2, 2));
  EXPECT_ERROR_CODE(read_flow(scratch("b.pgm")), ErrorCode::FormatError);
}
