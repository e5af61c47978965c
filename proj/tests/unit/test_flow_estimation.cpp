#include <gtest/gtest.h>

#include <cmath>

#include "morphkit/flow_estimation.hpp"
#include "morphkit/synth.hpp"
#include "support/expect.hpp"

using namespace morphkit;

namespace {

Image smooth_texture(std::uint64_t seed, double smoothness) {
  IdentitySpec spec;
  spec.identity_seed = seed;
  spec.texture_smoothness = smoothness;
  return generate_identity(spec);
}

constexpr int kBorder = 4;

}  // namespace

TEST(FlowEstimation, IdenticalFramesGiveZeroField) {
  const Image a = smooth_texture(1, 2.0);
  EXPECT_LT(flow_norm(estimate_flow(a, a), Norm::L2), 1e-6);
}

TEST(FlowEstimation, RecoversOnePixelShift) {
  for (int sign : {1, -1}) {
    const Image a = smooth_texture(4, 3.0);
    const std::size_t n = a.size();
    // b(p) = a(p + sign * e_h): the content moves left for sign = +1.
    const Image b = morph(a, FlowField(a.width(), a.height(), std::vector<double>(n, sign), std::vector<double>(n, 0.0)));
    const FlowField f = estimate_flow(a, b);
    double err_h = 0.0, err_v = 0.0;
    int count = 0;
    for (int r = kBorder; r < a.height() - kBorder; ++r) {
      for (int c = kBorder; c < a.width() - kBorder; ++c) {
        err_h += std::abs(f.h_at(r, c) - sign);
        err_v += std::abs(f.v_at(r, c));
        ++count;
      }
    }
    EXPECT_LE(err_h / count, 0.25) << "sign " << sign;
    EXPECT_LE(err_v / count, 0.25) << "sign " << sign;
  }
}

TEST(FlowEstimation, ConsecutiveFramesOfSequence) {
  const Image base = smooth_texture(7, 2.0);
  DeformationSpec spec;
  spec.profile_seed = 5;
  const auto seq = generate_sequence(base, spec);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const FlowField f = estimate_flow(seq[t - 1].image, seq[t].image);
    double err = 0.0;
    int count = 0;
    for (int r = kBorder; r < base.height() - kBorder; ++r) {
      for (int c = kBorder; c < base.width() - kBorder; ++c) {
        // Consecutive truth approximated by the difference of cumulative fields.
        err += std::abs(f.h_at(r, c) - (seq[t].flow.h_at(r, c) - seq[t - 1].flow.h_at(r, c)));
        err += std::abs(f.v_at(r, c) - (seq[t].flow.v_at(r, c) - seq[t - 1].flow.v_at(r, c)));
        count += 2;
      }
    }
    EXPECT_LE(err / count, 0.25) << "frame " << t;
  }
}

TEST(FlowEstimation, Errors) {
  FlowEstimatorConfig cfg;
  cfg.iterations = 0;
  EXPECT_ERROR_CODE(cfg.validate(), ErrorCode::InvalidArgument);
  cfg = {};
  cfg.smoothness_weight = -1;
  EXPECT_ERROR_CODE(estimate_flow(Image(4, 4), Image(4, 4), cfg), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(estimate_flow(Image(4, 4), Image(5, 4)), ErrorCode::DimensionMismatch);
}
