#include <gtest/gtest.h>

#include <cmath>

#include "morphkit/metrics.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace morphkit;
using namespace morphkit::testing;

namespace {

Image constant(int w, int h, double v) {
  return Image(w, h, std::vector<double>(static_cast<std::size_t>(w) * h, v));
}

}  // namespace

TEST(Ssim, IdentityIsOne) {
  const Image x = random_image(16, 12, 1);
  EXPECT_EQ(ssim(x, x), 1.0);
  EXPECT_EQ(ssim(x, x, SsimWindow::Gaussian11), 1.0);
}

TEST(Ssim, ConstantImagesClosedForm) {
  const double c1 = 0.01 * 0.01;
  const double want = (2 * 0.2 * 0.8 + c1) / (0.2 * 0.2 + 0.8 * 0.8 + c1);
  EXPECT_NEAR(ssim(constant(10, 9, 0.2), constant(10, 9, 0.8)), want, 1e-14);
  EXPECT_NEAR(ssim(constant(12, 12, 0.2), constant(12, 12, 0.8), SsimWindow::Gaussian11), want, 1e-14);
}

TEST(Ssim, Symmetric) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Image a = random_image(14, 11, derive_key(2, s)), b = random_image(14, 11, derive_key(3, s));
    EXPECT_EQ(ssim(a, b), ssim(b, a));
    const double v = ssim(a, b);
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Ssim, Errors) {
  EXPECT_ERROR_CODE(ssim(Image(8, 8), Image(8, 9)), ErrorCode::DimensionMismatch);
  EXPECT_ERROR_CODE(ssim(Image(7, 8), Image(7, 8)), ErrorCode::ImageTooSmall);
  EXPECT_ERROR_CODE(ssim(Image(10, 10), Image(10, 10), SsimWindow::Gaussian11), ErrorCode::ImageTooSmall);
}

TEST(Ncs, Examples) {
  const Image x = random_image(6, 6, 4);
  EXPECT_NEAR(ncs(x, x), 1.0, 1e-15);
  std::vector<double> half(x.pixels().begin(), x.pixels().end());
  for (double& p : half) p *= 0.5;
  EXPECT_NEAR(ncs(x, Image(6, 6, half)), 1.0, 1e-15);
  EXPECT_EQ(ncs(Image(2, 1, {1.0, 0.0}), Image(2, 1, {0.0, 0.7})), 0.0);
  EXPECT_ERROR_CODE(ncs(Image(2, 1), x), ErrorCode::DimensionMismatch);
  EXPECT_ERROR_CODE(ncs(Image(2, 1), Image(2, 1, {0.0, 0.7})), ErrorCode::ZeroImage);
}

TEST(Roc, SeparatedScores) {
  const RocSummary s = roc({{0.7, 0.8, 0.9}, {0.1, 0.2, 0.3, 0.4}});
  EXPECT_EQ(s.auc, 1.0);
  EXPECT_EQ(s.eer, 0.0);
  EXPECT_EQ(s.vr_at_far, 1.0);
}

TEST(Roc, ConstantScoresStepShape) {
  const RocSummary s = roc({{0.9, 0.9}, {0.1, 0.1, 0.1}});
  ASSERT_EQ(s.curve.size(), 3u);
  EXPECT_EQ(s.curve[0].threshold, 0.1);
  EXPECT_EQ(s.curve[0].far, 1.0);
  EXPECT_EQ(s.curve[0].tar, 1.0);
  EXPECT_EQ(s.curve[1].threshold, 0.9);
  EXPECT_EQ(s.curve[1].far, 0.0);
  EXPECT_EQ(s.curve[1].tar, 1.0);
  EXPECT_EQ(s.curve[2].far, 0.0);
  EXPECT_EQ(s.curve[2].tar, 0.0);
  EXPECT_EQ(s.eer, 0.0);
  EXPECT_EQ(s.auc, 1.0);
}

TEST(Roc, ReversedScores) {
  const RocSummary s = roc({{0.1, 0.2}, {0.8, 0.9}});
  EXPECT_EQ(s.auc, 0.0);
  EXPECT_EQ(s.eer, 1.0);
  EXPECT_EQ(s.vr_at_far, 0.0);
}

TEST(Roc, IdenticalDistributions) {
  CounterRng rng(5);
  ScoreSet s;
  for (int i = 0; i < 10000; ++i) s.genuine.push_back(rng.uniform());
  for (int i = 0; i < 10000; ++i) s.impostor.push_back(rng.uniform());
  const RocSummary r = roc(s);
  EXPECT_NEAR(r.auc, 0.5, 0.05);
  EXPECT_NEAR(r.eer, 0.5, 0.05);
}

TEST(Roc, AucMatchesPairCounting) {
  CounterRng rng(6);
  ScoreSet s;
  for (int i = 0; i < 300; ++i) s.genuine.push_back(std::round(10 * (rng.normal() + 1)) / 10);
  for (int i = 0; i < 400; ++i) s.impostor.push_back(std::round(10 * rng.normal()) / 10);
  double wins = 0.0;
  for (double g : s.genuine)
    for (double i : s.impostor) wins += g > i ? 1.0 : g == i ? 0.5 : 0.0;
  EXPECT_NEAR(roc(s).auc, wins / (300.0 * 400.0), 1e-12);
}

TEST(Roc, VrMatchesThresholdScan) {
  CounterRng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    ScoreSet s;
    for (int i = 0; i < 1500 + 100 * trial; ++i) s.genuine.push_back(1.5 + rng.normal());
    for (int i = 0; i < 3000 + 777 * trial; ++i) s.impostor.push_back(rng.normal());
    for (double far : {0.001, 0.01, 0.1}) {
      EXPECT_NEAR(roc(s, far).vr_at_far, brute_force_vr(s.genuine, s.impostor, far), 1e-9);
    }
  }
}

TEST(Roc, Errors) {
  EXPECT_ERROR_CODE(roc({{}, {0.1}}), ErrorCode::EmptyScores);
  EXPECT_ERROR_CODE(roc({{0.1}, {}}), ErrorCode::EmptyScores);
}

TEST(SuccessRate, Examples) {
  const bool all[] = {true, true};
  const bool none[] = {false, false, false};
  const bool some[] = {true, false, true, false, false, true, false, false};
  EXPECT_EQ(success_rate(std::span<const bool>(all)), 1.0);
  EXPECT_EQ(success_rate(std::span<const bool>(none)), 0.0);
  EXPECT_EQ(success_rate(std::span<const bool>(some)), 0.375);
  EXPECT_ERROR_CODE(success_rate(std::span<const bool>()), ErrorCode::EmptyRecordSet);
}

TEST(Bins, SsimEdges) {
  const auto edges = default_ssim_edges();
  ASSERT_EQ(edges.size(), 6u);
  const std::vector<SimilarityRecord> recs{{0.93, 0.999, true}, {0.91, 0.999, false}, {0.5, 0.9, true}};
  const BinReport r = bin_by_similarity(recs, SimilarityMetric::Ssim, edges, kSsimRooFloor);
  ASSERT_EQ(r.bins.size(), 5u);
  EXPECT_EQ(r.out_of_range, 1u);
  const BinStats& b = r.bins[3];
  EXPECT_NEAR(b.lo, 0.9, 1e-12);
  EXPECT_NEAR(b.hi, 0.95, 1e-12);
  EXPECT_EQ(b.count, 2u);
  ASSERT_TRUE(b.rate.has_value());
  EXPECT_EQ(*b.rate, 0.5);
  EXPECT_TRUE(b.in_roo);
  EXPECT_FALSE(r.bins[2].in_roo);
  EXPECT_FALSE(r.bins[0].rate.has_value());
  EXPECT_EQ(r.bins[0].count, 0u);
}

TEST(Bins, NcsClosedLastBin) {
  const auto edges = default_ncs_edges();
  const std::vector<SimilarityRecord> recs{{0.0, 1.0, true}};
  const BinReport r = bin_by_similarity(recs, SimilarityMetric::Ncs, edges, kNcsRooFloor);
  EXPECT_EQ(r.bins.back().count, 1u);
  EXPECT_NEAR(r.bins.back().lo, 0.998, 1e-12);
  EXPECT_EQ(r.bins.back().hi, 1.0);
  EXPECT_TRUE(r.bins.back().in_roo);
  EXPECT_EQ(r.out_of_range, 0u);
}

TEST(Bins, Errors) {
  const std::vector<SimilarityRecord> recs;
  const std::vector<double> one{0.5}, flat{0.5, 0.5};
  EXPECT_ERROR_CODE(bin_by_similarity(recs, SimilarityMetric::Ssim, one, 0.9), ErrorCode::BadBins);
  EXPECT_ERROR_CODE(bin_by_similarity(recs, SimilarityMetric::Ssim, flat, 0.9), ErrorCode::BadBins);
}
