#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "morphkit/image.hpp"

namespace morphkit {

enum class SsimWindow {
  /// 8x8 box window, stride 1.
  Uniform8,
  /// 11x11 Gaussian window (sigma 1.5), stride 1.
  Gaussian11,
};

/// Mean local SSIM with C1 = (0.01 L)^2, C2 = (0.03 L)^2 and L = 1.
/// Throws DimensionMismatch or ImageTooSmall.
double ssim(const Image& a, const Image& b, SsimWindow window = SsimWindow::Uniform8);

/// Cosine similarity of the pixel vectors. Throws ZeroImage for all-zero input.
double ncs(const Image& a, const Image& b);

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct RocPoint {
  double threshold;
  double far;
  double tar;
};

struct RocSummary {
  double auc = 0.0;
  double eer = 0.0;
  double vr_at_far = 0.0;
  double far_point = 0.001;
  /// Ascending thresholds: every observed score plus one sentinel above the
  /// maximum where FAR = TAR = 0.
  std::vector<RocPoint> curve;
};

/// Accept when score >= threshold. AUC by trapezoids over (FAR, TAR); EER and
/// VR@FAR by linear interpolation between bracketing curve points.
/// Throws EmptyScores.
RocSummary roc(const ScoreSet& scores, double far_point = 0.001);

/// Fraction of true flags. Throws EmptyRecordSet.
double success_rate(std::span<const bool> successes);

struct SimilarityRecord {
  double ssim = 0.0;
  double ncs = 0.0;
  bool success = false;
};

enum class SimilarityMetric { Ssim, Ncs };

struct BinStats {
  double lo;
  double hi;
  std::size_t count = 0;
  /// Absent when the bin is empty.
  std::optional<double> rate;
  bool in_roo = false;
};

struct BinReport {
  SimilarityMetric metric;
  std::vector<BinStats> bins;
  std::size_t out_of_range = 0;
};

/// Half-open bins [lo, hi) except the last, which is closed. Bins whose lower
/// edge is at least `roo_floor` are flagged as the region of operation.
/// Throws BadBins unless edges has >= 2 strictly increasing entries.
BinReport bin_by_similarity(std::span<const SimilarityRecord> records, SimilarityMetric metric,
                            std::span<const double> edges, double roo_floor);

/// 0.75, 0.80, ..., 1.0 with ROO floor 0.9.
std::vector<double> default_ssim_edges();
/// 0.990, 0.992, ..., 1.0 with ROO floor 0.998.
std::vector<double> default_ncs_edges();
inline constexpr double kSsimRooFloor = 0.9;
inline constexpr double kNcsRooFloor = 0.998;

}  // namespace morphkit
