#include "morphkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "morphkit/error.hpp"

namespace morphkit {
namespace {

constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

struct Window {
  int size;
  std::vector<double> weights;  // size x size, sums to 1
};

Window make_window(SsimWindow kind) {
  if (kind == SsimWindow::Uniform8) {
    return {8, std::vector<double>(64, 1.0 / 64.0)};
  }
  Window w{11, std::vector<double>(121)};
  double total = 0.0;
  for (int r = 0; r < 11; ++r) {
    for (int c = 0; c < 11; ++c) {
      const double d2 = (r - 5) * (r - 5) + (c - 5) * (c - 5);
      w.weights[r * 11 + c] = std::exp(-d2 / (2.0 * 1.5 * 1.5));
      total += w.weights[r * 11 + c];
    }
  }
  for (double& x : w.weights) x /= total;
  return w;
}

}  // namespace

double ssim(const Image& a, const Image& b, SsimWindow kind) {
  if (a.width() != b.width() || a.height() != b.height()) {
    fail(ErrorCode::DimensionMismatch, "ssim: images differ in size");
  }
  const Window win = make_window(kind);
  if (a.width() < win.size || a.height() < win.size) {
    fail(ErrorCode::ImageTooSmall, "ssim: image smaller than the window");
  }

  double total = 0.0;
  std::size_t windows = 0;
  for (int r0 = 0; r0 + win.size <= a.height(); ++r0) {
    for (int c0 = 0; c0 + win.size <= a.width(); ++c0) {
      double mu_a = 0.0, mu_b = 0.0;
      for (int r = 0; r < win.size; ++r) {
        for (int c = 0; c < win.size; ++c) {
          const double w = win.weights[r * win.size + c];
          mu_a += w * a.at(r0 + r, c0 + c);
          mu_b += w * b.at(r0 + r, c0 + c);
        }
      }
      double var_a = 0.0, var_b = 0.0, cov = 0.0;
      for (int r = 0; r < win.size; ++r) {
        for (int c = 0; c < win.size; ++c) {
          const double w = win.weights[r * win.size + c];
          const double da = a.at(r0 + r, c0 + c) - mu_a;
          const double db = b.at(r0 + r, c0 + c) - mu_b;
          var_a += w * da * da;
          var_b += w * db * db;
          cov += w * da * db;
        }
      }
      const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
      const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
      total += num / den;
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

double ncs(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    fail(ErrorCode::DimensionMismatch, "ncs: images differ in size");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a.pixels()[i] * b.pixels()[i];
    na += a.pixels()[i] * a.pixels()[i];
    nb += b.pixels()[i] * b.pixels()[i];
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::ZeroImage, "ncs: all-zero image");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

RocSummary roc(const ScoreSet& scores, double far_point) {
  if (scores.genuine.empty() || scores.impostor.empty()) {
    fail(ErrorCode::EmptyScores, "roc needs genuine and impostor scores");
  }
  auto genuine = scores.genuine;
  auto impostor = scores.impostor;
  for (double s : genuine) {
    if (!std::isfinite(s)) fail(ErrorCode::InvalidArgument, "non-finite genuine score");
  }
  for (double s : impostor) {
    if (!std::isfinite(s)) fail(ErrorCode::InvalidArgument, "non-finite impostor score");
  }
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + impostor.size() + 1);
  std::merge(genuine.begin(), genuine.end(), impostor.begin(), impostor.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::nextafter(thresholds.back(), std::numeric_limits<double>::infinity()));

  const auto g_total = static_cast<std::uint64_t>(genuine.size());
  const auto i_total = static_cast<std::uint64_t>(impostor.size());
  // Accepted counts (score >= t) per threshold.
  std::vector<std::uint64_t> g_acc(thresholds.size()), i_acc(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    g_acc[t] = g_total - static_cast<std::uint64_t>(
                             std::lower_bound(genuine.begin(), genuine.end(), thresholds[t]) -
                             genuine.begin());
    i_acc[t] = i_total - static_cast<std::uint64_t>(
                             std::lower_bound(impostor.begin(), impostor.end(), thresholds[t]) -
                             impostor.begin());
  }

  RocSummary out;
  out.far_point = far_point;
  out.curve.reserve(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    out.curve.push_back({thresholds[t], static_cast<double>(i_acc[t]) / i_total,
                         static_cast<double>(g_acc[t]) / g_total});
  }

  // Trapezoids in integer counts so that perfectly separated sets give exactly 1.
  std::uint64_t twice_area = 0;
  for (std::size_t t = 0; t + 1 < thresholds.size(); ++t) {
    twice_area += (i_acc[t] - i_acc[t + 1]) * (g_acc[t] + g_acc[t + 1]);
  }
  out.auc = static_cast<double>(twice_area) / (2.0 * static_cast<double>(g_total * i_total));

  // EER: first point where FAR - FRR stops being positive.
  for (std::size_t t = 0; t < out.curve.size(); ++t) {
    const double d = out.curve[t].far - (1.0 - out.curve[t].tar);
    if (d > 0.0) continue;
    if (d == 0.0 || t == 0) {
      out.eer = out.curve[t].far;
    } else {
      const auto& p = out.curve[t - 1];
      const auto& q = out.curve[t];
      const double dp = p.far - (1.0 - p.tar);
      const double s = dp / (dp - d);
      out.eer = p.far + s * (q.far - p.far);
    }
    break;
  }

  // VR@FAR: highest-TAR point with FAR <= far_point, interpolated towards the
  // neighbouring point above far_point so that the result sits at far_point.
  for (std::size_t t = 0; t < out.curve.size(); ++t) {
    const auto& q = out.curve[t];
    if (q.far > far_point) continue;
    if (q.far == far_point || t == 0) {
      out.vr_at_far = q.tar;
    } else {
      const auto& p = out.curve[t - 1];
      const double s = (far_point - q.far) / (p.far - q.far);
      out.vr_at_far = q.tar + s * (p.tar - q.tar);
    }
    break;
  }
  return out;
}

double success_rate(std::span<const bool> successes) {
  if (successes.empty()) fail(ErrorCode::EmptyRecordSet, "success_rate of an empty record set");
  const auto hits = std::count(successes.begin(), successes.end(), true);
  return static_cast<double>(hits) / static_cast<double>(successes.size());
}

BinReport bin_by_similarity(std::span<const SimilarityRecord> records, SimilarityMetric metric,
                            std::span<const double> edges, double roo_floor) {
  if (edges.size() < 2) fail(ErrorCode::BadBins, "need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) fail(ErrorCode::BadBins, "bin edges must strictly increase");
  }
  BinReport report{metric, {}, 0};
  std::vector<std::size_t> hits(edges.size() - 1, 0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    report.bins.push_back({edges[i], edges[i + 1], 0, std::nullopt, edges[i] >= roo_floor - 1e-12});
  }
  for (const auto& rec : records) {
    const double x = metric == SimilarityMetric::Ssim ? rec.ssim : rec.ncs;
    std::size_t bin = report.bins.size();
    if (x == edges.back()) {
      bin = report.bins.size() - 1;
    } else if (x >= edges.front() && x < edges.back()) {
      bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) -
                                     edges.begin()) - 1;
    }
    if (bin == report.bins.size()) {
      ++report.out_of_range;
      continue;
    }
    ++report.bins[bin].count;
    if (rec.success) ++hits[bin];
  }
  for (std::size_t i = 0; i < report.bins.size(); ++i) {
    if (report.bins[i].count > 0) {
      report.bins[i].rate = static_cast<double>(hits[i]) / report.bins[i].count;
    }
  }
  return report;
}

std::vector<double> default_ssim_edges() { return {0.75, 0.80, 0.85, 0.90, 0.95, 1.0}; }

std::vector<double> default_ncs_edges() { return {0.990, 0.992, 0.994, 0.996, 0.998, 1.0}; }

}  // namespace morphkit
