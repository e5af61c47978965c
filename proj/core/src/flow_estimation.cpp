#include "morphkit/flow_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "morphkit/error.hpp"

namespace morphkit {
namespace {

struct Grid {
  int width;
  int height;

  std::size_t at(int r, int c) const {
    r = std::clamp(r, 0, height - 1);
    c = std::clamp(c, 0, width - 1);
    return static_cast<std::size_t>(r) * width + c;
  }
};

// Horn-Schunck neighbourhood average: 1/6 on the 4-neighbours, 1/12 on the
// diagonals, replicated borders.
void neighbour_average(const Grid& g, const std::vector<double>& in, std::vector<double>& out) {
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const double edge = in[g.at(r - 1, c)] + in[g.at(r + 1, c)] + in[g.at(r, c - 1)] +
                          in[g.at(r, c + 1)];
      const double corner = in[g.at(r - 1, c - 1)] + in[g.at(r - 1, c + 1)] +
                            in[g.at(r + 1, c - 1)] + in[g.at(r + 1, c + 1)];
      out[g.at(r, c)] = edge / 6.0 + corner / 12.0;
    }
  }
}

// One-sided differences at the border, central differences inside.
double d_col(const Grid& g, std::span<const double> img, int r, int c) {
  if (g.width == 1) return 0.0;
  const int lo = std::max(c - 1, 0);
  const int hi = std::min(c + 1, g.width - 1);
  return (img[g.at(r, hi)] - img[g.at(r, lo)]) / (hi - lo);
}

double d_row(const Grid& g, std::span<const double> img, int r, int c) {
  if (g.height == 1) return 0.0;
  const int lo = std::max(r - 1, 0);
  const int hi = std::min(r + 1, g.height - 1);
  return (img[g.at(hi, c)] - img[g.at(lo, c)]) / (hi - lo);
}

}  // namespace

void FlowEstimatorConfig::validate() const {
  if (!(smoothness_weight > 0.0) || iterations < 1 || !(convergence_epsilon > 0.0)) {
    fail(ErrorCode::InvalidArgument,
         "flow estimator config requires smoothness_weight > 0, iterations >= 1, epsilon > 0");
  }
}

FlowField estimate_flow(const Image& frame_a, const Image& frame_b,
                        const FlowEstimatorConfig& cfg) {
  if (frame_a.width() != frame_b.width() || frame_a.height() != frame_b.height()) {
    fail(ErrorCode::DimensionMismatch, "estimate_flow: frames differ in size");
  }
  cfg.validate();

  const Grid g{frame_a.width(), frame_a.height()};
  const std::size_t n = frame_a.size();
  const auto a = frame_a.pixels();
  const auto b = frame_b.pixels();

  // Linearization b(p) ~= a(p) + grad(p) . f(p), with grad averaged over both
  // frames; the temporal term is a - b under the backward convention.
  std::vector<double> ix(n), iy(n), it(n), denom(n);
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const std::size_t i = g.at(r, c);
      ix[i] = 0.5 * (d_col(g, a, r, c) + d_col(g, b, r, c));
      iy[i] = 0.5 * (d_row(g, a, r, c) + d_row(g, b, r, c));
      it[i] = a[i] - b[i];
      denom[i] = cfg.smoothness_weight + ix[i] * ix[i] + iy[i] * iy[i];
    }
  }

  std::vector<double> h(n, 0.0), v(n, 0.0), h_avg(n), v_avg(n);
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    neighbour_average(g, h, h_avg);
    neighbour_average(g, v, v_avg);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double residual = (ix[i] * h_avg[i] + iy[i] * v_avg[i] + it[i]) / denom[i];
      const double h_new = h_avg[i] - ix[i] * residual;
      const double v_new = v_avg[i] - iy[i] * residual;
      change += std::abs(h_new - h[i]) + std::abs(v_new - v[i]);
      h[i] = h_new;
      v[i] = v_new;
    }
    if (change / (2.0 * static_cast<double>(n)) < cfg.convergence_epsilon) break;
  }
  return FlowField(g.width, g.height, std::move(h), std::move(v));
}

}  // namespace morphkit
