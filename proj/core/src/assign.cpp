#include "morphkit/assign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "linalg.hpp"
#include "morphkit/error.hpp"

namespace morphkit {
namespace {
constexpr double kMaxProjectionCondition = 1e12;
constexpr double kZeroNorm = 1e-12;
}  // namespace

std::string_view to_string(IntensityMode mode) noexcept {
  switch (mode) {
    case IntensityMode::L2Target: return "l2";
    case IntensityMode::LinfTarget: return "linf";
    case IntensityMode::DeltaMultiplier: return "delta";
  }
  return "?";
}

IntensityMode parse_intensity_mode(std::string_view text) {
  if (text == "l2") return IntensityMode::L2Target;
  if (text == "linf") return IntensityMode::LinfTarget;
  if (text == "delta") return IntensityMode::DeltaMultiplier;
  fail(ErrorCode::ConfigError, "unknown intensity mode '" + std::string(text) + "'");
}

void IntensitySpec::validate() const {
  if (!(value > 0.0) || !std::isfinite(value)) {
    fail(ErrorCode::InvalidArgument, "intensity value must be positive and finite");
  }
}

Coefficients project(const Image& image, const JointDictionary& d) {
  if (image.width() != d.width || image.height() != d.height) {
    fail(ErrorCode::DimensionMismatch, "project: image does not match dictionary raster");
  }
  const Image y = crop_roi(image, d.roi);
  Eigen::VectorXd centred(d.n);
  for (int i = 0; i < d.n; ++i) centred[i] = y.pixels()[i] - d.mu_x[i];

  const auto wx = detail::view(d.w_x);
  const Eigen::MatrixXd normal = wx.transpose() * wx;
  if (detail::spd_condition(normal) > kMaxProjectionCondition) {
    fail(ErrorCode::SingularProjection, "image-portion normal matrix is numerically singular");
  }
  const Eigen::VectorXd rhs = wx.transpose() * centred;
  const Eigen::VectorXd alpha = normal.llt().solve(rhs);
  return {std::vector<double>(alpha.data(), alpha.data() + alpha.size())};
}

FlowField reconstruct_flow(const Coefficients& coefficients, const JointDictionary& d,
                           const AssignOptions& options) {
  if (static_cast<int>(coefficients.alpha.size()) != d.k) {
    fail(ErrorCode::DimensionMismatch, "coefficient count does not match dictionary k");
  }
  const Eigen::Map<const Eigen::VectorXd> alpha(coefficients.alpha.data(), d.k);
  const Eigen::VectorXd h = detail::view(d.w_h) * alpha;
  const Eigen::VectorXd v = detail::view(d.w_v) * alpha;

  std::vector<double> fh(h.data(), h.data() + d.n);
  std::vector<double> fv(v.data(), v.data() + d.n);
  if (options.add_mean) {
    for (int i = 0; i < d.n; ++i) {
      fh[i] += d.mu_h[i];
      fv[i] += d.mu_v[i];
    }
  }
  return crop_roi(FlowField(d.width, d.height, std::move(fh), std::move(fv)), d.roi);
}

FlowField modulate(const FlowField& flow, const IntensitySpec& spec) {
  spec.validate();
  if (spec.mode == IntensityMode::DeltaMultiplier) return flow_scale(flow, spec.value);
  const double norm = flow_norm(flow, spec.mode == IntensityMode::L2Target ? Norm::L2 : Norm::Linf);
  if (norm < kZeroNorm) {
    fail(ErrorCode::ZeroFlow, "cannot rescale a vanishing field to a target norm");
  }
  return flow_scale(flow, spec.value / norm);
}

FlowField assign_proprietary_flow(const Image& image, const JointDictionary& dictionary,
                                  const IntensitySpec& spec, const AssignOptions& options) {
  return modulate(reconstruct_flow(project(image, dictionary), dictionary, options), spec);
}

std::vector<double> inclusive_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) fail(ErrorCode::ConfigError, "bad sweep grid");
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= count; ++i) {
    // Snap to the nearest 12-digit decimal so 0.1 + 2 * 0.1 reads back as 0.3.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", lo + i * step);
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

std::vector<IntensitySpec> sweep_group(std::string_view name) {
  struct Group {
    std::string_view name;
    IntensityMode mode;
    double lo, hi, step;
  };
  static constexpr Group kGroups[] = {
      {"l2-small", IntensityMode::L2Target, 2.0, 10.0, 2.0},
      {"l2-medium", IntensityMode::L2Target, 100.0, 200.0, 10.0},
      {"l2-large", IntensityMode::L2Target, 200.0, 600.0, 100.0},
      {"linf-small", IntensityMode::LinfTarget, 0.1, 0.5, 0.1},
      {"linf-medium", IntensityMode::LinfTarget, 1.0, 2.0, 0.1},
      {"linf-large", IntensityMode::LinfTarget, 2.0, 6.0, 1.0},
      {"delta", IntensityMode::DeltaMultiplier, 0.2, 2.0, 0.2},
  };
  for (const auto& g : kGroups) {
    if (g.name != name) continue;
    std::vector<IntensitySpec> out;
    for (double v : inclusive_grid(g.lo, g.hi, g.step)) out.push_back({g.mode, v});
    return out;
  }
  fail(ErrorCode::ConfigError, "unknown sweep group '" + std::string(name) + "'");
}

std::vector<IntensitySpec> parse_sweep(std::string_view text) {
  std::vector<IntensitySpec> out;
  // Groups overlap at their endpoints (l2 200, linf 2); keep the first occurrence.
  auto add = [&out](const IntensitySpec& spec) {
    for (const auto& have : out) {
      if (have.mode == spec.mode && have.value == spec.value) return;
    }
    out.push_back(spec);
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) fail(ErrorCode::ConfigError, "empty sweep item in '" + std::string(text) + "'");

    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      for (const auto& spec : sweep_group(item)) add(spec);
      continue;
    }
    const IntensityMode mode = parse_intensity_mode(item.substr(0, colon));
    double a = 0.0, b = 0.0, c = 0.0;
    char tail = 0;
    const char* rest = item.c_str() + colon + 1;
    const int n = std::sscanf(rest, "%lf:%lf:%lf%c", &a, &b, &c, &tail);
    if (n == 1 && std::string_view(rest).find(':') == std::string_view::npos) {
      add({mode, a});
    } else if (n == 3) {
      for (double v : inclusive_grid(a, b, c)) add({mode, v});
    } else {
      fail(ErrorCode::ConfigError, "bad sweep item '" + item + "'");
    }
  }
  for (const auto& spec : out) {
    if (!(spec.value > 0.0) || !std::isfinite(spec.value)) {
      fail(ErrorCode::ConfigError, "sweep values must be positive and finite");
    }
  }
  return out;
}

}  // namespace morphkit
