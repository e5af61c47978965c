#include "morphkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "morphkit/error.hpp"

namespace morphkit {
namespace {

std::size_t checked_area(int width, int height) {
  if (width < 0 || height < 0) {
    fail(ErrorCode::InvalidArgument, "negative raster dimensions");
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

void require_same_shape(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + ": " + std::to_string(w1) + "x" + std::to_string(h1) + " vs " +
             std::to_string(w2) + "x" + std::to_string(h2));
  }
}

bool valid_intensity(double value) { return value >= 0.0 && value <= 1.0; }

}  // namespace

Image::Image(int width, int height)
    : width_(width), height_(height), pixels_(checked_area(width, height), 0.0) {}

Image::Image(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_area(width, height)) {
    fail(ErrorCode::DimensionMismatch, "image buffer length does not match width*height");
  }
  for (double p : pixels_) {
    if (!valid_intensity(p)) {
      fail(ErrorCode::InvalidArgument, "image intensity outside [0,1]: " + std::to_string(p));
    }
  }
}

void Image::set(int row, int col, double value) {
  if (!valid_intensity(value)) {
    fail(ErrorCode::InvalidArgument, "image intensity outside [0,1]: " + std::to_string(value));
  }
  pixels_[index(row, col)] = value;
}

Image Image::devectorize(std::span<const double> values, int width, int height) {
  return Image(width, height, std::vector<double>(values.begin(), values.end()));
}

FlowField::FlowField(int width, int height)
    : width_(width),
      height_(height),
      h_(checked_area(width, height), 0.0),
      v_(checked_area(width, height), 0.0) {}

FlowField::FlowField(int width, int height, std::vector<double> h, std::vector<double> v)
    : width_(width), height_(height), h_(std::move(h)), v_(std::move(v)) {
  const std::size_t n = checked_area(width, height);
  if (h_.size() != n || v_.size() != n) {
    fail(ErrorCode::DimensionMismatch, "flow buffer length does not match width*height");
  }
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(h_.begin(), h_.end(), finite) || !std::all_of(v_.begin(), v_.end(), finite)) {
    fail(ErrorCode::InvalidArgument, "flow field contains non-finite displacement");
  }
}

RoiMask RoiMask::inset(int width, int height, int margin) {
  RoiMask roi{width, height, margin, margin, height - 2 * margin, width - 2 * margin};
  roi.validate();
  return roi;
}

void RoiMask::validate() const {
  if (width <= 0 || height <= 0 || top < 0 || left < 0 || rows < 0 || cols < 0 ||
      top + rows > height || left + cols > width) {
    fail(ErrorCode::InvalidArgument, "ROI rectangle outside the frame");
  }
}

double sample_bilinear(const Image& image, double row, double col) {
  const double max_row = image.height() - 1;
  const double max_col = image.width() - 1;
  row = std::clamp(row, 0.0, max_row);
  col = std::clamp(col, 0.0, max_col);

  const int r0 = static_cast<int>(std::floor(row));
  const int c0 = static_cast<int>(std::floor(col));
  const int r1 = std::min(r0 + 1, image.height() - 1);
  const int c1 = std::min(c0 + 1, image.width() - 1);
  const double fr = row - r0;
  const double fc = col - c0;

  const double top = image.at(r0, c0) * (1.0 - fc) + image.at(r0, c1) * fc;
  const double bottom = image.at(r1, c0) * (1.0 - fc) + image.at(r1, c1) * fc;
  return top * (1.0 - fr) + bottom * fr;
}

Image morph(const Image& image, const FlowField& flow) {
  require_same_shape(image.width(), image.height(), flow.width(), flow.height(), "morph");
  std::vector<double> out(image.size());
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      const double value = sample_bilinear(image, r + flow.v_at(r, c), c + flow.h_at(r, c));
      out[static_cast<std::size_t>(r) * image.width() + c] = std::clamp(value, 0.0, 1.0);
    }
  }
  return Image(image.width(), image.height(), std::move(out));
}

double flow_norm(const FlowField& flow, Norm norm) {
  if (norm == Norm::Linf) {
    double m = 0.0;
    for (double x : flow.h()) m = std::max(m, std::abs(x));
    for (double x : flow.v()) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  for (double x : flow.h()) sum += x * x;
  for (double x : flow.v()) sum += x * x;
  return std::sqrt(sum);
}

FlowField flow_scale(const FlowField& flow, double factor) {
  if (!std::isfinite(factor)) {
    fail(ErrorCode::InvalidArgument, "flow scale factor must be finite");
  }
  std::vector<double> h(flow.h().begin(), flow.h().end());
  std::vector<double> v(flow.v().begin(), flow.v().end());
  for (double& x : h) x *= factor;
  for (double& x : v) x *= factor;
  return FlowField(flow.width(), flow.height(), std::move(h), std::move(v));
}

FlowField flow_add(const FlowField& a, const FlowField& b) {
  require_same_shape(a.width(), a.height(), b.width(), b.height(), "flow_add");
  std::vector<double> h(a.size());
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    h[i] = a.h()[i] + b.h()[i];
    v[i] = a.v()[i] + b.v()[i];
  }
  return FlowField(a.width(), a.height(), std::move(h), std::move(v));
}

Image crop_roi(const Image& image, const RoiMask& roi) {
  require_same_shape(image.width(), image.height(), roi.width, roi.height, "crop_roi");
  roi.validate();
  std::vector<double> out = image.vectorize();
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      if (!roi.contains(r, c)) out[static_cast<std::size_t>(r) * image.width() + c] = 0.0;
    }
  }
  return Image(image.width(), image.height(), std::move(out));
}

FlowField crop_roi(const FlowField& flow, const RoiMask& roi) {
  require_same_shape(flow.width(), flow.height(), roi.width, roi.height, "crop_roi");
  roi.validate();
  std::vector<double> h(flow.h().begin(), flow.h().end());
  std::vector<double> v(flow.v().begin(), flow.v().end());
  for (int r = 0; r < flow.height(); ++r) {
    for (int c = 0; c < flow.width(); ++c) {
      if (!roi.contains(r, c)) {
        const auto i = static_cast<std::size_t>(r) * flow.width() + c;
        h[i] = 0.0;
        v[i] = 0.0;
      }
    }
  }
  return FlowField(flow.width(), flow.height(), std::move(h), std::move(v));
}

}  // namespace morphkit
