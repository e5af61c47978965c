#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace morphkit {

/// Single-channel raster with intensities in [0, 1], stored row-major with a
/// top-left origin.
class Image {
 public:
  Image() = default;
  /// All-zero image.
  Image(int width, int height);
  /// Throws InvalidArgument when a pixel is outside [0, 1] (or NaN) and
  /// DimensionMismatch when the buffer length is not width * height.
  Image(int width, int height, std::vector<double> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double at(int row, int col) const { return pixels_[index(row, col)]; }
  void set(int row, int col, double value);

  std::span<const double> pixels() const noexcept { return pixels_; }

  /// Row-major copy of the pixels (length N = width * height).
  std::vector<double> vectorize() const { return pixels_; }
  static Image devectorize(std::span<const double> values, int width, int height);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Dense displacement field. Convention (shared by every module): the value at
/// p is the offset at which the source image is sampled, i.e.
/// output(p) = input(p + f(p)). Positive h samples from the right, positive v
/// samples from below.
class FlowField {
 public:
  FlowField() = default;
  /// All-zero field.
  FlowField(int width, int height);
  /// Throws InvalidArgument on non-finite components and DimensionMismatch on
  /// buffer length errors.
  FlowField(int width, int height, std::vector<double> h, std::vector<double> v);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return h_.size(); }

  double h_at(int row, int col) const { return h_[index(row, col)]; }
  double v_at(int row, int col) const { return v_[index(row, col)]; }

  std::span<const double> h() const noexcept { return h_; }
  std::span<const double> v() const noexcept { return v_; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> h_;
  std::vector<double> v_;
};

/// Binary rectangular region of interest inside a width x height frame.
struct RoiMask {
  int width = 0;
  int height = 0;
  int top = 0;
  int left = 0;
  int rows = 0;
  int cols = 0;

  static RoiMask full(int width, int height) { return {width, height, 0, 0, height, width}; }
  static RoiMask inset(int width, int height, int margin);

  bool contains(int row, int col) const noexcept {
    return row >= top && row < top + rows && col >= left && col < left + cols;
  }
  /// Throws InvalidArgument when the rectangle leaves the frame.
  void validate() const;

  friend bool operator==(const RoiMask&, const RoiMask&) = default;
};

/// An image tagged with a stable id and its identity label.
struct LabeledImage {
  std::string id;
  int label = 0;
  Image image;
};

enum class Norm { L2, Linf };

/// Backward bilinear warp. Samples outside the raster clamp to the border and
/// output intensities clamp to [0, 1].
Image morph(const Image& image, const FlowField& flow);

double sample_bilinear(const Image& image, double row, double col);

/// Norm of the concatenated (h, v) field.
double flow_norm(const FlowField& flow, Norm norm);

FlowField flow_scale(const FlowField& flow, double factor);
FlowField flow_add(const FlowField& a, const FlowField& b);

/// Zero everything outside the ROI rectangle.
Image crop_roi(const Image& image, const RoiMask& roi);
FlowField crop_roi(const FlowField& flow, const RoiMask& roi);

}  // namespace morphkit
