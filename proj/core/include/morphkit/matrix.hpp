#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace morphkit {

/// Column-major dense matrix used at module boundaries. Linear algebra happens
/// behind the library surface; this type only carries values.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int r, int c) { return data_[offset(r, c)]; }
  double operator()(int r, int c) const { return data_[offset(r, c)]; }

  std::span<double> col(int c) { return {data_.data() + offset(0, c), static_cast<std::size_t>(rows_)}; }
  std::span<const double> col(int c) const {
    return {data_.data() + offset(0, c), static_cast<std::size_t>(rows_)};
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t offset(int r, int c) const noexcept {
    return static_cast<std::size_t>(c) * rows_ + static_cast<std::size_t>(r);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace morphkit
