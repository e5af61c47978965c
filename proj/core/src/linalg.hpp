#pragma once

#include <Eigen/Dense>

#include "morphkit/dictionary.hpp"
#include "morphkit/matrix.hpp"

namespace morphkit::detail {

inline Eigen::Map<const Eigen::MatrixXd> view(const DenseMatrix& m) {
  return {m.data().data(), m.rows(), m.cols()};
}

inline Eigen::Map<Eigen::MatrixXd> view(DenseMatrix& m) {
  return {m.data().data(), m.rows(), m.cols()};
}

/// W_x^T W_x restricted to the first k columns.
inline Eigen::MatrixXd image_normal_matrix(const JointDictionary& d, int k) {
  const auto wx = view(d.w_x).leftCols(k);
  return wx.transpose() * wx;
}

/// lambda_max / lambda_min of a symmetric PSD matrix; +inf when singular.
inline double spd_condition(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace morphkit::detail
