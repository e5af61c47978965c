#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/matrix.hpp"

namespace morphkit {

/// A perpetrating (image, morphing field) pair collected by the query stage.
struct TrainingPair {
  Image image;
  FlowField flow;
};

/// Mean-subtracted, ROI-weighted joint training matrix. Column i stacks
/// [x_i - mu_x; h_i - mu_h; v_i - mu_v] (each block of length n), with every
/// entry outside the ROI zeroed.
struct TrainingMatrix {
  int width = 0;
  int height = 0;
  RoiMask roi;
  std::vector<double> mu_x;
  std::vector<double> mu_h;
  std::vector<double> mu_v;
  DenseMatrix columns;  // 3n x M

  int n() const noexcept { return width * height; }
  int m() const noexcept { return columns.cols(); }
};

/// Throws EmptyTrainingSet when fewer than two pairs are given and
/// DimensionMismatch on inconsistent shapes.
TrainingMatrix assemble_matrix(std::span<const TrainingPair> pairs, const RoiMask& roi);

/// Universal morphing-field bases: the top-k joint principal directions, each
/// split into an image portion and horizontal/vertical flow portions.
struct JointDictionary {
  int width = 0;
  int height = 0;
  int n = 0;
  int k = 0;
  RoiMask roi;
  std::vector<double> mu_x;
  std::vector<double> mu_h;
  std::vector<double> mu_v;
  DenseMatrix w_x;  // n x k
  DenseMatrix w_h;  // n x k
  DenseMatrix w_v;  // n x k
  /// Eigenvalues of X X^T for the retained bases, non-increasing.
  std::vector<double> eigenvalues;

  /// Concatenated [w_x; w_h; w_v] column j (length 3n).
  std::vector<double> joint_column(int j) const;
  /// First `count` bases only.
  JointDictionary truncated(int count) const;
  /// Throws CorruptDictionary when shapes, unit norms (1e-9), pairwise
  /// orthogonality (1e-8) or eigenvalue ordering are violated.
  void validate() const;

  friend bool operator==(const JointDictionary&, const JointDictionary&) = default;
};

struct LearnResult {
  JointDictionary dictionary;
  /// All eigenvalues of the M x M Gram matrix, non-increasing (energy report).
  std::vector<double> spectrum;
  /// Set when fewer than the requested k eigenvalues were numerically nonzero;
  /// the dictionary then holds the achievable count.
  bool rank_deficient = false;
};

/// Top-k unit eigenvectors of X X^T via the M x M Gram matrix X^T X. Each basis
/// is sign-canonicalized so that its largest-magnitude entry is positive.
/// Requires 1 <= k <= M - 1.
LearnResult learn_bases(const TrainingMatrix& matrix, int k);

/// Smallest k reaching `energy` of the spectrum, capped at min(cap, M - 1).
int default_k(std::span<const double> spectrum, int m, double energy = 0.95, int cap = 64);

/// Largest k' <= dictionary.k whose image-portion normal matrix W_x^T W_x has a
/// condition estimate at most `max_condition`.
int conditioned_k(const JointDictionary& dictionary, double max_condition = 1e10);

/// learn_bases followed by k selection: `k` when positive, otherwise
/// default_k. The result is then capped by conditioned_k.
LearnResult learn_dictionary(const TrainingMatrix& matrix, int k = 0);

/// AMDC binary format (see README).
void save_dictionary(const JointDictionary& dictionary, const std::filesystem::path& path);
JointDictionary load_dictionary(const std::filesystem::path& path);

}  // namespace morphkit
