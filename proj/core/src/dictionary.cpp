#include "morphkit/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "binary_io.hpp"
#include "linalg.hpp"
#include "morphkit/error.hpp"

namespace morphkit {
namespace {

constexpr std::uint32_t kDictionaryVersion = 1;
constexpr double kZeroEigenvalue = 1e-10;

// Flip the column so that its largest-magnitude entry (first on ties) is positive.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> w) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > best) {
      best = std::abs(w[i]);
      arg = i;
    }
  }
  if (w[arg] < 0.0) w = -w;
}

}  // namespace

TrainingMatrix assemble_matrix(std::span<const TrainingPair> pairs, const RoiMask& roi) {
  if (pairs.size() < 2) {
    fail(ErrorCode::EmptyTrainingSet, "at least two training pairs are required, got " +
                                          std::to_string(pairs.size()));
  }
  const int width = pairs.front().image.width();
  const int height = pairs.front().image.height();
  if (roi.width != width || roi.height != height) {
    fail(ErrorCode::DimensionMismatch, "ROI does not match training raster");
  }
  roi.validate();
  for (const auto& p : pairs) {
    if (p.image.width() != width || p.image.height() != height || p.flow.width() != width ||
        p.flow.height() != height) {
      fail(ErrorCode::DimensionMismatch, "training pairs must share one raster size");
    }
  }

  TrainingMatrix out;
  out.width = width;
  out.height = height;
  out.roi = roi;
  const int n = out.n();
  const int m = static_cast<int>(pairs.size());
  out.columns = DenseMatrix(3 * n, m);

  // Fill ROI-weighted raw columns, then remove the row means.
  for (int i = 0; i < m; ++i) {
    const Image x = crop_roi(pairs[i].image, roi);
    const FlowField f = crop_roi(pairs[i].flow, roi);
    auto col = out.columns.col(i);
    std::copy(x.pixels().begin(), x.pixels().end(), col.begin());
    std::copy(f.h().begin(), f.h().end(), col.begin() + n);
    std::copy(f.v().begin(), f.v().end(), col.begin() + 2 * n);
  }
  auto x = detail::view(out.columns);
  const Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;

  out.mu_x.assign(mean.data(), mean.data() + n);
  out.mu_h.assign(mean.data() + n, mean.data() + 2 * n);
  out.mu_v.assign(mean.data() + 2 * n, mean.data() + 3 * n);
  return out;
}

LearnResult learn_bases(const TrainingMatrix& matrix, int k) {
  const int m = matrix.m();
  const int n = matrix.n();
  if (m < 2) fail(ErrorCode::EmptyTrainingSet, "learn_bases needs at least two columns");
  if (k < 1 || k > m - 1) {
    fail(ErrorCode::InvalidArgument,
         "k must lie in [1, M-1]; got k=" + std::to_string(k) + ", M=" + std::to_string(m));
  }

  const auto x = detail::view(matrix.columns);
  const Eigen::MatrixXd gram = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    fail(ErrorCode::RankDeficient, "Gram eigendecomposition did not converge");
  }

  // Eigen returns ascending order.
  LearnResult result;
  result.spectrum.resize(m);
  for (int i = 0; i < m; ++i) result.spectrum[i] = eig.eigenvalues()[m - 1 - i];

  const double top = std::max(result.spectrum.front(), 0.0);
  const double cutoff = std::max(kZeroEigenvalue, kZeroEigenvalue * top);
  int achievable = 0;
  while (achievable < k && result.spectrum[achievable] > cutoff) ++achievable;
  result.rank_deficient = achievable < k;

  Eigen::MatrixXd bases(3 * n, achievable);
  for (int j = 0; j < achievable; ++j) {
    Eigen::VectorXd w = x * eig.eigenvectors().col(m - 1 - j);
    // Re-orthogonalize against earlier bases to absorb rounding in X u.
    for (int p = 0; p < j; ++p) w -= bases.col(p).dot(w) * bases.col(p);
    w.normalize();
    canonicalize_sign(w);
    bases.col(j) = w;
  }

  JointDictionary& d = result.dictionary;
  d.width = matrix.width;
  d.height = matrix.height;
  d.n = n;
  d.k = achievable;
  d.roi = matrix.roi;
  d.mu_x = matrix.mu_x;
  d.mu_h = matrix.mu_h;
  d.mu_v = matrix.mu_v;
  d.w_x = DenseMatrix(n, achievable);
  d.w_h = DenseMatrix(n, achievable);
  d.w_v = DenseMatrix(n, achievable);
  detail::view(d.w_x) = bases.topRows(n);
  detail::view(d.w_h) = bases.middleRows(n, n);
  detail::view(d.w_v) = bases.bottomRows(n);
  d.eigenvalues.assign(result.spectrum.begin(), result.spectrum.begin() + achievable);
  return result;
}

int default_k(std::span<const double> spectrum, int m, double energy, int cap) {
  const int limit = std::max(1, std::min(cap, m - 1));
  double total = 0.0;
  for (double e : spectrum) total += std::max(e, 0.0);
  if (!(total > 0.0)) return 1;
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(spectrum.size()); ++i) {
    acc += std::max(spectrum[i], 0.0);
    if (acc >= energy * total) return std::min(i + 1, limit);
  }
  return limit;
}

int conditioned_k(const JointDictionary& dictionary, double max_condition) {
  for (int k = dictionary.k; k > 0; --k) {
    if (detail::spd_condition(detail::image_normal_matrix(dictionary, k)) <= max_condition) return k;
  }
  return 0;
}

LearnResult learn_dictionary(const TrainingMatrix& matrix, int k) {
  const int requested = k > 0 ? k : std::min(64, matrix.m() - 1);
  LearnResult result = learn_bases(matrix, requested);
  int keep = result.dictionary.k;
  if (k <= 0) keep = std::min(keep, default_k(result.spectrum, matrix.m()));
  keep = conditioned_k(result.dictionary.truncated(keep));
  if (keep == 0) fail(ErrorCode::RankDeficient, "no well-conditioned basis subset");
  result.dictionary = result.dictionary.truncated(keep);
  return result;
}

std::vector<double> JointDictionary::joint_column(int j) const {
  std::vector<double> out;
  out.reserve(3 * static_cast<std::size_t>(n));
  for (const DenseMatrix* part : {&w_x, &w_h, &w_v}) {
    const auto c = part->col(j);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

JointDictionary JointDictionary::truncated(int count) const {
  if (count < 0 || count > k) fail(ErrorCode::InvalidArgument, "truncation beyond basis count");
  JointDictionary out = *this;
  out.k = count;
  for (auto [dst, src] : {std::pair{&out.w_x, &w_x}, {&out.w_h, &w_h}, {&out.w_v, &w_v}}) {
    *dst = DenseMatrix(n, count);
    detail::view(*dst) = detail::view(*src).leftCols(count);
  }
  out.eigenvalues.resize(count);
  return out;
}

void JointDictionary::validate() const {
  const auto corrupt = [](const std::string& what) { fail(ErrorCode::CorruptDictionary, what); };
  if (width <= 0 || height <= 0 || n != width * height || k < 0 || k > 3 * n) {
    corrupt("inconsistent dictionary dimensions");
  }
  if (roi.width != width || roi.height != height) corrupt("ROI does not match dictionary raster");
  try {
    roi.validate();
  } catch (const Error&) {
    corrupt("ROI rectangle outside the frame");
  }
  const auto sn = static_cast<std::size_t>(n);
  if (mu_x.size() != sn || mu_h.size() != sn || mu_v.size() != sn) corrupt("mean length mismatch");
  for (const DenseMatrix* part : {&w_x, &w_h, &w_v}) {
    if (part->rows() != n || part->cols() != k) corrupt("basis block shape mismatch");
  }
  if (static_cast<int>(eigenvalues.size()) != k) corrupt("eigenvalue count mismatch");

  Eigen::MatrixXd joint(3 * n, k);
  joint << detail::view(w_x), detail::view(w_h), detail::view(w_v);
  if (!joint.allFinite()) corrupt("non-finite basis entries");
  const Eigen::MatrixXd gram = joint.transpose() * joint;
  for (int i = 0; i < k; ++i) {
    if (std::abs(std::sqrt(gram(i, i)) - 1.0) > 1e-9) {
      corrupt("basis " + std::to_string(i) + " is not unit norm");
    }
    for (int j = i + 1; j < k; ++j) {
      if (std::abs(gram(i, j)) >= 1e-8) {
        corrupt("bases " + std::to_string(i) + " and " + std::to_string(j) + " are not orthogonal");
      }
    }
  }
  for (int i = 1; i < k; ++i) {
    if (eigenvalues[i] > eigenvalues[i - 1]) corrupt("eigenvalues are not non-increasing");
  }
}

void save_dictionary(const JointDictionary& d, const std::filesystem::path& path) {
  detail::LeWriter out(path.string());
  out.magic("AMDC");
  out.put(kDictionaryVersion);
  for (int v : {d.width, d.height, d.n, d.k, d.roi.top, d.roi.left, d.roi.rows, d.roi.cols}) {
    out.put(static_cast<std::uint32_t>(v));
  }
  for (const auto* mu : {&d.mu_x, &d.mu_h, &d.mu_v}) {
    for (double x : *mu) out.put(x);
  }
  for (const DenseMatrix* part : {&d.w_x, &d.w_h, &d.w_v}) {
    for (double x : part->data()) out.put(x);
  }
  for (double e : d.eigenvalues) out.put(e);
  out.finish();
}

JointDictionary load_dictionary(const std::filesystem::path& path) {
  detail::LeReader in(path.string());
  in.expect_magic("AMDC");
  const auto version = in.get<std::uint32_t>();
  if (version != kDictionaryVersion) {
    fail(ErrorCode::FormatError, "unsupported dictionary version " + std::to_string(version));
  }
  std::uint32_t header[8];
  for (auto& h : header) h = in.get<std::uint32_t>();
  const auto [width, height, n, k, top, left, rows, cols] =
      std::tuple{header[0], header[1], header[2], header[3], header[4], header[5], header[6], header[7]};
  if (width == 0 || height == 0 || width > 1u << 15 || height > 1u << 15 ||
      static_cast<std::uint64_t>(width) * height != n || k > 3ull * n) {
    fail(ErrorCode::FormatError, "implausible dictionary header");
  }

  JointDictionary d;
  d.width = static_cast<int>(width);
  d.height = static_cast<int>(height);
  d.n = static_cast<int>(n);
  d.k = static_cast<int>(k);
  d.roi = {d.width, d.height, static_cast<int>(top), static_cast<int>(left),
           static_cast<int>(rows), static_cast<int>(cols)};
  for (auto* mu : {&d.mu_x, &d.mu_h, &d.mu_v}) {
    mu->resize(n);
    for (double& x : *mu) x = in.get<double>();
  }
  for (DenseMatrix* part : {&d.w_x, &d.w_h, &d.w_v}) {
    *part = DenseMatrix(d.n, d.k);
    for (double& x : part->data()) x = in.get<double>();
  }
  d.eigenvalues.resize(k);
  for (double& e : d.eigenvalues) e = in.get<double>();
  in.expect_eof();
  d.validate();
  return d;
}

}  // namespace morphkit
