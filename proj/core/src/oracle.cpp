#include "morphkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>

#include <Eigen/Dense>

#include "binary_io.hpp"
#include "morphkit/error.hpp"
#include "morphkit/image_io.hpp"

namespace morphkit {
namespace {

constexpr std::uint32_t kModelVersion = 1;

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0) {
    for (double& x : v) x /= s;
  }
}

}  // namespace

double cosine(const Embedding& a, const Embedding& b) {
  if (a.vector.size() != b.vector.size()) {
    fail(ErrorCode::DimensionMismatch, "embedding sizes differ");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.vector.size(); ++i) {
    dot += a.vector[i] * b.vector[i];
    na += a.vector[i] * a.vector[i];
    nb += b.vector[i] * b.vector[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

void ToyFrModel::check_input(const Image& image) const {
  if (!trained()) fail(ErrorCode::UntrainedModel, "toy recognizer has not been trained");
  if (image.width() != width_ || image.height() != height_) {
    fail(ErrorCode::DimensionMismatch, "probe does not match the recognizer's raster");
  }
}

std::vector<double> ToyFrModel::embed_uncounted(const Image& image) const {
  const std::size_t n = mean_.size();
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = image.pixels()[i] - mean_[i];
  std::vector<double> e(static_cast<std::size_t>(dim_), 0.0);
  for (int j = 0; j < dim_; ++j) {
    const double* col = basis_.data() + static_cast<std::size_t>(j) * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += col[i] * centred[i];
    e[j] = s;
  }
  double norm = 0.0;
  for (double x : e) norm += x * x;
  if (!(norm > 0.0)) {
    // The training mean itself has no direction; pin it to the first axis.
    std::fill(e.begin(), e.end(), 0.0);
    e[0] = 1.0;
    return e;
  }
  normalize(e);
  return e;
}

std::vector<double> ToyFrModel::similarities(const std::vector<double>& e) const {
  std::vector<double> sims(labels_.size());
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    const double* centroid = centroids_.data() + c * static_cast<std::size_t>(dim_);
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += centroid[j] * e[j];
    sims[c] = s;
  }
  return sims;
}

std::vector<double> ToyFrModel::softmax(const std::vector<double>& sims) const {
  const double top = *std::max_element(sims.begin(), sims.end());
  std::vector<double> p(sims.size());
  double total = 0.0;
  for (std::size_t c = 0; c < sims.size(); ++c) {
    p[c] = std::exp((sims[c] - top) / temperature_);
    total += p[c];
  }
  for (double& x : p) x /= total;
  return p;
}

Embedding ToyFrModel::embed(const Image& image) const {
  check_input(image);
  counter_.increment();
  return {embed_uncounted(image)};
}

std::vector<double> ToyFrModel::class_probabilities(const Image& image) const {
  check_input(image);
  counter_.increment();
  return softmax(similarities(embed_uncounted(image)));
}

OracleVerdict ToyFrModel::classify(const Image& image) const {
  const auto p = class_probabilities(image);
  const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  return {labels_[best], std::clamp(p[best], 0.0, 1.0)};
}

bool ToyFrModel::same_parameters(const ToyFrModel& other) const {
  return width_ == other.width_ && height_ == other.height_ && dim_ == other.dim_ &&
         temperature_ == other.temperature_ && mean_ == other.mean_ && basis_ == other.basis_ &&
         labels_ == other.labels_ && centroids_ == other.centroids_;
}

ToyFrModel train_toy(std::span<const LabeledImage> images, int dim, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorCode::InvalidArgument, "temperature must be positive");
  }
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < images.size(); ++i) by_label[images[i].label].push_back(i);
  if (by_label.size() < 2) fail(ErrorCode::InsufficientData, "need at least two identities");
  for (const auto& [label, members] : by_label) {
    if (members.size() < 2) {
      fail(ErrorCode::InsufficientData,
           "identity " + std::to_string(label) + " has fewer than two images");
    }
  }
  const int m = static_cast<int>(images.size());
  if (dim < 1 || dim > m - 1) {
    fail(ErrorCode::InsufficientData, "embedding dimension must lie in [1, images-1]");
  }
  const int width = images.front().image.width();
  const int height = images.front().image.height();
  for (const auto& li : images) {
    if (li.image.width() != width || li.image.height() != height) {
      fail(ErrorCode::DimensionMismatch, "training images differ in size");
    }
  }
  const int n = width * height;

  Eigen::MatrixXd x(n, m);
  for (int i = 0; i < m; ++i) {
    x.col(i) = Eigen::Map<const Eigen::VectorXd>(images[i].image.pixels().data(), n);
  }
  const Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.transpose() * x);
  if (eig.info() != Eigen::Success) fail(ErrorCode::InsufficientData, "eigensolver failed");
  const double top = eig.eigenvalues()[m - 1];
  Eigen::MatrixXd basis(n, dim);
  for (int j = 0; j < dim; ++j) {
    const double lambda = eig.eigenvalues()[m - 1 - j];
    if (!(lambda > 1e-10 * std::max(top, 1.0))) {
      fail(ErrorCode::InsufficientData, "training images span fewer than dim directions");
    }
    Eigen::VectorXd w = x * eig.eigenvectors().col(m - 1 - j);
    for (int p = 0; p < j; ++p) w -= basis.col(p).dot(w) * basis.col(p);
    w.normalize();
    Eigen::Index arg;
    w.cwiseAbs().maxCoeff(&arg);
    if (w[arg] < 0.0) w = -w;
    basis.col(j) = w;
  }

  ToyFrModel model;
  model.width_ = width;
  model.height_ = height;
  model.dim_ = dim;
  model.temperature_ = temperature;
  model.mean_.assign(mean.data(), mean.data() + n);
  model.basis_.assign(basis.data(), basis.data() + basis.size());
  for (const auto& [label, members] : by_label) {
    std::vector<double> centroid(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t idx : members) {
      const auto e = model.embed_uncounted(images[idx].image);
      for (int j = 0; j < dim; ++j) centroid[j] += e[j];
    }
    normalize(centroid);
    model.labels_.push_back(label);
    model.centroids_.insert(model.centroids_.end(), centroid.begin(), centroid.end());
  }
  return model;
}

void save_model(const ToyFrModel& model, const std::filesystem::path& path) {
  if (!model.trained()) fail(ErrorCode::UntrainedModel, "refusing to save an untrained model");
  detail::LeWriter out(path.string());
  out.magic("AMFR");
  out.put(kModelVersion);
  out.put(static_cast<std::uint32_t>(model.width_));
  out.put(static_cast<std::uint32_t>(model.height_));
  out.put(static_cast<std::uint32_t>(model.dim_));
  out.put(static_cast<std::uint32_t>(model.labels_.size()));
  out.put(model.temperature_);
  for (double x : model.mean_) out.put(x);
  for (double x : model.basis_) out.put(x);
  for (int label : model.labels_) out.put(static_cast<std::int32_t>(label));
  for (double x : model.centroids_) out.put(x);
  out.finish();
}

ToyFrModel load_model(const std::filesystem::path& path) {
  detail::LeReader in(path.string());
  in.expect_magic("AMFR");
  const auto version = in.get<std::uint32_t>();
  if (version != kModelVersion) {
    fail(ErrorCode::FormatError, "unsupported model version " + std::to_string(version));
  }
  const auto width = in.get<std::uint32_t>();
  const auto height = in.get<std::uint32_t>();
  const auto dim = in.get<std::uint32_t>();
  const auto count = in.get<std::uint32_t>();
  if (width == 0 || height == 0 || width > 1u << 15 || height > 1u << 15 || dim == 0 ||
      dim > width * height || count < 2 || count > 1u << 20) {
    fail(ErrorCode::FormatError, "implausible model header");
  }
  ToyFrModel model;
  model.width_ = static_cast<int>(width);
  model.height_ = static_cast<int>(height);
  model.dim_ = static_cast<int>(dim);
  model.temperature_ = in.get<double>();
  if (!(model.temperature_ > 0.0)) fail(ErrorCode::FormatError, "non-positive temperature");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  model.mean_.resize(n);
  for (double& x : model.mean_) x = in.get<double>();
  model.basis_.resize(n * dim);
  for (double& x : model.basis_) x = in.get<double>();
  model.labels_.resize(count);
  for (int& label : model.labels_) label = in.get<std::int32_t>();
  model.centroids_.resize(static_cast<std::size_t>(dim) * count);
  for (double& x : model.centroids_) x = in.get<double>();
  in.expect_eof();
  return model;
}

ExternalCommandOracle::ExternalCommandOracle(std::string command,
                                             std::filesystem::path scratch_dir)
    : command_(std::move(command)), scratch_dir_(std::move(scratch_dir)) {
  if (command_.empty()) fail(ErrorCode::ConfigError, "external oracle command is empty");
}

OracleVerdict ExternalCommandOracle::classify(const Image& image) const {
  const auto ticket = counter_.increment();
  std::filesystem::create_directories(scratch_dir_);
  const auto probe = scratch_dir_ / ("probe_" + std::to_string(ticket) + ".pgm");
  write_pgm(probe, image);

  const std::string cmd = command_ + " '" + probe.string() + "'";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) fail(ErrorCode::OracleFailure, "cannot launch: " + command_);
  std::string line;
  char buf[256];
  if (std::fgets(buf, sizeof buf, pipe.get()) != nullptr) line = buf;
  const int status = pclose(pipe.release());
  std::filesystem::remove(probe);
  if (status != 0) fail(ErrorCode::OracleFailure, "oracle command exited with status " + std::to_string(status));

  std::istringstream parse(line);
  OracleVerdict verdict;
  if (!(parse >> verdict.label >> verdict.confidence) || !(verdict.confidence >= 0.0) ||
      verdict.confidence > 1.0) {
    fail(ErrorCode::OracleFailure, "cannot parse '<label> <confidence>' from: " + line);
  }
  return verdict;
}

Embedding ExternalCommandOracle::embed(const Image&) const {
  counter_.increment();
  fail(ErrorCode::OracleFailure, "external command oracle does not provide embeddings");
}

}  // namespace morphkit
