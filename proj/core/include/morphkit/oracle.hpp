#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "morphkit/image.hpp"

namespace morphkit {

struct OracleVerdict {
  int label = -1;
  /// Top-1 probability-like score in [0, 1].
  double confidence = 0.0;

  friend bool operator==(const OracleVerdict&, const OracleVerdict&) = default;
};

/// Unit-norm feature vector used for open-set verification.
struct Embedding {
  std::vector<double> vector;
};

double cosine(const Embedding& a, const Embedding& b);

/// Black-box face recognizer. Attack code only ever sees this interface;
/// every classify/embed call counts against the query budget.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual OracleVerdict classify(const Image& image) const = 0;
  virtual Embedding embed(const Image& image) const = 0;
  /// Number of classify + embed calls served so far.
  virtual std::uint64_t queries() const noexcept = 0;
};

/// Thread-safe monotone query counter.
class QueryCounter {
 public:
  QueryCounter() = default;
  QueryCounter(const QueryCounter& other) noexcept : count_(other.value()) {}
  QueryCounter& operator=(const QueryCounter& other) noexcept {
    count_.store(other.value(), std::memory_order_relaxed);
    return *this;
  }

  /// Returns the post-increment value, unique per call.
  std::uint64_t increment() const noexcept {
    return count_.fetch_add(1, std::memory_order_relaxed) + 1;
  }
  std::uint64_t value() const noexcept { return count_.load(std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::uint64_t> count_{0};
};

inline constexpr double kDefaultToyTemperature = 0.2;
inline constexpr int kDefaultToyDim = 8;

/// Desk-scale eigenface recognizer: PCA embedding, cosine similarity to
/// per-identity centroids, temperature softmax for confidence.
class ToyFrModel final : public Oracle {
 public:
  ToyFrModel() = default;

  OracleVerdict classify(const Image& image) const override;
  Embedding embed(const Image& image) const override;
  std::uint64_t queries() const noexcept override { return counter_.value(); }

  /// Softmax over all identities (sums to 1); counts as one query.
  std::vector<double> class_probabilities(const Image& image) const;

  bool trained() const noexcept { return dim_ > 0; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int dim() const noexcept { return dim_; }
  double temperature() const noexcept { return temperature_; }
  std::span<const int> labels() const noexcept { return labels_; }

  /// Bit-exact comparison of the stored model (the query counter is ignored).
  bool same_parameters(const ToyFrModel& other) const;

  friend ToyFrModel train_toy(std::span<const LabeledImage> images, int dim, double temperature);
  friend void save_model(const ToyFrModel& model, const std::filesystem::path& path);
  friend ToyFrModel load_model(const std::filesystem::path& path);

 private:
  std::vector<double> embed_uncounted(const Image& image) const;
  std::vector<double> similarities(const std::vector<double>& e) const;
  std::vector<double> softmax(const std::vector<double>& sims) const;
  void check_input(const Image& image) const;

  int width_ = 0;
  int height_ = 0;
  int dim_ = 0;
  double temperature_ = kDefaultToyTemperature;
  std::vector<double> mean_;       // n
  std::vector<double> basis_;      // n x dim, column-major, orthonormal columns
  std::vector<int> labels_;        // one per centroid
  std::vector<double> centroids_;  // dim x identities, column-major, unit columns
  QueryCounter counter_;
};

/// Throws InsufficientData unless there are >= 2 identities with >= 2 images
/// each and 1 <= dim <= images - 1.
ToyFrModel train_toy(std::span<const LabeledImage> images, int dim = kDefaultToyDim,
                     double temperature = kDefaultToyTemperature);

/// AMFR binary format (see README).
void save_model(const ToyFrModel& model, const std::filesystem::path& path);
ToyFrModel load_model(const std::filesystem::path& path);

/// Adapter for an external recognizer. For each query it writes the image as a
/// PGM to a scratch file, runs `<command> <pgm path>` and parses
/// "<label> <confidence>" from the first line of stdout. Embedding queries are
/// not supported and throw OracleFailure.
class ExternalCommandOracle final : public Oracle {
 public:
  ExternalCommandOracle(std::string command, std::filesystem::path scratch_dir);

  OracleVerdict classify(const Image& image) const override;
  Embedding embed(const Image& image) const override;
  std::uint64_t queries() const noexcept override { return counter_.value(); }

 private:
  std::string command_;
  std::filesystem::path scratch_dir_;
  QueryCounter counter_;
};

}  // namespace morphkit
