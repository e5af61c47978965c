#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphkit/assign.hpp"
#include "morphkit/dictionary.hpp"
#include "morphkit/flow_estimation.hpp"
#include "morphkit/image.hpp"
#include "morphkit/metrics.hpp"
#include "morphkit/oracle.hpp"
#include "morphkit/synth.hpp"

namespace morphkit {

inline constexpr double kDefaultGamma = 0.6;

/// An attack succeeds when the oracle names the wrong identity, or names the
/// right one with confidence below gamma.
bool is_success(const OracleVerdict& verdict, int true_label, double gamma = kDefaultGamma);

// ---------------------------------------------------------------------------
// Query stage
// ---------------------------------------------------------------------------

struct QueryStageConfig {
  double gamma = kDefaultGamma;
  int max_queries_per_seed = 50;
  int frames_per_seed = 10;
  /// Populate pair images with the morphed face instead of the original seed.
  bool use_morphed_image = false;

  void validate() const;
};

struct QueryAttempt {
  std::string image_id;
  int frame = 0;
  int label_true = 0;
  OracleVerdict verdict;
  bool success = false;
  double l2 = 0.0;
  double linf = 0.0;
};

struct QueryStageResult {
  std::vector<TrainingPair> pairs;
  /// "<seed id>_f<frame>" for each pair.
  std::vector<std::string> pair_ids;
  std::vector<QueryAttempt> attempts;
  /// Seeds whose query budget ran out before the sequence ended.
  std::vector<std::string> budget_exhausted;
  std::uint64_t queries_used = 0;
};

/// For every seed: synthesize its deformation sequence, estimate frame-to-frame
/// flow, accumulate it from the seed, restrict it to the ROI, morph the seed,
/// query the oracle and keep (seed, cumulative flow) for each success.
QueryStageResult run_query_stage(std::span<const LabeledImage> seeds, const Landmark& landmark,
                                 const RoiMask& roi, const Oracle& oracle,
                                 const FlowEstimatorConfig& flow_cfg,
                                 const DeformationSpec& deformation, const QueryStageConfig& cfg,
                                 std::uint64_t run_seed, int jobs = 1);

// ---------------------------------------------------------------------------
// Attacking stage
// ---------------------------------------------------------------------------

struct AttackRecord {
  std::string image_id;
  IntensitySpec intensity;
  int label_true = 0;
  OracleVerdict verdict;
  bool success = false;
  /// Assignment failed (e.g. ZeroFlow); counted as a failed attempt.
  bool skipped = false;
  double l2 = 0.0;
  double linf = 0.0;
  std::uint64_t queries_used = 0;
  double ssim = 1.0;
  double ncs = 1.0;
  /// Present when SweepOptions::retain_artifacts is set.
  std::optional<FlowField> flow;
  std::optional<Image> morphed;
};

struct SweepRow {
  IntensitySpec intensity;
  double success_rate = 0.0;
  std::size_t n = 0;
};

struct SweepOptions {
  double gamma = kDefaultGamma;
  AssignOptions assign;
  bool retain_artifacts = false;
  bool compute_similarity = true;
  SsimWindow ssim_window = SsimWindow::Uniform8;
  int jobs = 1;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Intensity-major, then target order.
  std::vector<AttackRecord> records;
  std::uint64_t queries_used = 0;
};

SweepResult run_attack_sweep(std::span<const LabeledImage> targets, const JointDictionary& dictionary,
                             const Oracle& oracle, std::span<const IntensitySpec> sweep,
                             const SweepOptions& options = {});

/// successes / attempts, skipped attempts included. Throws EmptyRecordSet.
double success_rate(std::span<const AttackRecord> records);

/// Success rate of the untouched targets (the zero-intensity reference).
double unmorphed_success_rate(std::span<const LabeledImage> targets, const Oracle& oracle,
                              double gamma = kDefaultGamma);

struct TransferResult {
  double rate = 0.0;
  std::size_t replayed = 0;
  std::vector<OracleVerdict> verdicts;
};

/// Replays every successful, retained morphed image against a second oracle.
/// Throws EmptyRecordSet when nothing can be replayed.
TransferResult run_transferability(std::span<const AttackRecord> records, const Oracle& other,
                                   double gamma = kDefaultGamma);

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

enum class BaselineKind { IntraChannel, InterChannel, RandomUniform, RandomNormal };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::IntraChannel;
  /// Bounds for RandomUniform.
  double lo = -2.0;
  double hi = 1.0;

  /// "intra", "inter", "uniform(-2,1)", "normal(0,1)" style label.
  std::string name() const;
};

/// Accepts "intra", "inter", "normal" and "uniform:<lo>:<hi>". Throws ConfigError.
BaselineSpec parse_baseline(std::string_view text);

/// Key for the baseline RNG stream of one image, independent of scheduling.
std::uint64_t baseline_key(std::uint64_t run_seed, std::string_view image_id);

/// Intra-channel: shuffle h among h positions and v among v positions.
/// Inter-channel: shuffle the pooled 2N components across both channels.
/// Random kinds: i.i.d. draws, shape taken from `proprietary`.
FlowField baseline_field(const FlowField& proprietary, const BaselineSpec& spec, std::uint64_t key);

struct ComparisonRecord {
  /// "proprietary" or BaselineSpec::name().
  std::string field_kind;
  std::string image_id;
  IntensitySpec intensity;
  SimilarityRecord similarity;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Attacks every target at every intensity with the proprietary field and with
/// each baseline. Permutations shuffle the modulated proprietary field; random
/// fields are ROI-restricted and then modulated to the same intensity.
std::vector<ComparisonRecord> run_baseline_comparison(
    std::span<const LabeledImage> targets, const JointDictionary& dictionary, const Oracle& oracle,
    std::span<const IntensitySpec> sweep, std::span<const BaselineSpec> baselines,
    std::uint64_t run_seed, const SweepOptions& options = {});

// ---------------------------------------------------------------------------
// Open set
// ---------------------------------------------------------------------------

struct OpenSetResult {
  /// Entry 0 is the unmorphed reference (intensity 0).
  std::vector<IntensitySpec> intensities;
  std::vector<ScoreSet> scores;
};

/// Genuine: morphed probe vs its own identity's gallery image. Impostor:
/// morphed probe vs every other gallery image. Scores are embedding cosines.
OpenSetResult run_open_set_attack(std::span<const LabeledImage> gallery,
                                  std::span<const LabeledImage> probes,
                                  const JointDictionary& dictionary, const Oracle& embedder,
                                  std::span<const IntensitySpec> sweep,
                                  const SweepOptions& options = {});

}  // namespace morphkit
