#pragma once

#include <string_view>
#include <vector>

#include "morphkit/dictionary.hpp"
#include "morphkit/image.hpp"

namespace morphkit {

struct Coefficients {
  std::vector<double> alpha;
};

enum class IntensityMode { L2Target, LinfTarget, DeltaMultiplier };

std::string_view to_string(IntensityMode mode) noexcept;
/// Accepts "l2", "linf" and "delta". Throws ConfigError otherwise.
IntensityMode parse_intensity_mode(std::string_view text);

struct IntensitySpec {
  IntensityMode mode = IntensityMode::DeltaMultiplier;
  double value = 1.0;

  /// Throws InvalidArgument unless value is positive and finite.
  void validate() const;
};

struct AssignOptions {
  /// Add the flow means back after reconstruction. Disabling it reproduces the
  /// bare f = W_f * alpha form.
  bool add_mean = true;
};

/// Least-squares coefficients of the ROI-weighted, mean-removed image on the
/// image-portion bases: solves (W_x^T W_x) alpha = W_x^T (y - mu_x).
/// Throws SingularProjection when the normal matrix condition exceeds 1e12.
Coefficients project(const Image& image, const JointDictionary& dictionary);

/// f = W_f * alpha (+ mean), zero outside the ROI.
FlowField reconstruct_flow(const Coefficients& coefficients, const JointDictionary& dictionary,
                           const AssignOptions& options = {});

/// Rescale a field to a target l2 / linf norm, or by a plain multiplier.
/// Throws ZeroFlow when a target-norm mode meets a field with norm < 1e-12.
FlowField modulate(const FlowField& flow, const IntensitySpec& spec);

/// project -> reconstruct_flow -> modulate.
FlowField assign_proprietary_flow(const Image& image, const JointDictionary& dictionary,
                                  const IntensitySpec& spec, const AssignOptions& options = {});

/// Built-in sweep grids: "l2-small" [2,10] step 2, "l2-medium" [100,200] step 10,
/// "l2-large" [200,600] step 100, "linf-small" [0.1,0.5] step 0.1,
/// "linf-medium" [1.0,2.0] step 0.1, "linf-large" [2.0,6.0] step 1.0,
/// "delta" [0.2,2.0] step 0.2. Throws ConfigError for unknown names.
std::vector<IntensitySpec> sweep_group(std::string_view name);

/// Comma-separated list of group names, "<mode>:<value>" points and
/// "<mode>:<lo>:<hi>:<step>" grids, e.g. "l2-small,delta:1,linf:1:3:0.5".
/// Repeated (mode, value) points are dropped after their first occurrence.
/// Throws ConfigError.
std::vector<IntensitySpec> parse_sweep(std::string_view text);

/// Inclusive arithmetic grid lo, lo + step, ..., hi; each point is lo + i * step
/// rounded to 12 significant digits.
std::vector<double> inclusive_grid(double lo, double hi, double step);

}  // namespace morphkit
