#pragma once

#include "morphkit/image.hpp"

namespace morphkit {

struct FlowEstimatorConfig {
  /// Quadratic smoothness weight (the Horn-Schunck alpha^2 term).
  double smoothness_weight = 0.001;
  int iterations = 200;
  /// Stop once the mean absolute per-component update falls below this.
  double convergence_epsilon = 1e-4;

  /// Throws InvalidArgument on non-positive values.
  void validate() const;
};

/// Dense Horn-Schunck estimate of the field f with morph(frame_a, f) ~= frame_b,
/// in the backward-sampling convention of FlowField. Single pyramid level,
/// central-difference spatial derivatives, Jacobi updates.
FlowField estimate_flow(const Image& frame_a, const Image& frame_b,
                        const FlowEstimatorConfig& cfg = {});

}  // namespace morphkit
