#pragma once

#include <cstdint>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/synth.hpp"

namespace morphkit {

/// Standard experiment population. The closed set supplies oracle training
/// images (which double as query-stage seeds) and held-out attack targets.
/// The open set uses disjoint identities split into gallery and probes.
struct FixtureSpec {
  std::uint64_t seed = 0;
  FaceSetSpec faces;
  /// Samples [0, train_samples) of each identity train the oracle; the rest
  /// are attack targets.
  int train_samples = 4;
  int roi_margin = 2;
  int open_identities = 10;
  int open_samples = 4;
  /// Added to open-set identity indices so their seeds never collide with
  /// the closed set.
  int open_offset = 1000;

  void validate() const;
};

struct Fixture {
  FaceSet closed;
  FaceSet open;
  std::vector<LabeledImage> train;
  std::vector<LabeledImage> targets;
  /// Sample 0 of each open identity.
  std::vector<LabeledImage> gallery;
  std::vector<LabeledImage> probes;
  Landmark landmark;
  RoiMask roi;
};

Fixture make_fixture(const FixtureSpec& spec);

}  // namespace morphkit
