#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morphkit/image.hpp"

namespace morphkit {

struct Landmark {
  int row = 0;
  int col = 0;
  friend bool operator==(const Landmark&, const Landmark&) = default;
};

/// One synthetic "identity": a seeded low-pass texture.
struct IdentitySpec {
  std::uint64_t identity_seed = 0;
  int width = 32;
  int height = 32;
  /// Gaussian blur sigma (pixels) applied to the white-noise base pattern.
  double texture_smoothness = 2.0;
  /// Deformation centre (the "mouth").
  Landmark landmark{22, 16};

  void validate() const;
};

/// Smooth local deformation sequence standing in for a controllable expression
/// change around the landmark.
struct DeformationSpec {
  double amplitude_max = 2.0;
  /// Support radius of the bump exp(-(d / sigma)^2).
  double sigma = 5.0;
  /// Number of steps; the sequence holds frames + 1 images (t = 0..frames).
  int frames = 10;
  /// Selects the outward/upward mix of the displacement pattern.
  std::uint64_t profile_seed = 0;
  Landmark center{22, 16};

  void validate() const;
};

struct SequenceFrame {
  Image image;
  /// Exact cumulative field from the base image to this frame.
  FlowField flow;
};

Image generate_identity(const IdentitySpec& spec);

/// Analytic field at the given amplitude (peak displacement magnitude).
FlowField deformation_field(int width, int height, const DeformationSpec& spec, double amplitude);

/// Frame t = morph(base, f_t) with f_t at amplitude (t / frames) * amplitude_max.
std::vector<SequenceFrame> generate_sequence(const Image& base, const DeformationSpec& spec);

/// Seeded population of identities, each with several noisy samples.
struct FaceSetSpec {
  std::uint64_t seed = 0;
  int identities = 20;
  int samples_per_identity = 6;
  /// Added to identity indices when deriving identity seeds, so that disjoint
  /// populations (e.g. open-set galleries) can share one run seed.
  int identity_offset = 0;
  int width = 32;
  int height = 32;
  double texture_smoothness = 2.0;
  /// Amplitude of the smooth per-sample nuisance pattern.
  double sample_noise = 0.02;
  /// Every sample blends a population template shared by all identities with
  /// its identity texture. The identity share is identity_weight everywhere,
  /// raised by feature_weight in a Gaussian of radius feature_sigma around
  /// the landmark. identity_weight = 1 gives independent textures.
  double identity_weight = 0.1;
  double feature_weight = 0.5;
  double feature_sigma = 6.0;

  void validate() const;
};

struct FaceSet {
  std::vector<IdentitySpec> identities;
  /// samples[k][j] is sample j of identity k; labels are identity_offset + k.
  std::vector<std::vector<Image>> samples;
  int label_offset = 0;

  int label_of(std::size_t identity) const;
  /// Samples with index in [first, last) of every identity, identity-major.
  std::vector<LabeledImage> select(int first, int last) const;
};

FaceSet generate_face_set(const FaceSetSpec& spec);

/// Deformation spec for a seed face, with its profile derived from the id.
DeformationSpec deformation_for(const DeformationSpec& base, std::uint64_t run_seed,
                                const std::string& image_id, const Landmark& center);

}  // namespace morphkit
