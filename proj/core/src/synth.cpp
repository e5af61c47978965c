#include "morphkit/synth.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/error.hpp"
#include "morphkit/rng.hpp"

namespace morphkit {
namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& x : k) x /= sum;
  return k;
}

// Separable blur with replicated borders.
std::vector<double> blur(const std::vector<double>& in, int width, int height, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(in.size()), out(in.size());
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double s = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        s += k[d + radius] * in[r * width + std::clamp(c + d, 0, width - 1)];
      }
      tmp[r * width + c] = s;
    }
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double s = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        s += k[d + radius] * tmp[std::clamp(r + d, 0, height - 1) * width + c];
      }
      out[r * width + c] = s;
    }
  }
  return out;
}

std::vector<double> smooth_noise(std::uint64_t key, int width, int height, double sigma) {
  CounterRng rng(key);
  std::vector<double> noise(static_cast<std::size_t>(width) * height);
  for (double& x : noise) x = rng.uniform();
  return blur(noise, width, height, sigma);
}

}  // namespace

void IdentitySpec::validate() const {
  if (width < 1 || height < 1 || !(texture_smoothness > 0.0) || landmark.row < 0 ||
      landmark.row >= height || landmark.col < 0 || landmark.col >= width) {
    fail(ErrorCode::InvalidArgument, "invalid identity spec");
  }
}

void DeformationSpec::validate() const {
  if (!(amplitude_max > 0.0) || !(sigma > 0.0) || frames < 2) {
    fail(ErrorCode::InvalidArgument, "deformation spec needs amplitude > 0, sigma > 0, frames >= 2");
  }
}

void FaceSetSpec::validate() const {
  if (identities < 1 || samples_per_identity < 1 || width < 1 || height < 1 ||
      !(texture_smoothness > 0.0) || !(sample_noise >= 0.0) || !(identity_weight >= 0.0) ||
      !(feature_weight >= 0.0) || !(identity_weight + feature_weight <= 1.0) ||
      !(feature_sigma > 0.0)) {
    fail(ErrorCode::InvalidArgument, "invalid face set spec");
  }
}

Image generate_identity(const IdentitySpec& spec) {
  spec.validate();
  auto texture = smooth_noise(spec.identity_seed, spec.width, spec.height, spec.texture_smoothness);
  const auto [lo_it, hi_it] = std::minmax_element(texture.begin(), texture.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  for (double& x : texture) x = span > 0.0 ? 0.1 + 0.8 * (x - lo) / span : 0.5;
  return Image(spec.width, spec.height, std::move(texture));
}

FlowField deformation_field(int width, int height, const DeformationSpec& spec, double amplitude) {
  spec.validate();
  // Profile: an outward horizontal component that grows with the column
  // offset, plus an upward lift, both under a steep Gaussian envelope.
  CounterRng rng(derive_key(spec.profile_seed, "deformation-profile"));
  const double outward = rng.uniform(0.5, 1.0);
  const double upward = rng.uniform(0.5, 1.0);

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> h(n), v(n);
  double peak = 0.0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double dr = (r - spec.center.row) / spec.sigma;
      const double dc = (c - spec.center.col) / spec.sigma;
      const double envelope = std::exp(-(dr * dr + dc * dc));
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      // Sampling from the centre side pushes content outward.
      h[i] = -outward * envelope * dc;
      // Sampling from below lifts content upward.
      v[i] = upward * envelope;
      peak = std::max(peak, std::hypot(h[i], v[i]));
    }
  }
  const double scale = peak > 0.0 ? amplitude / peak : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    h[i] *= scale;
    v[i] *= scale;
  }
  return FlowField(width, height, std::move(h), std::move(v));
}

std::vector<SequenceFrame> generate_sequence(const Image& base, const DeformationSpec& spec) {
  spec.validate();
  std::vector<SequenceFrame> frames;
  frames.reserve(static_cast<std::size_t>(spec.frames) + 1);
  for (int t = 0; t <= spec.frames; ++t) {
    const double amplitude = spec.amplitude_max * t / spec.frames;
    FlowField f = deformation_field(base.width(), base.height(), spec, amplitude);
    Image img = morph(base, f);
    frames.push_back({std::move(img), std::move(f)});
  }
  return frames;
}

int FaceSet::label_of(std::size_t identity) const {
  return label_offset + static_cast<int>(identity);
}

std::vector<LabeledImage> FaceSet::select(int first, int last) const {
  std::vector<LabeledImage> out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const int hi = std::min<int>(last, static_cast<int>(samples[k].size()));
    for (int j = std::max(first, 0); j < hi; ++j) {
      out.push_back({"id" + std::to_string(label_of(k)) + "_s" + std::to_string(j), label_of(k),
                     samples[k][j]});
    }
  }
  return out;
}

FaceSet generate_face_set(const FaceSetSpec& spec) {
  spec.validate();
  FaceSet set;
  const Landmark landmark{static_cast<int>(spec.height * 0.7), spec.width / 2};
  IdentitySpec population;
  population.identity_seed = derive_key(spec.seed, "template");
  population.width = spec.width;
  population.height = spec.height;
  population.texture_smoothness = spec.texture_smoothness;
  population.landmark = landmark;
  const Image tmpl = generate_identity(population);
  std::vector<double> share(static_cast<std::size_t>(spec.width) * spec.height);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const double d2 = (r - landmark.row) * (r - landmark.row) + (c - landmark.col) * (c - landmark.col);
      share[static_cast<std::size_t>(r) * spec.width + c] =
          spec.identity_weight +
          spec.feature_weight * std::exp(-d2 / (spec.feature_sigma * spec.feature_sigma));
    }
  }

  for (int k = 0; k < spec.identities; ++k) {
    const int label = spec.identity_offset + k;
    IdentitySpec ident;
    ident.identity_seed = derive_key(spec.seed, static_cast<std::uint64_t>(label));
    ident.width = spec.width;
    ident.height = spec.height;
    ident.texture_smoothness = spec.texture_smoothness;
    ident.landmark = landmark;
    const Image texture = generate_identity(ident);
    std::vector<double> base(share.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      base[i] = (1.0 - share[i]) * tmpl.pixels()[i] + share[i] * texture.pixels()[i];
    }

    std::vector<Image> samples;
    for (int j = 0; j < spec.samples_per_identity; ++j) {
      const auto key = derive_key(ident.identity_seed, static_cast<std::uint64_t>(j) + 1);
      auto nuisance = smooth_noise(key, spec.width, spec.height, spec.texture_smoothness);
      double mean = 0.0;
      for (double x : nuisance) mean += x;
      mean /= static_cast<double>(nuisance.size());
      std::vector<double> pixels = base;
      for (std::size_t i = 0; i < pixels.size(); ++i) {
        // Blurred uniform noise has a small spread; 8x brings it near unit range.
        pixels[i] = std::clamp(pixels[i] + spec.sample_noise * 8.0 * (nuisance[i] - mean), 0.0, 1.0);
      }
      samples.emplace_back(spec.width, spec.height, std::move(pixels));
    }
    set.identities.push_back(ident);
    set.samples.push_back(std::move(samples));
  }
  set.label_offset = spec.identity_offset;
  return set;
}

DeformationSpec deformation_for(const DeformationSpec& base, std::uint64_t run_seed,
                                const std::string& image_id, const Landmark& center) {
  DeformationSpec spec = base;
  spec.profile_seed = derive_key(run_seed, image_id);
  spec.center = center;
  return spec;
}

}  // namespace morphkit
