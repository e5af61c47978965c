#include "morphkit/fixture.hpp"

#include "morphkit/error.hpp"

namespace morphkit {

void FixtureSpec::validate() const {
  faces.validate();
  if (train_samples < 2 || train_samples >= faces.samples_per_identity) {
    fail(ErrorCode::InvalidArgument, "train_samples must be in [2, samples_per_identity)");
  }
  if (roi_margin < 0 || 2 * roi_margin >= faces.width || 2 * roi_margin >= faces.height) {
    fail(ErrorCode::InvalidArgument, "roi_margin leaves an empty ROI");
  }
  if (open_identities < 2 || open_samples < 2) {
    fail(ErrorCode::InvalidArgument, "open set needs >= 2 identities with >= 2 samples");
  }
  if (open_offset < faces.identity_offset + faces.identities) {
    fail(ErrorCode::InvalidArgument, "open-set identities overlap the closed set");
  }
}

Fixture make_fixture(const FixtureSpec& spec) {
  spec.validate();
  Fixture fx;
  FaceSetSpec closed = spec.faces;
  closed.seed = spec.seed;
  fx.closed = generate_face_set(closed);

  FaceSetSpec open = closed;
  open.identities = spec.open_identities;
  open.samples_per_identity = spec.open_samples;
  open.identity_offset = spec.open_offset;
  fx.open = generate_face_set(open);

  fx.train = fx.closed.select(0, spec.train_samples);
  fx.targets = fx.closed.select(spec.train_samples, closed.samples_per_identity);
  fx.gallery = fx.open.select(0, 1);
  fx.probes = fx.open.select(1, spec.open_samples);
  fx.landmark = fx.closed.identities.front().landmark;
  fx.roi = RoiMask::inset(closed.width, closed.height, spec.roi_margin);
  return fx;
}

}  // namespace morphkit
