// Values measured once on the seeded fixtures and frozen. A change here means
// the pipeline's numerics changed and the new value needs re-measuring.

#include <gtest/gtest.h>

#include <cmath>

#include "morphkit/synth.hpp"
#include "support/pipeline.hpp"

using namespace morphkit;
using namespace morphkit::testing;

namespace {

const FixturePipeline& seed0() {
  static const FixturePipeline p = run_fixture_pipeline(0);
  return p;
}

}  // namespace

TEST(Regression, FixtureQueryStage) {
  const auto& p = seed0();
  EXPECT_EQ(p.fixture.train.size(), 80u);
  EXPECT_EQ(p.fixture.targets.size(), 40u);
  EXPECT_EQ(p.query.pairs.size(), 264u);
  EXPECT_EQ(p.query.queries_used, 800u);
  EXPECT_EQ(p.learned.dictionary.k, 6);
}

TEST(Regression, UnmorphedRate) {
  const auto& p = seed0();
  EXPECT_EQ(unmorphed_success_rate(p.fixture.targets, p.oracle), 8.0 / 40.0);
}

TEST(Regression, TenIdentityAccuracy) {
  FixtureSpec spec;
  spec.faces.identities = 10;
  const Fixture fx = make_fixture(spec);
  const ToyFrModel m = train_toy(fx.train);
  int correct = 0;
  for (const auto& t : fx.targets) correct += m.classify(t.image).label == t.label;
  EXPECT_EQ(correct, 20);
}

TEST(Regression, IdentitySeedsDiffer) {
  IdentitySpec a, b;
  b.identity_seed = 1;
  const Image x = generate_identity(a), y = generate_identity(b);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += std::abs(x.pixels()[i] - y.pixels()[i]);
  EXPECT_NEAR(d / x.size(), 0.17891754846465821, 1e-12);
}

TEST(Regression, TransferToLargerOracle) {
  const auto& p = seed0();
  SweepOptions opt;
  opt.retain_artifacts = true;
  const auto sweep = sweep_group("l2-small");
  const SweepResult res = run_attack_sweep(p.fixture.targets, p.learned.dictionary, p.oracle, sweep, opt);
  const ToyFrModel other = train_toy(p.fixture.train, 12, kDefaultToyTemperature);
  const TransferResult t = run_transferability(res.records, other);
  EXPECT_EQ(t.replayed, 67u);
  EXPECT_EQ(t.rate, 20.0 / 67.0);
  const TransferResult again = run_transferability(res.records, other);
  EXPECT_EQ(again.verdicts, t.verdicts);
}
