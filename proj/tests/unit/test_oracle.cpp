#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unistd.h>

#include "morphkit/fixture.hpp"
#include "morphkit/oracle.hpp"
#include "support/expect.hpp"

using namespace morphkit;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("morphkit_unit_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

// Two identities split along pixel 0, spread along pixel 1.
std::vector<LabeledImage> symmetric_set() {
  auto make = [](double u, double v) {
    std::vector<double> px(16, 0.5);
    px[0] += u;
    px[1] += v;
    return Image(4, 4, px);
  };
  return {{"a0", 0, make(0.2, 0.1)}, {"a1", 0, make(0.2, -0.1)},
          {"b0", 1, make(-0.2, 0.1)}, {"b1", 1, make(-0.2, -0.1)}};
}

}  // namespace

TEST(ToyOracle, EquidistantProbeIsHalf) {
  const ToyFrModel m = train_toy(symmetric_set(), 2, 1.0);
  std::vector<double> px(16, 0.5);
  px[1] = 0.58;
  const auto probs = m.class_probabilities(Image(4, 4, px));
  ASSERT_EQ(probs.size(), 2u);
  EXPECT_NEAR(probs[0], 0.5, 1e-12);
  EXPECT_NEAR(probs[1], 0.5, 1e-12);
}

TEST(ToyOracle, CentroidImageClassifiesAsItself) {
  FixtureSpec spec;
  spec.faces.identities = 6;
  const Fixture fx = make_fixture(spec);
  const ToyFrModel m = train_toy(fx.train);
  for (int k = 0; k < 6; ++k) {
    std::vector<double> mean(fx.train[0].image.size(), 0.0);
    int count = 0;
    for (const auto& li : fx.train) {
      if (li.label != k) continue;
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += li.image.pixels()[i];
      ++count;
    }
    for (double& x : mean) x /= count;
    const Image centroid(fx.train[0].image.width(), fx.train[0].image.height(), mean);
    const OracleVerdict v = m.classify(centroid);
    EXPECT_EQ(v.label, k);
    const auto probs = m.class_probabilities(centroid);
    for (int j = 0; j < 6; ++j) {
      if (j != k) {
        EXPECT_GT(v.confidence, probs[j]);
      }
    }
    EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(ToyOracle, TenIdentityAccuracy) {
  FixtureSpec spec;
  spec.faces.identities = 10;
  const Fixture fx = make_fixture(spec);
  const ToyFrModel m = train_toy(fx.train);
  int correct = 0;
  for (const auto& t : fx.targets) correct += m.classify(t.image).label == t.label;
  EXPECT_GE(static_cast<double>(correct) / fx.targets.size(), 0.9);
}

TEST(ToyOracle, EmbeddingIsDeterministicUnitVector) {
  const ToyFrModel m = train_toy(symmetric_set(), 2, 1.0);
  const Image probe = symmetric_set()[0].image;
  const Embedding a = m.embed(probe), b = m.embed(probe);
  EXPECT_EQ(a.vector, b.vector);
  double n = 0.0;
  for (double x : a.vector) n += x * x;
  EXPECT_NEAR(n, 1.0, 1e-12);
  EXPECT_NEAR(cosine(a, b), 1.0, 1e-12);
}

TEST(ToyOracle, SmallTrainingSet) {
  const ToyFrModel m = train_toy(symmetric_set(), 1, 1.0);
  EXPECT_TRUE(m.trained());
  ASSERT_EQ(m.labels().size(), 2u);
  EXPECT_NE(m.classify(symmetric_set()[0].image).label, m.classify(symmetric_set()[2].image).label);
}

TEST(ToyOracle, TrainingIsDeterministic) {
  const auto set = symmetric_set();
  EXPECT_TRUE(train_toy(set, 2, 0.5).same_parameters(train_toy(set, 2, 0.5)));
  auto doubled = set;
  doubled.insert(doubled.end(), set.begin(), set.end());
  const ToyFrModel a = train_toy(set, 2, 0.5), b = train_toy(doubled, 2, 0.5);
  const Image probe = set[1].image;
  const auto pa = a.class_probabilities(probe), pb = b.class_probabilities(probe);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_NEAR(pa[i], pb[i], 1e-12);
}

TEST(ToyOracle, CountsQueries) {
  const ToyFrModel m = train_toy(symmetric_set(), 2, 1.0);
  EXPECT_EQ(m.queries(), 0u);
  m.classify(symmetric_set()[0].image);
  m.embed(symmetric_set()[0].image);
  m.class_probabilities(symmetric_set()[0].image);
  EXPECT_EQ(m.queries(), 3u);
}

TEST(ToyOracle, Errors) {
  const auto set = symmetric_set();
  const std::vector<LabeledImage> one_identity{set[0], set[1]};
  EXPECT_ERROR_CODE(train_toy(one_identity, 1, 1.0), ErrorCode::InsufficientData);
  EXPECT_ERROR_CODE(train_toy(set, 4, 1.0), ErrorCode::InsufficientData);
  const std::vector<LabeledImage> singletons{set[0], set[1], set[2]};
  EXPECT_ERROR_CODE(train_toy(singletons, 1, 1.0), ErrorCode::InsufficientData);
  EXPECT_ERROR_CODE(ToyFrModel().classify(set[0].image), ErrorCode::UntrainedModel);
  EXPECT_ERROR_CODE(train_toy(set, 2, 1.0).classify(Image(3, 3)), ErrorCode::DimensionMismatch);
}

TEST(ToyOracle, SaveLoadRoundTrip) {
  const ToyFrModel m = train_toy(symmetric_set(), 2, 0.3);
  m.classify(symmetric_set()[0].image);
  save_model(m, scratch("m.amfr"));
  const ToyFrModel back = load_model(scratch("m.amfr"));
  EXPECT_TRUE(back.same_parameters(m));
  EXPECT_EQ(back.queries(), 0u);
  std::filesystem::resize_file(scratch("m.amfr"), 20);
  EXPECT_ERROR_CODE(load_model(scratch("m.amfr")), ErrorCode::FormatError);
}

TEST(ExternalOracle, ParsesCommandOutput) {
  const auto script = scratch("fr.sh");
  {
    std::ofstream out(script);
    out << "#!/bin/sh\ntest -s \"$1\" && echo '3 0.75'\n";
  }
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  const ExternalCommandOracle oracle(script.string(), scratch("ext"));
  const OracleVerdict v = oracle.classify(Image(4, 4));
  EXPECT_EQ(v.label, 3);
  EXPECT_EQ(v.confidence, 0.75);
  EXPECT_EQ(oracle.queries(), 1u);
  EXPECT_ERROR_CODE(oracle.embed(Image(4, 4)), ErrorCode::OracleFailure);
}

TEST(ExternalOracle, BadOutput) {
  const auto script = scratch("bad.sh");
  {
    std::ofstream out(script);
    out << "#!/bin/sh\necho nonsense\n";
  }
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  const ExternalCommandOracle oracle(script.string(), scratch("ext2"));
  EXPECT_ERROR_CODE(oracle.classify(Image(4, 4)), ErrorCode::OracleFailure);
}
