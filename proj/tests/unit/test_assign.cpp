#include <gtest/gtest.h>

#include <cmath>

#include "morphkit/assign.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace morphkit;
using namespace morphkit::testing;

namespace {

// Images near mid-grey with large flows, so image-portion basis entries stay
// small enough that mu_x + W_x e_j is a valid image.
JointDictionary toy_dictionary(int k = 5) {
  std::vector<TrainingPair> pairs;
  for (int i = 0; i < 8; ++i) {
    CounterRng rng(derive_key(77, i));
    std::vector<double> px(36);
    for (double& p : px) p = 0.5 + 0.1 * (rng.uniform() - 0.5);
    pairs.push_back({Image(6, 6, px), random_field(6, 6, derive_key(78, i), 2.0)});
  }
  return learn_bases(assemble_matrix(pairs, RoiMask::inset(6, 6, 1)), k).dictionary;
}

Image image_from(const JointDictionary& d, const std::vector<double>& alpha, double outside) {
  std::vector<double> px(static_cast<std::size_t>(d.n), outside);
  for (int p = 0; p < d.n; ++p) {
    if (!d.roi.contains(p / d.width, p % d.width)) continue;
    px[p] = d.mu_x[p];
    for (int j = 0; j < d.k; ++j) px[p] += d.w_x(p, j) * alpha[j];
  }
  return Image(d.width, d.height, px);
}

// Normal equations solved by Gaussian elimination with partial pivoting.
std::vector<double> least_squares(const JointDictionary& d, const Image& y) {
  const int k = d.k;
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      for (int p = 0; p < d.n; ++p) a[i][j] += d.w_x(p, i) * d.w_x(p, j);
    for (int p = 0; p < d.n; ++p) {
      if (d.roi.contains(p / d.width, p % d.width)) a[i][k] += d.w_x(p, i) * (y.pixels()[p] - d.mu_x[p]);
    }
  }
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (int r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> x(k);
  for (int i = 0; i < k; ++i) x[i] = a[i][k] / a[i][i];
  return x;
}

}  // namespace

TEST(Project, MeanGivesZero) {
  const JointDictionary d = toy_dictionary();
  const Coefficients c = project(image_from(d, std::vector<double>(d.k, 0.0), 0.3), d);
  for (double a : c.alpha) EXPECT_NEAR(a, 0.0, 1e-12);
}

TEST(Project, RecoversUnitCoefficients) {
  const JointDictionary d = toy_dictionary();
  for (int j = 0; j < d.k; ++j) {
    std::vector<double> e(d.k, 0.0);
    e[j] = 1.0;
    const Coefficients c = project(image_from(d, e, 0.9), d);
    for (int i = 0; i < d.k; ++i) EXPECT_NEAR(c.alpha[i], e[i], 1e-8);
  }
}

TEST(Project, MatchesDirectLeastSquares) {
  const JointDictionary d = toy_dictionary();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Image y = random_image(6, 6, derive_key(79, s));
    const auto want = least_squares(d, y);
    const auto got = project(y, d).alpha;
    for (int i = 0; i < d.k; ++i) EXPECT_NEAR(got[i], want[i], 1e-9 * std::max(1.0, std::abs(want[i])));
  }
}

TEST(Project, Errors) {
  const JointDictionary d = toy_dictionary();
  EXPECT_ERROR_CODE(project(Image(5, 6), d), ErrorCode::DimensionMismatch);
}

TEST(Reconstruct, MeanAndBasis) {
  const JointDictionary d = toy_dictionary();
  const FlowField zero = reconstruct_flow({std::vector<double>(d.k, 0.0)}, d);
  const FlowField bare = reconstruct_flow({std::vector<double>(d.k, 0.0)}, d, {.add_mean = false});
  std::vector<double> e(d.k, 0.0);
  e[2] = 1.0;
  const FlowField one = reconstruct_flow({e}, d);
  for (int p = 0; p < d.n; ++p) {
    const int r = p / d.width, c = p % d.width;
    const bool in = d.roi.contains(r, c);
    EXPECT_EQ(zero.h_at(r, c), in ? d.mu_h[p] : 0.0);
    EXPECT_EQ(zero.v_at(r, c), in ? d.mu_v[p] : 0.0);
    EXPECT_EQ(bare.h_at(r, c), 0.0);
    EXPECT_NEAR(one.h_at(r, c), in ? d.mu_h[p] + d.w_h(p, 2) : 0.0, 1e-15);
    EXPECT_NEAR(one.v_at(r, c), in ? d.mu_v[p] + d.w_v(p, 2) : 0.0, 1e-15);
  }
}

TEST(Reconstruct, Linearity) {
  const JointDictionary d = toy_dictionary();
  const AssignOptions bare{.add_mean = false};
  std::vector<double> a(d.k), b(d.k), ab(d.k);
  for (int j = 0; j < d.k; ++j) {
    a[j] = 0.3 * j - 0.5;
    b[j] = 1.0 / (j + 1);
    ab[j] = 2.0 * a[j] - 3.0 * b[j];
  }
  const FlowField fa = reconstruct_flow({a}, d, bare), fb = reconstruct_flow({b}, d, bare);
  const FlowField fab = reconstruct_flow({ab}, d, bare);
  const FlowField lin = flow_add(flow_scale(fa, 2.0), flow_scale(fb, -3.0));
  for (std::size_t i = 0; i < fab.size(); ++i) {
    EXPECT_NEAR(fab.h()[i], lin.h()[i], 1e-12);
    EXPECT_NEAR(fab.v()[i], lin.v()[i], 1e-12);
  }
}

TEST(Modulate, Examples) {
  // |f|_2 = 10 -> target 5.
  const FlowField f(2, 1, {6.0, 0.0}, {0.0, 8.0});
  const FlowField half = modulate(f, {IntensityMode::L2Target, 5.0});
  EXPECT_NEAR(flow_norm(half, Norm::L2), 5.0, 5e-9);
  EXPECT_EQ(modulate(f, {IntensityMode::DeltaMultiplier, 1.0}), f);
  // Max-abs 2.0 -> linf target 0.1, factor 0.05.
  const FlowField g(2, 1, {-2.0, 1.0}, {0.5, 0.0});
  const FlowField small = modulate(g, {IntensityMode::LinfTarget, 0.1});
  EXPECT_NEAR(flow_norm(small, Norm::Linf), 0.1, 1e-15);
  EXPECT_NEAR(small.h_at(0, 1), 0.05, 1e-15);
}

TEST(Modulate, PreservesDirection) {
  const FlowField f = random_field(5, 5, 80);
  for (const IntensitySpec spec : {IntensitySpec{IntensityMode::L2Target, 600.0},
                                   IntensitySpec{IntensityMode::LinfTarget, 0.3},
                                   IntensitySpec{IntensityMode::DeltaMultiplier, 1.8}}) {
    const FlowField g = modulate(f, spec);
    double dot = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) dot += f.h()[i] * g.h()[i] + f.v()[i] * g.v()[i];
    EXPECT_NEAR(dot / (flow_norm(f, Norm::L2) * flow_norm(g, Norm::L2)), 1.0, 1e-12);
  }
}

TEST(Modulate, Errors) {
  EXPECT_ERROR_CODE(modulate(FlowField(3, 3), {IntensityMode::L2Target, 1.0}), ErrorCode::ZeroFlow);
  EXPECT_ERROR_CODE(modulate(FlowField(3, 3), {IntensityMode::LinfTarget, 1.0}), ErrorCode::ZeroFlow);
  EXPECT_NO_THROW(modulate(FlowField(3, 3), {IntensityMode::DeltaMultiplier, 2.0}));
  EXPECT_ERROR_CODE(modulate(random_field(3, 3, 1), {IntensityMode::L2Target, -1.0}), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(modulate(random_field(3, 3, 1), {IntensityMode::L2Target, NAN}), ErrorCode::InvalidArgument);
}

TEST(AssignProprietaryFlow, DeltaOneMatchesReconstruction) {
  const JointDictionary d = toy_dictionary();
  const Image y = random_image(6, 6, 81);
  const FlowField direct = reconstruct_flow(project(y, d), d);
  const FlowField assigned = assign_proprietary_flow(y, d, {IntensityMode::DeltaMultiplier, 1.0});
  for (std::size_t i = 0; i < direct.size(); ++i) {
    EXPECT_NEAR(assigned.h()[i], direct.h()[i], 1e-15);
    EXPECT_NEAR(assigned.v()[i], direct.v()[i], 1e-15);
  }
  const FlowField big = assign_proprietary_flow(y, d, {IntensityMode::L2Target, 200.0});
  EXPECT_NEAR(flow_norm(big, Norm::L2), 200.0, 200.0 * 1e-9);
}

TEST(Sweeps, Groups) {
  const std::pair<const char*, std::size_t> sizes[] = {{"l2-small", 5},   {"l2-medium", 11}, {"l2-large", 5},
                                                       {"linf-small", 5}, {"linf-medium", 11},
                                                       {"linf-large", 5}, {"delta", 10}};
  for (const auto& [name, n] : sizes) EXPECT_EQ(sweep_group(name).size(), n) << name;
  const auto l2 = sweep_group("l2-large");
  EXPECT_EQ(l2.front().value, 200.0);
  EXPECT_EQ(l2.back().value, 600.0);
  EXPECT_EQ(sweep_group("linf-small")[2].value, 0.3);
  EXPECT_EQ(sweep_group("delta").back().value, 2.0);
  EXPECT_ERROR_CODE(sweep_group("l3"), ErrorCode::ConfigError);
}

TEST(Sweeps, Parse) {
  const auto s = parse_sweep("l2-small,delta:1,linf:1:3:0.5");
  ASSERT_EQ(s.size(), 5u + 1u + 5u);
  EXPECT_EQ(s[5].mode, IntensityMode::DeltaMultiplier);
  EXPECT_EQ(s[5].value, 1.0);
  EXPECT_EQ(s.back().mode, IntensityMode::LinfTarget);
  EXPECT_EQ(s.back().value, 3.0);
  const auto all_l2 = parse_sweep("l2-small,l2-medium,l2-large");
  EXPECT_EQ(all_l2.size(), 5u + 11u + 4u);
  EXPECT_EQ(all_l2[15].value, 200.0);
  EXPECT_EQ(all_l2[16].value, 300.0);
  EXPECT_EQ(parse_sweep("linf-medium,linf-large").size(), 11u + 4u);
  EXPECT_EQ(parse_sweep("l2:3,l2:3,delta:3").size(), 2u);
  EXPECT_ERROR_CODE(parse_sweep("l2:5:1:1"), ErrorCode::ConfigError);
  EXPECT_ERROR_CODE(parse_sweep("foo:1"), ErrorCode::ConfigError);
  EXPECT_ERROR_CODE(parse_sweep(""), ErrorCode::ConfigError);
}

TEST(Sweeps, InclusiveGridIsExact) {
  const auto g = inclusive_grid(0.1, 0.5, 0.1);
  const std::vector<double> want{0.1, 0.2, 0.3, 0.4, 0.5};
  EXPECT_EQ(g, want);
  EXPECT_EQ(inclusive_grid(2.0, 10.0, 2.0).size(), 5u);
}
