#include "morphkit/attack.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "morphkit/error.hpp"
#include "morphkit/parallel.hpp"
#include "morphkit/rng.hpp"

namespace morphkit {
namespace {

void shuffle(std::vector<double>& values, CounterRng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

struct SeedOutcome {
  std::vector<TrainingPair> pairs;
  std::vector<std::string> pair_ids;
  std::vector<QueryAttempt> attempts;
  bool exhausted = false;
  std::uint64_t queries = 0;
};

}  // namespace

bool is_success(const OracleVerdict& verdict, int true_label, double gamma) {
  return verdict.label != true_label || verdict.confidence < gamma;
}

void QueryStageConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0) || max_queries_per_seed < 1 || frames_per_seed < 2) {
    fail(ErrorCode::InvalidArgument,
         "query stage needs 0 < gamma < 1, max_queries_per_seed >= 1, frames_per_seed >= 2");
  }
}

QueryStageResult run_query_stage(std::span<const LabeledImage> seeds, const Landmark& landmark,
                                 const RoiMask& roi, const Oracle& oracle,
                                 const FlowEstimatorConfig& flow_cfg,
                                 const DeformationSpec& deformation, const QueryStageConfig& cfg,
                                 std::uint64_t run_seed, int jobs) {
  cfg.validate();
  flow_cfg.validate();
  std::vector<SeedOutcome> outcomes(seeds.size());

  parallel_for(seeds.size(), jobs, [&](std::size_t s) {
    const LabeledImage& seed = seeds[s];
    SeedOutcome& out = outcomes[s];
    DeformationSpec spec = deformation_for(deformation, run_seed, seed.id, landmark);
    spec.frames = cfg.frames_per_seed;
    const auto sequence = generate_sequence(seed.image, spec);

    FlowField cumulative(seed.image.width(), seed.image.height());
    for (int t = 1; t <= spec.frames; ++t) {
      if (out.queries >= static_cast<std::uint64_t>(cfg.max_queries_per_seed)) {
        out.exhausted = true;
        break;
      }
      cumulative = flow_add(cumulative, estimate_flow(sequence[t - 1].image, sequence[t].image, flow_cfg));
      FlowField applied = crop_roi(cumulative, roi);
      Image morphed = morph(seed.image, applied);
      const OracleVerdict verdict = oracle.classify(morphed);
      ++out.queries;

      QueryAttempt attempt{seed.id, t, seed.label, verdict, is_success(verdict, seed.label, cfg.gamma),
                           flow_norm(applied, Norm::L2), flow_norm(applied, Norm::Linf)};
      if (attempt.success) {
        out.pair_ids.push_back(seed.id + "_f" + std::to_string(t));
        out.pairs.push_back({cfg.use_morphed_image ? std::move(morphed) : seed.image, std::move(applied)});
      }
      out.attempts.push_back(std::move(attempt));
    }
  });

  QueryStageResult result;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    auto& o = outcomes[s];
    std::move(o.pairs.begin(), o.pairs.end(), std::back_inserter(result.pairs));
    std::move(o.pair_ids.begin(), o.pair_ids.end(), std::back_inserter(result.pair_ids));
    std::move(o.attempts.begin(), o.attempts.end(), std::back_inserter(result.attempts));
    if (o.exhausted) result.budget_exhausted.push_back(seeds[s].id);
    result.queries_used += o.queries;
  }
  return result;
}

SweepResult run_attack_sweep(std::span<const LabeledImage> targets, const JointDictionary& dictionary,
                             const Oracle& oracle, std::span<const IntensitySpec> sweep,
                             const SweepOptions& options) {
  SweepResult result;
  result.records.resize(sweep.size() * targets.size());

  // Projection and reconstruction do not depend on the intensity.
  std::vector<std::optional<FlowField>> raw(targets.size());
  parallel_for(targets.size(), options.jobs, [&](std::size_t t) {
    raw[t] = reconstruct_flow(project(targets[t].image, dictionary), dictionary, options.assign);
  });

  parallel_for(result.records.size(), options.jobs, [&](std::size_t idx) {
    const std::size_t s = idx / targets.size();
    const std::size_t t = idx % targets.size();
    const LabeledImage& target = targets[t];
    AttackRecord& rec = result.records[idx];
    rec.image_id = target.id;
    rec.intensity = sweep[s];
    rec.label_true = target.label;

    FlowField flow;
    try {
      flow = modulate(*raw[t], sweep[s]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroFlow) throw;
      rec.skipped = true;
      return;
    }
    Image morphed = morph(target.image, flow);
    rec.verdict = oracle.classify(morphed);
    rec.queries_used = 1;
    rec.success = is_success(rec.verdict, target.label, options.gamma);
    rec.l2 = flow_norm(flow, Norm::L2);
    rec.linf = flow_norm(flow, Norm::Linf);
    if (options.compute_similarity) {
      rec.ssim = ssim(target.image, morphed, options.ssim_window);
      rec.ncs = ncs(target.image, morphed);
    }
    if (options.retain_artifacts) {
      rec.flow = std::move(flow);
      rec.morphed = std::move(morphed);
    }
  });

  for (std::size_t s = 0; s < sweep.size(); ++s) {
    const std::span<const AttackRecord> block(result.records.data() + s * targets.size(), targets.size());
    result.rows.push_back({sweep[s], block.empty() ? 0.0 : success_rate(block), block.size()});
  }
  for (const auto& rec : result.records) result.queries_used += rec.queries_used;
  return result;
}

double success_rate(std::span<const AttackRecord> records) {
  if (records.empty()) fail(ErrorCode::EmptyRecordSet, "success_rate of an empty record set");
  const auto hits = std::count_if(records.begin(), records.end(),
                                  [](const AttackRecord& r) { return r.success; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double unmorphed_success_rate(std::span<const LabeledImage> targets, const Oracle& oracle,
                              double gamma) {
  if (targets.empty()) fail(ErrorCode::EmptyRecordSet, "no targets");
  std::size_t hits = 0;
  for (const auto& t : targets) {
    if (is_success(oracle.classify(t.image), t.label, gamma)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(targets.size());
}

TransferResult run_transferability(std::span<const AttackRecord> records, const Oracle& other,
                                   double gamma) {
  TransferResult out;
  std::size_t hits = 0;
  for (const auto& rec : records) {
    if (!rec.success || !rec.morphed) continue;
    const OracleVerdict v = other.classify(*rec.morphed);
    out.verdicts.push_back(v);
    if (is_success(v, rec.label_true, gamma)) ++hits;
  }
  out.replayed = out.verdicts.size();
  if (out.replayed == 0) {
    fail(ErrorCode::EmptyRecordSet, "no retained successful attacks to replay");
  }
  out.rate = static_cast<double>(hits) / static_cast<double>(out.replayed);
  return out;
}

std::string BaselineSpec::name() const {
  char buf[64];
  switch (kind) {
    case BaselineKind::IntraChannel: return "intra";
    case BaselineKind::InterChannel: return "inter";
    case BaselineKind::RandomNormal: return "normal(0,1)";
    case BaselineKind::RandomUniform:
      std::snprintf(buf, sizeof buf, "uniform(%g,%g)", lo, hi);
      return buf;
  }
  return "?";
}

BaselineSpec parse_baseline(std::string_view text) {
  if (text == "intra") return {BaselineKind::IntraChannel};
  if (text == "inter") return {BaselineKind::InterChannel};
  if (text == "normal") return {BaselineKind::RandomNormal};
  if (text.starts_with("uniform:")) {
    double lo = 0.0, hi = 0.0;
    const std::string s(text);
    if (std::sscanf(s.c_str(), "uniform:%lf:%lf", &lo, &hi) == 2 && lo < hi) {
      return {BaselineKind::RandomUniform, lo, hi};
    }
  }
  fail(ErrorCode::ConfigError, "unknown baseline '" + std::string(text) + "'");
}

std::uint64_t baseline_key(std::uint64_t run_seed, std::string_view image_id) {
  return derive_key(derive_key(run_seed, "baseline"), image_id);
}

FlowField baseline_field(const FlowField& proprietary, const BaselineSpec& spec, std::uint64_t key) {
  CounterRng rng(key);
  std::vector<double> h(proprietary.h().begin(), proprietary.h().end());
  std::vector<double> v(proprietary.v().begin(), proprietary.v().end());
  const std::size_t n = h.size();
  switch (spec.kind) {
    case BaselineKind::IntraChannel:
      shuffle(h, rng);
      shuffle(v, rng);
      break;
    case BaselineKind::InterChannel: {
      std::vector<double> pooled = h;
      pooled.insert(pooled.end(), v.begin(), v.end());
      shuffle(pooled, rng);
      std::copy(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(n), h.begin());
      std::copy(pooled.begin() + static_cast<std::ptrdiff_t>(n), pooled.end(), v.begin());
      break;
    }
    case BaselineKind::RandomUniform:
      for (double& x : h) x = rng.uniform(spec.lo, spec.hi);
      for (double& x : v) x = rng.uniform(spec.lo, spec.hi);
      break;
    case BaselineKind::RandomNormal:
      for (double& x : h) x = rng.normal();
      for (double& x : v) x = rng.normal();
      break;
  }
  return FlowField(proprietary.width(), proprietary.height(), std::move(h), std::move(v));
}

std::vector<ComparisonRecord> run_baseline_comparison(
    std::span<const LabeledImage> targets, const JointDictionary& dictionary, const Oracle& oracle,
    std::span<const IntensitySpec> sweep, std::span<const BaselineSpec> baselines,
    std::uint64_t run_seed, const SweepOptions& options) {
  const std::size_t kinds = baselines.size() + 1;
  std::vector<std::optional<FlowField>> raw(targets.size());
  parallel_for(targets.size(), options.jobs, [&](std::size_t t) {
    raw[t] = reconstruct_flow(project(targets[t].image, dictionary), dictionary, options.assign);
  });

  std::vector<std::optional<ComparisonRecord>> slots(targets.size() * sweep.size() * kinds);
  parallel_for(slots.size(), options.jobs, [&](std::size_t idx) {
    const std::size_t k = idx % kinds;
    const std::size_t s = (idx / kinds) % sweep.size();
    const std::size_t t = idx / (kinds * sweep.size());
    const LabeledImage& target = targets[t];
    const std::uint64_t key =
        derive_key(baseline_key(run_seed, target.id), static_cast<std::uint64_t>(s) * 131 + k);

    FlowField field;
    try {
      if (k == 0) {
        field = modulate(*raw[t], sweep[s]);
      } else {
        const BaselineSpec& b = baselines[k - 1];
        if (b.kind == BaselineKind::IntraChannel || b.kind == BaselineKind::InterChannel) {
          field = baseline_field(modulate(*raw[t], sweep[s]), b, key);
        } else {
          field = modulate(crop_roi(baseline_field(*raw[t], b, key), dictionary.roi), sweep[s]);
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroFlow) throw;
      return;
    }
    const Image morphed = morph(target.image, field);
    const OracleVerdict verdict = oracle.classify(morphed);
    ComparisonRecord rec;
    rec.field_kind = k == 0 ? "proprietary" : baselines[k - 1].name();
    rec.image_id = target.id;
    rec.intensity = sweep[s];
    rec.similarity = {ssim(target.image, morphed, options.ssim_window), ncs(target.image, morphed),
                      is_success(verdict, target.label, options.gamma)};
    rec.l2 = flow_norm(field, Norm::L2);
    rec.linf = flow_norm(field, Norm::Linf);
    slots[idx] = std::move(rec);
  });

  std::vector<ComparisonRecord> out;
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

OpenSetResult run_open_set_attack(std::span<const LabeledImage> gallery,
                                  std::span<const LabeledImage> probes,
                                  const JointDictionary& dictionary, const Oracle& embedder,
                                  std::span<const IntensitySpec> sweep,
                                  const SweepOptions& options) {
  if (gallery.empty() || probes.empty()) fail(ErrorCode::EmptyScores, "open-set needs gallery and probes");
  std::vector<Embedding> gallery_emb(gallery.size());
  parallel_for(gallery.size(), options.jobs,
               [&](std::size_t g) { gallery_emb[g] = embedder.embed(gallery[g].image); });

  std::vector<FlowField> raw(probes.size());
  parallel_for(probes.size(), options.jobs, [&](std::size_t p) {
    raw[p] = reconstruct_flow(project(probes[p].image, dictionary), dictionary, options.assign);
  });

  OpenSetResult result;
  result.intensities.push_back({IntensityMode::DeltaMultiplier, 0.0});
  result.intensities.insert(result.intensities.end(), sweep.begin(), sweep.end());

  for (std::size_t s = 0; s < result.intensities.size(); ++s) {
    std::vector<Embedding> probe_emb(probes.size());
    parallel_for(probes.size(), options.jobs, [&](std::size_t p) {
      const FlowField flow = s == 0 ? flow_scale(raw[p], 0.0) : modulate(raw[p], result.intensities[s]);
      probe_emb[p] = embedder.embed(morph(probes[p].image, flow));
    });
    ScoreSet scores;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      for (std::size_t g = 0; g < gallery.size(); ++g) {
        const double score = cosine(probe_emb[p], gallery_emb[g]);
        (gallery[g].label == probes[p].label ? scores.genuine : scores.impostor).push_back(score);
      }
    }
    result.scores.push_back(std::move(scores));
  }
  return result;
}

}  // namespace morphkit
