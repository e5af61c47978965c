#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "morphkit/assign.hpp"
#include "morphkit/attack.hpp"
#include "morphkit/dictionary.hpp"
#include "morphkit/error.hpp"
#include "morphkit/fixture.hpp"
#include "morphkit/image_io.hpp"
#include "morphkit/oracle.hpp"
#include "morphkit/report.hpp"
#include "morphkit/rng.hpp"

namespace morphkit::cli {
namespace fs = std::filesystem;
namespace {

struct Context {
  const RunConfig& cfg;
  fs::path out;
  std::uint64_t seed;
  int jobs;

  fs::path data_dir() const { return input("paths.data", out / "data"); }
  fs::path model_path() const { return input("paths.model", out / "model.amfr"); }
  fs::path pairs_dir() const { return input("paths.pairs", out / "query"); }
  fs::path dictionary_path() const { return input("paths.dictionary", out / "dictionary.amdc"); }

  fs::path stage_dir(const char* name) const {
    fs::path dir = out / name;
    fs::create_directories(dir);
    write_text(dir / "config.txt", cfg.dump());
    return dir;
  }

  static void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) fail(ErrorCode::IoError, "write failed: " + path.string());
  }

 private:
  fs::path input(const char* key, fs::path fallback) const {
    const std::string& v = cfg.text(key);
    return v.empty() ? fallback : fs::path(v);
  }
};

void require(const fs::path& path, const char* what) {
  if (!fs::exists(path)) {
    fail(ErrorCode::MissingArtifact, std::string(what) + " not found at " + path.string());
  }
}

FixtureSpec fixture_spec(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  FixtureSpec spec;
  spec.seed = ctx.seed;
  spec.faces.identities = c.integer("faces.identities");
  spec.faces.samples_per_identity = c.integer("faces.samples_per_identity");
  spec.faces.width = c.integer("faces.width");
  spec.faces.height = c.integer("faces.height");
  spec.faces.texture_smoothness = c.real("faces.texture_smoothness");
  spec.faces.sample_noise = c.real("faces.sample_noise");
  spec.faces.identity_weight = c.real("faces.identity_weight");
  spec.faces.feature_weight = c.real("faces.feature_weight");
  spec.faces.feature_sigma = c.real("faces.feature_sigma");
  spec.train_samples = c.integer("faces.train_samples");
  spec.roi_margin = c.integer("faces.roi_margin");
  spec.open_identities = c.integer("faces.open_identities");
  spec.open_samples = c.integer("faces.open_samples");
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, e.what());
  }
  return spec;
}

Landmark landmark_of(const Context& ctx) {
  return {static_cast<int>(ctx.cfg.integer("faces.height") * 0.7), ctx.cfg.integer("faces.width") / 2};
}

RoiMask roi_of(const Context& ctx) {
  return RoiMask::inset(ctx.cfg.integer("faces.width"), ctx.cfg.integer("faces.height"),
                        ctx.cfg.integer("faces.roi_margin"));
}

FlowEstimatorConfig flow_config(const Context& ctx) {
  FlowEstimatorConfig f;
  f.smoothness_weight = ctx.cfg.real("flow.smoothness_weight");
  f.iterations = ctx.cfg.integer("flow.iterations");
  f.convergence_epsilon = ctx.cfg.real("flow.epsilon");
  return f;
}

DeformationSpec deformation_config(const Context& ctx) {
  DeformationSpec d;
  d.amplitude_max = ctx.cfg.real("deform.amplitude_max");
  d.sigma = ctx.cfg.real("deform.sigma");
  d.frames = ctx.cfg.integer("query.frames_per_seed");
  return d;
}

SweepOptions sweep_options(const Context& ctx) {
  SweepOptions o;
  o.gamma = ctx.cfg.real("attack.gamma");
  o.assign.add_mean = ctx.cfg.boolean("attack.add_mean");
  o.jobs = ctx.jobs;
  const std::string& window = ctx.cfg.text("metrics.ssim_window");
  if (window == "gaussian11") {
    o.ssim_window = SsimWindow::Gaussian11;
  } else if (window != "uniform8") {
    fail(ErrorCode::ConfigError, "metrics.ssim_window must be uniform8 or gaussian11");
  }
  return o;
}

std::uint64_t query_seed(const Context& ctx) { return derive_key(ctx.seed, "query"); }

/// What the PGM files hold, so that in-memory and on-disk images agree.
Image quantize(const Image& image) {
  std::vector<double> px(image.pixels().begin(), image.pixels().end());
  for (double& v : px) v = static_cast<double>(std::lround(v * 255.0)) / 255.0;
  return Image(image.width(), image.height(), std::move(px));
}

std::vector<LabeledImage> load_faces(const Context& ctx, std::string_view split) {
  const fs::path dir = ctx.data_dir();
  require(dir / "faces.csv", "face list");
  const CsvTable table = read_csv(dir / "faces.csv");
  const auto id = table.column("id");
  const auto label = table.column("label");
  const auto split_col = table.column("split");
  const auto file = table.column("file");
  std::vector<LabeledImage> out;
  for (const auto& row : table.rows) {
    if (!split.empty() && row[split_col] != split) continue;
    const fs::path path = dir / row[file];
    require(path, "face image");
    Image image = read_pgm(path);
    if (image.width() != ctx.cfg.integer("faces.width") ||
        image.height() != ctx.cfg.integer("faces.height")) {
      fail(ErrorCode::ConfigError, "face " + row[id] + " does not match faces.width/height");
    }
    out.push_back({row[id], std::stoi(row[label]), std::move(image)});
  }
  if (out.empty() && !split.empty()) {
    fail(ErrorCode::MissingArtifact, "no '" + std::string(split) + "' faces in " + dir.string());
  }
  return out;
}

ToyFrModel load_oracle(const Context& ctx) {
  require(ctx.model_path(), "oracle model");
  return load_model(ctx.model_path());
}

JointDictionary load_dict(const Context& ctx) {
  require(ctx.dictionary_path(), "dictionary");
  return load_dictionary(ctx.dictionary_path());
}

std::vector<IntensitySpec> sweep_of(const Context& ctx, const char* key) {
  return parse_sweep(ctx.cfg.text(key));
}

std::string file_label(const IntensitySpec& spec) {
  return std::string(to_string(spec.mode)) + "_" + format_number(spec.value);
}

// ---------------------------------------------------------------------------

void cmd_synth(const Context& ctx) {
  const Fixture fx = make_fixture(fixture_spec(ctx));
  const fs::path dir = ctx.stage_dir("data");
  fs::create_directories(dir / "faces");

  CsvTable faces{{"id", "label", "split", "file"}, {}};
  auto emit = [&](const std::vector<LabeledImage>& images, const char* split) {
    for (const auto& li : images) {
      const std::string file = "faces/" + li.id + ".pgm";
      write_pgm(dir / file, li.image);
      faces.rows.push_back({li.id, std::to_string(li.label), split, file});
    }
  };
  emit(fx.train, "train");
  emit(fx.targets, "target");
  emit(fx.gallery, "gallery");
  emit(fx.probes, "probe");
  write_csv(dir / "faces.csv", faces);

  // One smile-like sequence per closed-set identity, from its first sample.
  DeformationSpec base = deformation_config(ctx);
  CsvTable manifest{{"identity", "label", "frame", "amplitude", "image", "flow"}, {}};
  for (std::size_t k = 0; k < fx.closed.samples.size(); ++k) {
    const int label = fx.closed.label_of(k);
    const std::string seed_id = "id" + std::to_string(label) + "_s0";
    const DeformationSpec spec = deformation_for(base, query_seed(ctx), seed_id, fx.landmark);
    const auto frames = generate_sequence(quantize(fx.closed.samples[k][0]), spec);
    const std::string sub = "id_" + std::to_string(label);
    fs::create_directories(dir / sub);
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const std::string stem = sub + "/frame_" + std::to_string(t);
      write_pgm(dir / (stem + ".pgm"), frames[t].image);
      write_flow(dir / (stem + ".amfl"), frames[t].flow);
      const double amplitude = spec.amplitude_max * static_cast<double>(t) / spec.frames;
      manifest.rows.push_back({seed_id, std::to_string(label), std::to_string(t),
                               format_number(amplitude), stem + ".pgm", stem + ".amfl"});
    }
  }
  write_csv(dir / "manifest.csv", manifest);
  std::printf("synth: %zu faces, %zu sequence frames -> %s\n", faces.rows.size(),
              manifest.rows.size(), dir.string().c_str());
}

void cmd_train_oracle(const Context& ctx, const char* dim_key, const char* temp_key,
                      const fs::path& path) {
  const auto train = load_faces(ctx, "train");
  const ToyFrModel model = train_toy(train, ctx.cfg.integer(dim_key), ctx.cfg.real(temp_key));
  save_model(model, path);
  std::printf("train-oracle: %zu images, %zu identities, d=%d -> %s\n", train.size(),
              model.labels().size(), model.dim(), path.string().c_str());
}

void cmd_query(const Context& ctx) {
  const auto seeds = load_faces(ctx, "train");
  const ToyFrModel model = load_oracle(ctx);
  QueryStageConfig qcfg;
  qcfg.gamma = ctx.cfg.real("query.gamma");
  qcfg.max_queries_per_seed = ctx.cfg.integer("query.max_queries_per_seed");
  qcfg.frames_per_seed = ctx.cfg.integer("query.frames_per_seed");
  qcfg.use_morphed_image = ctx.cfg.boolean("query.use_morphed_image");

  const QueryStageResult res = run_query_stage(seeds, landmark_of(ctx), roi_of(ctx), model,
                                               flow_config(ctx), deformation_config(ctx), qcfg,
                                               query_seed(ctx), ctx.jobs);
  const fs::path dir = ctx.stage_dir("query");
  fs::create_directories(dir / "pairs");
  CsvTable pairs{{"pair_id", "image_id", "frame", "flow", "l2", "linf"}, {}};
  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    const std::string& pid = res.pair_ids[i];
    const auto cut = pid.rfind("_f");
    const std::string file = "pairs/" + pid + ".amfl";
    write_flow(dir / file, res.pairs[i].flow);
    pairs.rows.push_back({pid, pid.substr(0, cut), pid.substr(cut + 2), file,
                          format_number(flow_norm(res.pairs[i].flow, Norm::L2)),
                          format_number(flow_norm(res.pairs[i].flow, Norm::Linf))});
  }
  write_csv(dir / "pairs.csv", pairs);
  write_csv(dir / "run_log.csv", run_log_table(std::span<const QueryAttempt>(res.attempts)));

  std::string summary = "seeds " + std::to_string(seeds.size()) + "\nattempts " +
                        std::to_string(res.attempts.size()) + "\npairs " +
                        std::to_string(res.pairs.size()) + "\nqueries " +
                        std::to_string(res.queries_used) + "\nbudget_exhausted " +
                        std::to_string(res.budget_exhausted.size()) + "\n";
  Context::write_text(dir / "summary.txt", summary);
  std::printf("query: %zu pairs from %zu attempts\n", res.pairs.size(), res.attempts.size());
}

void cmd_learn(const Context& ctx) {
  const fs::path pairs_dir = ctx.pairs_dir();
  require(pairs_dir / "pairs.csv", "query pairs");
  const CsvTable table = read_csv(pairs_dir / "pairs.csv");
  if (table.rows.size() < 2) {
    fail(ErrorCode::ConfigError, "learn needs at least two training pairs, found " +
                                     std::to_string(table.rows.size()));
  }
  std::map<std::string, Image> faces;
  for (auto& li : load_faces(ctx, "")) faces.emplace(li.id, std::move(li.image));

  const auto image_col = table.column("image_id");
  const auto flow_col = table.column("flow");
  std::vector<TrainingPair> pairs;
  for (const auto& row : table.rows) {
    const auto it = faces.find(row[image_col]);
    if (it == faces.end()) fail(ErrorCode::MissingArtifact, "no face for pair image " + row[image_col]);
    require(pairs_dir / row[flow_col], "pair flow");
    pairs.push_back({it->second, read_flow(pairs_dir / row[flow_col])});
  }

  const LearnResult res =
      learn_dictionary(assemble_matrix(pairs, roi_of(ctx)), ctx.cfg.integer("learn.k"));
  const fs::path dir = ctx.stage_dir("learn");
  fs::path dict_path = ctx.out / "dictionary.amdc";
  save_dictionary(res.dictionary, dict_path);

  CsvTable spectrum{{"index", "eigenvalue", "cumulative_energy"}, {}};
  double total = 0.0;
  for (double e : res.spectrum) total += std::max(e, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < res.spectrum.size(); ++i) {
    acc += std::max(res.spectrum[i], 0.0);
    spectrum.rows.push_back({std::to_string(i + 1), format_number(res.spectrum[i]),
                             format_number(total > 0.0 ? acc / total : 0.0)});
  }
  write_csv(dir / "spectrum.csv", spectrum);
  Context::write_text(dir / "summary.txt",
                      "pairs " + std::to_string(pairs.size()) + "\nk " +
                          std::to_string(res.dictionary.k) + "\nrank_deficient " +
                          (res.rank_deficient ? "1" : "0") + "\n");
  std::printf("learn: %zu pairs, k=%d -> %s\n", pairs.size(), res.dictionary.k,
              dict_path.string().c_str());
}

void cmd_attack(const Context& ctx) {
  const auto targets = load_faces(ctx, "target");
  const ToyFrModel model = load_oracle(ctx);
  const JointDictionary dict = load_dict(ctx);
  const auto sweep = sweep_of(ctx, "attack.sweep");
  const SweepOptions options = sweep_options(ctx);

  const double unmorphed = unmorphed_success_rate(targets, model, options.gamma);
  const SweepResult res = run_attack_sweep(targets, dict, model, sweep, options);

  std::vector<SweepRow> rows;
  rows.push_back({{IntensityMode::DeltaMultiplier, 0.0}, unmorphed, targets.size()});
  rows.insert(rows.end(), res.rows.begin(), res.rows.end());

  const fs::path dir = ctx.stage_dir("attack");
  write_csv(dir / "run_log.csv", run_log_table(std::span<const AttackRecord>(res.records)));
  write_csv(dir / "sweep.csv", sweep_table(rows));
  std::printf("attack: %zu targets x %zu intensities, unmorphed success %.4f\n", targets.size(),
              sweep.size(), unmorphed);
}

void cmd_baseline(const Context& ctx) {
  const auto targets = load_faces(ctx, "target");
  const ToyFrModel model = load_oracle(ctx);
  const JointDictionary dict = load_dict(ctx);
  const auto sweep = sweep_of(ctx, "baseline.sweep");
  std::vector<BaselineSpec> kinds;
  {
    const std::string& text = ctx.cfg.text("baseline.kinds");
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find(',', pos), text.size());
      kinds.push_back(parse_baseline(std::string_view(text).substr(pos, end - pos)));
      pos = end + 1;
    }
  }
  const auto records =
      run_baseline_comparison(targets, dict, model, sweep, kinds, ctx.seed, sweep_options(ctx));

  std::vector<SimilarityRecord> proprietary;
  std::vector<std::string> order{"proprietary"};
  for (const auto& k : kinds) order.push_back(k.name());
  std::map<std::string, std::pair<std::size_t, std::size_t>> roo;
  for (const auto& r : records) {
    if (r.field_kind == "proprietary") proprietary.push_back(r.similarity);
    if (r.similarity.ssim >= kSsimRooFloor) {
      auto& [hits, n] = roo[r.field_kind];
      hits += r.similarity.success ? 1 : 0;
      ++n;
    }
  }
  const auto ssim_edges = default_ssim_edges();
  const auto ncs_edges = default_ncs_edges();
  const std::vector<BinReport> bins{
      bin_by_similarity(proprietary, SimilarityMetric::Ssim, ssim_edges, kSsimRooFloor),
      bin_by_similarity(proprietary, SimilarityMetric::Ncs, ncs_edges, kNcsRooFloor)};

  CsvTable roo_table{{"field_kind", "success_rate", "n"}, {}};
  for (const auto& kind : order) {
    const auto [hits, n] = roo[kind];
    roo_table.rows.push_back({kind, n ? format_number(static_cast<double>(hits) / n) : "",
                              std::to_string(n)});
  }

  const fs::path dir = ctx.stage_dir("baseline");
  write_csv(dir / "comparison.csv", comparison_table(records));
  write_csv(dir / "bins.csv", bins_table(bins));
  write_csv(dir / "roo.csv", roo_table);
  std::printf("baseline: %zu records over %zu field kinds\n", records.size(), order.size());
}

void cmd_transfer(const Context& ctx) {
  const auto train = load_faces(ctx, "train");
  const auto targets = load_faces(ctx, "target");
  const ToyFrModel model_a = load_oracle(ctx);
  const JointDictionary dict = load_dict(ctx);
  const ToyFrModel model_b =
      train_toy(train, ctx.cfg.integer("transfer.dim"), ctx.cfg.real("transfer.temperature"));
  const auto sweep = sweep_of(ctx, "transfer.sweep");
  SweepOptions options = sweep_options(ctx);
  options.retain_artifacts = true;
  options.compute_similarity = false;
  const SweepResult res = run_attack_sweep(targets, dict, model_a, sweep, options);

  const fs::path dir = ctx.stage_dir("transfer");
  save_model(model_b, dir / "model_b.amfr");
  CsvTable table{{"mode", "value", "replayed", "transfer_rate"}, {}};
  for (std::size_t s = 0; s < sweep.size(); ++s) {
    const std::span<const AttackRecord> block(res.records.data() + s * targets.size(), targets.size());
    std::string rate;
    std::size_t replayed = 0;
    try {
      const TransferResult tr = run_transferability(block, model_b, options.gamma);
      rate = format_number(tr.rate);
      replayed = tr.replayed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyRecordSet) throw;
    }
    table.rows.push_back({std::string(to_string(sweep[s].mode)), format_number(sweep[s].value),
                          std::to_string(replayed), rate});
  }
  const TransferResult all = run_transferability(res.records, model_b, options.gamma);
  table.rows.push_back({"all", "", std::to_string(all.replayed), format_number(all.rate)});
  write_csv(dir / "transfer.csv", table);
  std::printf("transfer: %zu replayed, rate %.4f\n", all.replayed, all.rate);
}

void cmd_open_set(const Context& ctx) {
  const auto gallery = load_faces(ctx, "gallery");
  const auto probes = load_faces(ctx, "probe");
  const ToyFrModel model = load_oracle(ctx);
  const JointDictionary dict = load_dict(ctx);
  const auto sweep = sweep_of(ctx, "open_set.sweep");
  const OpenSetResult res = run_open_set_attack(gallery, probes, dict, model, sweep, sweep_options(ctx));
  const fs::path dir = ctx.stage_dir("open_set");
  write_csv(dir / "scores.csv", open_set_table(res));
  std::printf("open-set: %zu probes x %zu gallery, %zu intensities\n", probes.size(), gallery.size(),
              res.intensities.size());
}

void cmd_eval(const Context& ctx) {
  const fs::path sweep_path = ctx.out / "attack" / "sweep.csv";
  const fs::path scores_path = ctx.out / "open_set" / "scores.csv";
  const bool have_sweep = fs::exists(sweep_path);
  const bool have_scores = fs::exists(scores_path);
  if (!have_sweep && !have_scores) {
    fail(ErrorCode::MissingArtifact, "eval needs " + sweep_path.string() + " or " + scores_path.string());
  }
  const fs::path dir = ctx.stage_dir("eval");

  std::vector<SweepRow> rows;
  if (have_sweep) {
    rows = sweep_rows(read_csv(sweep_path));
    write_csv(dir / "sweep.csv", sweep_table(rows));
  }
  std::vector<IntensitySpec> intensities;
  std::vector<RocSummary> summaries;
  if (have_scores) {
    const OpenSetResult scores = open_set_result(read_csv(scores_path));
    const double far = ctx.cfg.real("eval.far");
    fs::create_directories(dir / "roc");
    for (std::size_t i = 0; i < scores.intensities.size(); ++i) {
      summaries.push_back(roc(scores.scores[i], far));
      write_csv(dir / "roc" / (file_label(scores.intensities[i]) + ".csv"),
                roc_curve_table(summaries.back()));
    }
    intensities = scores.intensities;
    write_csv(dir / "verification.csv", verification_table(intensities, summaries));
    write_csv(dir / "roc_curve.csv", roc_curve_table(summaries.back()));
  }
  Context::write_text(dir / "summary.txt", summary_text(rows, intensities, summaries, ctx.cfg.boolean("eval.percent")));
  std::printf("eval: %zu sweep rows, %zu verification rows -> %s\n", rows.size(),
              intensities.size(), dir.string().c_str());
}

}  // namespace

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names{"synth",    "train-oracle", "query",
                                                   "learn",    "attack",       "eval",
                                                   "baseline", "transfer",     "open-set"};
  return names;
}

std::string_view command_help(std::string_view name) {
  static const std::map<std::string_view, std::string_view> help{
      {"synth", "Generate the seeded face population and deformation sequences"},
      {"train-oracle", "Train the toy recognizer on the training faces"},
      {"query", "Collect successful (face, flow) pairs from deformation sequences"},
      {"learn", "Learn the joint image/flow dictionary from collected pairs"},
      {"attack", "Sweep attack intensities over the target faces"},
      {"eval", "Render sweep, ROC and verification reports"},
      {"baseline", "Compare proprietary fields with permuted and random fields"},
      {"transfer", "Replay successful attacks against a second recognizer"},
      {"open-set", "Score morphed probes against an unseen-identity gallery"},
  };
  return help.at(name);
}

void run_command(std::string_view name, const RunConfig& config) {
  const int jobs = config.integer("run.jobs");
  if (jobs < 1) fail(ErrorCode::ConfigError, "run.jobs must be >= 1");
  const Context ctx{config, fs::path(config.text("run.out")), config.u64("run.seed"), jobs};
  fs::create_directories(ctx.out);

  if (name == "synth") return cmd_synth(ctx);
  if (name == "train-oracle") {
    return cmd_train_oracle(ctx, "oracle.dim", "oracle.temperature", ctx.out / "model.amfr");
  }
  if (name == "query") return cmd_query(ctx);
  if (name == "learn") return cmd_learn(ctx);
  if (name == "attack") return cmd_attack(ctx);
  if (name == "eval") return cmd_eval(ctx);
  if (name == "baseline") return cmd_baseline(ctx);
  if (name == "transfer") return cmd_transfer(ctx);
  if (name == "open-set") return cmd_open_set(ctx);
  fail(ErrorCode::ConfigError, "unknown command '" + std::string(name) + "'");
}

}  // namespace morphkit::cli
