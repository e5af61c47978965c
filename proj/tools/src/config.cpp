#include "config.hpp"

#include <charconv>
#include <fstream>

#include "morphkit/error.hpp"

namespace morphkit::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_as(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::ConfigError, std::string(key) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

RunConfig::RunConfig()
    : values_{
          {"run.seed", "0"},
          {"run.jobs", "1"},
          {"run.out", "out"},
          {"paths.data", ""},
          {"paths.model", ""},
          {"paths.pairs", ""},
          {"paths.dictionary", ""},
          {"faces.identities", "20"},
          {"faces.samples_per_identity", "6"},
          {"faces.train_samples", "4"},
          {"faces.width", "32"},
          {"faces.height", "32"},
          {"faces.texture_smoothness", "2"},
          {"faces.sample_noise", "0.02"},
          {"faces.identity_weight", "0.1"},
          {"faces.feature_weight", "0.5"},
          {"faces.feature_sigma", "6"},
          {"faces.roi_margin", "2"},
          {"faces.open_identities", "10"},
          {"faces.open_samples", "4"},
          {"deform.amplitude_max", "2"},
          {"deform.sigma", "5"},
          {"flow.smoothness_weight", "0.001"},
          {"flow.iterations", "200"},
          {"flow.epsilon", "0.0001"},
          {"oracle.dim", "8"},
          {"oracle.temperature", "0.2"},
          {"query.gamma", "0.6"},
          {"query.max_queries_per_seed", "50"},
          {"query.frames_per_seed", "10"},
          {"query.use_morphed_image", "false"},
          {"learn.k", "0"},
          {"attack.gamma", "0.6"},
          {"attack.add_mean", "true"},
          {"attack.sweep", "l2-small,l2-medium,l2-large,linf-small,linf-medium,linf-large,delta"},
          {"baseline.kinds", "intra,inter,uniform:-2:1"},
          {"baseline.sweep", "l2:2:10:2,l2:15:30:5"},
          {"open_set.sweep", "l2-small,l2-large"},
          {"transfer.dim", "12"},
          {"transfer.temperature", "0.2"},
          {"transfer.sweep", "l2-small,l2-large"},
          {"eval.far", "0.001"},
          {"eval.percent", "true"},
          {"metrics.ssim_window", "uniform8"},
      } {}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot read config " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::ConfigError,
           path.string() + ":" + std::to_string(number) + ": expected 'section.key = value'");
    }
    set(trim(body.substr(0, eq)), std::string(trim(body.substr(eq + 1))));
  }
}

void RunConfig::set(std::string_view key, std::string value) {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::ConfigError, "unknown config key '" + std::string(key) + "'");
  it->second = std::move(value);
}

void RunConfig::assign(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    fail(ErrorCode::ConfigError, "expected key=value, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), std::string(trim(assignment.substr(eq + 1))));
}

const std::string& RunConfig::text(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::ConfigError, "unknown config key '" + std::string(key) + "'");
  return it->second;
}

double RunConfig::real(std::string_view key) const { return parse_as<double>(key, text(key)); }

int RunConfig::integer(std::string_view key) const { return parse_as<int>(key, text(key)); }

std::uint64_t RunConfig::u64(std::string_view key) const {
  return parse_as<std::uint64_t>(key, text(key));
}

bool RunConfig::boolean(std::string_view key) const {
  const std::string& v = text(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorCode::ConfigError, std::string(key) + ": expected true or false, got '" + v + "'");
}

std::string RunConfig::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    if (k == "run.jobs" || k == "run.out") continue;
    out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace morphkit::cli
