#include "morphkit/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>

#include "morphkit/error.hpp"

namespace morphkit {
namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::FormatError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(',', pos);
    cells.emplace_back(line.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return cells;
}

std::string fixed(double x, bool percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, percent ? "%.2f" : "%.4f", percent ? 100.0 * x : x);
  return buf;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "unformattable number");
  return std::string(buf, ptr);
}

std::string intensity_label(const IntensitySpec& spec) {
  return std::string(to_string(spec.mode)) + ":" + format_number(spec.value);
}

IntensitySpec parse_intensity_label(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorCode::FormatError, "bad intensity label '" + std::string(text) + "'");
  }
  return {parse_intensity_mode(text.substr(0, colon)), parse_number(text.substr(colon + 1))};
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorCode::FormatError, "missing CSV column '" + std::string(name) + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  if (!out) fail(ErrorCode::IoError, "write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::FormatError, "empty CSV " + path.string());
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.find('"') != std::string::npos) {
      fail(ErrorCode::FormatError, "quoted cells are not supported: " + path.string());
    }
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      fail(ErrorCode::FormatError, "ragged row in " + path.string());
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

namespace {
const std::vector<std::string> kRunLogHeader = {"image_id", "mode",       "value",      "l2",
                                                "linf",     "label_true", "label_pred", "confidence",
                                                "success",  "queries"};
}

CsvTable run_log_table(std::span<const QueryAttempt> attempts) {
  CsvTable t{kRunLogHeader, {}};
  for (const auto& a : attempts) {
    t.rows.push_back({a.image_id, "query", std::to_string(a.frame), format_number(a.l2),
                      format_number(a.linf), std::to_string(a.label_true),
                      std::to_string(a.verdict.label), format_number(a.verdict.confidence),
                      a.success ? "1" : "0", "1"});
  }
  return t;
}

CsvTable run_log_table(std::span<const AttackRecord> records) {
  CsvTable t{kRunLogHeader, {}};
  for (const auto& r : records) {
    t.rows.push_back({r.image_id, std::string(to_string(r.intensity.mode)),
                      format_number(r.intensity.value), format_number(r.l2), format_number(r.linf),
                      std::to_string(r.label_true), r.skipped ? "" : std::to_string(r.verdict.label),
                      r.skipped ? "" : format_number(r.verdict.confidence), r.success ? "1" : "0",
                      std::to_string(r.queries_used)});
  }
  return t;
}

CsvTable sweep_table(std::span<const SweepRow> rows) {
  CsvTable t{{"mode", "value", "success_rate", "n"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::string(to_string(r.intensity.mode)), format_number(r.intensity.value),
                      format_number(r.success_rate), std::to_string(r.n)});
  }
  return t;
}

std::vector<SweepRow> sweep_rows(const CsvTable& table) {
  const auto mode = table.column("mode");
  const auto value = table.column("value");
  const auto rate = table.column("success_rate");
  const auto n = table.column("n");
  std::vector<SweepRow> out;
  for (const auto& row : table.rows) {
    out.push_back({{parse_intensity_mode(row[mode]), parse_number(row[value])},
                   parse_number(row[rate]),
                   static_cast<std::size_t>(parse_number(row[n]))});
  }
  return out;
}

CsvTable open_set_table(const OpenSetResult& result) {
  CsvTable t{{"intensity", "pair_type", "score"}, {}};
  for (std::size_t i = 0; i < result.intensities.size(); ++i) {
    const std::string label = intensity_label(result.intensities[i]);
    for (double s : result.scores[i].genuine) t.rows.push_back({label, "genuine", format_number(s)});
    for (double s : result.scores[i].impostor) t.rows.push_back({label, "impostor", format_number(s)});
  }
  return t;
}

OpenSetResult open_set_result(const CsvTable& table) {
  const auto intensity = table.column("intensity");
  const auto pair_type = table.column("pair_type");
  const auto score = table.column("score");
  OpenSetResult out;
  std::map<std::string, std::size_t> index;
  for (const auto& row : table.rows) {
    auto [it, inserted] = index.try_emplace(row[intensity], out.intensities.size());
    if (inserted) {
      out.intensities.push_back(parse_intensity_label(row[intensity]));
      out.scores.emplace_back();
    }
    ScoreSet& set = out.scores[it->second];
    if (row[pair_type] == "genuine") {
      set.genuine.push_back(parse_number(row[score]));
    } else if (row[pair_type] == "impostor") {
      set.impostor.push_back(parse_number(row[score]));
    } else {
      fail(ErrorCode::FormatError, "bad pair_type '" + row[pair_type] + "'");
    }
  }
  return out;
}

CsvTable roc_curve_table(const RocSummary& summary) {
  CsvTable t{{"threshold", "far", "tar"}, {}};
  for (const auto& p : summary.curve) {
    t.rows.push_back({format_number(p.threshold), format_number(p.far), format_number(p.tar)});
  }
  return t;
}

CsvTable verification_table(std::span<const IntensitySpec> intensities,
                            std::span<const RocSummary> summaries) {
  CsvTable t{{"intensity", "vr", "eer", "auc"}, {}};
  for (std::size_t i = 0; i < intensities.size(); ++i) {
    t.rows.push_back({intensity_label(intensities[i]), format_number(summaries[i].vr_at_far),
                      format_number(summaries[i].eer), format_number(summaries[i].auc)});
  }
  return t;
}

CsvTable bins_table(std::span<const BinReport> reports) {
  CsvTable t{{"metric", "bin_lo", "bin_hi", "rate", "n", "in_roo"}, {}};
  for (const auto& report : reports) {
    const std::string metric = report.metric == SimilarityMetric::Ssim ? "ssim" : "ncs";
    for (const auto& b : report.bins) {
      t.rows.push_back({metric, format_number(b.lo), format_number(b.hi),
                        b.rate ? format_number(*b.rate) : "", std::to_string(b.count),
                        b.in_roo ? "1" : "0"});
    }
  }
  return t;
}

CsvTable comparison_table(std::span<const ComparisonRecord> records) {
  CsvTable t{{"field_kind", "image_id", "mode", "value", "l2", "linf", "ssim", "ncs", "success"}, {}};
  for (const auto& r : records) {
    t.rows.push_back({r.field_kind, r.image_id, std::string(to_string(r.intensity.mode)),
                      format_number(r.intensity.value), format_number(r.l2), format_number(r.linf),
                      format_number(r.similarity.ssim), format_number(r.similarity.ncs),
                      r.similarity.success ? "1" : "0"});
  }
  return t;
}

std::string summary_text(std::span<const SweepRow> sweep, std::span<const IntensitySpec> intensities,
                         std::span<const RocSummary> summaries, bool percent) {
  std::string out;
  char buf[160];
  if (!sweep.empty()) {
    out += percent ? "Attack success rate (%)\n" : "Attack success rate\n";
    std::snprintf(buf, sizeof buf, "%-6s %10s %10s %6s\n", "mode", "intensity", "success", "n");
    out += buf;
    for (const auto& r : sweep) {
      std::snprintf(buf, sizeof buf, "%-6s %10s %10s %6zu\n",
                    std::string(to_string(r.intensity.mode)).c_str(),
                    format_number(r.intensity.value).c_str(), fixed(r.success_rate, percent).c_str(), r.n);
      out += buf;
    }
  }
  if (!intensities.empty()) {
    if (!out.empty()) out += '\n';
    std::snprintf(buf, sizeof buf, "Open-set verification (%sVR at FAR=%s)\n", percent ? "%, " : "",
                  format_number(summaries.front().far_point).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s\n", "intensity", "VR", "EER", "AUC");
    out += buf;
    for (std::size_t i = 0; i < intensities.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s\n", intensity_label(intensities[i]).c_str(),
                    fixed(summaries[i].vr_at_far, percent).c_str(),
                    fixed(summaries[i].eer, percent).c_str(), fixed(summaries[i].auc, percent).c_str());
      out += buf;
    }
  }
  return out;
}

}  // namespace morphkit
