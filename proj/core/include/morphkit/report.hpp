#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphkit/assign.hpp"
#include "morphkit/attack.hpp"
#include "morphkit/metrics.hpp"

namespace morphkit {

/// Shortest text that parses back to the same double.
std::string format_number(double x);
/// "<mode>:<value>", e.g. "l2:600".
std::string intensity_label(const IntensitySpec& spec);
IntensitySpec parse_intensity_label(std::string_view text);

/// Minimal CSV table: header plus rows of unquoted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column. Throws FormatError when absent.
  std::size_t column(std::string_view name) const;
};

/// Files are written with '\n' line endings. Throws IoError.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
/// Throws IoError or FormatError (ragged rows, quoted cells).
CsvTable read_csv(const std::filesystem::path& path);

/// image_id,mode,value,l2,linf,label_true,label_pred,confidence,success,queries
/// Query attempts use mode "query" with the frame index as value.
CsvTable run_log_table(std::span<const QueryAttempt> attempts);
CsvTable run_log_table(std::span<const AttackRecord> records);

/// mode,value,success_rate,n
CsvTable sweep_table(std::span<const SweepRow> rows);
std::vector<SweepRow> sweep_rows(const CsvTable& table);

/// intensity,pair_type,score
CsvTable open_set_table(const OpenSetResult& result);
OpenSetResult open_set_result(const CsvTable& table);

/// threshold,far,tar
CsvTable roc_curve_table(const RocSummary& summary);
/// intensity,vr,eer,auc
CsvTable verification_table(std::span<const IntensitySpec> intensities,
                            std::span<const RocSummary> summaries);
/// metric,bin_lo,bin_hi,rate,n,in_roo (empty rate for empty bins)
CsvTable bins_table(std::span<const BinReport> reports);
/// field_kind,image_id,mode,value,l2,linf,ssim,ncs,success
CsvTable comparison_table(std::span<const ComparisonRecord> records);

/// Plain-text tables: success rate per intensity, then verification rate, EER
/// and AUC per open-set intensity. Values are percentages unless `percent` is
/// false, in which case they stay in [0, 1].
std::string summary_text(std::span<const SweepRow> sweep, std::span<const IntensitySpec> intensities,
                         std::span<const RocSummary> summaries, bool percent = true);

}  // namespace morphkit
