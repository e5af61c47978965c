#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace morphkit::cli {

/// Flat `section.key = value` settings. Every key has a built-in default;
/// unknown keys are rejected with ConfigError.
class RunConfig {
 public:
  RunConfig();

  /// Reads `section.key = value` lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);
  void set(std::string_view key, std::string value);
  /// "section.key=value".
  void assign(std::string_view assignment);

  const std::string& text(std::string_view key) const;
  double real(std::string_view key) const;
  int integer(std::string_view key) const;
  std::uint64_t u64(std::string_view key) const;
  bool boolean(std::string_view key) const;

  /// Effective settings, one `key = value` line each, sorted by key. run.jobs
  /// and run.out are left out: they never change results.
  std::string dump() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace morphkit::cli
