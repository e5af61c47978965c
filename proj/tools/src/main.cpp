#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "morphkit/error.hpp"

namespace {

int report(std::string_view category, std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "error: " << category << ": " << message << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using morphkit::cli::RunConfig;

  CLI::App app{"morphkit: flow-based morphing attack pipeline"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Config file of 'section.key = value' lines");
  app.add_option("--seed", seed, "Run seed (overrides run.seed)");
  app.add_option("--out", out, "Output directory (overrides run.out)");
  app.add_option("--jobs", jobs, "Worker threads (overrides run.jobs)");
  app.add_option("--set", overrides, "Override one setting: section.key=value")->take_all();
  for (auto name : morphkit::cli::command_names()) {
    app.add_subcommand(std::string(name), std::string(morphkit::cli::command_help(name)));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("ConfigError", e.what());
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config.load_file(config_path);
    for (const auto& o : overrides) config.assign(o);
    if (seed) config.set("run.seed", std::to_string(*seed));
    if (out) config.set("run.out", *out);
    if (jobs) config.set("run.jobs", std::to_string(*jobs));
    morphkit::cli::run_command(app.get_subcommands().front()->get_name(), config);
  } catch (const morphkit::Error& e) {
    return report(morphkit::to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return report("Internal", e.what());
  }
  return 0;
}
