#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"
#include "tasks.hpp"

namespace {

using perclab::cli::Group;

struct Command {
  CLI::App* app = nullptr;
  std::optional<Group> group;  // empty for sweep
  std::string config_path;
  perclab::cli::Overrides overrides;
  std::string check;
};

void add_common(Command& c) {
  c.app->add_option("--config", c.config_path, "Experiment config (key = value lines)")->required();
  c.app->add_option("--out", c.overrides.out, "Output path, written atomically; stdout when absent");
  c.app->add_option("--format", c.overrides.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c.app->add_option("--seed", c.overrides.seed, "Master seed (overrides sampling.master_seed)");
  c.app->add_option("--replicas", c.overrides.replicas, "Replica blocks (overrides sampling.replicas)");
  c.app->add_option("--threads", c.overrides.threads, "Worker threads, 0 = all cores; never changes results");
}

void emit_error(const std::exception& e) {
  std::cerr << perclab::cli::error_document(e).dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perclab: random-walk spectral profiles and percolation inequalities on finite graphs"};
  app.require_subcommand(1);

  std::vector<Command> commands;
  commands.reserve(6);
  const auto add = [&](const char* name, const char* help, std::optional<Group> group) -> Command& {
    commands.push_back({app.add_subcommand(name, help), group, {}, {}, {}});
    add_common(commands.back());
    return commands.back();
  };
  add("build-graph", "Build a graph and emit its edge list", Group::build_graph);
  add("walk", "Random-walk tasks (task.name = return_probability, escape_probability, ...)", Group::walk);
  add("spectral", "Spectral tasks (task.name = lambda_a, spectral_profile, ...)", Group::spectral);
  add("perc", "Percolation estimators (task.name = cluster_tail_hat, tau_hat, ...)", Group::perc);
  auto& verify = add("verify", "Run one theorem check", Group::verify);
  verify.app->add_option("check", verify.check, "Check name, e.g. two_ghost or surgery_check")->required();
  auto& sweep = add("sweep", "Run task.name over a list of values of one parameter", std::nullopt);
  sweep.app->add_option("--axis", sweep.overrides.axis, "Task parameter to vary (overrides sweep.axis)");
  sweep.app->add_option("--values", sweep.overrides.values, "Comma-separated values (overrides sweep.values)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlohmann::json{{"error", {{"kind", "parse"}, {"message", e.what()}, {"exit_code", 2}}}}.dump()
              << std::endl;
    return 2;
  }

  for (auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      auto config = perclab::cli::Config::load(c.config_path);
      perclab::cli::apply_overrides(config, c.overrides);
      const auto result =
          c.group ? perclab::cli::run_group(config, *c.group, c.check) : perclab::cli::run_sweep(config);
      const auto path = config.get_string("output.path", "");
      if (path.empty()) {
        std::cout << result.content;
      } else {
        perclab::cli::write_atomically(path, result.content);
        std::cout << result.summary << ": wrote " << result.content.size() << " bytes to " << path << std::endl;
      }
      return 0;
    } catch (const std::exception& e) {
      emit_error(e);
      return perclab::cli::exit_code_for(e);
    }
  }
  return 2;
}
