#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "tasks.hpp"

namespace perclab::cli {

// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> replicas;
  std::optional<unsigned> threads;
  std::optional<std::string> axis;
  std::optional<std::string> values;
};

struct RunResult {
  std::string content;  // bytes to write
  std::string summary;  // one line
  std::string task;
};

void apply_overrides(Config& config, const Overrides& overrides);

// `check` names the task for verify; other groups read task.name.
RunResult run_group(Config& config, Group group, const std::string& check = {});
RunResult run_sweep(Config& config);

// Writes through a temporary file in the same directory and renames it into place.
void write_atomically(const std::string& path, const std::string& content);

// Exit status and error document for an exception.
int exit_code_for(const std::exception& error);
nlohmann::json error_document(const std::exception& error);

}  // namespace perclab::cli
