#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "perclab/graph.hpp"
#include "perclab/monte_carlo.hpp"

namespace perclab::cli {

enum class Group { build_graph, walk, spectral, perc, verify };
const char* to_string(Group group);

inline constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

// Scalar summary of one task run, used for sweep tables.
struct SweepRow {
  double p = kNone;
  double n = kNone;
  double estimate = kNone;
  double ci_low = kNone;
  double ci_high = kNone;
  double bound = kNone;
  double lhs = kNone;
  double rhs = kNone;
  std::optional<bool> pass;
  bool vacuous = false;
  double value = kNone;  // primary scalar of tasks that are neither estimates nor checks
};

struct TaskOutput {
  nlohmann::json record;
  std::string csv;
  SweepRow row;
  std::optional<bool> pass;  // set by theorem checks
};

struct TaskContext {
  const Config& config;
  const Graph* graph = nullptr;  // null for graph-free tasks
  nlohmann::json graph_json;
  SamplingOptions sampling;
  std::uint64_t master_seed = 0;
};

enum class Monotone { none, nondecreasing, nonincreasing };

struct TaskInfo {
  std::string name;
  Group group;
  bool needs_graph = true;
  bool sampled = false;
  // Direction of the monotone coupling in p and in n for the sweep flags.
  Monotone in_p = Monotone::none;
  Monotone in_n = Monotone::none;
  std::function<TaskOutput(const TaskContext&)> run;
};

const std::vector<TaskInfo>& registry();
// Accepts the registered name or, for checks, the name without the "_check" suffix.
const TaskInfo* find_task(const std::string& name);

// graph.* keys to a graph plus its {family, params} description.
Graph build_graph_from_config(const Config& config);
nlohmann::json graph_description(const Graph& g);

}  // namespace perclab::cli
