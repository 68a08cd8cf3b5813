#include "runner.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "perclab/error.hpp"
#include "perclab/report.hpp"
#include "perclab/rng.hpp"

namespace perclab::cli {

using nlohmann::json;

namespace {

std::string csv_number(double x) { return std::isnan(x) ? std::string() : format_double(x); }

std::string read_format(const Config& config) {
  const auto format = config.get_string("output.format", "json");
  if (format != "json" && format != "csv") throw ParseError("output.format must be csv or json, got '" + format + "'");
  return format;
}

SamplingOptions read_sampling(const Config& config) {
  SamplingOptions o;
  o.seed = config.get_u64("sampling.master_seed");
  const auto n = config.get_int("sampling.n_samples", static_cast<std::int64_t>(o.n_samples));
  if (n < 1) throw PreconditionError("sampling.n_samples must be positive");
  o.n_samples = static_cast<std::size_t>(n);
  const auto replicas = config.get_int("sampling.replicas", 1);
  if (replicas < 1 || replicas > 1'000'000) throw PreconditionError("sampling.replicas must be in [1, 1e6]");
  o.replicas = static_cast<unsigned>(replicas);
  const auto threads = config.get_int("sampling.threads", 0);
  if (threads < 0 || threads > 4096) throw PreconditionError("sampling.threads must be in [0, 4096]");
  o.threads = static_cast<unsigned>(threads);
  o.confidence = config.get_double("sampling.confidence", 0.99);
  if (!(o.confidence > 0.5 && o.confidence < 1.0)) throw PreconditionError("sampling.confidence must be in (0.5, 1)");
  return o;
}

void reject_unused(const Config& config) {
  const auto unused = config.unused_keys();
  if (unused.empty()) return;
  std::string list;
  for (const auto& key : unused) list += (list.empty() ? "" : ", ") + key;
  throw ParseError("unknown or unused keys for this task: " + list);
}

const TaskInfo& resolve(const std::string& name, std::optional<Group> group) {
  const TaskInfo* info = find_task(name);
  if (info == nullptr) throw ParseError("unknown task '" + name + "'");
  if (group && info->group != *group) {
    throw ParseError("task '" + name + "' belongs to subcommand '" + to_string(info->group) + "', not '" +
                     to_string(*group) + "'");
  }
  return *info;
}

TaskOutput run_task(const Config& config, const TaskInfo& info, std::uint64_t seed) {
  TaskContext ctx{config, nullptr, json(), read_sampling(config), 0};
  ctx.master_seed = ctx.sampling.seed;
  ctx.sampling.seed = seed;
  std::optional<Graph> graph;
  if (info.needs_graph) {
    graph.emplace(build_graph_from_config(config));
    ctx.graph = &*graph;
    ctx.graph_json = graph_description(*graph);
  }
  return info.run(ctx);
}

std::string render(const TaskOutput& out, const std::string& format) {
  return format == "csv" ? out.csv : out.record.dump(2) + "\n";
}

std::string summary_for(const std::string& head, const TaskOutput& out) {
  std::string line = head;
  if (out.pass) line += *out.pass ? " pass=true" : " pass=false";
  return line;
}

}  // namespace

void apply_overrides(Config& config, const Overrides& o) {
  if (o.out) config.set("output.path", *o.out);
  if (o.format) config.set("output.format", *o.format);
  if (o.seed) config.set("sampling.master_seed", std::to_string(*o.seed));
  if (o.replicas) config.set("sampling.replicas", std::to_string(*o.replicas));
  if (o.threads) config.set("sampling.threads", std::to_string(*o.threads));
  if (o.axis) config.set("sweep.axis", *o.axis);
  if (o.values) config.set("sweep.values", *o.values);
}

RunResult run_group(Config& config, Group group, const std::string& check) {
  std::string name;
  if (group == Group::build_graph) {
    name = config.get_string("task.name", "graph");
  } else if (group == Group::verify) {
    if (check.empty()) throw ParseError("verify needs a check name");
    name = check;
    if (config.has("task.name") && resolve(config.get_string("task.name"), group).name != resolve(check, group).name) {
      throw ParseError("task.name disagrees with the check named on the command line");
    }
  } else {
    name = config.get_string("task.name");
  }
  const auto& info = resolve(name, group);
  const auto format = read_format(config);
  config.get_string("output.path", "");
  const auto seed = config.get_u64("sampling.master_seed");
  const auto out = run_task(config, info, seed);
  reject_unused(config);
  RunResult result;
  result.task = info.name;
  result.content = render(out, format);
  result.summary = summary_for(std::string(to_string(group)) + " " + info.name, out);
  return result;
}

RunResult run_sweep(Config& config) {
  const auto& info = resolve(config.get_string("task.name"), std::nullopt);
  const auto format = read_format(config);
  config.get_string("output.path", "");
  const auto master = config.get_u64("sampling.master_seed");
  auto axis = config.get_string("sweep.axis");
  if (axis.rfind("task.", 0) == 0) axis = axis.substr(5);
  const auto key = "task." + axis;
  const auto values_text = split_list(config.get_string("sweep.values"));
  const bool coupled = config.get_bool("sweep.coupled", true);
  if (values_text.empty()) throw PreconditionError("sweep.values is empty");
  std::vector<double> values;
  for (const auto& v : values_text) values.push_back(parse_double(v, "sweep.values"));
  if (config.has(key)) throw ParseError(key + " is set in the config and is also the sweep axis");

  // Shared master seed: coupled sweeps reuse it so that monotone couplings hold sample by sample,
  // uncoupled sweeps derive one independent sub-stream per value.
  std::vector<TaskOutput> outputs;
  json seeds = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    Config point = config;
    point.reset_reads();
    point.set(key, values_text[i]);
    const std::uint64_t seed = coupled ? master : substream(master, i);
    seeds.push_back(seed);
    outputs.push_back(run_task(point, info, seed));
    if (!point.was_read(key)) throw PreconditionError("'" + axis + "' is not a parameter of task " + info.name);
    if (i == 0) {
      // Sweep keys belong to the outer config.
      for (const auto* k : {"sweep.axis", "sweep.values", "sweep.coupled", "output.format", "output.path",
                            "sampling.master_seed", "task.name"}) {
        if (point.has(k)) point.get_string(k);
      }
      reject_unused(point);
    }
  }

  const bool has_estimates = std::any_of(outputs.begin(), outputs.end(), [](const auto& o) { return !std::isnan(o.row.estimate); });
  const bool has_checks = std::any_of(outputs.begin(), outputs.end(), [](const auto& o) { return o.row.pass.has_value(); });

  const auto primary = [&](const TaskOutput& o) { return has_estimates ? o.row.estimate : has_checks ? o.row.lhs : o.row.value; };
  json monotonicity = nullptr;
  const Monotone direction = axis == "p" ? info.in_p : axis == "n" ? info.in_n : Monotone::none;
  if (coupled && direction != Monotone::none) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    bool holds = true;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const double prev = primary(outputs[order[i - 1]]);
      const double next = primary(outputs[order[i]]);
      holds = holds && (direction == Monotone::nondecreasing ? next >= prev : next <= prev);
    }
    monotonicity = {{"axis", axis},
                    {"direction", direction == Monotone::nondecreasing ? "nondecreasing" : "nonincreasing"},
                    {"holds", holds}};
  }

  json bound_ratios = json::array();
  if (axis == "n") {
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        const double b_small = outputs[i].row.bound;
        const double b_large = outputs[j].row.bound;
        if (values[j] != 4.0 * values[i] || std::isnan(b_small) || std::isnan(b_large)) continue;
        const double ratio = b_small / b_large;
        bound_ratios.push_back({{"n", values[i]}, {"n_times_4", values[j]}, {"ratio", ratio}, {"exactly_two", ratio == 2.0}});
      }
    }
  }

  RunResult result;
  result.task = info.name;
  if (format == "json") {
    json rows = json::array();
    for (const auto& o : outputs) rows.push_back(o.record);
    json doc;
    doc["sweep"] = {{"task", info.name},
                    {"axis", axis},
                    {"values", values},
                    {"coupled", coupled},
                    {"master_seed", master},
                    {"seeds", seeds}};
    doc["rows"] = rows;
    doc["monotonicity"] = monotonicity;
    doc["bound_ratios"] = bound_ratios;
    result.content = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    const bool axis_column = !(has_estimates && (axis == "p" || axis == "n"));
    if (axis_column) csv << axis << ',';
    if (has_estimates) {
      csv << "p,n,estimate,ci_low,ci_high,bound\n";
    } else if (has_checks) {
      csv << "lhs,rhs,pass,vacuous\n";
    } else {
      csv << "value\n";
    }
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      const auto& r = outputs[i].row;
      if (axis_column) csv << values_text[i] << ',';
      if (has_estimates) {
        csv << csv_number(r.p) << ',' << csv_number(r.n) << ',' << csv_number(r.estimate) << ','
            << csv_number(r.ci_low) << ',' << csv_number(r.ci_high) << ',' << csv_number(r.bound) << '\n';
      } else if (has_checks) {
        csv << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << (r.pass.value_or(false) ? "true" : "false")
            << ',' << (r.vacuous ? "true" : "false") << '\n';
      } else {
        csv << csv_number(r.value) << '\n';
      }
    }
    result.content = csv.str();
  }
  result.summary = "sweep " + info.name + " over " + axis + " (" + std::to_string(values.size()) + " values)";
  if (monotonicity.is_object()) result.summary += monotonicity["holds"].get<bool>() ? " monotone=true" : " monotone=false";
  return result;
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + temp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(temp, ignored);
      throw IoError("write to '" + temp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(temp, ignored);
    throw IoError("cannot rename into '" + path + "': " + ec.message());
  }
}

int exit_code_for(const std::exception& error) {
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    switch (e->kind()) {
      case ErrorKind::parse: return 2;
      case ErrorKind::precondition:
      case ErrorKind::validity: return 3;
      case ErrorKind::convergence:
      case ErrorKind::io: return 4;
    }
  }
  return 4;
}

json error_document(const std::exception& error) {
  json doc;
  const auto* e = dynamic_cast<const Error*>(&error);
  doc["kind"] = e ? to_string(e->kind()) : "runtime";
  doc["message"] = error.what();
  doc["exit_code"] = exit_code_for(error);
  if (const auto* c = dynamic_cast<const ConvergenceError*>(&error)) {
    doc["bracket"] = {c->bracket_low(), c->bracket_high()};
    doc["iterations"] = c->iterations();
  }
  return {{"error", doc}};
}

}  // namespace perclab::cli
