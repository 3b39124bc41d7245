#include "stacklaw/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stacklaw/config.hpp"
#include "stacklaw/report.hpp"
#include "stacklaw/scaling_laws.hpp"

namespace stacklaw {

namespace {

ReportFormat parse_format(const std::string& name) {
  if (name == "table") return ReportFormat::HumanTable;
  if (name == "csv") return ReportFormat::Csv;
  return ReportFormat::Json;
}

/// Flat key/value record for the scalar subcommands (scaling, geometry,
/// advise, thermal-check), rendered in any of the three formats.
class KvReport {
public:
  void add(const std::string& key, double value) {
    text_.emplace_back(key, format_double(value));
    json_[key] = value;
  }
  void add(const std::string& key, std::uint64_t value) {
    text_.emplace_back(key, std::to_string(value));
    json_[key] = value;
  }
  void add(const std::string& key, bool value) {
    text_.emplace_back(key, value ? "true" : "false");
    json_[key] = value;
  }
  void add(const std::string& key, const std::string& value) {
    text_.emplace_back(key, value);
    json_[key] = value;
  }
  void add(const std::string& key, const std::vector<double>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) joined += ';';
      joined += format_double(values[i]);
    }
    text_.emplace_back(key, joined);
    json_[key] = values;
  }

  void emit(ReportFormat format, std::ostream& out) const {
    switch (format) {
      case ReportFormat::HumanTable:
        for (const auto& [key, value] : text_) out << key << " = " << value << "\n";
        return;
      case ReportFormat::Csv: {
        std::string header, row;
        for (std::size_t i = 0; i < text_.size(); ++i) {
          if (i) { header += ','; row += ','; }
          header += csv_escape(text_[i].first);
          row += csv_escape(text_[i].second);
        }
        out << header << "\r\n" << row << "\r\n";
        return;
      }
      case ReportFormat::Json:
        out << json_.dump(2) << "\n";
        return;
    }
  }

private:
  std::vector<std::pair<std::string, std::string>> text_;
  nlohmann::json json_ = nlohmann::json::object();
};

std::vector<Objective> parse_objectives(const std::string& spec) {
  std::vector<Objective> objectives;
  std::stringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("objective '" + item + "' must look like metric:min|max");
    Objective obj;
    obj.metric = item.substr(0, colon);
    const std::string dir = item.substr(colon + 1);
    if (dir == "min")
      obj.direction = Direction::Minimize;
    else if (dir == "max")
      obj.direction = Direction::Maximize;
    else
      throw ConfigError("objective direction '" + dir + "' must be min or max");
    objectives.push_back(std::move(obj));
  }
  if (objectives.empty())
    throw ConfigError("at least one objective is required");
  return objectives;
}

std::vector<std::string> parameter_names(const SweepSpec& spec) {
  std::vector<std::string> names;
  for (const auto& p : spec.parameters) names.push_back(p.name);
  return names;
}

struct GlobalOptions {
  std::string format = "table";
  std::string out_path;
  unsigned jobs = 1;
  std::uint64_t max_points = 1'000'000;
};

/// Results stream: --out file or stdout. Binary so CSV bytes are exact.
class OutputTarget {
public:
  OutputTarget(const GlobalOptions& global, std::ostream& fallback) {
    if (global.out_path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(global.out_path, std::ios::binary);
    if (!file_)
      throw ConfigError("cannot write output file: " + global.out_path);
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

int cmd_evaluate(const std::string& config_path, const GlobalOptions& global,
                 std::ostream& out, std::ostream&) {
  const LoadedConfig config = load_config(config_path);
  SweepRow row{.index = 0,
               .values = {},
               .point = config.point,
               .result = evaluate(config.point, config.sweep.constraints)};
  OutputTarget target(global, out);
  emit_report({row}, {}, parse_format(global.format), target.stream());
  return row.result.flags.any() ? kExitInfeasible : kExitOk;
}

int cmd_sweep(const std::string& config_path, const GlobalOptions& global,
              std::ostream& out, std::ostream& err) {
  LoadedConfig config = load_config(config_path);
  config.sweep.max_points = global.max_points;
  err << "sweep: " << sweep_size(config.sweep) << " design points\n";
  const auto rows = sweep(config.sweep, global.jobs);
  OutputTarget target(global, out);
  emit_report(rows, parameter_names(config.sweep), parse_format(global.format),
              target.stream());
  return kExitOk;
}

int cmd_pareto(const std::string& config_path, const std::string& objective_spec,
               const GlobalOptions& global, std::ostream& out,
               std::ostream& err) {
  LoadedConfig config = load_config(config_path);
  config.sweep.max_points = global.max_points;
  const auto objectives = parse_objectives(objective_spec);
  const auto rows = sweep(config.sweep, global.jobs);
  const auto frontier = pareto(rows, objectives);
  const ReportFormat format = parse_format(global.format);
  if (frontier.empty()) {
    err << "pareto: no feasible points\n";
    if (format == ReportFormat::Json) {
      OutputTarget target(global, out);
      emit_report(frontier, parameter_names(config.sweep), format,
                  target.stream());
    }
    return kExitInfeasible;
  }
  OutputTarget target(global, out);
  emit_report(frontier, parameter_names(config.sweep), format, target.stream());
  return kExitOk;
}

int cmd_advise(const std::string& config_path, AdviceQuestion question,
               std::optional<double> delta, bool exact,
               const GlobalOptions& global, std::ostream& out, std::ostream&) {
  const LoadedConfig config = load_config(config_path);
  const Advisory advisory =
      advise(config.point, question, delta, config.sweep.constraints,
             exact ? GrowthMode::Exact : GrowthMode::Approximate);
  KvReport report;
  switch (question) {
    case AdviceQuestion::GrowthDirection:
      report.add("question", std::string("growth-direction"));
      report.add("advice", std::string(to_string(*advisory.growth)));
      break;
    case AdviceQuestion::CapacityForThreadDoubling:
      report.add("question", std::string("capacity-for-thread-doubling"));
      report.add("capacity_factor", *advisory.value);
      break;
    case AdviceQuestion::BandwidthHeadroom:
      report.add("question", std::string("bandwidth-headroom"));
      report.add("thread_multiplier", *advisory.value);
      break;
  }
  report.add("note", advisory.text);
  OutputTarget target(global, out);
  report.emit(parse_format(global.format), target.stream());
  return kExitOk;
}

int cmd_thermal_check(const std::string& config_path,
                      std::optional<double> t_max_flag,
                      const GlobalOptions& global, std::ostream& out,
                      std::ostream&) {
  const LoadedConfig config = load_config(config_path);
  std::optional<double> t_max = t_max_flag;
  if (!t_max) t_max = config.sweep.constraints.t_max_c;

  const ThermalStack& stack = config.point.thermal;
  const ThermalVerdict verdict = thermal_feasible(
      stack, t_max.value_or(std::numeric_limits<double>::infinity()));
  const auto temps = layer_temperatures(stack);
  std::vector<double> layer_max;
  for (const auto& grid : temps)
    layer_max.push_back(*std::max_element(grid.values.begin(), grid.values.end()));

  KvReport report;
  report.add("feasible", verdict.feasible);
  if (t_max) report.add("t_max_c", *t_max);
  report.add("worst_temp_c", verdict.worst_temp_c);
  report.add("worst_layer", static_cast<std::uint64_t>(verdict.worst_layer));
  report.add("worst_tile_row", static_cast<std::uint64_t>(
                                   verdict.worst_tile / temps[0].cols));
  report.add("worst_tile_col", static_cast<std::uint64_t>(
                                   verdict.worst_tile % temps[0].cols));
  report.add("layer_max_temp_c", layer_max);
  OutputTarget target(global, out);
  report.emit(parse_format(global.format), target.stream());
  return verdict.feasible ? kExitOk : kExitInfeasible;
}

int cmd_scaling(double k, double b, double alpha, const GlobalOptions& global,
                std::ostream& out, std::ostream&) {
  const ScalingQuery query{.thread_factor = k, .bandwidth_factor = b,
                           .alpha = alpha};
  KvReport report;
  report.add("thread_factor", k);
  report.add("bandwidth_factor", b);
  report.add("alpha", alpha);
  report.add("per_copy_capacity_factor", capacity_for_bandwidth(b / k, alpha));
  report.add("capacity_factor", capacity_factor(query));
  OutputTarget target(global, out);
  report.emit(parse_format(global.format), target.stream());
  return kExitOk;
}

int cmd_geometry(double x, std::uint32_t n, double delta, bool exact,
                 const GlobalOptions& global, std::ostream& out,
                 std::ostream&) {
  const GrowthMode mode = exact ? GrowthMode::Exact : GrowthMode::Approximate;
  const GrowthAdvice advice = growth_advice(x, n, delta, mode);
  KvReport report;
  report.add("x_mm", x);
  report.add("n", static_cast<std::uint64_t>(n));
  report.add("delta_mm", delta);
  report.add("mode", std::string(exact ? "exact" : "approx"));
  report.add("breakeven_layers", x / (2.0 * delta));
  report.add("advice", std::string(to_string(advice)));
  OutputTarget target(global, out);
  report.emit(parse_format(global.format), target.stream());
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"stacklaw: analytical models and design-space exploration for "
               "3D-stacked chip systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "stacklaw 0.1.0");

  GlobalOptions global;
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", global.out_path, "Write results to a file");
  app.add_option("--jobs", global.jobs, "Worker threads for sweeps")
      ->envname("STACKLAW_JOBS")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-points", global.max_points,
                 "Refuse sweeps larger than this")
      ->capture_default_str();

  std::string config_path;
  std::string objective_spec;
  AdviceQuestion question = AdviceQuestion::GrowthDirection;
  std::optional<double> delta;
  std::optional<double> t_max;
  bool exact = false;
  double k = 1.0, b = 1.0, alpha = 0.5;
  double geom_x = 0.0, geom_delta = 0.0;
  std::uint32_t geom_n = 1;

  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Evaluate one design point");
  evaluate_cmd->add_option("config", config_path, "Config file")->required();

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Enumerate and evaluate the config's sweep");
  sweep_cmd->add_option("config", config_path, "Config file")->required();

  CLI::App* pareto_cmd =
      app.add_subcommand("pareto", "Sweep, then keep the Pareto frontier");
  pareto_cmd->add_option("config", config_path, "Config file")->required();
  pareto_cmd
      ->add_option("--objectives", objective_spec,
                   "Comma list of metric:min|max")
      ->required();

  const std::map<std::string, AdviceQuestion> questions{
      {"growth-direction", AdviceQuestion::GrowthDirection},
      {"capacity-for-thread-doubling", AdviceQuestion::CapacityForThreadDoubling},
      {"bandwidth-headroom", AdviceQuestion::BandwidthHeadroom},
      {"GrowthDirection", AdviceQuestion::GrowthDirection},
      {"CapacityForThreadDoubling", AdviceQuestion::CapacityForThreadDoubling},
      {"BandwidthHeadroom", AdviceQuestion::BandwidthHeadroom},
  };
  CLI::App* advise_cmd =
      app.add_subcommand("advise", "Ask a what-if question about a point");
  advise_cmd->add_option("config", config_path, "Config file")->required();
  advise_cmd->add_option("--question", question, "Question to answer")
      ->required()
      ->transform(CLI::CheckedTransformer(questions));
  advise_cmd->add_option("--delta", delta, "Footprint increment, mm");
  advise_cmd->add_flag("--exact", exact, "Keep the n*delta^2 term");

  CLI::App* thermal_cmd = app.add_subcommand(
      "thermal-check", "Check stack temperatures against a limit");
  thermal_cmd->add_option("config", config_path, "Config file")->required();
  thermal_cmd->add_option("--t-max", t_max, "Max junction temperature, degC");

  CLI::App* scaling_cmd = app.add_subcommand(
      "scaling", "Capacity scaling required for a thread/bandwidth change");
  scaling_cmd->add_option("--k", k, "Thread multiplier")->required();
  scaling_cmd->add_option("--b", b, "Bandwidth multiplier")
      ->capture_default_str();
  scaling_cmd->add_option("--alpha", alpha, "Miss-rate root exponent")
      ->capture_default_str();

  CLI::App* geometry_cmd = app.add_subcommand(
      "geometry", "Add a layer or grow the footprint?");
  geometry_cmd->add_option("--x", geom_x, "Layer edge, mm")->required();
  geometry_cmd->add_option("--n", geom_n, "Current layer count")->required();
  geometry_cmd->add_option("--delta", geom_delta, "Footprint increment, mm")
      ->required();
  geometry_cmd->add_flag("--exact", exact, "Keep the n*delta^2 term");

  for (CLI::App* sub : {evaluate_cmd, sweep_cmd, pareto_cmd, advise_cmd,
                        thermal_cmd, scaling_cmd, geometry_cmd})
    sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("stacklaw");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (app.got_subcommand(evaluate_cmd))
      return cmd_evaluate(config_path, global, out, err);
    if (app.got_subcommand(sweep_cmd))
      return cmd_sweep(config_path, global, out, err);
    if (app.got_subcommand(pareto_cmd))
      return cmd_pareto(config_path, objective_spec, global, out, err);
    if (app.got_subcommand(advise_cmd))
      return cmd_advise(config_path, question, delta, exact, global, out, err);
    if (app.got_subcommand(thermal_cmd))
      return cmd_thermal_check(config_path, t_max, global, out, err);
    if (app.got_subcommand(scaling_cmd))
      return cmd_scaling(k, b, alpha, global, out, err);
    if (app.got_subcommand(geometry_cmd))
      return cmd_geometry(geom_x, geom_n, geom_delta, exact, global, out, err);
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

} // namespace stacklaw
