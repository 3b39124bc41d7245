#include "stacklaw/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace stacklaw {

namespace {

const std::vector<std::string> kMetricColumns = {
    "miss_ratio",     "offered_load",      "service_time",
    "utilization",    "queuing_wait",      "miss_penalty",
    "cpi",            "throughput",        "max_temp_c",
    "total_power_w",  "power_density_w_mm2", "usable_area_mm2",
    "tsv_fraction",   "hotspot_overlap",
};

const std::vector<std::string> kFlagColumns = {
    "bus_saturated", "thermal_infeasible", "cube_violated", "tsv_infeasible",
    "area_exceeded",
};

std::optional<double> column_value(const SweepRow& row,
                                   const std::string& column) {
  if (column == "max_temp_c") return row.result.max_temp_c;
  if (column == "total_power_w") return row.result.total_power_w;
  if (column == "power_density_w_mm2") return row.result.power_density_w_mm2;
  if (column == "usable_area_mm2") return row.result.usable_area_mm2;
  return metric_value(row.result, column);
}

std::vector<bool> flag_values(const FeasibilityFlags& f) {
  return {f.bus_saturated, f.thermal_infeasible, f.cube_violated,
          f.tsv_infeasible, f.area_exceeded};
}

std::string flag_symbols(const FeasibilityFlags& f) {
  std::string s = "-----";
  if (f.bus_saturated) s[0] = 'S';
  if (f.thermal_infeasible) s[1] = 'T';
  if (f.cube_violated) s[2] = 'C';
  if (f.tsv_infeasible) s[3] = 'V';
  if (f.area_exceeded) s[4] = 'A';
  return s;
}

std::string table_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string render_csv(const std::vector<SweepRow>& rows,
                       const std::vector<std::string>& params) {
  std::string out;
  const auto columns = report_columns(params);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(columns[i]);
  }
  out += "\r\n";
  for (const auto& row : rows) {
    out += std::to_string(row.index);
    for (double v : row.values) out += ',' + format_double(v);
    for (const auto& column : kMetricColumns) {
      const auto v = column_value(row, column);
      out += ',';
      if (v) out += format_double(*v);
    }
    for (bool b : flag_values(row.result.flags))
      out += b ? ",true" : ",false";
    out += "\r\n";
  }
  return out;
}

std::string render_json(const std::vector<SweepRow>& rows,
                        const std::vector<std::string>& params) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json item;
    item["index"] = row.index;
    nlohmann::json parameters = nlohmann::json::object();
    for (std::size_t j = 0; j < params.size() && j < row.values.size(); ++j)
      parameters[params[j]] = row.values[j];
    item["parameters"] = std::move(parameters);
    for (const auto& column : kMetricColumns) {
      const auto v = column_value(row, column);
      if (v)
        item[column] = *v;
      else
        item[column] = nullptr;
    }
    item["layer_max_temp_c"] = row.result.layer_max_temp_c;
    item["queue_model"] = EvaluationResult::queue_model;
    nlohmann::json flags;
    const auto values = flag_values(row.result.flags);
    for (std::size_t k = 0; k < kFlagColumns.size(); ++k)
      flags[kFlagColumns[k]] = static_cast<bool>(values[k]);
    item["flags"] = std::move(flags);
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string render_table(const std::vector<SweepRow>& rows,
                         const std::vector<std::string>& params) {
  std::vector<std::string> headers;
  headers.push_back("index");
  for (const auto& p : params) headers.push_back(p);
  for (const auto& m : kMetricColumns) headers.push_back(m);
  headers.push_back("flags");

  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    std::vector<std::string> line;
    line.push_back(std::to_string(row.index));
    for (double v : row.values) line.push_back(table_number(v));
    for (const auto& column : kMetricColumns) {
      const auto v = column_value(row, column);
      line.push_back(v ? table_number(*v) : "-");
    }
    line.push_back(flag_symbols(row.result.flags));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    widths[c] = headers[c].size();
    for (const auto& line : cells) widths[c] = std::max(widths[c], line[c].size());
  }

  std::string out;
  auto emit_line = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out += "  ";
      out += line[c];
      out.append(widths[c] - line[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  emit_line(headers);
  for (const auto& line : cells) emit_line(line);
  out += "flags: S=bus saturated, T=thermal, C=cube, V=tsv budget, A=area\n";
  return out;
}

} // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> report_columns(const std::vector<std::string>& params) {
  std::vector<std::string> columns;
  columns.push_back("index");
  for (const auto& p : params) columns.push_back(p);
  for (const auto& m : kMetricColumns) columns.push_back(m);
  for (const auto& f : kFlagColumns) columns.push_back(f);
  return columns;
}

std::size_t emit_report(const std::vector<SweepRow>& rows,
                        const std::vector<std::string>& param_names,
                        ReportFormat format, std::ostream& out) {
  std::string text;
  switch (format) {
    case ReportFormat::Csv:
      if (rows.empty())
        throw ConfigError("CSV and table reports need at least one result");
      text = render_csv(rows, param_names);
      break;
    case ReportFormat::Json:
      text = render_json(rows, param_names);
      break;
    case ReportFormat::HumanTable:
      if (rows.empty())
        throw ConfigError("CSV and table reports need at least one result");
      text = render_table(rows, param_names);
      break;
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  return text.size();
}

} // namespace stacklaw
