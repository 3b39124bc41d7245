#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "stacklaw/dse.hpp"

namespace stacklaw {

enum class ReportFormat { HumanTable, Csv, Json };

/// Emit evaluated rows. CSV: header plus one row per result, RFC 4180
/// quoting, fixed column order, shortest round-trip decimals. JSON: a
/// schema-stable array (empty input allowed). HumanTable: aligned columns
/// with flags rendered as symbols. param_names label row.values columns.
/// Returns bytes written; identical inputs produce byte-identical output.
std::size_t emit_report(const std::vector<SweepRow>& rows,
                        const std::vector<std::string>& param_names,
                        ReportFormat format, std::ostream& out);

/// Column headers emit_report uses for the given parameter-name set, in
/// emission order.
std::vector<std::string> report_columns(const std::vector<std::string>& params);

/// Shortest decimal string that round-trips to the same double. Empty
/// optional-like sentinel handling belongs to callers.
std::string format_double(double value);

/// RFC 4180 field quoting (only when the field needs it).
std::string csv_escape(const std::string& field);

} // namespace stacklaw
