#pragma once

#include <string>
#include <vector>

namespace meso::csv {

/// Splits one CSV line into fields. Handles double-quoted fields with
/// embedded commas and "" escapes; trims surrounding whitespace of
/// unquoted fields.
std::vector<std::string> split_line(const std::string& line);

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape(const std::string& field);

/// Joins fields into one CSV line (no trailing newline).
std::string join(const std::vector<std::string>& fields);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace meso::csv
