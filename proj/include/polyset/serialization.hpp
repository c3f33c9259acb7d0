#pragma once

// Text formatting shared by every file the pipeline writes. All numbers are
// emitted with %.17g so doubles round-trip exactly and reruns are
// byte-identical.

#include <string>
#include <vector>

namespace polyset {

// Shortest %.17g rendering; exact round-trip for finite doubles.
std::string num17(double v);

// JSON string escaping (quotes, backslash, control characters).
std::string json_escape(const std::string& s);

// One CSV line from already-formatted cells (no quoting; cells must not
// contain commas or newlines).
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace polyset
