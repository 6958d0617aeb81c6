#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace sldual::csv {

/// Scientific notation with 16 significant digits ("%.15e"); "nan"/"inf"
/// spelled out so files stay parseable.
[[nodiscard]] std::string number(double v);

/// `# <text>` line; embedded newlines are replaced by spaces.
void comment(std::ostream& out, std::string_view text);

/// Joins already formatted cells with commas and terminates the line.
void row(std::ostream& out, std::span<const std::string> cells);

}  // namespace sldual::csv
