#include "sldual/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sldual::csv {

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

void comment(std::ostream& out, std::string_view text) {
    out << "# ";
    for (char c : text) out << (c == '\n' || c == '\r' ? ' ' : c);
    out << '\n';
}

void row(std::ostream& out, std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

}  // namespace sldual::csv
