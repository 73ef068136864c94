#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace decoh::cli {

/// A table cell: numbers are written with 12 significant digits.
using Cell = std::variant<double, std::string>;

std::string format_number(double v);
std::string format_cell(const Cell& c);

/// Parses a number when the whole token is numeric, otherwise keeps the text.
Cell parse_cell(const std::string& token);

/// CSV with leading `#` comment lines, one header row and data rows.
/// Cells never contain commas or quotes in this tool's output.
struct CsvTable {
    std::vector<std::string> comments; // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void write(std::ostream& os) const;
    static CsvTable read(std::istream& is);
};

} // namespace decoh::cli
