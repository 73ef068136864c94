#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cli/csv.hpp"
#include "decoh/verify.hpp"

namespace decoh::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { csv, json };

/// Everything one subcommand run produces.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, Cell>> params;
    std::vector<std::string> metadata; // extra `#` lines in CSV, e.g. grid
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<verify::Check> checks;

    void add_param(std::string key, Cell value) { params.emplace_back(std::move(key), std::move(value)); }
};

CsvTable to_csv(const Report& r);
std::string to_json(const Report& r);
void write_report(std::ostream& os, const Report& r, Format f);

} // namespace decoh::cli
