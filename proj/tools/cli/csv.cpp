#include "cli/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace decoh::cli {

std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_cell(const Cell& c) {
    if (const double* d = std::get_if<double>(&c))
        return format_number(*d);
    return std::get<std::string>(c);
}

Cell parse_cell(const std::string& token) {
    if (token.empty())
        return token;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() + token.size() && errno == 0)
        return v;
    return token;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

template <class Seq, class Fmt>
void write_row(std::ostream& os, const Seq& cells, Fmt fmt) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            os << ',';
        os << fmt(cells[i]);
    }
    os << '\n';
}

} // namespace

void CsvTable::write(std::ostream& os) const {
    for (const auto& c : comments)
        os << "# " << c << '\n';
    write_row(os, header, [](const std::string& s) { return s; });
    for (const auto& r : rows)
        write_row(os, r, format_cell);
}

CsvTable CsvTable::read(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!have_header && line.rfind("#", 0) == 0) {
            t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        if (!have_header) {
            t.header = split(line);
            have_header = true;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& tok : split(line))
            row.push_back(parse_cell(tok));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace decoh::cli
