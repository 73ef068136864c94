#include "cli/output.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>

#include <json.hpp>

namespace decoh::cli {

namespace {

// Round-trips through the 12-digit text so JSON and CSV carry the same value.
nlohmann::json json_number(double v) {
    if (!std::isfinite(v))
        return format_number(v);
    return std::strtod(format_number(v).c_str(), nullptr);
}

nlohmann::json json_cell(const Cell& c) {
    if (const double* d = std::get_if<double>(&c))
        return json_number(*d);
    const std::string& s = std::get<std::string>(c);
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    return s;
}

} // namespace

CsvTable to_csv(const Report& r) {
    CsvTable t;
    t.comments.push_back(std::string("decoh ") + kVersion + " command=" + r.command);
    std::string params = "params";
    for (const auto& [k, v] : r.params)
        params += " " + k + "=" + format_cell(v);
    t.comments.push_back(params);
    for (const auto& m : r.metadata)
        t.comments.push_back(m);
    for (const auto& c : r.checks)
        t.comments.push_back("check " + c.name + " tolerance=" + format_number(c.tolerance) +
                             " deviation=" + format_number(c.deviation) + (c.passed ? " pass" : " FAIL"));
    t.header = r.columns;
    t.rows = r.rows;
    return t;
}

std::string to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["version"] = kVersion;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params)
        params[k] = json_cell(v);
    j["params"] = params;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < r.columns.size(); ++i)
            o[r.columns[i]] = json_cell(row[i]);
        rows.push_back(o);
    }
    j["results"] = {{"columns", r.columns}, {"rows", rows}};
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"tolerance", json_number(c.tolerance)},
                          {"deviation", json_number(c.deviation)},
                          {"passed", c.passed}});
    j["checks"] = checks;
    return j.dump(2);
}

void write_report(std::ostream& os, const Report& r, Format f) {
    if (f == Format::json)
        os << to_json(r) << '\n';
    else
        to_csv(r).write(os);
}

} // namespace decoh::cli
