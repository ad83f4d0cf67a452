#include "report_csv.hpp"

#include <sstream>

namespace deltakit::cli {

namespace {

std::string field(const Json& j) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_object() && j.contains("exact")) {
    text = j.at("exact").get<std::string>();
  } else {
    text = j.dump();
  }
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_row(std::ostringstream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

void write_checks(std::ostringstream& out, const Json& suite) {
  for (const auto& c : suite.at("checks")) {
    write_row(out, {field(suite.at("suite")), field(c.at("name")), c.at("passed").dump(), c.at("instances").dump(),
                    c.at("failures").dump()});
  }
}

}  // namespace

std::string report_to_csv(const Json& report) {
  std::ostringstream out;
  if (report.contains("suite")) {
    write_row(out, {"suite", "check", "passed", "instances", "failures"});
    if (report.contains("suites")) {
      for (const auto& s : report.at("suites")) write_checks(out, s);
    } else {
      write_checks(out, report);
    }
    return out.str();
  }
  const std::string command = report.at("command").get<std::string>();
  if (command == "example-a") {
    write_row(out, {"p", "q", "in_slice", "distance_exact", "distance_approx"});
    for (const auto& row : report.at("denting").at("table")) {
      write_row(out, {field(row.at("p")), field(row.at("q")), row.at("in_slice").dump(), field(row.at("distance")),
                      field(row.at("distance").at("decimal_approx"))});
    }
  } else if (command == "example-b") {
    write_row(out, {"slice", "width", "u", "v", "value", "distance_exact", "found"});
    for (const auto& s : report.at("slices")) {
      const bool found = s.contains("pair");
      write_row(out, {s.at("index").dump(), field(s.at("width")), found ? field(s.at("pair").at("u")) : "",
                      found ? field(s.at("pair").at("v")) : "", found ? field(s.at("value")) : "",
                      found ? field(s.at("distance")) : "", s.at("found").dump()});
    }
  } else {
    write_row(out, {"key", "value"});
    for (const auto& [key, value] : report.items()) write_row(out, {key, field(value)});
  }
  return out.str();
}

}  // namespace deltakit::cli
