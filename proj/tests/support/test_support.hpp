#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "deltakit/json_io.hpp"
#include "deltakit/rational.hpp"

namespace deltakit::testing {

inline Rational q(const char* text) { return parse_rational(text); }

inline std::string data_path(const std::string& name) { return std::string(DELTAKIT_TEST_DATA) + "/" + name; }

inline Json load_data(const std::string& name) {
  std::ifstream in(data_path(name));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json(text.str());
}

}  // namespace deltakit::testing
