#pragma once

#include <string>

#include "deltakit/json_io.hpp"

namespace deltakit::cli {

/// One row per check, table entry or slice, depending on the report kind.
std::string report_to_csv(const Json& report);

}  // namespace deltakit::cli
