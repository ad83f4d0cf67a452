#pragma once

// Property suites and example reports. Reports are deterministic functions
// of their configuration: instances come from the seeded generator, checks
// run in a fixed order, and no timings are recorded.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "deltakit/json_io.hpp"

namespace deltakit {

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 200;
  /// Deepest dyadic level in the exhaustive dyadic checks, 1..8.
  std::size_t depth = 6;
};

/// metric, freespace, rtree, absnorm, dyadic
const std::vector<std::string>& suite_names();

/// A suite name or "all". Throws InputError for unknown suites.
Json run_suite(std::string_view suite, const VerifyConfig& config);

bool report_passed(const Json& report);

/// Example A on rows S_0..S_level (1 <= level <= 6).
Json example_a_report(long level);

/// Example B on rows S_0..S_level (2 <= level <= 7) with `slices` sampled
/// supporting slices at m_xy.
Json example_b_report(long level, std::size_t slices, std::uint64_t seed);

}  // namespace deltakit
