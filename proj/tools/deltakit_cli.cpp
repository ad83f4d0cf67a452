// deltakit: reproduces the worked examples and runs the property suites.
// Exit status: 0 pass, 1 mathematical failure, 2 input or configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "deltakit/error.hpp"
#include "deltakit/verify.hpp"
#include "report_csv.hpp"

namespace {

using deltakit::Json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct RunConfig {
  long level = 0;
  std::size_t depth = 6;
  std::size_t samples = 0;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string out;
  std::string suite = "all";
  std::string space_file;
  std::string norm_file;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw deltakit::InputError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return deltakit::parse_json(text.str());
}

Json space_fixture(const std::string& path) {
  const deltakit::MetricTable table = deltakit::metric_table_from_json(read_json_file(path));
  const deltakit::ValidationReport v = deltakit::validate_metric(table);
  if (v.status == deltakit::ValidationStatus::malformed) throw deltakit::InputError(path + ": " + v.message);
  Json j;
  j["file"] = path;
  j["points"] = table.points.size();
  j["valid"] = v.ok();
  if (!v.ok()) {
    j["message"] = v.message;
    j["witness"] = v.witness;
  }
  return j;
}

Json norm_fixture(const std::string& path) {
  const deltakit::AbsNorm2 norm = deltakit::norm_from_json(read_json_file(path));
  Json j;
  j["file"] = path;
  j["norm"] = deltakit::norm_to_json(norm);
  const auto poly = deltakit::as_polyhedral(norm);
  j["polyhedral"] = poly.has_value();
  if (poly) {
    Json extreme = Json::array();
    Json v_points = Json::array();
    for (const auto& e : deltakit::extreme_points(*poly)) {
      extreme.push_back(deltakit::point_json(e));
      if (deltakit::is_v_point(norm, e)) v_points.push_back(deltakit::point_json(e));
    }
    j["extreme_points"] = std::move(extreme);
    j["v_points"] = std::move(v_points);
    j["dual"] = deltakit::norm_to_json(deltakit::dual_norm(*poly));
  }
  return j;
}

void emit(const Json& report, const RunConfig& config) {
  const std::string text = config.format == "csv" ? deltakit::cli::report_to_csv(report) : report.dump(2) + "\n";
  if (config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw deltakit::InputError("cannot write '" + config.out + "'");
  out << text;
}

Json run_inspect(const RunConfig& config) {
  if (config.space_file.empty() && config.norm_file.empty()) {
    throw deltakit::InputError("inspect needs --space FILE or --norm FILE");
  }
  Json j;
  j["command"] = "inspect";
  bool passed = true;
  if (!config.space_file.empty()) {
    j["space"] = space_fixture(config.space_file);
    passed = j["space"]["valid"].get<bool>();
  }
  if (!config.norm_file.empty()) j["norm"] = norm_fixture(config.norm_file);
  j["passed"] = passed;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact certificates for free spaces, R-trees, absolute norms and dyadic L1 models."};
  app.require_subcommand(1);
  RunConfig config;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", config.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", config.out, "Write the report to PATH instead of stdout");
  };

  auto* example_a = app.add_subcommand("example-a", "Ladder space where m_xy is relative but not Daugavet");
  config.level = 3;
  example_a->add_option("--level", config.level, "Rows S_0..S_level")->check(CLI::Range(1, 6));
  add_output(example_a);

  auto* example_b = app.add_subcommand("example-b", "Ladder space where m_xy is Delta but not relative Daugavet");
  long level_b = 4;
  std::size_t slices = 20;
  example_b->add_option("--level", level_b, "Rows S_0..S_level")->check(CLI::Range(2, 7));
  example_b->add_option("--samples", slices, "Sampled supporting slices")->check(CLI::Range(1, 10000));
  example_b->add_option("--seed", config.seed, "Random seed");
  add_output(example_b);

  auto* verify = app.add_subcommand("verify", "Run property suites");
  std::size_t samples = 200;
  verify->add_option("suite", config.suite, "metric, freespace, rtree, absnorm, dyadic or all")
      ->check(CLI::IsMember({"metric", "freespace", "rtree", "absnorm", "dyadic", "all"}));
  verify->add_option("--seed", config.seed, "Random seed");
  verify->add_option("--samples", samples, "Random instances per check")->check(CLI::Range(1, 100000));
  verify->add_option("--depth", config.depth, "Deepest dyadic level checked exhaustively")->check(CLI::Range(1, 8));
  verify->add_option("--space", config.space_file, "Also validate a metric space fixture");
  add_output(verify);

  auto* inspect = app.add_subcommand("inspect", "Validate and describe input files");
  inspect->add_option("--space", config.space_file, "Metric space JSON");
  inspect->add_option("--norm", config.norm_file, "Absolute norm JSON");
  add_output(inspect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    Json report;
    if (*example_a) {
      report = deltakit::example_a_report(config.level);
    } else if (*example_b) {
      report = deltakit::example_b_report(level_b, slices, config.seed);
    } else if (*verify) {
      deltakit::VerifyConfig vc;
      vc.seed = config.seed;
      vc.samples = samples;
      vc.depth = config.depth;
      report = deltakit::run_suite(config.suite, vc);
      if (!config.space_file.empty()) {
        report["fixture"] = space_fixture(config.space_file);
        report["passed"] = report["passed"].get<bool>() && report["fixture"]["valid"].get<bool>();
      }
    } else {
      report = run_inspect(config);
    }
    emit(report, config);
    return deltakit::report_passed(report) ? kPass : kFail;
  } catch (const deltakit::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const deltakit::LimitError& e) {
    std::cerr << "limit exceeded: " << e.what() << "\n";
    return kInputError;
  } catch (const deltakit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
