#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "vantage/registration.hpp"
#include "vantage/scenario.hpp"

namespace {

using vantage::ScenarioOverrides;

int cmdRun(const std::string& scenario_file, const ScenarioOverrides& overrides) {
  const vantage::Scenario scenario =
      vantage::loadScenarioFile(scenario_file, overrides);
  const vantage::RunResult result = vantage::runScenario(scenario);
  const vantage::SummaryStat& vva = result.summary.all.at("vva_deg");
  const vantage::SummaryStat& fd = result.summary.all.at("fd_mm");
  const vantage::SummaryStat& visible = result.summary.all.at("visible_any_pct");
  std::cout << "scenario '" << scenario.name << "': " << result.ticks
            << " ticks (seed " << scenario.seed << ")\n"
            << "  vva " << vva.mean << " deg, fd " << fd.mean
            << " mm, visibility " << visible.mean << " %\n"
            << "  csv:     " << result.csv_path << "\n"
            << "  summary: " << result.summary_path << "\n";
  return 0;
}

int cmdReplay(const std::string& csv_file, std::string summary_out) {
  const vantage::CsvReplay replay = vantage::summarizeCsv(csv_file);
  if (summary_out.empty()) {
    const auto dot = csv_file.rfind('.');
    summary_out = csv_file.substr(0, dot == std::string::npos ? csv_file.size()
                                                              : dot) +
                  "_summary.json";
  }
  std::ofstream out(summary_out);
  if (!out) {
    throw vantage::ConfigError("cannot write summary '" + summary_out + "'");
  }
  out << vantage::summaryToJsonText(replay.summary, csv_file, std::nullopt);
  std::cout << "replayed " << replay.records.size() << " ticks -> "
            << summary_out << "\n";
  return 0;
}

int cmdSummarize(const std::string& csv_file) {
  const vantage::CsvReplay replay = vantage::summarizeCsv(csv_file);
  std::cout << vantage::summaryToJsonText(replay.summary, csv_file,
                                          std::nullopt);
  return 0;
}

/// Paired-point file: CSV rows `ax,ay,az,bx,by,bz` (header optional).
int cmdCalibrate(const std::string& pairs_file, bool l1_refine) {
  std::ifstream in(pairs_file);
  if (!in) {
    throw vantage::ConfigError("cannot open '" + pairs_file + "'");
  }
  std::vector<Eigen::Vector3d> a_points, b_points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    bool numeric = true;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header row
      throw vantage::ConfigError("'" + pairs_file + "' line " +
                                 std::to_string(line_no) +
                                 ": non-numeric cell");
    }
    if (values.size() != 6) {
      throw vantage::ConfigError("'" + pairs_file + "' line " +
                                 std::to_string(line_no) +
                                 ": expected 6 numbers per row");
    }
    a_points.emplace_back(values[0], values[1], values[2]);
    b_points.emplace_back(values[3], values[4], values[5]);
  }

  vantage::RegistrationOptions options;
  options.l1_refine = l1_refine;
  const vantage::RegistrationResult reg =
      vantage::registerPairedPoints(a_points, b_points, options);

  nlohmann::json out;
  const auto flat = reg.transform.toFlat();
  out["rotation"] = std::vector<double>(flat.begin(), flat.begin() + 9);
  out["translation"] = std::vector<double>(flat.begin() + 9, flat.end());
  out["pairs"] = a_points.size();
  out["mean_abs_error"] = reg.mean_abs_error;
  out["rms_error"] = reg.rms_error;
  out["max_error"] = reg.max_error;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera-placement controller simulator"};
  app.require_subcommand(1);

  std::string scenario_file;
  ScenarioOverrides overrides;
  std::uint64_t seed_override = 0;
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario file");
  run->add_option("scenario", scenario_file, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* seed_opt =
      run->add_option("--seed", seed_override, "Override the scenario seed");
  std::string out_dir;
  CLI::Option* out_opt = run->add_option(
      "--out", out_dir, "Directory for relative output paths");

  std::string replay_csv, replay_out;
  CLI::App* replay =
      app.add_subcommand("replay", "Re-aggregate a per-tick CSV into a summary");
  replay->add_option("csv", replay_csv, "Per-tick CSV log")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Summary JSON path");

  std::string summarize_csv;
  CLI::App* summarize =
      app.add_subcommand("summarize", "Print the summary of a per-tick CSV");
  summarize->add_option("csv", summarize_csv, "Per-tick CSV log")
      ->required()
      ->check(CLI::ExistingFile);

  std::string pairs_file;
  bool l1_refine = false;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Rigid registration from a paired-points file");
  calibrate->add_option("pairs", pairs_file, "CSV of ax,ay,az,bx,by,bz rows")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_flag("--l1", l1_refine,
                      "Refine toward the least-absolute-error fit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (*seed_opt) overrides.seed = seed_override;
      if (*out_opt) overrides.out_dir = out_dir;
      return cmdRun(scenario_file, overrides);
    }
    if (replay->parsed()) return cmdReplay(replay_csv, replay_out);
    if (summarize->parsed()) return cmdSummarize(summarize_csv);
    if (calibrate->parsed()) return cmdCalibrate(pairs_file, l1_refine);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
