#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vantage/metrics.hpp"
#include "vantage/trajectory.hpp"

namespace vantage {

/// Stereo-rig parameters as they appear in the scenario file.
struct CameraRigConfig {
  int width = 1280;
  int height = 960;
  double hfov_deg = 62.2;
  double vfov_deg = 48.8;
  double baseline = 0.015;  // m

  StereoRig buildRig() const;
};

/// A fully loaded, validated simulation setup. Move-only (owns the
/// trajectory); build one with loadScenarioFile or assemble it directly in
/// tests.
struct Scenario {
  explicit Scenario(KinematicChain chain_in) : chain(std::move(chain_in)) {}

  std::string name = "scenario";
  KinematicChain chain;
  std::optional<NoGoZone> zone;
  ControllerConfig controller;
  CameraRigConfig camera;
  std::unique_ptr<Trajectory> trajectory;
  double duration = 0.0;  // simulated seconds
  std::uint64_t seed = 0;
  std::optional<JointVector> initial_q;  // default: solved from the first pose
  std::string csv_path;      // empty = do not write
  std::string summary_path;  // empty = do not write
};

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;  // base for relative output paths
};

/// Parses a scenario JSON file (schema_version 1; schema documented in the
/// README). Referenced files (chain, replay streams) resolve relative to the
/// scenario file's directory; output paths resolve against the override
/// directory when given. Throws ConfigError with path/field context.
Scenario loadScenarioFile(const std::string& path,
                          const ScenarioOverrides& overrides = {});

/// One simulated tick captured in full (used by tests and replay tooling).
struct TickSample {
  std::int64_t tick = 0;
  double time = 0.0;
  FeatureState feature{Pose3d()};
  TickReport report;
  MetricsRecord metrics;
};

struct RunResult {
  std::int64_t ticks = 0;
  MetricSummary summary;
  std::string csv_path;
  std::string summary_path;
};

/// Drives the controller over the scenario trajectory, writing the per-tick
/// CSV and summary JSON (when paths are set). `capture` collects every tick
/// when non-null.
RunResult runScenario(const Scenario& scenario,
                      std::vector<TickSample>* capture = nullptr);

/// Reads a per-tick CSV back into metric records and re-aggregates them.
struct CsvReplay {
  std::vector<MetricsRecord> records;
  MetricSummary summary;
};
CsvReplay summarizeCsv(const std::string& csv_path);

/// Summary JSON text ({"schema_version", "name", "seed"?, "ticks", "splits"}).
std::string summaryToJsonText(const MetricSummary& summary,
                              const std::string& name,
                              std::optional<std::uint64_t> seed);

/// Column names of the per-tick CSV for a chain with `dof` joints.
std::vector<std::string> csvColumnNames(int dof);

}  // namespace vantage
