#include "vantage/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"

namespace vantage {

namespace fs = std::filesystem;

namespace {

using detail::json;
using detail::loadJsonFile;
using detail::require;
using detail::toPose;
using detail::toVec3;

double getNumber(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

int getInt(const json& j, const std::string& key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

PlacementConfig parsePlacement(const json& j) {
  PlacementConfig cfg;
  cfg.viewing_distance =
      getNumber(j, "viewing_distance", cfg.viewing_distance);
  if (j.contains("world_up")) {
    cfg.world_up = UnitVec3d(toVec3(j.at("world_up"), "placement.world_up")).vec();
  }
  if (j.contains("preferred_side_axis")) {
    cfg.preferred_side_axis =
        UnitVec3d(toVec3(j.at("preferred_side_axis"),
                         "placement.preferred_side_axis"))
            .vec();
  }
  cfg.side_angle_limit =
      getNumber(j, "side_angle_limit_deg", cfg.side_angle_limit * kDegPerRad) *
      kRadPerDeg;
  cfg.degenerate_angle =
      getNumber(j, "degenerate_angle_deg", cfg.degenerate_angle * kDegPerRad) *
      kRadPerDeg;
  if (!(cfg.viewing_distance > 0.0)) {
    throw ConfigError("placement.viewing_distance must be positive");
  }
  return cfg;
}

SolverConfig parseSolver(const json& j, const PlacementConfig& placement) {
  SolverConfig cfg;
  cfg.viewing_distance = placement.viewing_distance;
  cfg.w1 = getNumber(j, "w1", cfg.w1);
  cfg.w2 = getNumber(j, "w2", cfg.w2);
  cfg.w3 = getNumber(j, "w3", cfg.w3);
  cfg.w4 = getNumber(j, "w4", cfg.w4);
  cfg.w5 = getNumber(j, "w5", cfg.w5);
  cfg.delta1 = getNumber(j, "delta1", cfg.delta1);
  cfg.delta2 = getNumber(j, "delta2", cfg.delta2);
  cfg.delta3 = getNumber(j, "delta3", cfg.delta3);
  cfg.viewing_distance = getNumber(j, "viewing_distance", cfg.viewing_distance);
  cfg.max_evals = getInt(j, "max_evals", cfg.max_evals);
  cfg.ftol = getNumber(j, "ftol", cfg.ftol);
  cfg.fd_step = getNumber(j, "fd_step", cfg.fd_step);
  if (j.contains("gradient_mode")) {
    const std::string mode = j.at("gradient_mode").get<std::string>();
    if (mode == "analytic") {
      cfg.gradient_mode = SolverConfig::GradientMode::kAnalytic;
    } else if (mode == "finite-difference") {
      cfg.gradient_mode = SolverConfig::GradientMode::kFiniteDifference;
    } else {
      throw ConfigError("solver.gradient_mode: expected 'analytic' or "
                        "'finite-difference', got '" + mode + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::optional<NoGoZone> parseZone(const json& j) {
  if (j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.size() != 5) {
      throw ConfigError("zone.points: expected exactly 5 points");
    }
    std::array<Eigen::Vector3d, 5> points;
    for (int i = 0; i < 5; ++i) {
      points[static_cast<std::size_t>(i)] =
          toVec3(pts[i], "zone.points[" + std::to_string(i) + "]");
    }
    return fitPrism(points);
  }
  if (j.contains("faces")) {
    const json& faces = j.at("faces");
    if (!faces.is_array() || faces.empty()) {
      throw ConfigError("zone.faces: expected a nonempty array");
    }
    std::vector<NoGoZone::Face> parsed;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const std::string ctx = "zone.faces[" + std::to_string(i) + "]";
      parsed.push_back(
          {UnitVec3d(toVec3(require(faces[i], "normal", ctx), ctx + ".normal"))
               .vec(),
           toVec3(require(faces[i], "point", ctx), ctx + ".point")});
    }
    return NoGoZone(std::move(parsed));
  }
  throw ConfigError("zone: expected either 'points' (5) or 'faces'");
}

NormalSpec parseNormalSpec(const json& j) {
  NormalSpec spec;
  if (j.contains("normal_mode")) {
    const std::string mode = j.at("normal_mode").get<std::string>();
    if (mode == "frenet") {
      spec.mode = NormalMode::kFrenet;
    } else if (mode == "tangent") {
      spec.mode = NormalMode::kTangent;
    } else if (mode == "fixed") {
      spec.mode = NormalMode::kFixed;
    } else {
      throw ConfigError("trajectory.normal_mode: expected 'frenet', 'tangent' "
                        "or 'fixed', got '" + mode + "'");
    }
  }
  if (j.contains("fixed_normal")) {
    spec.fixed_axis = toVec3(j.at("fixed_normal"), "trajectory.fixed_normal");
  } else if (spec.mode == NormalMode::kFixed) {
    throw ConfigError("trajectory: normal_mode 'fixed' requires 'fixed_normal'");
  }
  if (j.contains("up_reference")) {
    spec.up_reference = toVec3(j.at("up_reference"), "trajectory.up_reference");
  }
  return spec;
}

std::unique_ptr<Trajectory> parseTrajectory(const json& j,
                                            const fs::path& scenario_dir,
                                            std::uint64_t seed) {
  const std::string type = require(j, "type", "trajectory").get<std::string>();
  const NormalSpec normal = parseNormalSpec(j);
  std::unique_ptr<Trajectory> traj;
  if (type == "static") {
    if (j.contains("pose")) {
      traj = makeStaticTrajectory(toPose(j.at("pose"), "trajectory.pose"));
    } else {
      const Eigen::Vector3d position =
          toVec3(require(j, "position", "trajectory"), "trajectory.position");
      const Eigen::Vector3d n =
          toVec3(require(j, "normal", "trajectory"), "trajectory.normal");
      const Eigen::Vector3d hint =
          j.contains("tangent")
              ? toVec3(j.at("tangent"), "trajectory.tangent")
              : (std::abs(n.normalized().z()) < 0.9
                     ? Eigen::Vector3d::UnitZ()
                     : Eigen::Vector3d::UnitX());
      traj = makeStaticTrajectory(
          FeatureState::fromNormal(position, UnitVec3d(n), hint).pose());
    }
  } else if (type == "circle") {
    traj = makeCircleTrajectory(
        toVec3(require(j, "center", "trajectory"), "trajectory.center"),
        require(j, "radius", "trajectory").get<double>(),
        require(j, "period", "trajectory").get<double>(),
        j.contains("axis") ? toVec3(j.at("axis"), "trajectory.axis")
                           : Eigen::Vector3d::UnitZ(),
        getNumber(j, "phase_deg", 0.0) * kRadPerDeg, normal);
  } else if (type == "figure8") {
    traj = makeFigureEightTrajectory(
        toVec3(require(j, "center", "trajectory"), "trajectory.center"),
        require(j, "half_span", "trajectory").get<double>(),
        require(j, "period", "trajectory").get<double>(),
        j.contains("axis") ? toVec3(j.at("axis"), "trajectory.axis")
                           : Eigen::Vector3d::UnitZ(),
        getNumber(j, "phase_deg", 0.0) * kRadPerDeg, normal);
  } else if (type == "polyline") {
    const json& wp = require(j, "waypoints", "trajectory");
    if (!wp.is_array() || wp.size() < 2) {
      throw ConfigError("trajectory.waypoints: expected at least 2 points");
    }
    std::vector<Eigen::Vector3d> waypoints;
    for (std::size_t i = 0; i < wp.size(); ++i) {
      waypoints.push_back(
          toVec3(wp[i], "trajectory.waypoints[" + std::to_string(i) + "]"));
    }
    traj = makePolylineTrajectory(
        waypoints, require(j, "speed", "trajectory").get<double>(),
        getNumber(j, "corner_radius", 0.0),
        j.contains("closed") && j.at("closed").get<bool>(), normal);
  } else if (type == "replay") {
    const std::string file =
        require(j, "file", "trajectory").get<std::string>();
    traj = loadReplayTrajectory((scenario_dir / file).string());
  } else {
    throw ConfigError("trajectory.type: unknown type '" + type + "'");
  }

  if (j.contains("wobble")) {
    const json& w = j.at("wobble");
    traj = withWobble(std::move(traj),
                      require(w, "amplitude", "trajectory.wobble").get<double>(),
                      require(w, "frequency", "trajectory.wobble").get<double>(),
                      seed);
  }
  return traj;
}

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void appendPose(std::string& row, const Pose3d& pose) {
  for (double v : pose.toFlat()) {
    row += ',';
    row += formatDouble(v);
  }
}

double observationCell(const CameraObservation& obs,
                       double CentroidErrors::*field) {
  if (!obs.errors) return std::numeric_limits<double>::quiet_NaN();
  return (*obs.errors).*field;
}

}  // namespace

StereoRig CameraRigConfig::buildRig() const {
  return StereoRig::withBaseline(
      baseline, CameraModel::fromFov(width, height, hfov_deg, vfov_deg));
}

Scenario loadScenarioFile(const std::string& path,
                          const ScenarioOverrides& overrides) {
  const json j = loadJsonFile(path);
  const fs::path scenario_dir = fs::path(path).parent_path();
  const std::string context = "scenario '" + path + "'";

  const int version = require(j, "schema_version", context).get<int>();
  if (version != 1) {
    throw ConfigError(context + ": unsupported schema_version " +
                      std::to_string(version));
  }

  const std::string chain_file =
      require(j, "chain", context).get<std::string>();
  Scenario sc(loadChainFile((scenario_dir / chain_file).string()));
  sc.name = j.contains("name") ? j.at("name").get<std::string>()
                               : fs::path(path).stem().string();
  sc.seed = overrides.seed.value_or(
      j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0);

  sc.controller.placement =
      parsePlacement(j.contains("placement") ? j.at("placement") : json::object());
  sc.controller.solver = parseSolver(
      j.contains("solver") ? j.at("solver") : json::object(),
      sc.controller.placement);
  if (j.contains("controller")) {
    const json& c = j.at("controller");
    sc.controller.cartesian_step_limit =
        getNumber(c, "cartesian_step_limit", sc.controller.cartesian_step_limit);
    sc.controller.max_joint_speed =
        getNumber(c, "max_joint_speed", sc.controller.max_joint_speed);
    sc.controller.newton_tol =
        getNumber(c, "newton_tol", sc.controller.newton_tol);
    sc.controller.newton_max_iter =
        getInt(c, "newton_max_iter", sc.controller.newton_max_iter);
    sc.controller.proximity_min_dist =
        getNumber(c, "proximity_min_dist", sc.controller.proximity_min_dist);
  }
  sc.controller.rate_hz = getNumber(j, "rate_hz", sc.controller.rate_hz);
  if (j.contains("floor")) {
    Floor floor;
    floor.height = require(j.at("floor"), "height", "floor").get<double>();
    floor.up = sc.controller.placement.world_up;
    sc.controller.floor = floor;
  }
  sc.controller.validate();

  if (j.contains("zone")) sc.zone = parseZone(j.at("zone"));

  if (j.contains("camera")) {
    const json& c = j.at("camera");
    sc.camera.width = getInt(c, "width", sc.camera.width);
    sc.camera.height = getInt(c, "height", sc.camera.height);
    sc.camera.hfov_deg = getNumber(c, "hfov_deg", sc.camera.hfov_deg);
    sc.camera.vfov_deg = getNumber(c, "vfov_deg", sc.camera.vfov_deg);
    sc.camera.baseline = getNumber(c, "baseline", sc.camera.baseline);
  }
  sc.camera.buildRig();  // validate early

  sc.trajectory =
      parseTrajectory(require(j, "trajectory", context), scenario_dir, sc.seed);
  sc.duration = getNumber(j, "duration", sc.trajectory->duration());
  if (!(sc.duration > 0.0)) {
    throw ConfigError(context + ": duration must be positive (set 'duration' "
                      "for static/replay trajectories)");
  }

  if (j.contains("initial_q")) {
    const json& q = j.at("initial_q");
    if (!q.is_array() ||
        static_cast<int>(q.size()) != sc.chain.dof()) {
      throw ConfigError(context + ": initial_q must have " +
                        std::to_string(sc.chain.dof()) + " entries");
    }
    JointVector q0(sc.chain.dof());
    for (int i = 0; i < sc.chain.dof(); ++i) q0(i) = q[i].get<double>();
    sc.initial_q = q0;
  }

  const fs::path out_dir = overrides.out_dir.value_or(".");
  auto resolve_output = [&out_dir](const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate.string()
                                   : (out_dir / candidate).string();
  };
  std::string csv_name = sc.name + ".csv";
  std::string summary_name = sc.name + "_summary.json";
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("csv")) csv_name = o.at("csv").get<std::string>();
    if (o.contains("summary")) summary_name = o.at("summary").get<std::string>();
  }
  sc.csv_path = resolve_output(csv_name);
  sc.summary_path = resolve_output(summary_name);
  return sc;
}

std::vector<std::string> csvColumnNames(int dof) {
  std::vector<std::string> names = {"tick", "time"};
  auto pose_block = [&names](const std::string& prefix) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        names.push_back(prefix + "_r" + std::to_string(r) + std::to_string(c));
      }
    }
    names.push_back(prefix + "_tx");
    names.push_back(prefix + "_ty");
    names.push_back(prefix + "_tz");
  };
  pose_block("feat");
  pose_block("naive");
  pose_block("cmd");
  for (int i = 0; i < dof; ++i) names.push_back("q" + std::to_string(i));
  for (const char* flag :
       {"flag_no_go_zone", "flag_below_floor", "flag_proximity",
        "flag_joint_limit", "flag_side_orientation", "newton_failed"}) {
    names.push_back(flag);
  }
  names.push_back("solver");
  names.push_back("newton_iterations");
  names.push_back("solver_iterations");
  names.push_back("solver_value_evals");
  names.push_back("solver_gradient_evals");
  names.push_back("solver_termination");
  for (const char* obj : {"obj_position", "obj_orientation", "obj_view",
                          "obj_horiz", "obj_distance", "obj_total"}) {
    names.push_back(obj);
  }
  for (const char* metric : {"vva_deg", "fd_mm", "fd_signed_mm", "pf_deg",
                             "an_deg", "pn_mm", "lt_ms"}) {
    names.push_back(metric);
  }
  for (const char* side : {"left", "right"}) {
    const std::string s(side);
    for (const char* col : {"_u", "_v", "_visible", "_l2_px", "_l2_pct",
                            "_u_err_px", "_u_err_pct", "_v_err_px",
                            "_v_err_pct"}) {
      names.push_back(s + col);
    }
  }
  return names;
}

namespace {

void appendObservation(std::string& row, const CameraObservation& obs) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row += ',';
  row += formatDouble(obs.pixel ? obs.pixel->x() : nan);
  row += ',';
  row += formatDouble(obs.pixel ? obs.pixel->y() : nan);
  row += obs.is_visible ? ",1" : ",0";
  for (double CentroidErrors::*field :
       {&CentroidErrors::l2_px, &CentroidErrors::l2_pct,
        &CentroidErrors::u_err_px, &CentroidErrors::u_err_pct,
        &CentroidErrors::v_err_px, &CentroidErrors::v_err_pct}) {
    row += ',';
    row += formatDouble(observationCell(obs, field));
  }
}

std::string csvRow(const TickSample& sample) {
  std::string row = std::to_string(sample.tick);
  row += ',';
  row += formatDouble(sample.time);
  appendPose(row, sample.feature.pose());
  appendPose(row, sample.report.naive_pose);
  appendPose(row, sample.report.commanded_pose);
  for (Eigen::Index i = 0; i < sample.report.q_command.size(); ++i) {
    row += ',';
    row += formatDouble(sample.report.q_command(i));
  }
  const ConstraintsHit& f = sample.report.constraints_hit;
  for (bool flag : {f.no_go_zone, f.below_floor, f.proximity, f.joint_limit,
                    f.side_orientation, sample.report.newton_failed}) {
    row += flag ? ",1" : ",0";
  }
  row += ',';
  row += solverName(sample.report.solver_used);
  row += ',';
  row += std::to_string(sample.report.newton_iterations);
  const bool constrained =
      sample.report.solver_used == SolverUsed::kConstrained;
  const SolveReport& sr = sample.report.solver_report;
  row += ',';
  row += std::to_string(constrained ? sr.iterations : 0);
  row += ',';
  row += std::to_string(constrained ? sr.value_evals : 0);
  row += ',';
  row += std::to_string(constrained ? sr.gradient_evals : 0);
  row += ',';
  row += constrained ? terminationName(sr.termination) : "-";
  const ObjectiveBreakdown& b = sample.report.objective;
  for (double v : {b.position_cost, b.orientation_cost, b.view_alignment_cost,
                   b.horizontality_cost, b.distance_cost, b.total}) {
    row += ',';
    row += formatDouble(v);
  }
  const MetricsRecord& m = sample.metrics;
  for (double v : {m.vva_deg, m.fd_mm, m.fd_signed_mm, m.pf_deg, m.an_deg,
                   m.pn_mm, m.lt_ms}) {
    row += ',';
    row += formatDouble(v);
  }
  appendObservation(row, m.left);
  appendObservation(row, m.right);
  return row;
}

JointVector autoInitialQ(const Scenario& sc) {
  const JointVector mid = sc.chain.midRange();
  const FeatureState first = sc.trajectory->at(0.0);
  const std::optional<Pose3d> naive_opt =
      computeNaivePose(first, sc.controller.placement);
  if (!naive_opt) return mid;

  // Mirror the controller's own substitutions so the start configuration is
  // already on the pose the first tick will ask for.
  Pose3d start_pose = *naive_opt;
  if (sc.zone && contains(*sc.zone, start_pose.translation())) {
    start_pose = boundaryPose(*sc.zone, start_pose, first,
                              sc.controller.placement,
                              UnitVec3d(start_pose.axis(0)));
  }
  if (sc.controller.floor &&
      sc.controller.floor->below(start_pose.translation())) {
    start_pose = lookAtPose(sc.controller.floor->project(start_pose.translation()),
                            first.translation(), sc.controller.placement,
                            UnitVec3d(start_pose.axis(0)));
  }
  const std::optional<Pose3d> naive = start_pose;

  const auto usable = [&sc](const JointVector& q) {
    if (!withinJointLimits(sc.chain, q)) return false;
    if (!sc.zone) return true;
    return !contains(*sc.zone, forwardKinematics(sc.chain, q).translation());
  };

  // Newton with random restarts. The mid-range branch is often out of bounds,
  // and which branch Newton lands on depends entirely on the seed, so collect
  // every usable branch and keep the one with the most room to the limits --
  // a branch that starts pinned is lost to the bound within a few ticks.
  const JointVector range = sc.chain.upperLimits() - sc.chain.lowerLimits();
  const auto margin = [&](const JointVector& q) {
    return ((q - sc.chain.lowerLimits()).cwiseMin(sc.chain.upperLimits() - q))
        .cwiseQuotient(range)
        .minCoeff();
  };

  std::mt19937_64 rng(sc.seed ^ 0x9e3779b97f4a7c15ULL);
  JointVector seed = mid;
  JointVector fallback_seed = mid;
  std::optional<JointVector> best;
  double best_margin = -1.0;
  for (int attempt = 0; attempt < 25; ++attempt) {
    const NewtonIkResult solved = ikNewton(sc.chain, *naive, seed);
    const JointVector q_wrapped =
        solved.converged ? wrapToLimits(sc.chain, solved.q) : solved.q;
    if (solved.converged && usable(q_wrapped) &&
        margin(q_wrapped) > best_margin) {
      best = q_wrapped;
      best_margin = margin(q_wrapped);
    }
    if (attempt == 0) fallback_seed = clampToLimits(sc.chain, q_wrapped);
    for (int i = 0; i < seed.size(); ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      seed(i) = sc.chain.lowerLimits()(i) +
                u * (sc.chain.upperLimits()(i) - sc.chain.lowerLimits()(i));
    }
  }
  if (best) return *best;
  ConstrainedIkProblem problem{sc.chain, naive->translation(),
                               first.translation(),
                               sc.controller.placement.world_up,
                               sc.controller.solver};
  const ConstrainedIkResult fallback = solveConstrainedIk(problem, fallback_seed);
  if (usable(fallback.q)) return fallback.q;
  return mid;
}

void ensureParentDir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

}  // namespace

RunResult runScenario(const Scenario& scenario,
                      std::vector<TickSample>* capture) {
  if (!scenario.trajectory) {
    throw ConfigError("runScenario: scenario has no trajectory");
  }
  if (!(scenario.duration > 0.0)) {
    throw ConfigError("runScenario: duration must be positive");
  }
  const Controller controller(scenario.chain, scenario.controller,
                              scenario.zone);
  const StereoRig rig = scenario.camera.buildRig();
  const JointVector q0 =
      scenario.initial_q ? *scenario.initial_q : autoInitialQ(scenario);
  ControllerState state = controller.makeState(q0, scenario.seed);

  const double dt = scenario.controller.dt();
  const auto ticks =
      std::max<std::int64_t>(1, std::llround(scenario.duration / dt));

  std::ofstream csv;
  if (!scenario.csv_path.empty()) {
    ensureParentDir(scenario.csv_path);
    csv.open(scenario.csv_path);
    if (!csv) {
      throw ConfigError("cannot write CSV '" + scenario.csv_path + "'");
    }
    const std::vector<std::string> names = csvColumnNames(scenario.chain.dof());
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) csv << ',';
      csv << names[i];
    }
    csv << '\n';
  }

  std::vector<MetricsRecord> records;
  records.reserve(static_cast<std::size_t>(ticks));
  for (std::int64_t i = 0; i < ticks; ++i) {
    TickSample sample;
    sample.tick = i;
    sample.time = static_cast<double>(i) * dt;
    sample.feature = scenario.trajectory->at(sample.time);
    sample.report = controller.tick(state, sample.feature);
    sample.metrics = computeMetrics(sample.report, sample.feature, rig,
                                    scenario.controller.placement);
    if (csv.is_open()) csv << csvRow(sample) << '\n';
    records.push_back(sample.metrics);
    if (capture) capture->push_back(std::move(sample));
  }
  if (csv.is_open() && !csv.good()) {
    throw ConfigError("write failure on CSV '" + scenario.csv_path + "'");
  }

  RunResult result;
  result.ticks = ticks;
  result.summary = aggregate(records);
  result.csv_path = scenario.csv_path;
  result.summary_path = scenario.summary_path;
  if (!scenario.summary_path.empty()) {
    ensureParentDir(scenario.summary_path);
    std::ofstream out(scenario.summary_path);
    if (!out) {
      throw ConfigError("cannot write summary '" + scenario.summary_path + "'");
    }
    out << summaryToJsonText(result.summary, scenario.name, scenario.seed);
  }
  return result;
}

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double cellToDouble(const std::string& cell, const std::string& path,
                    int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == 0) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + path + "' line " + std::to_string(line_no) +
                      ": non-numeric cell '" + cell + "'");
  }
}

}  // namespace

CsvReplay summarizeCsv(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open CSV '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("'" + csv_path + "': empty file");
  }
  const std::vector<std::string> header = splitCsvLine(line);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  auto column = [&index, &csv_path](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) {
      throw ConfigError("'" + csv_path + "': missing column '" + name +
                        "' (not a per-tick log?)");
    }
    return it->second;
  };

  struct SideCols {
    std::size_t visible, l2_px, l2_pct, u_err_px, u_err_pct, v_err_px,
        v_err_pct, u, v;
  };
  auto side_cols = [&column](const std::string& side) {
    return SideCols{column(side + "_visible"),   column(side + "_l2_px"),
                    column(side + "_l2_pct"),    column(side + "_u_err_px"),
                    column(side + "_u_err_pct"), column(side + "_v_err_px"),
                    column(side + "_v_err_pct"), column(side + "_u"),
                    column(side + "_v")};
  };
  const SideCols left_cols = side_cols("left");
  const SideCols right_cols = side_cols("right");
  const std::size_t c_vva = column("vva_deg"), c_fd = column("fd_mm"),
                    c_fds = column("fd_signed_mm"), c_pf = column("pf_deg"),
                    c_an = column("an_deg"), c_pn = column("pn_mm"),
                    c_lt = column("lt_ms"), c_solver = column("solver");
  const std::size_t c_flags[5] = {
      column("flag_no_go_zone"), column("flag_below_floor"),
      column("flag_proximity"), column("flag_joint_limit"),
      column("flag_side_orientation")};

  CsvReplay replay;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = splitCsvLine(line);
    if (cells.size() < header.size()) {
      throw ConfigError("'" + csv_path + "' line " + std::to_string(line_no) +
                        ": expected " + std::to_string(header.size()) +
                        " cells, found " + std::to_string(cells.size()));
    }
    auto num = [&](std::size_t c) {
      return cellToDouble(cells[c], csv_path, line_no);
    };
    MetricsRecord r;
    r.vva_deg = num(c_vva);
    r.fd_mm = num(c_fd);
    r.fd_signed_mm = num(c_fds);
    r.pf_deg = num(c_pf);
    r.an_deg = num(c_an);
    r.pn_mm = num(c_pn);
    r.lt_ms = num(c_lt);
    r.flags.no_go_zone = num(c_flags[0]) != 0.0;
    r.flags.below_floor = num(c_flags[1]) != 0.0;
    r.flags.proximity = num(c_flags[2]) != 0.0;
    r.flags.joint_limit = num(c_flags[3]) != 0.0;
    r.flags.side_orientation = num(c_flags[4]) != 0.0;
    r.solver_constrained = cells[c_solver] == "constrained";
    auto read_side = [&](const SideCols& cols) {
      CameraObservation obs;
      obs.is_visible = num(cols.visible) != 0.0;
      const double u = num(cols.u);
      const double v = num(cols.v);
      if (!std::isnan(u) && !std::isnan(v)) {
        obs.pixel = Eigen::Vector2d(u, v);
        CentroidErrors e;
        e.l2_px = num(cols.l2_px);
        e.l2_pct = num(cols.l2_pct);
        e.u_err_px = num(cols.u_err_px);
        e.u_err_pct = num(cols.u_err_pct);
        e.v_err_px = num(cols.v_err_px);
        e.v_err_pct = num(cols.v_err_pct);
        obs.errors = e;
      }
      return obs;
    };
    r.left = read_side(left_cols);
    r.right = read_side(right_cols);
    replay.records.push_back(std::move(r));
  }
  replay.summary = aggregate(replay.records);
  return replay;
}

std::string summaryToJsonText(const MetricSummary& summary,
                              const std::string& name,
                              std::optional<std::uint64_t> seed) {
  json splits = json::object();
  const auto split_json = [](const SplitSummary& split) {
    json out = json::object();
    for (const std::string& metric : metricNames()) {
      const SummaryStat& stat = split.at(metric);
      out[metric] = {{"mean", stat.mean},
                     {"std", stat.stddev},
                     {"count", stat.count}};
    }
    return out;
  };
  splits["all"] = split_json(summary.all);
  splits["without_constraints"] = split_json(summary.without_constraints);
  splits["with_constraints"] = split_json(summary.with_constraints);

  json out = {{"schema_version", 1},
              {"name", name},
              {"ticks", summary.ticks},
              {"splits", splits}};
  if (seed) out["seed"] = *seed;
  return out.dump(2) + "\n";
}

}  // namespace vantage
