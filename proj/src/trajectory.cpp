#include "vantage/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "vantage/errors.hpp"

namespace vantage {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

/// Unit vector orthogonal to `axis` (deterministic choice).
Eigen::Vector3d anyPerpendicular(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d a = axis.normalized();
  const Eigen::Vector3d seed = std::abs(a.x()) < 0.9
                                   ? Eigen::Vector3d::UnitX()
                                   : Eigen::Vector3d::UnitY();
  return a.cross(seed).normalized();
}

/// Hint for the feature x-axis: the first candidate not close to parallel
/// with the normal.
Eigen::Vector3d pickHint(const Eigen::Vector3d& normal,
                         const Eigen::Vector3d& primary,
                         const Eigen::Vector3d& secondary) {
  const Eigen::Vector3d n = normal.normalized();
  for (const Eigen::Vector3d& candidate : {primary, secondary}) {
    const double len = candidate.norm();
    if (len > 1e-12 && std::abs(n.dot(candidate) / len) < 0.9) {
      return candidate;
    }
  }
  return anyPerpendicular(n);
}

FeatureState featureAt(const Eigen::Vector3d& position,
                       const Eigen::Vector3d& tangent,
                       const Eigen::Vector3d& frenet_normal,
                       const NormalSpec& spec) {
  Eigen::Vector3d normal;
  switch (spec.mode) {
    case NormalMode::kFrenet:
      normal = frenet_normal;
      break;
    case NormalMode::kTangent:
      normal = tangent;
      break;
    case NormalMode::kFixed:
      normal = spec.fixed_axis;
      break;
  }
  const Eigen::Vector3d hint =
      spec.mode == NormalMode::kTangent
          ? pickHint(normal, spec.up_reference, frenet_normal)
          : pickHint(normal, tangent, spec.up_reference);
  return FeatureState::fromNormal(position, UnitVec3d(normal), hint);
}

class StaticTrajectory final : public Trajectory {
 public:
  explicit StaticTrajectory(const Pose3d& pose) : feature_(pose) {}
  double duration() const override { return 0.0; }
  FeatureState at(double) const override { return feature_; }

 private:
  FeatureState feature_;
};

class CircleTrajectory final : public Trajectory {
 public:
  CircleTrajectory(const Eigen::Vector3d& center, double radius, double period,
                   const Eigen::Vector3d& axis, double phase,
                   const NormalSpec& normal)
      : center_(center),
        radius_(radius),
        period_(period),
        phase_(phase),
        normal_(normal) {
    if (!(radius > 0.0)) throw ConfigError("circle trajectory: radius must be positive");
    if (!(period > 0.0)) throw ConfigError("circle trajectory: period must be positive");
    axis_ = UnitVec3d(axis).vec();
    e1_ = anyPerpendicular(axis_);
    e2_ = axis_.cross(e1_);
  }

  double duration() const override { return period_; }

  FeatureState at(double t) const override {
    const double a = kTwoPi * t / period_ + phase_;
    const Eigen::Vector3d radial = std::cos(a) * e1_ + std::sin(a) * e2_;
    const Eigen::Vector3d position = center_ + radius_ * radial;
    const Eigen::Vector3d tangent = -std::sin(a) * e1_ + std::cos(a) * e2_;
    // In-plane left normal (= axis x tangent) is the inward Frenet normal.
    return featureAt(position, tangent, -radial, normal_);
  }

 private:
  Eigen::Vector3d center_, axis_, e1_, e2_;
  double radius_, period_, phase_;
  NormalSpec normal_;
};

class FigureEightTrajectory final : public Trajectory {
 public:
  FigureEightTrajectory(const Eigen::Vector3d& center, double half_span,
                        double period, const Eigen::Vector3d& axis,
                        double phase, const NormalSpec& normal)
      : center_(center), half_span_(half_span), period_(period), phase_(phase),
        normal_(normal) {
    if (!(half_span > 0.0)) {
      throw ConfigError("figure-eight trajectory: half_span must be positive");
    }
    if (!(period > 0.0)) {
      throw ConfigError("figure-eight trajectory: period must be positive");
    }
    axis_ = UnitVec3d(axis).vec();
    e1_ = anyPerpendicular(axis_);
    e2_ = axis_.cross(e1_);
  }

  double duration() const override { return period_; }

  FeatureState at(double t) const override {
    // Gerono lemniscate: never has a vanishing tangent, so the in-plane
    // left normal stays continuous through the self-crossing.
    const double a = kTwoPi * t / period_ + phase_;
    const Eigen::Vector3d position =
        center_ + half_span_ * std::sin(a) * e1_ +
        half_span_ * std::sin(a) * std::cos(a) * e2_;
    const Eigen::Vector3d tangent =
        (std::cos(a) * e1_ + std::cos(2.0 * a) * e2_).normalized();
    return featureAt(position, tangent, axis_.cross(tangent), normal_);
  }

 private:
  Eigen::Vector3d center_, axis_, e1_, e2_;
  double half_span_, period_, phase_;
  NormalSpec normal_;
};

class PolylineTrajectory final : public Trajectory {
 public:
  PolylineTrajectory(const std::vector<Eigen::Vector3d>& waypoints,
                     double speed, double corner_radius, bool closed,
                     const NormalSpec& normal)
      : speed_(speed), closed_(closed), normal_(normal) {
    if (!(speed > 0.0)) {
      throw ConfigError("polyline trajectory: speed must be positive");
    }
    if (corner_radius < 0.0) {
      throw ConfigError("polyline trajectory: corner_radius must be >= 0");
    }
    const std::size_t m = waypoints.size();
    if (m < 2 || (closed && m < 3)) {
      throw ConfigError("polyline trajectory: need at least 2 waypoints "
                        "(3 when closed)");
    }

    struct Edge {
      Eigen::Vector3d a, u;
      double len, trim_start = 0.0, trim_end = 0.0;
    };
    const std::size_t n_edges = closed ? m : m - 1;
    std::vector<Edge> edges(n_edges);
    for (std::size_t i = 0; i < n_edges; ++i) {
      const Eigen::Vector3d& a = waypoints[i];
      const Eigen::Vector3d& b = waypoints[(i + 1) % m];
      const Eigen::Vector3d d = b - a;
      const double len = d.norm();
      if (len <= 1e-9) {
        throw ConfigError("polyline trajectory: consecutive waypoints " +
                          std::to_string(i) + " coincide");
      }
      edges[i] = {a, d / len, len};
    }

    // Fillet at the corner following edge i (between edge i and the next).
    struct Corner {
      bool has_arc = false;
      Eigen::Vector3d arc_center, entry_radial, arc_axis;
      double radius = 0.0, angle = 0.0;
    };
    const std::size_t n_corners = closed ? n_edges : n_edges - 1;
    std::vector<Corner> corners(n_corners);
    for (std::size_t i = 0; i < n_corners; ++i) {
      Edge& in = edges[i];
      Edge& out = edges[(i + 1) % n_edges];
      const Eigen::Vector3d vertex = out.a;
      const double c = std::clamp(in.u.dot(out.u), -1.0, 1.0);
      if (c >= 1.0 - 1e-12) continue;  // straight-through corner
      if (c <= -1.0 + 1e-9) {
        throw ConfigError("polyline trajectory: path reverses at waypoint " +
                          std::to_string((i + 1) % m));
      }
      if (corner_radius == 0.0) continue;  // sharp corner allowed
      const double theta = std::acos(c);
      const double tangent_len = corner_radius * std::tan(0.5 * theta);
      if (tangent_len > 0.5 * in.len + 1e-12 ||
          tangent_len > 0.5 * out.len + 1e-12) {
        throw ConfigError(
            "polyline trajectory: corner_radius too large at waypoint " +
            std::to_string((i + 1) % m));
      }
      in.trim_end = tangent_len;
      out.trim_start = tangent_len;

      Corner& corner = corners[i];
      corner.has_arc = true;
      corner.radius = corner_radius;
      corner.angle = theta;
      corner.arc_axis = in.u.cross(out.u).normalized();
      const Eigen::Vector3d bisector = (out.u - in.u).normalized();
      corner.arc_center =
          vertex + (corner_radius / std::cos(0.5 * theta)) * bisector;
      const Eigen::Vector3d entry = vertex - tangent_len * in.u;
      corner.entry_radial = (entry - corner.arc_center) / corner_radius;
    }

    auto push_line = [this](const Eigen::Vector3d& from,
                            const Eigen::Vector3d& to) {
      const double len = (to - from).norm();
      if (len <= 1e-12) return;
      elements_.push_back(Element{Element::kLine, from, (to - from) / len,
                                  Eigen::Vector3d::Zero(), 0.0, len});
    };
    auto push_arc = [this](const Corner& corner) {
      elements_.push_back(Element{Element::kArc, corner.arc_center,
                                  corner.entry_radial, corner.arc_axis,
                                  corner.radius, corner.radius * corner.angle});
    };
    auto edge_start = [&edges](std::size_t i) {
      return Eigen::Vector3d(edges[i].a + edges[i].trim_start * edges[i].u);
    };
    auto edge_end = [&edges](std::size_t i) {
      return Eigen::Vector3d(edges[i].a +
                             (edges[i].len - edges[i].trim_end) * edges[i].u);
    };

    if (!closed) {
      for (std::size_t i = 0; i < n_edges; ++i) {
        push_line(edge_start(i), edge_end(i));
        if (i < n_corners && corners[i].has_arc) push_arc(corners[i]);
      }
    } else {
      // Start mid-way along edge 0's straight part so no fillet straddles
      // the period boundary.
      const Edge& first = edges[0];
      const double mid =
          0.5 * (first.trim_start + (first.len - first.trim_end));
      const Eigen::Vector3d start = first.a + mid * first.u;
      push_line(start, edge_end(0));
      if (corners[0].has_arc) push_arc(corners[0]);
      for (std::size_t i = 1; i < n_edges; ++i) {
        push_line(edge_start(i), edge_end(i));
        if (corners[i].has_arc) push_arc(corners[i]);
      }
      push_line(edge_start(0), start);
    }

    cumulative_.reserve(elements_.size());
    double total = 0.0;
    for (const Element& e : elements_) {
      total += e.length;
      cumulative_.push_back(total);
    }
    if (total <= 0.0) {
      throw ConfigError("polyline trajectory: path has zero length");
    }
    length_ = total;
  }

  double duration() const override { return length_ / speed_; }

  FeatureState at(double t) const override {
    double s = speed_ * std::max(t, 0.0);
    if (closed_) {
      s = std::fmod(s, length_);
    } else {
      s = std::min(s, length_);
    }
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t idx = std::min(
        static_cast<std::size_t>(it - cumulative_.begin()),
        elements_.size() - 1);
    const Element& e = elements_[idx];
    const double s_local =
        s - (idx == 0 ? 0.0 : cumulative_[idx - 1]);

    Eigen::Vector3d position, tangent, frenet;
    if (e.kind == Element::kLine) {
      position = e.anchor + s_local * e.direction;
      tangent = e.direction;
      frenet = normal_.up_reference.cross(tangent);
      if (frenet.norm() <= 1e-9) frenet = anyPerpendicular(tangent);
      frenet.normalize();
    } else {
      const double phi = s_local / e.radius;
      const Eigen::Vector3d radial =
          Eigen::AngleAxisd(phi, e.axis).toRotationMatrix() * e.direction;
      position = e.anchor + e.radius * radial;
      tangent = e.axis.cross(radial);
      frenet = normal_.up_reference.cross(tangent);
      if (frenet.norm() <= 1e-9) frenet = anyPerpendicular(tangent);
      frenet.normalize();
    }
    return featureAt(position, tangent, frenet, normal_);
  }

 private:
  struct Element {
    enum Kind { kLine, kArc } kind;
    Eigen::Vector3d anchor;     // line start / arc center
    Eigen::Vector3d direction;  // line unit direction / arc entry radial
    Eigen::Vector3d axis;       // arc rotation axis
    double radius;
    double length;
  };

  std::vector<Element> elements_;
  std::vector<double> cumulative_;
  double length_ = 0.0;
  double speed_;
  bool closed_;
  NormalSpec normal_;
};

class ReplayTrajectory final : public Trajectory {
 public:
  ReplayTrajectory(std::vector<double> times, std::vector<Pose3d> poses)
      : times_(std::move(times)), poses_(std::move(poses)) {
    if (times_.empty() || times_.size() != poses_.size()) {
      throw ConfigError("replay trajectory: need matching, nonempty time and "
                        "pose lists");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1])) {
        throw ConfigError("replay trajectory: times must increase strictly");
      }
    }
  }

  double duration() const override { return times_.back(); }

  FeatureState at(double t) const override {
    if (t <= times_.front()) return FeatureState(poses_.front());
    if (t >= times_.back()) return FeatureState(poses_.back());
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double alpha = (t - times_[lo]) / (times_[hi] - times_[lo]);
    const Eigen::Quaterniond qa(poses_[lo].rotation());
    const Eigen::Quaterniond qb(poses_[hi].rotation());
    return FeatureState(Pose3d(
        qa.slerp(alpha, qb).toRotationMatrix(),
        (1.0 - alpha) * poses_[lo].translation() +
            alpha * poses_[hi].translation()));
  }

 private:
  std::vector<double> times_;
  std::vector<Pose3d> poses_;
};

class WobbleTrajectory final : public Trajectory {
 public:
  WobbleTrajectory(std::unique_ptr<Trajectory> base, double amplitude,
                   double frequency, std::uint64_t seed)
      : base_(std::move(base)), amplitude_(amplitude), frequency_(frequency) {
    if (amplitude < 0.0) {
      throw ConfigError("wobble: amplitude must be >= 0");
    }
    if (!(frequency > 0.0)) {
      throw ConfigError("wobble: frequency must be positive");
    }
    // Phases from the raw generator stream (not a distribution object), so
    // identical seeds give identical streams on every platform.
    std::mt19937_64 rng(seed);
    for (double& phase : phases_) {
      phase = kTwoPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
  }

  double duration() const override { return base_->duration(); }

  FeatureState at(double t) const override {
    const FeatureState base = base_->at(t);
    Eigen::Vector3d offset;
    for (int k = 0; k < 3; ++k) {
      offset(k) = amplitude_ * std::sin(kTwoPi * frequency_ * t + phases_[k]);
    }
    return FeatureState(Pose3d(base.pose().rotation(),
                               base.pose().translation() + offset));
  }

 private:
  std::unique_ptr<Trajectory> base_;
  double amplitude_, frequency_;
  double phases_[3] = {0.0, 0.0, 0.0};
};

}  // namespace

std::unique_ptr<Trajectory> makeStaticTrajectory(const Pose3d& pose) {
  return std::make_unique<StaticTrajectory>(pose);
}

std::unique_ptr<Trajectory> makeCircleTrajectory(const Eigen::Vector3d& center,
                                                 double radius, double period,
                                                 const Eigen::Vector3d& axis,
                                                 double phase,
                                                 const NormalSpec& normal) {
  return std::make_unique<CircleTrajectory>(center, radius, period, axis, phase,
                                            normal);
}

std::unique_ptr<Trajectory> makeFigureEightTrajectory(
    const Eigen::Vector3d& center, double half_span, double period,
    const Eigen::Vector3d& axis, double phase, const NormalSpec& normal) {
  return std::make_unique<FigureEightTrajectory>(center, half_span, period,
                                                 axis, phase, normal);
}

std::unique_ptr<Trajectory> makePolylineTrajectory(
    const std::vector<Eigen::Vector3d>& waypoints, double speed,
    double corner_radius, bool closed, const NormalSpec& normal) {
  return std::make_unique<PolylineTrajectory>(waypoints, speed, corner_radius,
                                              closed, normal);
}

std::unique_ptr<Trajectory> makeReplayTrajectory(
    const std::vector<double>& times, const std::vector<Pose3d>& poses) {
  return std::make_unique<ReplayTrajectory>(times, poses);
}

std::unique_ptr<Trajectory> loadReplayTrajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("replay trajectory: cannot open '" + path + "'");
  }
  std::vector<double> times;
  std::vector<Pose3d> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> values;
    std::string cell;
    bool numeric = true;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == 0) throw std::invalid_argument(cell);
        values.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header row
      throw ConfigError("replay trajectory: non-numeric row at '" + path +
                        "' line " + std::to_string(line_no));
    }
    if (values.size() != 13) {
      throw ConfigError("replay trajectory: expected 13 columns (time + pose) "
                        "at '" + path + "' line " + std::to_string(line_no));
    }
    std::array<double, 12> flat;
    std::copy(values.begin() + 1, values.end(), flat.begin());
    const Pose3d pose = Pose3d::fromFlat(flat);
    if (!pose.isValid(1e-6)) {
      throw ConfigError("replay trajectory: non-rigid pose at '" + path +
                        "' line " + std::to_string(line_no));
    }
    times.push_back(values[0]);
    poses.push_back(pose);
  }
  return makeReplayTrajectory(times, poses);
}

std::unique_ptr<Trajectory> withWobble(std::unique_ptr<Trajectory> base,
                                       double amplitude, double frequency,
                                       std::uint64_t seed) {
  return std::make_unique<WobbleTrajectory>(std::move(base), amplitude,
                                            frequency, seed);
}

}  // namespace vantage
