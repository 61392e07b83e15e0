#pragma once

#include <json.hpp>

#include <fstream>
#include <string>

#include "vantage/errors.hpp"
#include "vantage/geometry.hpp"

namespace vantage::detail {

using nlohmann::json;

inline json loadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline const json& require(const json& j, const std::string& key,
                           const std::string& context) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(context + ": missing required field '" + key + "'");
  return *it;
}

inline Eigen::Vector3d toVec3(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(context + ": expected an array of 3 numbers");
  return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(),
                         j[2].get<double>());
}

/// Pose object: {"rotation": [9 numbers, row-major], "translation": [3]}.
/// Both fields optional, defaulting to identity / zero.
inline Pose3d toPose(const json& j, const std::string& context) {
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  if (j.contains("rotation")) {
    const json& r = j["rotation"];
    if (!r.is_array() || r.size() != 9)
      throw ConfigError(context + ".rotation: expected 9 numbers (row-major)");
    for (int k = 0; k < 9; ++k) rot(k / 3, k % 3) = r[k].get<double>();
  }
  if (j.contains("translation")) t = toVec3(j["translation"], context + ".translation");
  Pose3d pose(rot, t);
  if (!pose.isValid(1e-6))
    throw ConfigError(context + ".rotation: not orthonormal with det +1");
  return pose;
}

}  // namespace vantage::detail
