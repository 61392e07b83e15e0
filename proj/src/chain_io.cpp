#include "vantage/kinematics.hpp"

#include "json_util.hpp"

namespace vantage {

KinematicChain loadChainFile(const std::string& path) {
  using detail::json, detail::require, detail::toVec3, detail::toPose;
  const json root = detail::loadJsonFile(path);

  const json& joints_json = require(root, "joints", path);
  if (!joints_json.is_array() || joints_json.empty())
    throw ConfigError(path + ": 'joints' must be a non-empty array");

  std::vector<Joint> joints;
  const int n = static_cast<int>(joints_json.size());
  JointVector lower(n), upper(n);
  for (int i = 0; i < n; ++i) {
    const json& jj = joints_json[i];
    const std::string ctx = path + ": joints[" + std::to_string(i) + "]";
    Joint joint;
    const std::string type = require(jj, "type", ctx).get<std::string>();
    if (type == "revolute")
      joint.type = JointType::kRevolute;
    else if (type == "prismatic")
      joint.type = JointType::kPrismatic;
    else
      throw ConfigError(ctx + ": unknown joint type '" + type + "'");
    joint.axis = toVec3(require(jj, "axis", ctx), ctx + ".axis");
    if (jj.contains("offset")) joint.offset = toPose(jj["offset"], ctx + ".offset");
    lower(i) = require(jj, "lower", ctx).get<double>();
    upper(i) = require(jj, "upper", ctx).get<double>();
    joints.push_back(joint);
  }

  Pose3d tool;
  if (root.contains("tool_offset")) tool = toPose(root["tool_offset"], path + ": tool_offset");
  std::string name = root.value("name", std::string{});

  try {
    return KinematicChain(std::move(joints), std::move(lower), std::move(upper),
                          tool, std::move(name));
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace vantage
