#include "viki/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "viki/error.hpp"

namespace viki {

namespace pt = boost::property_tree;

std::string_view to_string(ControlMode mode) noexcept {
  switch (mode) {
    case ControlMode::Viki: return "viki";
    case ControlMode::VsOnly: return "vs-only";
    case ControlMode::MgbmStatic: return "mgbm-static";
  }
  return "unknown";
}

ControlMode parse_mode(std::string_view text) {
  if (text == "viki") return ControlMode::Viki;
  if (text == "vs-only") return ControlMode::VsOnly;
  if (text == "mgbm-static") return ControlMode::MgbmStatic;
  throw Error(ErrorCode::ConfigError, "unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(Task task) noexcept {
  return task == Task::Placement ? "placement" : "forward";
}

Task parse_task(std::string_view text) {
  if (text == "placement") return Task::Placement;
  if (text == "forward") return Task::Forward;
  throw Error(ErrorCode::ConfigError, "unknown task '" + std::string(text) + "'");
}

RigidTransform CameraMount::robot_T_camera() const { return {optical_mount_rotation(yaw, pitch), position}; }

std::vector<double> LidarMount::elevations() const {
  std::vector<double> out(static_cast<std::size_t>(layers));
  for (int i = 0; i < layers; ++i) {
    out[static_cast<std::size_t>(i)] =
        layers == 1 ? min_elevation : min_elevation + (max_elevation - min_elevation) * i / (layers - 1);
  }
  return out;
}

int LidarMount::columns() const {
  return static_cast<int>(std::lround(2.0 * std::numbers::pi / azimuth_resolution));
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::ConfigError, what);
  };
  require(vehicle.wheelbase > 0.0, "vehicle.wheelbase must be positive");
  require(vehicle.velocity_floor > 0.0, "vehicle.velocity_floor must be positive");
  require(vehicle.max_velocity > 0.0 && vehicle.max_steering > 0.0, "vehicle limits must be positive");
  require(dt > 0.0, "run.dt must be positive");
  require(max_ticks >= 0 && warmup_ticks >= 0, "tick counts must be non-negative");
  require((forward_kin.k.array() > 0.0).all() && (backward_kin.k.array() > 0.0).all(),
          "kinematic gains must be positive");
  require((front_gains.lambda.array() > 0.0).all() && (rear_gains.lambda.array() > 0.0).all(),
          "servo gains must be positive");
  require(thresholds.feature_tol > 0.0 && thresholds.position_tol > 0.0, "thresholds must be positive");
  require(detector.p_miss >= 0.0 && detector.p_miss <= 1.0, "detector.p_miss must be in [0, 1]");
  require(detector.pixel_noise_sigma >= 0.0, "detector.pixel_noise must be non-negative");
  require(odom_noise_xy >= 0.0 && odom_noise_theta >= 0.0, "odometry noise must be non-negative");
  require(front_camera.intrinsics.fu > 0.0 && front_camera.intrinsics.fv > 0.0 &&
              rear_camera.intrinsics.fu > 0.0 && rear_camera.intrinsics.fv > 0.0,
          "focal lengths must be positive");
  require(lidar.layers >= 2 && lidar.interpolated_rows >= 2, "lidar needs at least two layers");
  require(lidar.azimuth_resolution > 0.0, "lidar.azimuth_resolution must be positive");
  require(blind_spot.step > 0.0, "blind_spot.step must be positive");
  require((object.extents.array() > 0.0).all(), "object size must be positive");
}

DesiredPlacement placement_for_offset(const CameraMount& camera, const ObjectBox& object, const Vec2& offset) {
  ObjectBox at_target = object;
  at_target.center = Vec3(offset.x(), offset.y(), object.center.z());
  const RigidTransform robot_T_camera = camera.robot_T_camera();
  const Vec3 in_camera = transform_point(robot_T_camera.inverse(), at_target.center);
  if (in_camera.z() <= 0.0) throw Error(ErrorCode::ConfigError, "placement offset is behind the camera");
  const auto box = project_box(at_target, robot_T_camera, camera.intrinsics);
  const PixelPoint center = box ? box->center() : project(in_camera, camera.intrinsics);
  return {center, in_camera.norm()};
}

void finalize(ScenarioConfig& cfg) {
  if (!cfg.front_placement_given) {
    cfg.front_placement = placement_for_offset(cfg.front_camera, cfg.object, cfg.forward_offset);
  }
  if (!cfg.rear_placement_given) {
    cfg.rear_placement = placement_for_offset(cfg.rear_camera, cfg.object, cfg.backward_offset);
  }
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.front_camera.position = Vec3(0.9, 0.0, 0.9);
  cfg.front_camera.yaw = 0.0;
  cfg.front_camera.pitch = 20.0 * std::numbers::pi / 180.0;
  cfg.rear_camera.position = Vec3(-0.3, 0.0, 0.9);
  cfg.rear_camera.yaw = std::numbers::pi;
  cfg.rear_camera.pitch = 25.0 * std::numbers::pi / 180.0;
  cfg.object.center = Vec3(6.0, 0.0, 0.2);
  cfg.object.extents = Vec3(0.3, 0.3, 0.4);
  cfg.detector.p_miss = 0.1;
  cfg.detector.pixel_noise_sigma = 1.0;
  cfg.front_gains = ServoGains::from_values({0.85, 0.3, 1.0, 1.0, 1.0});
  cfg.rear_gains = ServoGains::from_values({0.85, 1.05, 1.0, 1.0, 1.0});
  cfg.forward_kin.k = Vec2(2.0, 1.0);
  cfg.backward_kin.k = Vec2(1.0, 2.0);
  finalize(cfg);
  return cfg;
}

double parse_quantity(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double scale = 1.0;
  auto strip = [&](std::string_view suffix, double factor) {
    if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
      text.remove_suffix(suffix.size());
      scale = factor;
      return true;
    }
    return false;
  };
  strip("cm", 0.01) || strip("mm", 0.001) || strip("deg", std::numbers::pi / 180.0) || strip("rad", 1.0) ||
      strip("m", 1.0);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::ConfigError, "cannot parse quantity '" + std::string(text) + "'");
  }
  return value * scale;
}

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_quantity(item));
  return out;
}

Vec2 parse_vec2(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw Error(ErrorCode::ConfigError, "expected two values in '" + text + "'");
  return {v[0], v[1]};
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::ConfigError, "cannot parse boolean '" + text + "'");
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  void number(const char* key, double& out) const {
    if (auto v = tree_.get_optional<std::string>(key)) out = parse_quantity(*v);
  }
  void integer(const char* key, long& out) const {
    if (auto v = tree_.get_optional<std::string>(key)) out = std::lround(parse_quantity(*v));
  }
  void integer(const char* key, int& out) const {
    if (auto v = tree_.get_optional<std::string>(key)) out = static_cast<int>(std::lround(parse_quantity(*v)));
  }
  void boolean(const char* key, bool& out) const {
    if (auto v = tree_.get_optional<std::string>(key)) out = parse_bool(*v);
  }
  void vec2(const char* key, Vec2& out) const {
    if (auto v = tree_.get_optional<std::string>(key)) out = parse_vec2(*v);
  }
  bool pixel(const char* key, PixelPoint& out) const {
    if (auto v = tree_.get_optional<std::string>(key)) {
      const Vec2 p = parse_vec2(*v);
      out = {p.x(), p.y()};
      return true;
    }
    return false;
  }
  std::optional<std::string> text(const char* key) const {
    if (auto v = tree_.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }

 private:
  const pt::ptree& tree_;
};

void read_camera(const Reader& r, const std::string& section, CameraMount& cam) {
  auto key = [&](const char* k) { return section + "." + k; };
  r.number(key("fu").c_str(), cam.intrinsics.fu);
  r.number(key("fv").c_str(), cam.intrinsics.fv);
  r.number(key("cu").c_str(), cam.intrinsics.cu);
  r.number(key("cv").c_str(), cam.intrinsics.cv);
  r.integer(key("width").c_str(), cam.intrinsics.width);
  r.integer(key("height").c_str(), cam.intrinsics.height);
  r.number(key("x").c_str(), cam.position.x());
  r.number(key("y").c_str(), cam.position.y());
  r.number(key("z").c_str(), cam.position.z());
  r.number(key("yaw").c_str(), cam.yaw);
  r.number(key("pitch").c_str(), cam.pitch);
  r.number(key("max_range").c_str(), cam.max_range);
}

ScenarioConfig from_tree(const pt::ptree& tree) {
  ScenarioConfig cfg = default_scenario();
  const Reader r(tree);

  r.number("vehicle.wheelbase", cfg.vehicle.wheelbase);
  r.number("vehicle.max_velocity", cfg.vehicle.max_velocity);
  r.number("vehicle.max_steering", cfg.vehicle.max_steering);
  r.number("vehicle.velocity_floor", cfg.vehicle.velocity_floor);

  read_camera(r, "front_camera", cfg.front_camera);
  read_camera(r, "rear_camera", cfg.rear_camera);

  r.number("lidar.x", cfg.lidar.position.x());
  r.number("lidar.y", cfg.lidar.position.y());
  r.number("lidar.z", cfg.lidar.position.z());
  r.integer("lidar.layers", cfg.lidar.layers);
  r.number("lidar.min_elevation", cfg.lidar.min_elevation);
  r.number("lidar.max_elevation", cfg.lidar.max_elevation);
  r.number("lidar.azimuth_resolution", cfg.lidar.azimuth_resolution);
  r.integer("lidar.interpolated_rows", cfg.lidar.interpolated_rows);
  r.number("lidar.max_range", cfg.lidar.max_range);

  r.number("blind_spot.radius", cfg.blind_spot.radius);
  r.number("blind_spot.ground_height", cfg.blind_spot.ground_height);
  r.number("blind_spot.step", cfg.blind_spot.step);
  r.number("blind_spot.half_extent", cfg.blind_spot.sample_half_extent);

  r.number("object.x", cfg.object.center.x());
  r.number("object.y", cfg.object.center.y());
  r.number("object.size_x", cfg.object.extents.x());
  r.number("object.size_y", cfg.object.extents.y());
  r.number("object.size_z", cfg.object.extents.z());
  cfg.object.center.z() = 0.5 * cfg.object.extents.z();

  r.number("start.x", cfg.start.x);
  r.number("start.y", cfg.start.y);
  r.number("start.theta", cfg.start.theta);

  r.number("detector.p_miss", cfg.detector.p_miss);
  r.number("detector.pixel_noise", cfg.detector.pixel_noise_sigma);
  if (auto occ = r.text("detector.occlusions")) {
    cfg.detector.occlusion_intervals.clear();
    std::stringstream ss(*occ);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::ConfigError, "occlusion needs start:end");
      cfg.detector.occlusion_intervals.emplace_back(parse_quantity(item.substr(0, colon)),
                                                    parse_quantity(item.substr(colon + 1)));
    }
  }

  if (auto g = r.text("control.front_gains")) cfg.front_gains = ServoGains::from_values(parse_list(*g));
  if (auto g = r.text("control.rear_gains")) cfg.rear_gains = ServoGains::from_values(parse_list(*g));
  r.vec2("control.forward_kin", cfg.forward_kin.k);
  r.vec2("control.backward_kin", cfg.backward_kin.k);
  r.number("control.feature_tol", cfg.thresholds.feature_tol);
  r.number("control.position_tol", cfg.thresholds.position_tol);
  r.boolean("control.smoothing", cfg.smoothing);
  r.boolean("control.range_to_depth", cfg.range_to_depth);
  if (auto j = r.text("control.jacobian")) {
    if (*j == "body") {
      cfg.jacobian_mode = RobotJacobianMode::Body;
    } else if (*j == "planar") {
      cfg.jacobian_mode = RobotJacobianMode::Planar;
    } else {
      throw Error(ErrorCode::ConfigError, "control.jacobian must be body or planar");
    }
  }

  r.vec2("placement.forward_offset", cfg.forward_offset);
  r.vec2("placement.backward_offset", cfg.backward_offset);
  r.number("placement.rotate_extra", cfg.rotate_extra);
  cfg.front_placement_given = r.pixel("placement.front_target", cfg.front_placement.center);
  cfg.rear_placement_given = r.pixel("placement.rear_target", cfg.rear_placement.center);
  finalize(cfg);
  r.number("placement.front_fallback_depth", cfg.front_placement.fallback_depth);
  r.number("placement.rear_fallback_depth", cfg.rear_placement.fallback_depth);

  r.number("mgbm.size_x", cfg.mgbm_extents.x());
  r.number("mgbm.size_y", cfg.mgbm_extents.y());
  r.number("mgbm.size_z", cfg.mgbm_extents.z());

  r.number("run.dt", cfg.dt);
  r.integer("run.max_ticks", cfg.max_ticks);
  r.integer("run.warmup_ticks", cfg.warmup_ticks);
  r.number("run.odom_noise_xy", cfg.odom_noise_xy);
  r.number("run.odom_noise_theta", cfg.odom_noise_theta);
  r.boolean("run.stop_at_done", cfg.stop_at_done);
  if (auto m = r.text("run.mode")) cfg.mode = parse_mode(*m);
  if (auto t = r.text("run.task")) cfg.task = parse_task(*t);
  if (auto s = r.text("run.seed")) {
    cfg.seed = std::stoull(*s);
  }
  cfg.detector.seed = cfg.seed;

  cfg.validate();
  return cfg;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  try {
    return from_tree(tree);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace viki
