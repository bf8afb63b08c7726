// Timing of one control iteration and the sensor rendering it consumes.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "viki/camera.hpp"
#include "viki/hybrid.hpp"
#include "viki/scenario.hpp"
#include "viki/simulator.hpp"
#include "viki/world.hpp"

using namespace viki;

namespace {

struct Fixture {
  ScenarioConfig cfg = load_scenario(std::filesystem::path(VIKI_SCENARIO_DIR) / "default.ini");
  Scene scene{cfg.object};
  RigidTransform world_T_robot = planar_pose(cfg.start);
  RigidTransform world_T_camera = world_T_robot * cfg.front_camera.robot_T_camera();
};

void BM_LidarScan(benchmark::State& state) {
  const Fixture fx;
  const RigidTransform world_T_lidar = fx.world_T_robot * fx.cfg.lidar.robot_T_lidar();
  for (auto _ : state) benchmark::DoNotOptimize(lidar_scan(fx.scene, world_T_lidar, fx.cfg.lidar));
}

void BM_RenderDepth(benchmark::State& state) {
  const Fixture fx;
  const CameraMount& cam = fx.cfg.front_camera;
  for (auto _ : state)
    benchmark::DoNotOptimize(render_depth(fx.scene, fx.world_T_camera, cam.intrinsics, cam.max_range));
}

void BM_ControllerStep(benchmark::State& state) {
  const Fixture fx;
  const CameraMount& cam = fx.cfg.front_camera;
  const RangeImage scan = lidar_scan(fx.scene, fx.world_T_robot * fx.cfg.lidar.robot_T_lidar(), fx.cfg.lidar);
  const DepthImage depth = render_depth(fx.scene, fx.world_T_camera, cam.intrinsics, cam.max_range);
  const auto bb = project_box(fx.cfg.object, fx.world_T_camera, cam.intrinsics);
  if (!bb) {
    state.SkipWithError("object not visible from the start pose");
    return;
  }
  SensorFrame frame;
  frame.detection = {true, *bb};
  frame.lidar = &scan;
  frame.camera_depth = &depth;
  frame.region = {0, 0, cam.intrinsics.width, cam.intrinsics.height};

  PlacementController controller(fx.cfg);
  long tick = 0;
  for (auto _ : state) benchmark::DoNotOptimize(controller.step(frame, fx.cfg.start, tick++));
}

}  // namespace

BENCHMARK(BM_LidarScan)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderDepth)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ControllerStep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
