#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaptrack/types.hpp"

namespace adaptrack {

struct Waypoint {
  int frame = 0;
  double x = 0;  // box center
  double y = 0;
};

struct ObjectSpec {
  std::vector<Waypoint> waypoints;  // ascending frames; lifetime spans them
  double width = 24;                // base box size, ground truth keeps it
  double height = 36;
  Eigen::VectorXd histogram;        // appearance prototype
  Eigen::Matrix3d covariance;
  double contrast = 0.7;
};

/// Noise profile of one frame interval of the simulated detector and imaging.
struct RegimeSpec {
  int start = 0;
  int end = 0;                   // inclusive
  double appearance_noise = 0;   // [0,1], histogram/covariance scrambling
  double size_noise = 0;         // [0,1], relative box size sigma
  double miss_rate = 0;          // [0,1], detector miss probability
  double jitter = 0;             // [0,1], center jitter relative to box diagonal
  double contrast_noise = 0;     // [0,1], contrast sigma
};

struct ScenarioSpec {
  std::string name = "scene";
  int width = 320;
  int height = 240;
  int duration = 0;  // frames
  double fps = 25.0;
  std::vector<ObjectSpec> objects;
  std::vector<RegimeSpec> regimes;  // must tile [0, duration)
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

/// Deterministic scene simulation: ground-truth tracks follow the waypoints
/// with the base box size; per-frame observed appearance is the prototype
/// perturbed by the active regime (shared between the ground-truth record and
/// the detection); detections add box jitter, size noise and misses.
SceneSequence generate(const ScenarioSpec& spec);

std::vector<std::string> preset_names();

/// Named scenario presets covering distinct context types. Unknown name throws.
ScenarioSpec make_preset(const std::string& name, std::uint64_t seed);

/// Benchmark scene: an appearance-stable/size-noisy regime followed by a
/// size-stable/appearance-noisy one, with object populations to match.
ScenarioSpec make_two_regime_scenario(std::uint64_t seed, int frames_per_regime = 300);

}  // namespace adaptrack
