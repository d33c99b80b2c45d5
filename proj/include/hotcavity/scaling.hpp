#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hotcavity/motion.hpp"
#include "hotcavity/model.hpp"

namespace hotcavity {

// Keeps kappa/(M+1) fixed at base.kappa/(base.m_atoms+1) and sets g so that
// (M+1) w = a kappa.  w itself is then M-independent and w/kappa scales as 1/(M+1).
SystemParams rescale(const SystemParams& base, int m, double a);

enum class Evaluator { kSteady, kGain, kProfile, kMotion, kTrajectory };
enum class RescaleRule { kNone, kHotCavity };

std::string to_string(Evaluator e);
Evaluator parse_evaluator(const std::string& s);
std::string to_string(RescaleRule r);
RescaleRule parse_rescale_rule(const std::string& s);

struct Axis {
  std::string name;  // a SystemParams field, or y, a, theta, seed
  std::vector<double> values;
};

struct SweepSpec {
  std::string name = "sweep";
  std::vector<Axis> axes;
  Evaluator evaluator = Evaluator::kSteady;
  SystemParams fixed;
  RescaleRule rule = RescaleRule::kNone;
  MotionOptions motion;
  // Knobs that are not SystemParams fields.
  std::map<std::string, double> knobs;
  std::string notes;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> reasons;  // empty string when the cell succeeded
  std::string name;
};

// Cartesian product in lexicographic axis order (last axis fastest).
SweepTable sweep(const SweepSpec& spec, int threads = 1);

struct PresetOptions {
  bool quick = false;
  double fig6_a = 2.0;
  double fig6_delta = 50.0;
  std::vector<double> fig6_y = {0.25, 0.5, 1.0};
  double fig2_omega_rec = 0.01;
  double fig2_v_scale = 0.2;
  double fig2_t_end = 2000.0;
  int fig2_seeds = 5;
};

SweepSpec figure_preset(const std::string& name, const PresetOptions& opt = {});

// Resolved parameters of one sweep cell (before evaluation).
SystemParams cell_params(const SweepSpec& spec, const std::vector<double>& coords, double* theta, std::uint64_t* seed);

}  // namespace hotcavity
