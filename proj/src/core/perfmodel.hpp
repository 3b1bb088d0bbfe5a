#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/netspec.hpp"

namespace qsiam {

// Per-layer folding: PE splits output channels, SIMD splits the 3x3 input dot
// product. Both must divide their dimension exactly.
struct Fold {
  int pe = 1;
  int simd = 1;
};

struct FoldingConfig {
  std::vector<Fold> folds;  // one per layer
  double clock_hz = 100e6;
};

// Cycles for one layer at the given output side:
//   out_side^2 * (9 * in_channels / simd) * (out_channels / pe)
std::int64_t layer_cycles(const LayerSpec& layer, Fold fold, int out_side);

struct PerfEstimate {
  std::vector<std::int64_t> cycles;     // per layer, search-branch sizes
  std::int64_t latency_cycles = 0;      // sum over layers
  std::int64_t bottleneck_cycles = 0;   // slowest layer
  int bottleneck_layer = -1;
  double latency_fps = 0;               // clock / latency_cycles
  double throughput_fps = 0;            // clock / bottleneck_cycles
  std::int64_t resource_units = 0;      // sum of ceil(pe*simd*weight_bits/8)
};

PerfEstimate estimate(const NetworkSpec& spec, const FoldingConfig& config);

struct NamedConfig {
  std::string name;
  FoldingConfig config;
};

// The six reference folding configurations V1..V6 of the deployed builds.
std::vector<NamedConfig> preset_configs();

// Measured deployment metrics of those builds (utilization in percent of the
// target device, throughput in fps, board power in watts).
struct CalibrationRow {
  std::string name;
  double fps = 0, lut_pct = 0, ff_pct = 0, bram_pct = 0, lutram_pct = 0, watts = 0;
};

std::vector<CalibrationRow> builtin_calibration();
std::vector<CalibrationRow> load_calibration_csv(const std::string& path);

// Least-squares affine model watts ~= base + per_unit * resource_units.
struct EnergyFit {
  double base_watts = 0;
  double watts_per_unit = 0;
  std::vector<double> residuals;  // observed - predicted
};

EnergyFit fit_energy(const std::vector<std::int64_t>& units,
                     const std::vector<double>& watts);
double predict_watts(const EnergyFit& fit, std::int64_t units);

// Pareto front over per-layer fold choices: minimize (latency_cycles,
// resource_units) subject to resource_units <= unit_budget. Candidates that do
// not divide a layer are skipped; ties keep the lexicographically smallest
// fold vector. Result is sorted by resource_units ascending.
struct FrontPoint {
  FoldingConfig config;
  PerfEstimate est;
};

std::vector<FrontPoint> explore(const NetworkSpec& spec, std::int64_t unit_budget,
                                const std::vector<int>& pe_candidates,
                                const std::vector<int>& simd_candidates,
                                double clock_hz);

}  // namespace qsiam
