#include "core/perfmodel.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace qsiam {

std::int64_t layer_cycles(const LayerSpec& layer, Fold fold, int out_side) {
  if (out_side < 1) throw ParamError("layer_cycles: output side must be positive");
  if (fold.pe < 1 || fold.simd < 1)
    throw FoldingError("layer '" + layer.name + "': PE and SIMD must be positive");
  const std::int64_t dot = 9ll * layer.in_channels;
  if (layer.out_channels % fold.pe != 0)
    throw FoldingError("layer '" + layer.name + "': PE=" + std::to_string(fold.pe) +
                       " does not divide " + std::to_string(layer.out_channels) +
                       " output channels");
  if (dot % fold.simd != 0)
    throw FoldingError("layer '" + layer.name + "': SIMD=" + std::to_string(fold.simd) +
                       " does not divide the " + std::to_string(dot) + "-wide dot product");
  return static_cast<std::int64_t>(out_side) * out_side * (dot / fold.simd) *
         (layer.out_channels / fold.pe);
}

namespace {

std::int64_t fold_units(const LayerSpec& layer, Fold fold) {
  const std::int64_t bits =
      static_cast<std::int64_t>(fold.pe) * fold.simd * layer.weight_bits;
  return (bits + 7) / 8;
}

// Search-branch output side per layer: conv keeps the side, pooling halves it
// before the next layer.
std::vector<int> branch_sides(const NetworkSpec& spec) {
  std::vector<int> sides;
  int side = spec.roi_size;
  for (const auto& l : spec.layers) {
    sides.push_back(side);
    if (l.pool) side /= 2;
  }
  return sides;
}

}  // namespace

PerfEstimate estimate(const NetworkSpec& spec, const FoldingConfig& config) {
  if (config.folds.size() != spec.layers.size())
    throw ParamError("estimate: fold count does not match layer count");
  if (!(config.clock_hz > 0.0)) throw ParamError("estimate: clock must be positive");

  const std::vector<int> sides = branch_sides(spec);
  PerfEstimate est;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const std::int64_t c = layer_cycles(spec.layers[i], config.folds[i], sides[i]);
    est.cycles.push_back(c);
    est.latency_cycles += c;
    if (c > est.bottleneck_cycles) {
      est.bottleneck_cycles = c;
      est.bottleneck_layer = static_cast<int>(i);
    }
    est.resource_units += fold_units(spec.layers[i], config.folds[i]);
  }
  if (est.latency_cycles > 0) {
    est.latency_fps = config.clock_hz / static_cast<double>(est.latency_cycles);
    est.throughput_fps = config.clock_hz / static_cast<double>(est.bottleneck_cycles);
  }
  return est;
}

std::vector<NamedConfig> preset_configs() {
  auto cfg = [](std::vector<Fold> folds) {
    FoldingConfig c;
    c.folds = std::move(folds);
    c.clock_hz = 100e6;
    return c;
  };
  return {
      {"V1", cfg({{32, 3}, {32, 16}, {16, 16}, {8, 16}, {8, 16}, {8, 8}})},
      {"V2", cfg({{32, 3}, {32, 16}, {16, 16}, {8, 16}, {8, 16}, {16, 8}})},
      {"V3", cfg({{32, 3}, {32, 16}, {16, 16}, {16, 16}, {16, 16}, {16, 8}})},
      {"V4", cfg({{32, 3}, {32, 16}, {16, 16}, {16, 16}, {16, 16}, {16, 16}})},
      {"V5", cfg({{32, 3}, {32, 16}, {32, 16}, {32, 16}, {32, 16}, {32, 16}})},
      {"V6", cfg({{32, 3}, {32, 16}, {32, 16}, {32, 32}, {32, 32}, {32, 32}})},
  };
}

std::vector<CalibrationRow> builtin_calibration() {
  return {
      {"V1", 38.46, 40.45, 16.78, 46.31, 11.92, 4.50},
      {"V2", 40.24, 42.25, 17.44, 50.80, 12.10, 4.56},
      {"V3", 41.31, 46.66, 17.90, 50.80, 12.10, 4.81},
      {"V4", 42.16, 48.72, 18.60, 50.80, 12.16, 4.92},
      {"V5", 49.03, 66.87, 23.00, 55.29, 12.54, 5.50},
      {"V6", 49.63, 91.27, 28.66, 91.83, 13.58, 6.79},
  };
}

std::vector<CalibrationRow> load_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open calibration file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw IngestError("calibration file '" + path + "' is empty");
  // Header is fixed; catch column drift early.
  if (line != "name,fps,lut_pct,ff_pct,bram_pct,lutram_pct,watts")
    throw IngestError("calibration file '" + path + "' has an unexpected header");

  std::vector<CalibrationRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    CalibrationRow row;
    std::string field;
    try {
      std::getline(ss, row.name, ',');
      auto num = [&](double& dst) {
        if (!std::getline(ss, field, ',')) throw std::invalid_argument("missing field");
        dst = std::stod(field);
      };
      num(row.fps);
      num(row.lut_pct);
      num(row.ff_pct);
      num(row.bram_pct);
      num(row.lutram_pct);
      num(row.watts);
    } catch (const std::exception&) {
      throw IngestError("calibration file '" + path + "' line " +
                        std::to_string(line_no) + " is malformed");
    }
    rows.push_back(row);
  }
  if (rows.empty())
    throw IngestError("calibration file '" + path + "' has no rows");
  return rows;
}

EnergyFit fit_energy(const std::vector<std::int64_t>& units,
                     const std::vector<double>& watts) {
  if (units.size() != watts.size())
    throw ParamError("fit_energy: unit and watt counts differ");
  if (units.size() < 2) throw FitError("fit_energy: need at least two points");

  const double n = static_cast<double>(units.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    mx += static_cast<double>(units[i]);
    my += watts[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const double dx = static_cast<double>(units[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (watts[i] - my);
  }
  if (sxx == 0.0)
    throw FitError("fit_energy: resource units are all equal, slope is undefined");

  EnergyFit fit;
  fit.watts_per_unit = sxy / sxx;
  fit.base_watts = my - fit.watts_per_unit * mx;
  for (std::size_t i = 0; i < units.size(); ++i)
    fit.residuals.push_back(watts[i] - predict_watts(fit, units[i]));
  return fit;
}

double predict_watts(const EnergyFit& fit, std::int64_t units) {
  return fit.base_watts + fit.watts_per_unit * static_cast<double>(units);
}

namespace {

struct Partial {
  std::int64_t cycles = 0;
  std::int64_t units = 0;
  std::vector<Fold> folds;
};

bool folds_less(const std::vector<Fold>& a, const std::vector<Fold>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].pe != b[i].pe) return a[i].pe < b[i].pe;
    if (a[i].simd != b[i].simd) return a[i].simd < b[i].simd;
  }
  return a.size() < b.size();
}

// Keeps the non-dominated states; on (cycles, units) ties the
// lexicographically smallest fold vector survives.
void prune(std::vector<Partial>& states) {
  std::sort(states.begin(), states.end(), [](const Partial& a, const Partial& b) {
    if (a.units != b.units) return a.units < b.units;
    if (a.cycles != b.cycles) return a.cycles < b.cycles;
    return folds_less(a.folds, b.folds);
  });
  std::vector<Partial> kept;
  std::int64_t best_cycles = std::numeric_limits<std::int64_t>::max();
  for (auto& s : states) {
    if (s.cycles < best_cycles) {
      best_cycles = s.cycles;
      kept.push_back(std::move(s));
    }
  }
  states = std::move(kept);
}

}  // namespace

std::vector<FrontPoint> explore(const NetworkSpec& spec, std::int64_t unit_budget,
                                const std::vector<int>& pe_candidates,
                                const std::vector<int>& simd_candidates,
                                double clock_hz) {
  if (!(clock_hz > 0.0)) throw ParamError("explore: clock must be positive");
  if (pe_candidates.empty() || simd_candidates.empty())
    throw ParamError("explore: candidate sets must be non-empty");

  const std::vector<int> sides = branch_sides(spec);

  std::vector<Partial> states(1);
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& layer = spec.layers[i];

    struct Option {
      Fold fold;
      std::int64_t cycles, units;
    };
    std::vector<Option> options;
    for (int pe : pe_candidates)
      for (int simd : simd_candidates) {
        if (pe < 1 || simd < 1) continue;
        if (layer.out_channels % pe != 0) continue;
        if ((9ll * layer.in_channels) % simd != 0) continue;
        options.push_back(
            {{pe, simd}, layer_cycles(layer, {pe, simd}, sides[i]), fold_units(layer, {pe, simd})});
      }
    if (options.empty()) return {};  // no legal fold for this layer

    std::vector<Partial> next;
    next.reserve(states.size() * options.size());
    for (const Partial& s : states)
      for (const Option& o : options) {
        if (s.units + o.units > unit_budget) continue;
        Partial p;
        p.cycles = s.cycles + o.cycles;
        p.units = s.units + o.units;
        p.folds = s.folds;
        p.folds.push_back(o.fold);
        next.push_back(std::move(p));
      }
    if (next.empty()) return {};  // budget too small
    prune(next);
    states = std::move(next);
  }

  std::vector<FrontPoint> front;
  front.reserve(states.size());
  for (auto& s : states) {
    FoldingConfig cfg;
    cfg.folds = std::move(s.folds);
    cfg.clock_hz = clock_hz;
    FrontPoint p;
    p.est = estimate(spec, cfg);
    p.config = std::move(cfg);
    front.push_back(std::move(p));
  }
  return front;
}

}  // namespace qsiam
