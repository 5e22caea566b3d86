#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paneldiag/panel.hpp"

namespace paneldiag {

enum class AnomalyKind { VerticalOutlier, GoodLeverage, BadLeverage };

const char* anomaly_kind_name(AnomalyKind k);

// One planted anomaly: a unit (by 1-based generated id) and the periods
// (1-based) it contaminates. VerticalOutlier adds N(y_shift_mean, y_shift_sd)
// draws to y; GoodLeverage replaces x with N(x_level_mean, x_level_sd) draws;
// BadLeverage does both. y is never recomputed from the replaced regressor:
// leverage units keep the response their original draw produced.
struct ContaminationEntry {
  int unit = 0;
  AnomalyKind kind = AnomalyKind::VerticalOutlier;
  std::vector<int> periods;
  double y_shift_mean = 50.0;
  double y_shift_sd = 1.0;
  double x_level_mean = 0.0;
  double x_level_sd = 1.0;
};

struct ContaminationSpec {
  std::vector<ContaminationEntry> entries;
};

// Named contamination layouts. "figure" plants {10: BL, 20: GL, 30: VO}, all
// block-concentrated in periods t <= 10. "appendix" plants two anomalies per
// kind, {10, 40: VO}, {20, 50: GL}, {30, 60: BL}, with t <= 10 for units
// 10/20/30 and t <= 5 for units 40/50/60. GL draws sit at
// N(15,1), BL regressor draws at N(10,1). Unknown names raise validation
// errors. Entries referencing units or periods outside the generated panel
// fail at generate() time.
ContaminationSpec preset(const std::string& name);

struct DgpConfig {
  int n_units = 100;
  int n_periods = 20;
  double beta0 = 1.0;
  double beta1 = 0.5;
  std::uint64_t seed = 0;
  ContaminationSpec contamination;
};

// Balanced single-regressor panel y = beta0 + beta1 x + alpha_i + eps with
// x, eps ~ N(0,1) and alpha ~ U(0,20), then the configured contamination.
// Unit ids are "1".."N", period ids "1".."T", regressor column "x".
//
// Determinism contract: four independent RNG substreams (unit effects,
// regressor, noise, contamination), each consumed in a documented order --
// alphas ascending by unit; x then eps unit-major, period-minor; finally
// contamination entries ascending by unit, periods ascending, and for
// BadLeverage cells the regressor replacement drawn before the y shift.
// Because the streams are independent, adding or removing contamination
// leaves every untouched cell bit-identical.
PanelDataset generate(const DgpConfig& config);

}  // namespace paneldiag
