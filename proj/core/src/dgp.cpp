#include "paneldiag/dgp.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "paneldiag/errors.hpp"
#include "paneldiag/rng.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "dgp";

std::vector<int> periods_up_to(int last) {
  std::vector<int> p(last);
  for (int t = 0; t < last; ++t) p[t] = t + 1;
  return p;
}

ContaminationEntry make_entry(int unit, AnomalyKind kind, int last_period) {
  ContaminationEntry e;
  e.unit = unit;
  e.kind = kind;
  e.periods = periods_up_to(last_period);
  switch (kind) {
    case AnomalyKind::VerticalOutlier:
      break;
    case AnomalyKind::GoodLeverage:
      e.x_level_mean = 15.0;
      break;
    case AnomalyKind::BadLeverage:
      e.x_level_mean = 10.0;
      break;
  }
  return e;
}

void validate(const DgpConfig& config) {
  if (config.n_units < 2)
    throw ValidationError(kModule, "generator needs at least 2 units");
  if (config.n_periods < 2)
    throw ValidationError(kModule, "generator needs at least 2 periods");
  std::set<int> seen;
  for (const auto& e : config.contamination.entries) {
    if (e.unit < 1 || e.unit > config.n_units)
      throw ValidationError(kModule, "contamination references unit " +
                                         std::to_string(e.unit) +
                                         ", panel has units 1.." +
                                         std::to_string(config.n_units));
    if (!seen.insert(e.unit).second)
      throw ValidationError(kModule, "unit " + std::to_string(e.unit) +
                                         " appears in multiple contamination "
                                         "entries");
    if (e.periods.empty())
      throw ValidationError(kModule, "contamination entry for unit " +
                                         std::to_string(e.unit) +
                                         " lists no periods");
    for (int t : e.periods) {
      if (t < 1 || t > config.n_periods)
        throw ValidationError(kModule, "contamination references period " +
                                           std::to_string(t) +
                                           ", panel has periods 1.." +
                                           std::to_string(config.n_periods));
    }
    if (!(e.y_shift_sd >= 0.0) || !(e.x_level_sd >= 0.0))
      throw ValidationError(kModule, "contamination draw spreads must be "
                                     "nonnegative");
  }
}

}  // namespace

const char* anomaly_kind_name(AnomalyKind k) {
  switch (k) {
    case AnomalyKind::VerticalOutlier: return "VO";
    case AnomalyKind::GoodLeverage: return "GL";
    case AnomalyKind::BadLeverage: return "BL";
  }
  return "VO";
}

ContaminationSpec preset(const std::string& name) {
  ContaminationSpec spec;
  if (name == "figure") {
    spec.entries.push_back(make_entry(10, AnomalyKind::BadLeverage, 10));
    spec.entries.push_back(make_entry(20, AnomalyKind::GoodLeverage, 10));
    spec.entries.push_back(make_entry(30, AnomalyKind::VerticalOutlier, 10));
  } else if (name == "appendix") {
    spec.entries.push_back(make_entry(10, AnomalyKind::VerticalOutlier, 10));
    spec.entries.push_back(make_entry(40, AnomalyKind::VerticalOutlier, 5));
    spec.entries.push_back(make_entry(20, AnomalyKind::GoodLeverage, 10));
    spec.entries.push_back(make_entry(50, AnomalyKind::GoodLeverage, 5));
    spec.entries.push_back(make_entry(30, AnomalyKind::BadLeverage, 10));
    spec.entries.push_back(make_entry(60, AnomalyKind::BadLeverage, 5));
  } else {
    throw ValidationError(kModule, "unknown preset '" + name +
                                       "', expected figure or appendix");
  }
  return spec;
}

PanelDataset generate(const DgpConfig& config) {
  validate(config);
  const int n = config.n_units;
  const int t = config.n_periods;
  const int rows = n * t;

  Xoshiro256pp alpha_rng = substream(config.seed, RngStream::UnitEffect);
  Xoshiro256pp x_rng = substream(config.seed, RngStream::Regressor);
  Xoshiro256pp eps_rng = substream(config.seed, RngStream::Noise);
  Xoshiro256pp contam_rng = substream(config.seed, RngStream::Contamination);

  Eigen::VectorXd alpha(n);
  for (int i = 0; i < n; ++i) alpha(i) = alpha_rng.uniform(0.0, 20.0);

  Eigen::MatrixXd x(rows, 1);
  for (int r = 0; r < rows; ++r) x(r, 0) = x_rng.normal(0.0, 1.0);

  Eigen::VectorXd y(rows);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < t; ++s) {
      const int r = i * t + s;
      y(r) = config.beta0 + config.beta1 * x(r, 0) + alpha(i) +
             eps_rng.normal(0.0, 1.0);
    }

  // Entries sorted by unit, periods sorted ascending, so the contamination
  // stream position is independent of how the spec was assembled.
  std::vector<ContaminationEntry> entries = config.contamination.entries;
  std::sort(entries.begin(), entries.end(),
            [](const ContaminationEntry& a, const ContaminationEntry& b) {
              return a.unit < b.unit;
            });
  for (auto& e : entries) {
    std::vector<int> periods = e.periods;
    std::sort(periods.begin(), periods.end());
    const bool touch_x = e.kind != AnomalyKind::VerticalOutlier;
    const bool touch_y = e.kind != AnomalyKind::GoodLeverage;
    for (int p : periods) {
      const int r = (e.unit - 1) * t + (p - 1);
      if (touch_x) x(r, 0) = contam_rng.normal(e.x_level_mean, e.x_level_sd);
      if (touch_y) y(r) += contam_rng.normal(e.y_shift_mean, e.y_shift_sd);
    }
  }

  PanelIndex index;
  index.x_names = {"x"};
  index.unit_ids.reserve(n);
  index.time_ids.reserve(rows);
  index.offsets.reserve(n + 1);
  index.offsets.push_back(0);
  std::vector<std::string> period_ids(t);
  for (int s = 0; s < t; ++s) period_ids[s] = std::to_string(s + 1);
  for (int i = 0; i < n; ++i) {
    index.unit_ids.push_back(std::to_string(i + 1));
    index.time_ids.insert(index.time_ids.end(), period_ids.begin(),
                          period_ids.end());
    index.offsets.push_back((i + 1) * t);
  }
  return PanelDataset(std::move(index), std::move(y), std::move(x));
}

}  // namespace paneldiag
