#include "paneldiag/influence.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "paneldiag/errors.hpp"
#include "paneldiag/fdist.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "influence";

// NaN-safe ratio: NaN unless both operands are finite and the denominator is
// nonzero.
double safe_ratio(double num, double den) {
  if (!std::isfinite(num) || !std::isfinite(den) || den == 0.0)
    return na_value();
  return num / den;
}

}  // namespace

const char* unit_class_name(UnitClass c) {
  switch (c) {
    case UnitClass::Normal: return "Normal";
    case UnitClass::VerticalOutlier: return "VO";
    case UnitClass::GoodLeverage: return "GL";
    case UnitClass::BadLeverage: return "BL";
  }
  return "Normal";
}

UnitClass unit_class_from_name(const std::string& name) {
  if (name == "Normal") return UnitClass::Normal;
  if (name == "VO") return UnitClass::VerticalOutlier;
  if (name == "GL") return UnitClass::GoodLeverage;
  if (name == "BL") return UnitClass::BadLeverage;
  throw ValidationError(kModule, "unknown unit class '" + name + "'");
}

ConditionalLabel conditional_label(double ratio) {
  if (is_na(ratio)) return ConditionalLabel::Unavailable;
  return ratio >= 1.0 ? ConditionalLabel::Mask : ConditionalLabel::Boost;
}

bool is_na(double v) { return std::isnan(v); }

double na_value() { return std::numeric_limits<double>::quiet_NaN(); }

Eigen::VectorXd unit_leverage(const HatBlocks& hat) {
  const int n = hat.n_units();
  Eigen::VectorXd lev(n);
  for (int i = 0; i < n; ++i) lev(i) = hat.trace(i);
  return lev;
}

Eigen::VectorXd residual_shares(const FixedEffectsFit& fit,
                                ResidualNormalization norm) {
  const Eigen::VectorXd& u = fit.residuals();
  Eigen::VectorXd sq = u.array().square();
  if (norm == ResidualNormalization::Global) {
    const double total = sq.sum();
    if (total <= 0.0)
      throw NumericalError(kModule, "residual shares undefined: the fit is "
                                    "exact (all residuals zero)");
    return sq / total;
  }

  // Per-period: group observations by period id and divide by the period sum.
  const PanelIndex& index = fit.index();
  std::map<std::string, double, decltype(&id_less)> period_sum(&id_less);
  for (int r = 0; r < index.n_obs(); ++r) period_sum[index.time_ids[r]] += sq(r);
  double total = 0.0;
  for (const auto& [id, s] : period_sum) total += s;
  if (total <= 0.0)
    throw NumericalError(kModule, "residual shares undefined: the fit is "
                                  "exact (all residuals zero)");
  Eigen::VectorXd shares(index.n_obs());
  for (int r = 0; r < index.n_obs(); ++r) {
    const double den = period_sum[index.time_ids[r]];
    // A period can have zero residual sum while the fit is inexact overall;
    // its shares are zero by convention rather than 0/0.
    shares(r) = den > 0.0 ? sq(r) / den : 0.0;
  }
  return shares;
}

Eigen::VectorXd unit_outlyingness(const FixedEffectsFit& fit,
                                  ResidualNormalization norm) {
  const Eigen::VectorXd shares = residual_shares(fit, norm);
  const PanelIndex& index = fit.index();
  Eigen::VectorXd out(index.n_units());
  for (int i = 0; i < index.n_units(); ++i)
    out(i) = shares.segment(index.offsets[i], index.t_len(i)).norm();
  return out;
}

Cutoffs compute_cutoffs(const FixedEffectsFit& fit) {
  const double n = static_cast<double>(fit.n_units());
  const DegreesOfFreedom dof = fit.dof();
  Cutoffs c;
  c.leverage_cut = 2.0 * fit.n_regressors() / n;
  c.residual_cut = 2.0 / n;
  c.f_median = f_median_cutoff(dof.nu1, dof.nu2);
  c.unity = 1.0;
  c.four_over_n = 4.0 / n;
  return c;
}

std::vector<UnitClass> classify_units(const Eigen::VectorXd& leverage,
                                      const Eigen::VectorXd& outlyingness,
                                      const Cutoffs& cutoffs) {
  if (leverage.size() != outlyingness.size())
    throw ValidationError(kModule, "leverage and outlyingness lengths differ");
  std::vector<UnitClass> classes(leverage.size(), UnitClass::Normal);
  for (int i = 0; i < leverage.size(); ++i) {
    const bool high_lev = leverage(i) > cutoffs.leverage_cut;
    const bool high_res = outlyingness(i) > cutoffs.residual_cut;
    if (high_lev && high_res)
      classes[i] = UnitClass::BadLeverage;
    else if (high_lev)
      classes[i] = UnitClass::GoodLeverage;
    else if (high_res)
      classes[i] = UnitClass::VerticalOutlier;
  }
  return classes;
}

Eigen::MatrixXd joint_influence(const FixedEffectsFit& fit,
                                const DeletionSweepResult& sweep) {
  const int n = fit.n_units();
  const double scale = fit.s2() * fit.n_params();
  Eigen::MatrixXd joint = Eigen::MatrixXd::Constant(n, n, na_value());
  for (int i = 0; i < n; ++i) {
    if (sweep.single_ok[i]) {
      const Eigen::VectorXd d = fit.beta() - sweep.single_beta[i];
      joint(i, i) = d.dot(fit.xtx() * d) / scale;
    }
    for (int j = i + 1; j < n; ++j) {
      const int p = sweep.pair_index(i, j);
      if (!sweep.pair_ok[p]) continue;
      const Eigen::VectorXd d = fit.beta() - sweep.pair_beta[p];
      const double value = d.dot(fit.xtx() * d) / scale;
      joint(i, j) = value;
      joint(j, i) = value;
    }
  }
  return joint;
}

Eigen::MatrixXd joint_effect(const Eigen::MatrixXd& joint) {
  const int n = static_cast<int>(joint.rows());
  Eigen::MatrixXd effect = Eigen::MatrixXd::Constant(n, n, na_value());
  for (int i = 0; i < n; ++i) {
    const double own = joint(i, i);
    if (is_na(own)) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      effect(i, j) = safe_ratio(joint(i, j), own);
    }
    effect(i, i) = own == 0.0 ? na_value() : 1.0;
  }
  return effect;
}

Eigen::MatrixXd conditional_influence(const FixedEffectsFit& fit,
                                      const HatBlocks& hat,
                                      const DeletionSweepResult& sweep) {
  const int n = fit.n_units();
  const double scale = fit.s2() * fit.n_params();
  Eigen::MatrixXd cond = Eigen::MatrixXd::Constant(n, n, na_value());
  const DemeanedPanel& demeaned = hat.demeaned();
  for (int j = 0; j < n; ++j) {
    cond(j, j) = 0.0;  // deleting i given i is already gone moves nothing
    if (!sweep.single_ok[j]) continue;  // leave-j design deficient: column NA
    // Gram matrix of the design without unit j. Demeaning is per unit, so the
    // other units' blocks are unchanged by the removal.
    const Eigen::MatrixXd weight =
        fit.xtx() -
        demeaned.x_block(j).transpose() * demeaned.x_block(j);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const int p = sweep.pair_index(i, j);
      if (!sweep.pair_ok[p]) continue;
      const Eigen::VectorXd d = sweep.pair_beta[p] - sweep.single_beta[j];
      cond(i, j) = d.dot(weight * d) / scale;
    }
  }
  return cond;
}

Eigen::MatrixXd conditional_effect(const Eigen::MatrixXd& conditional,
                                   const Eigen::MatrixXd& joint) {
  const int n = static_cast<int>(conditional.rows());
  Eigen::MatrixXd effect = Eigen::MatrixXd::Constant(n, n, na_value());
  for (int i = 0; i < n; ++i) {
    const double own = joint(i, i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;  // diagonal stays not-available
      effect(i, j) = safe_ratio(conditional(i, j), own);
    }
  }
  return effect;
}

InfluenceReport compute_influence_report(const PanelDataset& data,
                                         const InfluenceOptions& options) {
  const FixedEffectsFit fit = fit_within(data);
  const HatBlocks hat(fit);
  const DeletionSweepResult sweep = deletion_sweep(fit, hat);

  InfluenceReport report;
  report.index = data.index_ptr();
  report.k = fit.n_regressors();
  report.big_k = fit.n_params();
  const DegreesOfFreedom dof = fit.dof();
  report.nu1 = dof.nu1;
  report.nu2 = dof.nu2;
  report.t_min = data.index().t_min();
  report.t_max = data.index().t_max();
  report.s2 = fit.s2();
  report.beta = fit.beta();
  report.leverage = unit_leverage(hat);
  report.outlyingness = unit_outlyingness(fit, options.normalization);
  report.cutoffs = compute_cutoffs(fit);
  report.classification =
      classify_units(report.leverage, report.outlyingness, report.cutoffs);
  report.joint = joint_influence(fit, sweep);
  report.cook = report.joint.diagonal();
  report.joint_effect = joint_effect(report.joint);
  report.conditional = conditional_influence(fit, hat, sweep);
  report.conditional_effect =
      conditional_effect(report.conditional, report.joint);
  report.normalization = options.normalization;
  return report;
}

}  // namespace paneldiag
