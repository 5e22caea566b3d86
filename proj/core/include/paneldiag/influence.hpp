#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "paneldiag/deletion.hpp"
#include "paneldiag/estimator.hpp"
#include "paneldiag/panel.hpp"

namespace paneldiag {

// Where squared residuals are normalized into shares: Global divides by the
// total SSR, PerPeriod divides by the period's cross-section sum (shares then
// add to one within each period). Global is the pipeline default; it is the
// scale on which the 2/N outlyingness cutoff separates clean units from
// planted outliers, while per-period shares put every clean unit at roughly
// sqrt(3T)/N, which is past the cutoff for any usable panel length.
enum class ResidualNormalization { Global, PerPeriod };

enum class UnitClass { Normal, VerticalOutlier, GoodLeverage, BadLeverage };

const char* unit_class_name(UnitClass c);
UnitClass unit_class_from_name(const std::string& name);

// Cell label for the masking ratio: Mask when deleting the partner first
// shrinks the unit's apparent influence (ratio >= 1), Boost when it grows it.
enum class ConditionalLabel { Boost, Mask, Unavailable };

ConditionalLabel conditional_label(double ratio);

struct Cutoffs {
  double leverage_cut = 0.0;  // 2k/N
  double residual_cut = 0.0;  // 2/N
  double f_median = 0.0;      // median of F(nu1, nu2)
  double unity = 1.0;
  double four_over_n = 0.0;   // 4/N
};

// Not-available cells are carried as quiet NaN through matrices and
// serialization.
bool is_na(double v);
double na_value();

Eigen::VectorXd unit_leverage(const HatBlocks& hat);

// Squared-residual shares per observation under the given normalization.
Eigen::VectorXd residual_shares(const FixedEffectsFit& fit,
                                ResidualNormalization norm);

// Unit outlyingness: Euclidean norm of the unit's share vector. Raises a
// numerical error when the fit is exact (all residuals zero).
Eigen::VectorXd unit_outlyingness(const FixedEffectsFit& fit,
                                  ResidualNormalization norm);

Cutoffs compute_cutoffs(const FixedEffectsFit& fit);

// Quadrant rule with strict inequalities: leverage above 2k/N and
// outlyingness above 2/N is BadLeverage; leverage alone GoodLeverage;
// outlyingness alone VerticalOutlier; otherwise Normal. A unit exactly on a
// cutoff is not past it.
std::vector<UnitClass> classify_units(const Eigen::VectorXd& leverage,
                                      const Eigen::VectorXd& outlyingness,
                                      const Cutoffs& cutoffs);

// Joint influence C: off-diagonal (i, j) measures the shift from deleting the
// pair, the diagonal the shift from deleting i alone, both scaled by the
// X'X metric over s2 * (k + 1). Symmetric; unavailable deletions yield NaN.
Eigen::MatrixXd joint_influence(const FixedEffectsFit& fit,
                                const DeletionSweepResult& sweep);

// Joint effect K: row i divided by its diagonal; diagonal exactly 1.
Eigen::MatrixXd joint_effect(const Eigen::MatrixXd& joint);

// Conditional influence: cell (i, j) measures what deleting i still moves the
// coefficients after j is already gone, in the leave-j metric
// X'X - X_j'X_j. Diagonal exactly zero; asymmetric.
Eigen::MatrixXd conditional_influence(const FixedEffectsFit& fit,
                                      const HatBlocks& hat,
                                      const DeletionSweepResult& sweep);

// Masking ratio M: conditional cell over the row unit's own influence C_ii.
// Diagonal not available.
Eigen::MatrixXd conditional_effect(const Eigen::MatrixXd& conditional,
                                   const Eigen::MatrixXd& joint);

struct InfluenceOptions {
  ResidualNormalization normalization = ResidualNormalization::Global;
};

struct InfluenceReport {
  std::shared_ptr<const PanelIndex> index;
  int k = 0;        // regressors
  int big_k = 0;    // k + 1
  int nu1 = 0;
  int nu2 = 0;
  int t_min = 0;    // shortest and longest unit series
  int t_max = 0;
  double s2 = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd leverage;
  Eigen::VectorXd outlyingness;
  Eigen::VectorXd cook;  // diagonal of joint, per unit
  Eigen::MatrixXd joint;
  Eigen::MatrixXd joint_effect;
  Eigen::MatrixXd conditional;
  Eigen::MatrixXd conditional_effect;
  Cutoffs cutoffs;
  std::vector<UnitClass> classification;
  ResidualNormalization normalization = ResidualNormalization::Global;
};

// Full pipeline: demean, fit, deletion sweep, measures, classification.
// Singular deletions surface as NaN cells; panel and fit errors propagate.
InfluenceReport compute_influence_report(const PanelDataset& data,
                                         const InfluenceOptions& options = {});

}  // namespace paneldiag
