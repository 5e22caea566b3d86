#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <vector>

#include "paneldiag/estimator.hpp"
#include "paneldiag/panel.hpp"

namespace paneldiag {

enum class DeletionKind { SingleUnit, UnitPair };

struct DeletionResult {
  DeletionKind kind = DeletionKind::SingleUnit;
  int unit_i = -1;
  int unit_j = -1;  // -1 for single-unit deletion
  Eigen::VectorXd beta;
  // The required block inverses existed. Singular blocks raise numerical
  // errors instead of returning, so this is true on every returned result;
  // sweeps that swallow those errors record the cell as not available.
  bool schur_ok = true;
  // Some block factorization had condition in (1e8, 1e12]: result retained
  // but flagged.
  bool near_singular = false;
};

// Coefficients after deleting unit i, by rank-T_i downdate of the full fit:
// beta_(i) = beta - (X'X)^-1 X_i' M_i^-1 u_i with M_i = I - H_i.
// Raises a numerical error naming the unit when M_i is singular.
DeletionResult leave_one_out(const FixedEffectsFit& fit, const HatBlocks& hat,
                             int i);

// Coefficients after deleting units i and j, by a second downdate applied to
// beta_(i) through the Schur complement M_j - H_ij' M_i^-1 H_ij. Symmetric in
// (i, j) up to roundoff. Raises a numerical error naming the pair when the
// Schur complement is singular.
DeletionResult leave_two_out(const FixedEffectsFit& fit, const HatBlocks& hat,
                             int i, int j);

// Reference implementation: rebuild the panel without the excluded units,
// re-demean, re-fit. The downdate formulas above must agree with this to
// roundoff; kept in the library so validation suites and callers can
// cross-check any deletion cheaply.
Eigen::VectorXd brute_force_refit(const PanelDataset& data,
                                  const std::vector<int>& excluded);

// Per-unit deletion state reused across a sweep over partners j: the
// factorization of M_i and the products M_i^-1 u_i it yields. Constructing
// the context performs the single deletion; pair(j) adds the second unit.
class UnitDeletionContext {
 public:
  UnitDeletionContext(const FixedEffectsFit& fit, const HatBlocks& hat, int i);

  int unit() const { return i_; }
  const Eigen::VectorXd& beta_without() const { return beta_i_; }
  bool near_singular() const { return near_singular_; }
  DeletionResult single_result() const;
  DeletionResult pair(int j) const;

 private:
  const FixedEffectsFit* fit_;
  const HatBlocks* hat_;
  int i_;
  Eigen::LDLT<Eigen::MatrixXd> m_ldlt_;
  Eigen::VectorXd m_inv_u_;
  Eigen::VectorXd beta_i_;
  bool near_singular_ = false;
};

// All single deletions and all unordered pair deletions in one pass, reusing
// the per-unit context across each row of partners. Singular cells are
// recorded as unavailable rather than aborting the sweep.
struct DeletionSweepResult {
  int n = 0;
  std::vector<Eigen::VectorXd> single_beta;
  std::vector<std::uint8_t> single_ok;
  std::vector<std::uint8_t> single_warn;
  std::vector<Eigen::VectorXd> pair_beta;  // unordered pairs, i < j
  std::vector<std::uint8_t> pair_ok;
  std::vector<std::uint8_t> pair_warn;

  // Index of the unordered pair {i, j}, i != j, into the pair_* arrays.
  int pair_index(int i, int j) const;
};

DeletionSweepResult deletion_sweep(const FixedEffectsFit& fit,
                                   const HatBlocks& hat);

}  // namespace paneldiag
