#include "paneldiag/deletion.hpp"

#include <optional>
#include <string>
#include <utility>

#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "deletion";
constexpr double kSingularRcond = 1e-12;  // below: error
constexpr double kWarnRcond = 1e-8;       // below: flag, keep result

void check_unit(const FixedEffectsFit& fit, int i) {
  if (i < 0 || i >= fit.n_units())
    throw ValidationError(kModule,
                          "unit position " + std::to_string(i) + " out of range");
}

// Factors a symmetric block and applies the condition guard. `what` names the
// block in error messages, e.g. "annihilator for unit 7".
Eigen::LDLT<Eigen::MatrixXd> guarded_ldlt(const Eigen::MatrixXd& m,
                                          const std::string& what,
                                          bool& near_singular) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  const double rcond = ldlt.rcond();
  if (ldlt.info() != Eigen::Success || !(rcond >= kSingularRcond))
    throw NumericalError(kModule, what + " is singular or conditioned worse "
                                         "than 1e12, deletion undefined");
  if (rcond < kWarnRcond) near_singular = true;
  return ldlt;
}

}  // namespace

UnitDeletionContext::UnitDeletionContext(const FixedEffectsFit& fit,
                                         const HatBlocks& hat, int i)
    : fit_(&fit), hat_(&hat), i_(i) {
  check_unit(fit, i);
  const int t = fit.index().t_len(i);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(t, t) - hat.block(i);
  m_ldlt_ = guarded_ldlt(
      m, "annihilator for unit " + fit.index().unit_ids[i], near_singular_);
  m_inv_u_ = m_ldlt_.solve(fit.residual_block(i));
  beta_i_ = fit.beta() - hat.solve_product(i) * m_inv_u_;
}

DeletionResult UnitDeletionContext::single_result() const {
  DeletionResult r;
  r.kind = DeletionKind::SingleUnit;
  r.unit_i = i_;
  r.beta = beta_i_;
  r.near_singular = near_singular_;
  return r;
}

DeletionResult UnitDeletionContext::pair(int j) const {
  const FixedEffectsFit& fit = *fit_;
  const HatBlocks& hat = *hat_;
  check_unit(fit, j);
  if (j == i_)
    throw ValidationError(kModule, "pair deletion needs two distinct units");

  const int tj = fit.index().t_len(j);
  const Eigen::MatrixXd cross = hat.cross_block(i_, j);          // H_ij
  const Eigen::MatrixXd m_inv_cross = m_ldlt_.solve(cross);      // M_i^-1 H_ij
  Eigen::MatrixXd schur = Eigen::MatrixXd::Identity(tj, tj) - hat.block(j) -
                          cross.transpose() * m_inv_cross;

  DeletionResult r;
  r.kind = DeletionKind::UnitPair;
  r.unit_i = i_;
  r.unit_j = j;
  r.near_singular = near_singular_;
  const Eigen::LDLT<Eigen::MatrixXd> schur_ldlt = guarded_ldlt(
      schur,
      "pair annihilator for units " + fit.index().unit_ids[i_] + ", " +
          fit.index().unit_ids[j],
      r.near_singular);

  const Eigen::VectorXd w =
      schur_ldlt.solve(cross.transpose() * m_inv_u_ + fit.residual_block(j));
  r.beta = beta_i_ - hat.solve_product(i_) * (m_inv_cross * w) -
           hat.solve_product(j) * w;
  return r;
}

DeletionResult leave_one_out(const FixedEffectsFit& fit, const HatBlocks& hat,
                             int i) {
  return UnitDeletionContext(fit, hat, i).single_result();
}

DeletionResult leave_two_out(const FixedEffectsFit& fit, const HatBlocks& hat,
                             int i, int j) {
  return UnitDeletionContext(fit, hat, i).pair(j);
}

Eigen::VectorXd brute_force_refit(const PanelDataset& data,
                                  const std::vector<int>& excluded) {
  return fit_within(drop_units(data, excluded)).beta();
}

int DeletionSweepResult::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle without the diagonal.
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

DeletionSweepResult deletion_sweep(const FixedEffectsFit& fit,
                                   const HatBlocks& hat) {
  const int n = fit.n_units();
  DeletionSweepResult sweep;
  sweep.n = n;
  sweep.single_beta.resize(n);
  sweep.single_ok.assign(n, 0);
  sweep.single_warn.assign(n, 0);
  const int pairs = n * (n - 1) / 2;
  sweep.pair_beta.resize(pairs);
  sweep.pair_ok.assign(pairs, 0);
  sweep.pair_warn.assign(pairs, 0);

  for (int i = 0; i < n; ++i) {
    std::optional<UnitDeletionContext> ctx;
    try {
      ctx.emplace(fit, hat, i);
      sweep.single_beta[i] = ctx->beta_without();
      sweep.single_ok[i] = 1;
      sweep.single_warn[i] = ctx->near_singular() ? 1 : 0;
    } catch (const NumericalError&) {
      continue;  // unit unavailable; all its pairs stay unavailable too
    }
    for (int j = i + 1; j < n; ++j) {
      const int p = sweep.pair_index(i, j);
      try {
        DeletionResult r = ctx->pair(j);
        sweep.pair_beta[p] = std::move(r.beta);
        sweep.pair_ok[p] = 1;
        sweep.pair_warn[p] = r.near_singular ? 1 : 0;
      } catch (const NumericalError&) {
        // cell stays unavailable
      }
    }
  }
  return sweep;
}

}  // namespace paneldiag
