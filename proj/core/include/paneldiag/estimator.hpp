#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <memory>

#include "paneldiag/panel.hpp"

namespace paneldiag {

// Numerator / denominator degrees of freedom used by the influence cutoffs:
// nu1 = k + 1 (slopes plus the annihilated unit intercept), nu2 = N - 1.
struct DegreesOfFreedom {
  int nu1 = 0;
  int nu2 = 0;
};

// Within-group least squares on a demeaned panel. Holds everything downstream
// consumers need: coefficients, stacked residuals, the Gram matrix X'X with
// its Cholesky factor, and the error variance s2 = SSR / (N - 1).
class FixedEffectsFit {
 public:
  FixedEffectsFit(std::shared_ptr<const DemeanedPanel> demeaned,
                  Eigen::VectorXd beta, Eigen::VectorXd residuals,
                  Eigen::MatrixXd xtx, Eigen::LLT<Eigen::MatrixXd> xtx_llt,
                  double condition);

  const DemeanedPanel& demeaned() const { return *demeaned_; }
  std::shared_ptr<const DemeanedPanel> demeaned_ptr() const { return demeaned_; }
  const PanelIndex& index() const { return demeaned_->index(); }

  int n_units() const { return demeaned_->n_units(); }
  int n_obs() const { return demeaned_->n_obs(); }
  int n_regressors() const { return demeaned_->n_regressors(); }
  // k + 1: the model dimension entering nu1 and the influence scale.
  int n_params() const { return n_regressors() + 1; }

  const Eigen::VectorXd& beta() const { return beta_; }
  const Eigen::VectorXd& residuals() const { return residuals_; }
  Eigen::Ref<const Eigen::VectorXd> residual_block(int i) const {
    return residuals_.segment(index().offsets[i], index().t_len(i));
  }

  const Eigen::MatrixXd& xtx() const { return xtx_; }
  const Eigen::LLT<Eigen::MatrixXd>& xtx_llt() const { return xtx_llt_; }
  // Estimated 2-norm condition number of X'X at factorization time.
  double condition() const { return condition_; }

  double ssr() const { return ssr_; }
  double s2() const { return s2_; }
  DegreesOfFreedom dof() const {
    return {n_params(), n_units() - 1};
  }

 private:
  std::shared_ptr<const DemeanedPanel> demeaned_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd residuals_;
  Eigen::MatrixXd xtx_;
  Eigen::LLT<Eigen::MatrixXd> xtx_llt_;
  double condition_ = 0.0;
  double ssr_ = 0.0;
  double s2_ = 0.0;
};

// Solves the within-group normal equations by Cholesky. Raises a numerical
// error naming the estimated condition number when X'X is rank deficient or
// conditioned worse than 1e12.
FixedEffectsFit fit_within(const DemeanedPanel& demeaned);

// Convenience: demean then fit.
FixedEffectsFit fit_within(const PanelDataset& data);

// Per-unit hat blocks H_i = X_i (X'X)^-1 X_i' and the solve products
// W_i = (X'X)^-1 X_i' they are built from. Blocks materialize lazily on first
// access and are cached; access is thread safe. Copies share the cache.
class HatBlocks {
 public:
  explicit HatBlocks(const FixedEffectsFit& fit);

  int n_units() const;
  const DemeanedPanel& demeaned() const;

  // H_i, a t_len(i) square symmetric PSD block with eigenvalues in [0, 1].
  const Eigen::MatrixXd& block(int i) const;
  // W_i = (X'X)^-1 X_i', k rows by t_len(i) columns.
  const Eigen::MatrixXd& solve_product(int i) const;
  // Cross block H_ij = X_i (X'X)^-1 X_j', computed on demand (not cached).
  Eigen::MatrixXd cross_block(int i, int j) const;
  // Unit leverage tr(H_i).
  double trace(int i) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

}  // namespace paneldiag
