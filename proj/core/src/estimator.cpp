#include "paneldiag/estimator.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "paneldiag/csv.hpp"
#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "fe-estimator";
// Condition numbers beyond this make the normal equations untrustworthy.
constexpr double kMaxCondition = 1e12;

}  // namespace

FixedEffectsFit::FixedEffectsFit(std::shared_ptr<const DemeanedPanel> demeaned,
                                 Eigen::VectorXd beta,
                                 Eigen::VectorXd residuals, Eigen::MatrixXd xtx,
                                 Eigen::LLT<Eigen::MatrixXd> xtx_llt,
                                 double condition)
    : demeaned_(std::move(demeaned)),
      beta_(std::move(beta)),
      residuals_(std::move(residuals)),
      xtx_(std::move(xtx)),
      xtx_llt_(std::move(xtx_llt)),
      condition_(condition) {
  ssr_ = residuals_.squaredNorm();
  s2_ = ssr_ / static_cast<double>(n_units() - 1);
}

FixedEffectsFit fit_within(const DemeanedPanel& demeaned) {
  const Eigen::MatrixXd& x = demeaned.x();
  const Eigen::VectorXd& y = demeaned.y();

  Eigen::MatrixXd xtx = x.transpose() * x;
  Eigen::LLT<Eigen::MatrixXd> llt(xtx);
  const double rcond = llt.rcond();
  if (llt.info() != Eigen::Success || !(rcond >= 1.0 / kMaxCondition)) {
    const std::string cond = rcond > 0.0 ? format_double(1.0 / rcond) : "inf";
    throw NumericalError(
        kModule, "within-group design is rank deficient or ill conditioned "
                 "(estimated condition number " + cond + " exceeds 1e12)");
  }

  Eigen::VectorXd beta = llt.solve(x.transpose() * y);
  Eigen::VectorXd residuals = y - x * beta;
  return FixedEffectsFit(std::make_shared<const DemeanedPanel>(demeaned),
                         std::move(beta), std::move(residuals), std::move(xtx),
                         std::move(llt), 1.0 / rcond);
}

FixedEffectsFit fit_within(const PanelDataset& data) {
  return fit_within(within_group_transform(data));
}

struct HatBlocks::State {
  std::shared_ptr<const DemeanedPanel> demeaned;
  Eigen::LLT<Eigen::MatrixXd> llt;
  std::vector<Eigen::MatrixXd> solve_products;  // W_i, filled on demand
  std::vector<Eigen::MatrixXd> blocks;          // H_i, filled on demand
  std::unique_ptr<std::once_flag[]> w_once;
  std::unique_ptr<std::once_flag[]> h_once;
};

HatBlocks::HatBlocks(const FixedEffectsFit& fit) : state_(std::make_shared<State>()) {
  state_->demeaned = fit.demeaned_ptr();
  state_->llt = fit.xtx_llt();
  const int n = fit.n_units();
  state_->solve_products.resize(n);
  state_->blocks.resize(n);
  state_->w_once = std::make_unique<std::once_flag[]>(n);
  state_->h_once = std::make_unique<std::once_flag[]>(n);
}

int HatBlocks::n_units() const { return state_->demeaned->n_units(); }

const DemeanedPanel& HatBlocks::demeaned() const { return *state_->demeaned; }

const Eigen::MatrixXd& HatBlocks::solve_product(int i) const {
  State& s = *state_;
  std::call_once(s.w_once[i], [&] {
    s.solve_products[i] = s.llt.solve(s.demeaned->x_block(i).transpose());
  });
  return s.solve_products[i];
}

const Eigen::MatrixXd& HatBlocks::block(int i) const {
  State& s = *state_;
  std::call_once(s.h_once[i], [&] {
    s.blocks[i] = s.demeaned->x_block(i) * solve_product(i);
  });
  return s.blocks[i];
}

Eigen::MatrixXd HatBlocks::cross_block(int i, int j) const {
  return state_->demeaned->x_block(i) * solve_product(j);
}

double HatBlocks::trace(int i) const { return block(i).trace(); }

}  // namespace paneldiag
