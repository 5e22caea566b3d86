#include <doctest.h>

#include <Eigen/Dense>
#include <string>

#include "paneldiag/errors.hpp"
#include "paneldiag/estimator.hpp"
#include "paneldiag/panel.hpp"
#include "testutil.hpp"

using paneldiag::DemeanedPanel;
using paneldiag::FixedEffectsFit;
using paneldiag::fit_within;
using paneldiag::HatBlocks;
using paneldiag::NumericalError;
using paneldiag::PanelDataset;
using paneldiag::within_group_transform;

TEST_CASE("coefficients match the explicit-inverse normal equations") {
  for (int k = 1; k <= 3; ++k) {
    const PanelDataset panel = testutil::random_panel(100 + k, 10, 4, 8, k);
    const DemeanedPanel d = within_group_transform(panel);
    const FixedEffectsFit fit = fit_within(d);

    const Eigen::MatrixXd xtx = d.x().transpose() * d.x();
    const Eigen::VectorXd oracle =
        xtx.inverse() * (d.x().transpose() * d.y());
    CHECK(testutil::rel_err(fit.beta(), oracle) < 1e-12);
    CHECK((fit.xtx() - xtx).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("residuals are orthogonal to every demeaned regressor") {
  const PanelDataset panel = testutil::random_panel(21, 12, 3, 9, 3);
  const DemeanedPanel d = within_group_transform(panel);
  const FixedEffectsFit fit = fit_within(d);
  const Eigen::VectorXd moments = d.x().transpose() * fit.residuals();
  const double scale = d.x().norm() * fit.residuals().norm() + 1.0;
  CHECK(moments.cwiseAbs().maxCoeff() < 1e-8 * scale);
}

TEST_CASE("error variance uses the cross-section degrees of freedom") {
  const PanelDataset panel = testutil::random_panel(22, 9, 4, 4, 2);
  const FixedEffectsFit fit = fit_within(panel);
  CHECK(fit.s2() == fit.residuals().squaredNorm() / (panel.n_units() - 1));
  CHECK(fit.dof().nu1 == 3);  // k + 1
  CHECK(fit.dof().nu2 == 8);  // N - 1
  CHECK(fit.n_params() == 3);
}

TEST_CASE("an exact linear panel fits with zero residuals") {
  paneldiag::PanelIndex index;
  index.unit_ids = {"1", "2", "3"};
  index.time_ids = {"1", "2", "3", "1", "2", "3", "1", "2", "3"};
  index.offsets = {0, 3, 6, 9};
  index.x_names = {"x"};
  Eigen::MatrixXd x(9, 1);
  x << 1, 2, 4, 0, 1, 5, 2, 3, 7;
  Eigen::VectorXd y = 2.0 * x.col(0);
  y.segment(0, 3).array() += 5.0;   // unit effects, annihilated by demeaning
  y.segment(3, 3).array() += -2.0;
  const FixedEffectsFit fit =
      fit_within(PanelDataset(std::move(index), std::move(y), std::move(x)));
  CHECK(fit.beta()(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residuals().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fit.s2() < 1e-24);
}

TEST_CASE("a collinear design raises a numerical error naming the condition") {
  const PanelDataset base = testutil::random_panel(23, 6, 3, 5, 1);
  Eigen::MatrixXd x(base.n_obs(), 2);
  x.col(0) = base.x().col(0);
  x.col(1) = 2.0 * base.x().col(0);
  paneldiag::PanelIndex index = base.index();
  index.x_names = {"x1", "x2"};
  try {
    fit_within(PanelDataset(std::move(index), Eigen::VectorXd(base.y()),
                            std::move(x)));
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("condition") != std::string::npos);
    CHECK(e.module() == std::string("fe-estimator"));
  }
}

TEST_CASE("scaling y scales the coefficients linearly") {
  const PanelDataset base = testutil::random_panel(24, 8, 4, 6, 2);
  paneldiag::PanelIndex index = base.index();
  const PanelDataset scaled(std::move(index), Eigen::VectorXd(5.0 * base.y()),
                            Eigen::MatrixXd(base.x()));
  const FixedEffectsFit a = fit_within(base);
  const FixedEffectsFit b = fit_within(scaled);
  CHECK(testutil::rel_err(b.beta(), Eigen::VectorXd(5.0 * a.beta())) < 1e-12);
}

TEST_CASE("hat blocks match the explicit-inverse oracle") {
  const PanelDataset panel = testutil::random_panel(25, 7, 3, 6, 2);
  const DemeanedPanel d = within_group_transform(panel);
  const FixedEffectsFit fit = fit_within(d);
  const HatBlocks hat(fit);
  const Eigen::MatrixXd inv = fit.xtx().inverse();

  for (int i = 0; i < panel.n_units(); ++i) {
    const Eigen::MatrixXd oracle =
        d.x_block(i) * inv * d.x_block(i).transpose();
    CHECK((hat.block(i) - oracle).cwiseAbs().maxCoeff() < 1e-12);
    // Symmetric, eigenvalues within [0, 1] up to roundoff.
    CHECK((hat.block(i) - hat.block(i).transpose()).cwiseAbs().maxCoeff() <
          1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hat.block(i));
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    CHECK(eig.eigenvalues().maxCoeff() < 1.0 + 1e-10);
  }

  const Eigen::MatrixXd cross_oracle =
      d.x_block(2) * inv * d.x_block(4).transpose();
  CHECK((hat.cross_block(2, 4) - cross_oracle).cwiseAbs().maxCoeff() < 1e-12);

  // Cached blocks hand back the same storage on repeated access.
  CHECK(&hat.block(3) == &hat.block(3));
  CHECK(&hat.solve_product(3) == &hat.solve_product(3));
}

TEST_CASE("unit leverages sum to the regressor count") {
  for (int k = 1; k <= 3; ++k) {
    const PanelDataset panel = testutil::random_panel(26 + k, 11, 3, 8, k);
    const FixedEffectsFit fit = fit_within(panel);
    const HatBlocks hat(fit);
    double total = 0.0;
    for (int i = 0; i < panel.n_units(); ++i) total += hat.trace(i);
    CHECK(total == doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
  }
}
