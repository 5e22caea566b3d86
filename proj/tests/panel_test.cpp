#include <doctest.h>

#include <Eigen/Dense>

#include "paneldiag/errors.hpp"
#include "paneldiag/panel.hpp"
#include "testutil.hpp"

using paneldiag::DemeanedPanel;
using paneldiag::id_less;
using paneldiag::PanelDataset;
using paneldiag::PanelIndex;
using paneldiag::ValidationError;
using paneldiag::within_group_transform;

namespace {

PanelDataset tiny_panel() {
  PanelIndex index;
  index.unit_ids = {"a", "b"};
  index.time_ids = {"1", "2", "1", "2", "3"};
  index.offsets = {0, 2, 5};
  index.x_names = {"x"};
  Eigen::VectorXd y(5);
  y << 1.0, 3.0, 2.0, 4.0, 6.0;
  Eigen::MatrixXd x(5, 1);
  x << 0.5, 1.5, 1.0, 2.0, 3.0;
  return PanelDataset(std::move(index), std::move(y), std::move(x));
}

}  // namespace

TEST_CASE("id order is numeric when both ids parse, lexicographic otherwise") {
  CHECK(id_less("2", "10"));
  CHECK_FALSE(id_less("10", "2"));
  CHECK(id_less("2.5", "10.5"));
  CHECK(id_less("-3", "2"));
  CHECK(id_less("a10", "a2"));  // non-numeric ids compare by bytes
  CHECK(id_less("DEU", "FRA"));
  // Distinct spellings of the same number stay strictly ordered.
  CHECK(id_less("01", "1"));
  CHECK_FALSE(id_less("1", "01"));
  CHECK_FALSE(id_less("7", "7"));
}

TEST_CASE("panel construction validates shape and content") {
  SUBCASE("single unit rejected") {
    PanelIndex index;
    index.unit_ids = {"1"};
    index.time_ids = {"1", "2"};
    index.offsets = {0, 2};
    index.x_names = {"x"};
    CHECK_THROWS_AS(
        PanelDataset(std::move(index), Eigen::VectorXd::Zero(2),
                     Eigen::MatrixXd::Zero(2, 1)),
        ValidationError);
  }
  SUBCASE("unit with one period rejected, error names the unit") {
    PanelIndex index;
    index.unit_ids = {"1", "2"};
    index.time_ids = {"1", "2", "1"};
    index.offsets = {0, 2, 3};
    index.x_names = {"x"};
    try {
      PanelDataset(std::move(index), Eigen::VectorXd::Zero(3),
                   Eigen::MatrixXd::Zero(3, 1));
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("unit 2") != std::string::npos);
      CHECK(e.module() == std::string("panel-core"));
    }
  }
  SUBCASE("unordered periods rejected") {
    PanelIndex index;
    index.unit_ids = {"1", "2"};
    index.time_ids = {"2", "1", "1", "2"};
    index.offsets = {0, 2, 4};
    index.x_names = {"x"};
    CHECK_THROWS_AS(
        PanelDataset(std::move(index), Eigen::VectorXd::Zero(4),
                     Eigen::MatrixXd::Zero(4, 1)),
        ValidationError);
  }
  SUBCASE("non-finite values rejected") {
    PanelIndex index;
    index.unit_ids = {"1", "2"};
    index.time_ids = {"1", "2", "1", "2"};
    index.offsets = {0, 2, 4};
    index.x_names = {"x"};
    Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
    y(1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(
        PanelDataset(std::move(index), std::move(y),
                     Eigen::MatrixXd::Zero(4, 1)),
        ValidationError);
  }
}

TEST_CASE("demeaning matches the loop oracle and zeroes unit sums") {
  const PanelDataset panel = testutil::random_panel(3, 9, 3, 7, 2);
  const DemeanedPanel demeaned = within_group_transform(panel);

  Eigen::VectorXd y_oracle;
  Eigen::MatrixXd x_oracle;
  testutil::demean_oracle(panel, y_oracle, x_oracle);
  CHECK((demeaned.y() - y_oracle).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((demeaned.x() - x_oracle).cwiseAbs().maxCoeff() < 1e-13);

  for (int i = 0; i < panel.n_units(); ++i) {
    CHECK(std::fabs(demeaned.y_block(i).sum()) < 1e-10);
    for (int c = 0; c < panel.n_regressors(); ++c)
      CHECK(std::fabs(demeaned.x_block(i).col(c).sum()) < 1e-10);
  }
}

TEST_CASE("the transform is idempotent") {
  const PanelDataset panel = testutil::random_panel(4, 6, 4, 4, 1);
  const DemeanedPanel once = within_group_transform(panel);
  const DemeanedPanel twice = within_group_transform(once);
  CHECK((once.y() - twice.y()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((once.x() - twice.x()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("per-unit level shifts in y are annihilated") {
  const PanelDataset base = testutil::random_panel(5, 5, 3, 5, 1);
  Eigen::VectorXd shifted_y = base.y();
  for (int i = 0; i < base.n_units(); ++i)
    shifted_y.segment(base.index().offsets[i], base.index().t_len(i))
        .array() += 100.0 * (i + 1);
  PanelIndex index_copy = base.index();
  const PanelDataset shifted(std::move(index_copy), std::move(shifted_y),
                             Eigen::MatrixXd(base.x()));
  const DemeanedPanel a = within_group_transform(base);
  const DemeanedPanel b = within_group_transform(shifted);
  CHECK((a.y() - b.y()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((a.x() - b.x()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaling y scales the demeaned response linearly") {
  const PanelDataset base = testutil::random_panel(6, 5, 3, 5, 1);
  PanelIndex index_copy = base.index();
  const PanelDataset scaled(std::move(index_copy),
                            Eigen::VectorXd(3.0 * base.y()),
                            Eigen::MatrixXd(base.x()));
  const DemeanedPanel a = within_group_transform(base);
  const DemeanedPanel b = within_group_transform(scaled);
  CHECK((3.0 * a.y() - b.y()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("drop_units keeps the remaining blocks and ids intact") {
  const PanelDataset panel = tiny_panel();
  const PanelDataset bigger = testutil::random_panel(8, 6, 2, 4, 1);
  const PanelDataset sub = paneldiag::drop_units(bigger, {1, 4});
  CHECK(sub.n_units() == 4);
  CHECK(sub.index().unit_ids ==
        std::vector<std::string>{"1", "3", "4", "6"});
  CHECK((sub.y_block(1) - bigger.y_block(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((sub.x_block(3) - bigger.x_block(5)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(paneldiag::drop_units(panel, {0}), ValidationError);
  CHECK_THROWS_AS(paneldiag::drop_units(bigger, {17}), ValidationError);
}

TEST_CASE("unit_pos finds ids under the numeric-aware order") {
  const PanelDataset panel = testutil::random_panel(9, 12, 2, 3, 1);
  CHECK(panel.index().unit_pos("1") == 0);
  CHECK(panel.index().unit_pos("10") == 9);
  CHECK(panel.index().unit_pos("12") == 11);
  CHECK(panel.index().unit_pos("13") == -1);
}
