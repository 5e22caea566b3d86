#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace paneldiag {

// Numeric-aware id order: ids that both parse fully as finite decimal numbers
// compare by value (ties broken lexicographically so "01" and "1" stay
// distinct), everything else compares lexicographically. Keeps "2" < "10" for
// generated panels while still accepting arbitrary text ids.
bool id_less(const std::string& a, const std::string& b);

// Row layout of a long-format panel: observations stacked unit by unit, units
// ascending by id_less, periods ascending within each unit. Unit i occupies
// rows [offsets[i], offsets[i+1]).
struct PanelIndex {
  std::vector<std::string> unit_ids;  // size N
  std::vector<std::string> time_ids;  // size n_obs, grouped by unit
  std::vector<int> offsets;           // size N+1, offsets[0] == 0
  std::vector<std::string> x_names;   // size k

  int n_units() const { return static_cast<int>(unit_ids.size()); }
  int n_obs() const { return offsets.empty() ? 0 : offsets.back(); }
  int n_regressors() const { return static_cast<int>(x_names.size()); }
  int t_len(int i) const { return offsets[i + 1] - offsets[i]; }
  int t_min() const;
  int t_max() const;
  // Position of a unit id, -1 if absent.
  int unit_pos(const std::string& id) const;
};

// Validated long-format panel. Construction enforces: at least two units,
// every unit observed at least twice, unique and ascending period ids within
// each unit, ascending unit ids, finite values, consistent shapes.
class PanelDataset {
 public:
  PanelDataset(PanelIndex index, Eigen::VectorXd y, Eigen::MatrixXd x);

  const PanelIndex& index() const { return *index_; }
  std::shared_ptr<const PanelIndex> index_ptr() const { return index_; }

  int n_units() const { return index_->n_units(); }
  int n_obs() const { return index_->n_obs(); }
  int n_regressors() const { return index_->n_regressors(); }

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& x() const { return x_; }

  Eigen::Ref<const Eigen::VectorXd> y_block(int i) const {
    return y_.segment(index_->offsets[i], index_->t_len(i));
  }
  Eigen::Ref<const Eigen::MatrixXd> x_block(int i) const {
    return x_.middleRows(index_->offsets[i], index_->t_len(i));
  }

 private:
  std::shared_ptr<const PanelIndex> index_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd x_;
};

// Per-unit time-demeaned panel: each unit's column means removed from y and
// every regressor, which annihilates the unit intercepts. Column sums within
// each unit are zero by construction.
class DemeanedPanel {
 public:
  DemeanedPanel(std::shared_ptr<const PanelIndex> index, Eigen::VectorXd y,
                Eigen::MatrixXd x);

  const PanelIndex& index() const { return *index_; }
  std::shared_ptr<const PanelIndex> index_ptr() const { return index_; }

  int n_units() const { return index_->n_units(); }
  int n_obs() const { return index_->n_obs(); }
  int n_regressors() const { return index_->n_regressors(); }

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& x() const { return x_; }

  Eigen::Ref<const Eigen::VectorXd> y_block(int i) const {
    return y_.segment(index_->offsets[i], index_->t_len(i));
  }
  Eigen::Ref<const Eigen::MatrixXd> x_block(int i) const {
    return x_.middleRows(index_->offsets[i], index_->t_len(i));
  }

 private:
  std::shared_ptr<const PanelIndex> index_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd x_;
};

DemeanedPanel within_group_transform(const PanelDataset& data);
// The transform is a projection; applying it to already demeaned data is the
// identity. Kept as an overload so the property is directly testable.
DemeanedPanel within_group_transform(const DemeanedPanel& data);

// Sub-panel with the given unit positions removed. Positions out of range or
// removals that leave fewer than two units raise validation errors.
PanelDataset drop_units(const PanelDataset& data, const std::vector<int>& positions);

}  // namespace paneldiag
