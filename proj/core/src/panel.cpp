#include "paneldiag/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <utility>

#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "panel-core";

// Full-string parse to a finite double; false on trailing junk, empty input,
// inf or nan.
bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

void validate_index(const PanelIndex& index) {
  const int n = index.n_units();
  if (n < 2)
    throw ValidationError(kModule, "panel needs at least 2 units, got " +
                                       std::to_string(n));
  if (static_cast<int>(index.offsets.size()) != n + 1 || index.offsets[0] != 0)
    throw ValidationError(kModule, "panel index offsets are malformed");
  for (int i = 0; i < n; ++i) {
    if (index.t_len(i) < 2)
      throw ValidationError(kModule, "unit " + index.unit_ids[i] +
                                         " has fewer than 2 periods (" +
                                         std::to_string(index.t_len(i)) + ")");
  }
  if (static_cast<int>(index.time_ids.size()) != index.n_obs())
    throw ValidationError(kModule, "panel index period list is malformed");
  for (int i = 0; i + 1 < n; ++i) {
    if (!id_less(index.unit_ids[i], index.unit_ids[i + 1]))
      throw ValidationError(kModule, "unit ids are not strictly ascending at " +
                                         index.unit_ids[i + 1]);
  }
  for (int i = 0; i < n; ++i) {
    for (int r = index.offsets[i] + 1; r < index.offsets[i + 1]; ++r) {
      if (!id_less(index.time_ids[r - 1], index.time_ids[r]))
        throw ValidationError(kModule, "unit " + index.unit_ids[i] +
                                           " has duplicate or unordered period " +
                                           index.time_ids[r]);
    }
  }
  if (index.x_names.empty())
    throw ValidationError(kModule, "panel needs at least one regressor column");
  std::set<std::string> seen(index.x_names.begin(), index.x_names.end());
  if (static_cast<int>(seen.size()) != index.n_regressors())
    throw ValidationError(kModule, "duplicate regressor column name");
}

void validate_values(const PanelIndex& index, const Eigen::VectorXd& y,
                     const Eigen::MatrixXd& x) {
  if (y.size() != index.n_obs() || x.rows() != index.n_obs() ||
      x.cols() != index.n_regressors())
    throw ValidationError(kModule, "panel value shapes do not match the index");
  if (!y.allFinite() || !x.allFinite())
    throw ValidationError(kModule, "panel contains non-finite values");
}

}  // namespace

bool id_less(const std::string& a, const std::string& b) {
  double av = 0.0, bv = 0.0;
  if (parse_number(a, av) && parse_number(b, bv)) {
    if (av != bv) return av < bv;
    return a < b;
  }
  return a < b;
}

int PanelIndex::t_min() const {
  int m = t_len(0);
  for (int i = 1; i < n_units(); ++i) m = std::min(m, t_len(i));
  return m;
}

int PanelIndex::t_max() const {
  int m = t_len(0);
  for (int i = 1; i < n_units(); ++i) m = std::max(m, t_len(i));
  return m;
}

int PanelIndex::unit_pos(const std::string& id) const {
  // Units are id_less-sorted, so binary search applies.
  auto it = std::lower_bound(unit_ids.begin(), unit_ids.end(), id, id_less);
  if (it == unit_ids.end() || *it != id) return -1;
  return static_cast<int>(it - unit_ids.begin());
}

PanelDataset::PanelDataset(PanelIndex index, Eigen::VectorXd y,
                           Eigen::MatrixXd x)
    : index_(std::make_shared<const PanelIndex>(std::move(index))),
      y_(std::move(y)),
      x_(std::move(x)) {
  validate_index(*index_);
  validate_values(*index_, y_, x_);
}

DemeanedPanel::DemeanedPanel(std::shared_ptr<const PanelIndex> index,
                             Eigen::VectorXd y, Eigen::MatrixXd x)
    : index_(std::move(index)), y_(std::move(y)), x_(std::move(x)) {
  validate_values(*index_, y_, x_);
}

namespace {

void demean_blocks(const PanelIndex& index, Eigen::VectorXd& y,
                   Eigen::MatrixXd& x) {
  for (int i = 0; i < index.n_units(); ++i) {
    const int lo = index.offsets[i];
    const int len = index.t_len(i);
    y.segment(lo, len).array() -= y.segment(lo, len).mean();
    for (int c = 0; c < x.cols(); ++c)
      x.col(c).segment(lo, len).array() -= x.col(c).segment(lo, len).mean();
  }
}

}  // namespace

DemeanedPanel within_group_transform(const PanelDataset& data) {
  Eigen::VectorXd y = data.y();
  Eigen::MatrixXd x = data.x();
  demean_blocks(data.index(), y, x);
  return DemeanedPanel(data.index_ptr(), std::move(y), std::move(x));
}

DemeanedPanel within_group_transform(const DemeanedPanel& data) {
  Eigen::VectorXd y = data.y();
  Eigen::MatrixXd x = data.x();
  demean_blocks(data.index(), y, x);
  return DemeanedPanel(data.index_ptr(), std::move(y), std::move(x));
}

PanelDataset drop_units(const PanelDataset& data,
                        const std::vector<int>& positions) {
  const PanelIndex& index = data.index();
  std::set<int> removed;
  for (int p : positions) {
    if (p < 0 || p >= index.n_units())
      throw ValidationError(kModule,
                            "unit position " + std::to_string(p) + " out of range");
    removed.insert(p);
  }
  const int kept = index.n_units() - static_cast<int>(removed.size());
  if (kept < 2)
    throw ValidationError(kModule, "removal leaves fewer than 2 units");

  PanelIndex sub;
  sub.x_names = index.x_names;
  sub.offsets.push_back(0);
  int rows = 0;
  for (int i = 0; i < index.n_units(); ++i) {
    if (removed.count(i)) continue;
    sub.unit_ids.push_back(index.unit_ids[i]);
    for (int r = index.offsets[i]; r < index.offsets[i + 1]; ++r)
      sub.time_ids.push_back(index.time_ids[r]);
    rows += index.t_len(i);
    sub.offsets.push_back(rows);
  }

  Eigen::VectorXd y(rows);
  Eigen::MatrixXd x(rows, index.n_regressors());
  int at = 0;
  for (int i = 0; i < index.n_units(); ++i) {
    if (removed.count(i)) continue;
    const int len = index.t_len(i);
    y.segment(at, len) = data.y_block(i);
    x.middleRows(at, len) = data.x_block(i);
    at += len;
  }
  return PanelDataset(std::move(sub), std::move(y), std::move(x));
}

}  // namespace paneldiag
