#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// deliberately avoid the library's solve paths: plain loops for demeaning,
// explicit inverses or QR for coefficients.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "paneldiag/panel.hpp"
#include "paneldiag/rng.hpp"

namespace testutil {

// Random panel with unit effects baked into y, optionally unbalanced.
// Independent of the dgp module: builds the index and matrices by hand.
inline paneldiag::PanelDataset random_panel(std::uint64_t seed, int n_units,
                                            int t_min, int t_max, int k) {
  paneldiag::Xoshiro256pp rng(seed);
  paneldiag::PanelIndex index;
  for (int c = 0; c < k; ++c) index.x_names.push_back("x" + std::to_string(c + 1));
  index.offsets.push_back(0);
  std::vector<int> lens(n_units);
  int rows = 0;
  for (int i = 0; i < n_units; ++i) {
    lens[i] = t_min + static_cast<int>(rng.next() %
                                       static_cast<std::uint64_t>(
                                           t_max - t_min + 1));
    index.unit_ids.push_back(std::to_string(i + 1));
    for (int s = 0; s < lens[i]; ++s)
      index.time_ids.push_back(std::to_string(s + 1));
    rows += lens[i];
    index.offsets.push_back(rows);
  }

  Eigen::MatrixXd x(rows, k);
  Eigen::VectorXd y(rows);
  int at = 0;
  for (int i = 0; i < n_units; ++i) {
    const double effect = rng.uniform(-5.0, 5.0);
    for (int s = 0; s < lens[i]; ++s) {
      double signal = 0.0;
      for (int c = 0; c < k; ++c) {
        x(at, c) = rng.normal(0.0, 1.0);
        signal += (0.5 + 0.25 * c) * x(at, c);
      }
      y(at) = 1.0 + signal + effect + rng.normal(0.0, 1.0);
      ++at;
    }
  }
  return paneldiag::PanelDataset(std::move(index), std::move(y), std::move(x));
}

inline paneldiag::PanelDataset balanced_panel(std::uint64_t seed, int n_units,
                                              int t, int k) {
  return random_panel(seed, n_units, t, t, k);
}

// Loop-arithmetic demeaning, no Eigen reductions.
inline void demean_oracle(const paneldiag::PanelDataset& data,
                          Eigen::VectorXd& y_out, Eigen::MatrixXd& x_out) {
  const paneldiag::PanelIndex& index = data.index();
  y_out = data.y();
  x_out = data.x();
  for (int i = 0; i < index.n_units(); ++i) {
    const int lo = index.offsets[i];
    const int hi = index.offsets[i + 1];
    double y_sum = 0.0;
    for (int r = lo; r < hi; ++r) y_sum += y_out(r);
    const double y_mean = y_sum / (hi - lo);
    for (int r = lo; r < hi; ++r) y_out(r) -= y_mean;
    for (int c = 0; c < x_out.cols(); ++c) {
      double x_sum = 0.0;
      for (int r = lo; r < hi; ++r) x_sum += x_out(r, c);
      const double x_mean = x_sum / (hi - lo);
      for (int r = lo; r < hi; ++r) x_out(r, c) -= x_mean;
    }
  }
}

// Reference coefficients after excluding units: rebuild rows by hand, demean
// by loops, solve by QR. Shares no code with the deletion module.
inline Eigen::VectorXd refit_oracle(const paneldiag::PanelDataset& data,
                                    const std::vector<int>& excluded) {
  const paneldiag::PanelIndex& index = data.index();
  std::vector<bool> keep(index.n_units(), true);
  for (int p : excluded) keep[p] = false;

  Eigen::VectorXd y_d;
  Eigen::MatrixXd x_d;
  demean_oracle(data, y_d, x_d);

  int rows = 0;
  for (int i = 0; i < index.n_units(); ++i)
    if (keep[i]) rows += index.t_len(i);
  Eigen::MatrixXd x(rows, x_d.cols());
  Eigen::VectorXd y(rows);
  int at = 0;
  for (int i = 0; i < index.n_units(); ++i) {
    if (!keep[i]) continue;
    for (int r = index.offsets[i]; r < index.offsets[i + 1]; ++r) {
      y(at) = y_d(r);
      x.row(at) = x_d.row(r);
      ++at;
    }
  }
  return x.colPivHouseholderQr().solve(y);
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double scale = std::max(want.norm(), 1e-12);
  return (got - want).norm() / scale;
}

}  // namespace testutil
