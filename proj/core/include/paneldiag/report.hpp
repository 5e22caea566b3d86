#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "paneldiag/dgp.hpp"
#include "paneldiag/estimator.hpp"
#include "paneldiag/influence.hpp"

namespace paneldiag {

// JSON form of a report:
//   {meta: {n, t_min, t_max, k, K, nu1, nu2, s2, beta_hat, residual_norm},
//    units: [{id, L, O, C_ii, class}],
//    matrices: {ids, C_ij, K, C_cond, M} as row-major arrays,
//    cutoffs: {leverage_cut, residual_cut, f_median, unity, four_over_n}}
// Not-available cells serialize as null. Numbers render shortest-round-trip,
// so parse_report(report_to_json(r)) reproduces r's numerics bit for bit.
std::string report_to_json(const InfluenceReport& report);
InfluenceReport parse_report(const std::string& json_text);

// Square matrix CSV with a header row and leading id column. Not-available
// cells round-trip through the token NA.
std::string matrix_to_csv(const Eigen::MatrixXd& m,
                          const std::vector<std::string>& ids);
Eigen::MatrixXd matrix_from_csv(const std::string& text,
                                std::vector<std::string>* ids = nullptr);

// Per-unit table: id, L, O, C_ii, class.
std::string units_to_csv(const InfluenceReport& report);

// Summary of a plain fit, for the `fit` subcommand.
std::string fit_to_json(const FixedEffectsFit& fit);

// Generator sidecar: config plus seed, enough to regenerate the panel.
std::string dgp_manifest_to_json(const DgpConfig& config);

}  // namespace paneldiag
