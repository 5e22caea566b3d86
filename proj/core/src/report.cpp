#include "paneldiag/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "paneldiag/csv.hpp"
#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "report-cli";

using json = nlohmann::ordered_json;

json number_or_null(double v) {
  if (is_na(v)) return nullptr;
  return v;
}

double number_from(const json& v) {
  if (v.is_null()) return na_value();
  if (!v.is_number())
    throw ValidationError(kModule, "expected a number or null in report JSON");
  return v.get<double>();
}

json matrix_to_array(const Eigen::MatrixXd& m) {
  json flat = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      flat.push_back(number_or_null(m(i, j)));
  return flat;
}

Eigen::MatrixXd matrix_from_array(const json& flat, int n,
                                  const std::string& name) {
  if (!flat.is_array() || static_cast<int>(flat.size()) != n * n)
    throw ValidationError(kModule, "matrix " + name + " must hold " +
                                       std::to_string(n * n) + " cells");
  Eigen::MatrixXd m(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = number_from(flat[at++]);
  return m;
}

const char* normalization_name(ResidualNormalization norm) {
  return norm == ResidualNormalization::Global ? "global" : "period";
}

ResidualNormalization normalization_from_name(const std::string& name) {
  if (name == "global") return ResidualNormalization::Global;
  if (name == "period") return ResidualNormalization::PerPeriod;
  throw ValidationError(kModule, "unknown residual_norm '" + name + "'");
}

}  // namespace

std::string report_to_json(const InfluenceReport& report) {
  const int n = static_cast<int>(report.leverage.size());
  json out;

  json meta;
  meta["n"] = n;
  meta["t_min"] = report.t_min;
  meta["t_max"] = report.t_max;
  meta["k"] = report.k;
  meta["K"] = report.big_k;
  meta["nu1"] = report.nu1;
  meta["nu2"] = report.nu2;
  meta["s2"] = report.s2;
  json beta = json::array();
  for (Eigen::Index c = 0; c < report.beta.size(); ++c)
    beta.push_back(report.beta(c));
  meta["beta_hat"] = std::move(beta);
  meta["residual_norm"] = normalization_name(report.normalization);
  out["meta"] = std::move(meta);

  json units = json::array();
  for (int i = 0; i < n; ++i) {
    json u;
    u["id"] = report.index->unit_ids[i];
    u["L"] = report.leverage(i);
    u["O"] = report.outlyingness(i);
    u["C_ii"] = number_or_null(report.cook(i));
    u["class"] = unit_class_name(report.classification[i]);
    units.push_back(std::move(u));
  }
  out["units"] = std::move(units);

  json matrices;
  matrices["ids"] = report.index->unit_ids;
  matrices["C_ij"] = matrix_to_array(report.joint);
  matrices["K"] = matrix_to_array(report.joint_effect);
  matrices["C_cond"] = matrix_to_array(report.conditional);
  matrices["M"] = matrix_to_array(report.conditional_effect);
  out["matrices"] = std::move(matrices);

  json cutoffs;
  cutoffs["leverage_cut"] = report.cutoffs.leverage_cut;
  cutoffs["residual_cut"] = report.cutoffs.residual_cut;
  cutoffs["f_median"] = report.cutoffs.f_median;
  cutoffs["unity"] = report.cutoffs.unity;
  cutoffs["four_over_n"] = report.cutoffs.four_over_n;
  out["cutoffs"] = std::move(cutoffs);

  return out.dump(2) + "\n";
}

InfluenceReport parse_report(const std::string& json_text) {
  json in;
  try {
    in = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(kModule, std::string("report JSON is malformed: ") +
                                       e.what());
  }
  try {
    InfluenceReport report;
    const json& meta = in.at("meta");
    const int n = meta.at("n").get<int>();
    report.k = meta.at("k").get<int>();
    report.big_k = meta.at("K").get<int>();
    report.nu1 = meta.at("nu1").get<int>();
    report.nu2 = meta.at("nu2").get<int>();
    report.t_min = meta.at("t_min").get<int>();
    report.t_max = meta.at("t_max").get<int>();
    report.s2 = meta.at("s2").get<double>();
    const json& beta = meta.at("beta_hat");
    report.beta.resize(beta.size());
    for (std::size_t c = 0; c < beta.size(); ++c)
      report.beta(static_cast<Eigen::Index>(c)) = beta[c].get<double>();
    report.normalization =
        normalization_from_name(meta.at("residual_norm").get<std::string>());

    const json& units = in.at("units");
    if (static_cast<int>(units.size()) != n)
      throw ValidationError(kModule, "units list length differs from meta.n");
    auto index = std::make_shared<PanelIndex>();
    report.leverage.resize(n);
    report.outlyingness.resize(n);
    report.cook.resize(n);
    report.classification.resize(n);
    for (int i = 0; i < n; ++i) {
      const json& u = units[i];
      index->unit_ids.push_back(u.at("id").get<std::string>());
      report.leverage(i) = u.at("L").get<double>();
      report.outlyingness(i) = u.at("O").get<double>();
      report.cook(i) = number_from(u.at("C_ii"));
      report.classification[i] =
          unit_class_from_name(u.at("class").get<std::string>());
    }
    for (int c = 0; c < report.k; ++c)
      index->x_names.push_back("x" + std::to_string(c + 1));
    report.index = index;

    const json& matrices = in.at("matrices");
    const json& ids = matrices.at("ids");
    if (static_cast<int>(ids.size()) != n)
      throw ValidationError(kModule, "matrix id index length differs from n");
    for (int i = 0; i < n; ++i) {
      if (ids[i].get<std::string>() != index->unit_ids[i])
        throw ValidationError(kModule,
                              "matrix id index disagrees with units list");
    }
    report.joint = matrix_from_array(matrices.at("C_ij"), n, "C_ij");
    report.joint_effect = matrix_from_array(matrices.at("K"), n, "K");
    report.conditional = matrix_from_array(matrices.at("C_cond"), n, "C_cond");
    report.conditional_effect = matrix_from_array(matrices.at("M"), n, "M");

    const json& cutoffs = in.at("cutoffs");
    report.cutoffs.leverage_cut = cutoffs.at("leverage_cut").get<double>();
    report.cutoffs.residual_cut = cutoffs.at("residual_cut").get<double>();
    report.cutoffs.f_median = cutoffs.at("f_median").get<double>();
    report.cutoffs.unity = cutoffs.at("unity").get<double>();
    report.cutoffs.four_over_n = cutoffs.at("four_over_n").get<double>();
    return report;
  } catch (const json::exception& e) {
    throw ValidationError(kModule,
                          std::string("report JSON schema mismatch: ") +
                              e.what());
  }
}

std::string matrix_to_csv(const Eigen::MatrixXd& m,
                          const std::vector<std::string>& ids) {
  if (m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(ids.size()))
    throw ValidationError(kModule, "matrix export needs a square matrix and "
                                   "one id per row");
  std::string out = "id";
  for (const auto& id : ids) {
    out += ',';
    out += id;
  }
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += ids[i];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out += ',';
      out += is_na(m(i, j)) ? "NA" : format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(const std::string& text,
                                std::vector<std::string>* ids) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(kModule, "matrix CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) header.push_back(cell);
  }
  const int n = static_cast<int>(header.size()) - 1;
  if (n < 1) throw ValidationError(kModule, "matrix CSV header is malformed");

  Eigen::MatrixXd m(n, n);
  std::vector<std::string> row_ids;
  int r = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (r >= n)
      throw ValidationError(kModule, "matrix CSV has more rows than columns");
    std::istringstream row(line);
    std::string cell;
    int c = -1;
    while (std::getline(row, cell, ',')) {
      if (c == -1) {
        row_ids.push_back(cell);
      } else if (c < n) {
        if (cell == "NA") {
          m(r, c) = na_value();
        } else {
          double v = 0.0;
          auto [ptr, ec] =
              std::from_chars(cell.data(), cell.data() + cell.size(), v);
          if (ec != std::errc() || ptr != cell.data() + cell.size())
            throw ValidationError(kModule, "matrix CSV cell '" + cell +
                                               "' is not a number or NA");
          m(r, c) = v;
        }
      }
      ++c;
    }
    if (c != n)
      throw ValidationError(kModule, "matrix CSV row " + std::to_string(r + 2) +
                                         " has " + std::to_string(c) +
                                         " cells, expected " +
                                         std::to_string(n));
    ++r;
  }
  if (r != n)
    throw ValidationError(kModule, "matrix CSV has " + std::to_string(r) +
                                       " rows, expected " + std::to_string(n));
  if (ids) *ids = std::move(row_ids);
  return m;
}

std::string units_to_csv(const InfluenceReport& report) {
  std::string out = "id,L,O,C_ii,class\n";
  const int n = static_cast<int>(report.leverage.size());
  for (int i = 0; i < n; ++i) {
    out += report.index->unit_ids[i];
    out += ',';
    out += format_double(report.leverage(i));
    out += ',';
    out += format_double(report.outlyingness(i));
    out += ',';
    out += is_na(report.cook(i)) ? "NA" : format_double(report.cook(i));
    out += ',';
    out += unit_class_name(report.classification[i]);
    out += '\n';
  }
  return out;
}

std::string fit_to_json(const FixedEffectsFit& fit) {
  json out;
  out["n"] = fit.n_units();
  out["t_min"] = fit.index().t_min();
  out["t_max"] = fit.index().t_max();
  out["k"] = fit.n_regressors();
  out["K"] = fit.n_params();
  const DegreesOfFreedom dof = fit.dof();
  out["nu1"] = dof.nu1;
  out["nu2"] = dof.nu2;
  json beta = json::array();
  for (Eigen::Index c = 0; c < fit.beta().size(); ++c)
    beta.push_back(fit.beta()(c));
  out["beta_hat"] = std::move(beta);
  json names = json::array();
  for (const auto& name : fit.index().x_names) names.push_back(name);
  out["x_names"] = std::move(names);
  out["s2"] = fit.s2();
  out["ssr"] = fit.ssr();
  out["condition"] = fit.condition();
  return out.dump(2) + "\n";
}

std::string dgp_manifest_to_json(const DgpConfig& config) {
  json out;
  out["seed"] = config.seed;
  out["n_units"] = config.n_units;
  out["n_periods"] = config.n_periods;
  out["beta0"] = config.beta0;
  out["beta1"] = config.beta1;
  json entries = json::array();
  for (const auto& e : config.contamination.entries) {
    json entry;
    entry["unit"] = e.unit;
    entry["kind"] = anomaly_kind_name(e.kind);
    entry["periods"] = e.periods;
    entry["y_shift_mean"] = e.y_shift_mean;
    entry["y_shift_sd"] = e.y_shift_sd;
    entry["x_level_mean"] = e.x_level_mean;
    entry["x_level_sd"] = e.x_level_sd;
    entries.push_back(std::move(entry));
  }
  out["contamination"] = std::move(entries);
  return out.dump(2) + "\n";
}

}  // namespace paneldiag
