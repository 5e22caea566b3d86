#include "paneldiag/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "paneldiag/csv.hpp"
#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "report-cli";

// Fixed-precision decimal used for coordinates and display labels. Shortest
// rendering of the rounded value keeps documents byte-stable across reruns.
std::string fmt(double v, int precision = 6) {
  if (is_na(v)) return "NA";
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                    precision);
  (void)ec;
  return std::string(buf, ptr);
}

std::string color_hex(int r, int g, int b) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

// Dark blue to red, t in [0, 1].
std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r0 = 8, g0 = 48, b0 = 107;    // dark blue
  const int r1 = 215, g1 = 48, b1 = 39;   // red
  return color_hex(static_cast<int>(std::lround(r0 + (r1 - r0) * t)),
                   static_cast<int>(std::lround(g0 + (g1 - g0) * t)),
                   static_cast<int>(std::lround(b0 + (b1 - b0) * t)));
}

const char* class_color(UnitClass c) {
  switch (c) {
    case UnitClass::Normal: return "#7f8c9b";
    case UnitClass::VerticalOutlier: return "#e67e22";
    case UnitClass::GoodLeverage: return "#16a085";
    case UnitClass::BadLeverage: return "#c0392b";
  }
  return "#7f8c9b";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Rounds a positive span to a 1/2/5 x 10^m tick step.
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step;
  if (norm <= 1.0)
    step = 1.0;
  else if (norm <= 2.0)
    step = 2.0;
  else if (norm <= 5.0)
    step = 5.0;
  else
    step = 10.0;
  return step * mag;
}

struct Canvas {
  std::string body;
  int width = 0;
  int height = 0;

  void line(double x1, double y1, double x2, double y2,
            const std::string& style) {
    body += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
            fmt(x2) + "\" y2=\"" + fmt(y2) + "\" " + style + "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "") {
    body += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
            fmt(w) + "\" height=\"" + fmt(h) + "\" fill=\"" + fill + "\"" +
            (extra.empty() ? "" : " " + extra) + "/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill) {
    body += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" +
            fmt(r) + "\" fill=\"" + fill + "\"/>\n";
  }
  void text(double x, double y, const std::string& s,
            const std::string& extra = "") {
    body += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\"" +
            (extra.empty() ? "" : " " + extra) + ">" + xml_escape(s) +
            "</text>\n";
  }

  std::string finish() const {
    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
        std::to_string(width) + "\" height=\"" + std::to_string(height) +
        "\" viewBox=\"0 0 " + std::to_string(width) + " " +
        std::to_string(height) +
        "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += body;
    out += "</svg>\n";
    return out;
  }
};

}  // namespace

const char* cutoff_mode_name(CutoffMode mode) {
  switch (mode) {
    case CutoffMode::FMedian: return "f_median";
    case CutoffMode::Unity: return "unity";
    case CutoffMode::FourOverN: return "four_over_n";
  }
  return "f_median";
}

CutoffMode cutoff_mode_from_name(const std::string& name) {
  if (name == "f_median") return CutoffMode::FMedian;
  if (name == "unity") return CutoffMode::Unity;
  if (name == "four_over_n") return CutoffMode::FourOverN;
  throw ValidationError(kModule, "unknown cutoff mode '" + name +
                                     "', expected f_median, unity or "
                                     "four_over_n");
}

double cutoff_value(const Cutoffs& cutoffs, CutoffMode mode) {
  switch (mode) {
    case CutoffMode::FMedian: return cutoffs.f_median;
    case CutoffMode::Unity: return cutoffs.unity;
    case CutoffMode::FourOverN: return cutoffs.four_over_n;
  }
  return cutoffs.f_median;
}

PlotArtifact leverage_residual_plot(const InfluenceReport& report) {
  const int n = static_cast<int>(report.leverage.size());
  const double n_d = static_cast<double>(n);
  const double avg_o = 1.0 / n_d;
  const double avg_l = static_cast<double>(report.k) / n_d;
  const double cut_o = report.cutoffs.residual_cut;
  const double cut_l = report.cutoffs.leverage_cut;

  PlotArtifact art;
  art.kind = PlotKind::LeverageVsResidual;
  art.data_csv = "id,O,L,class\n";
  for (int i = 0; i < n; ++i) {
    art.data_csv += report.index->unit_ids[i];
    art.data_csv += ',';
    art.data_csv += format_double(report.outlyingness(i));
    art.data_csv += ',';
    art.data_csv += format_double(report.leverage(i));
    art.data_csv += ',';
    art.data_csv += unit_class_name(report.classification[i]);
    art.data_csv += '\n';
  }

  // Axis spans always include the cutoff lines, with headroom for labels.
  const double max_o =
      std::max(report.outlyingness.maxCoeff(), cut_o * 1.25) * 1.08;
  const double max_l =
      std::max(report.leverage.maxCoeff(), cut_l * 1.25) * 1.08;

  Canvas canvas;
  canvas.width = 840;
  canvas.height = 600;
  const double left = 80, right = 810, top = 48, bottom = 540;
  auto sx = [&](double o) { return left + (right - left) * (o / max_o); };
  auto sy = [&](double l) { return bottom - (bottom - top) * (l / max_l); };

  canvas.rect(0, 0, canvas.width, canvas.height, "#ffffff");
  canvas.text(left, 24, "Unit leverage vs normalised residual squared",
              "font-size=\"15\" font-weight=\"bold\"");

  // Axes and ticks.
  const std::string axis_style = "stroke=\"#444444\" stroke-width=\"1\"";
  canvas.line(left, bottom, right, bottom, axis_style);
  canvas.line(left, bottom, left, top, axis_style);
  const double step_o = nice_step(max_o, 5);
  for (double v = 0.0; v <= max_o * (1.0 + 1e-12); v += step_o) {
    canvas.line(sx(v), bottom, sx(v), bottom + 5, axis_style);
    canvas.text(sx(v), bottom + 20, fmt(v, 3), "text-anchor=\"middle\"");
  }
  const double step_l = nice_step(max_l, 5);
  for (double v = 0.0; v <= max_l * (1.0 + 1e-12); v += step_l) {
    canvas.line(left - 5, sy(v), left, sy(v), axis_style);
    canvas.text(left - 9, sy(v) + 4, fmt(v, 3), "text-anchor=\"end\"");
  }
  canvas.text((left + right) / 2, 578, "normalised residual squared O_i",
              "text-anchor=\"middle\"");
  canvas.text(22, (top + bottom) / 2, "leverage L_i",
              "text-anchor=\"middle\" transform=\"rotate(-90 22 " +
                  fmt((top + bottom) / 2) + ")\"");

  // Reference lines: solid at the sample averages, dashed at the cutoffs.
  const std::string avg_style =
      "class=\"refline\" stroke=\"#d03030\" stroke-width=\"1\"";
  const std::string cut_style =
      "class=\"refline\" stroke=\"#d03030\" stroke-width=\"1\" "
      "stroke-dasharray=\"6 4\"";
  canvas.line(sx(avg_o), bottom, sx(avg_o), top, avg_style);
  canvas.line(left, sy(avg_l), right, sy(avg_l), avg_style);
  canvas.line(sx(cut_o), bottom, sx(cut_o), top, cut_style);
  canvas.line(left, sy(cut_l), right, sy(cut_l), cut_style);
  canvas.text(sx(cut_o) + 4, top + 12, "2/N", "fill=\"#d03030\"");
  canvas.text(right - 34, sy(cut_l) - 5, "2k/N", "fill=\"#d03030\"");

  // Points, anomalous units labeled by id.
  for (int i = 0; i < n; ++i) {
    const UnitClass c = report.classification[i];
    canvas.circle(sx(report.outlyingness(i)), sy(report.leverage(i)), 4.0,
                  class_color(c));
    if (c != UnitClass::Normal)
      canvas.text(sx(report.outlyingness(i)) + 6, sy(report.leverage(i)) - 6,
                  report.index->unit_ids[i], "font-size=\"11\"");
  }

  // Legend.
  const UnitClass kinds[] = {UnitClass::Normal, UnitClass::VerticalOutlier,
                             UnitClass::GoodLeverage, UnitClass::BadLeverage};
  double ly = top + 14;
  for (UnitClass c : kinds) {
    canvas.circle(right - 120, ly - 4, 4.0, class_color(c));
    canvas.text(right - 110, ly, unit_class_name(c), "font-size=\"11\"");
    ly += 16;
  }

  art.svg = canvas.finish();
  return art;
}

namespace {

PlotArtifact heat_plot(const Eigen::MatrixXd& m,
                       const std::vector<std::string>& ids, PlotKind kind,
                       const std::string& title, const Cutoffs& cutoffs,
                       CutoffMode mode) {
  const int n = static_cast<int>(m.rows());

  PlotArtifact art;
  art.kind = kind;
  art.data_csv = "row,col,value\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      art.data_csv += ids[i];
      art.data_csv += ',';
      art.data_csv += ids[j];
      art.data_csv += ',';
      art.data_csv += is_na(m(i, j)) ? "NA" : format_double(m(i, j));
      art.data_csv += '\n';
    }

  // Scale: linear from the finite minimum, clipped at the 99th percentile
  // (nearest rank) so one extreme pair cannot flatten everything else.
  std::vector<double> finite;
  finite.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!is_na(m(i, j))) finite.push_back(m(i, j));
  double vmin = 0.0, vcap = 1.0;
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    vmin = finite.front();
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(finite.size())));
    vcap = finite[std::max<std::size_t>(rank, 1) - 1];
  }
  const double span = vcap - vmin;
  auto scale = [&](double v) {
    if (span <= 0.0) return 0.0;
    return (v - vmin) / span;
  };

  const double cell = n > 0 ? std::max(3.0, std::min(16.0, 680.0 / n)) : 16.0;
  const double grid = cell * n;
  const double left = 96, top = 96;
  Canvas canvas;
  canvas.width = static_cast<int>(left + grid + 180);
  canvas.height = static_cast<int>(top + grid + 40);

  canvas.rect(0, 0, canvas.width, canvas.height, "#ffffff");
  canvas.body +=
      "<defs><pattern id=\"na\" width=\"6\" height=\"6\" "
      "patternUnits=\"userSpaceOnUse\"><rect width=\"6\" height=\"6\" "
      "fill=\"#f2f2f2\"/><path d=\"M0,6 L6,0\" stroke=\"#b0b0b0\" "
      "stroke-width=\"1\"/></pattern></defs>\n";
  canvas.text(left, 24, title, "font-size=\"15\" font-weight=\"bold\"");
  canvas.text(left, 44,
              "active cutoff (" + std::string(cutoff_mode_name(mode)) +
                  ") = " + fmt(cutoff_value(cutoffs, mode), 5),
              "font-size=\"12\" fill=\"#444444\"");

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = m(i, j);
      const std::string fill =
          is_na(v) ? "url(#na)" : heat_color(scale(std::min(v, vcap)));
      canvas.rect(left + j * cell, top + i * cell, cell, cell, fill);
    }

  // Id labels, thinned for large panels: rows on the left, columns on top.
  const int label_step = std::max(1, (n + 24) / 25);
  for (int i = 0; i < n; i += label_step) {
    canvas.text(left - 6, top + i * cell + cell * 0.5 + 4, ids[i],
                "text-anchor=\"end\" font-size=\"10\"");
    const double cx = left + i * cell + cell * 0.5;
    canvas.text(cx, top - 8, ids[i],
                "text-anchor=\"start\" font-size=\"10\" "
                "transform=\"rotate(-60 " +
                    fmt(cx) + " " + fmt(top - 8) + ")\"");
  }

  // Legend: discrete gradient bar with endpoint labels.
  const double lx = left + grid + 36, ly0 = top, lh = std::min(220.0, grid);
  const int segments = 10;
  for (int s = 0; s < segments; ++s) {
    const double t = 1.0 - (s + 0.5) / segments;  // top = hottest
    canvas.rect(lx, ly0 + s * lh / segments, 18, lh / segments + 0.5,
                heat_color(t));
  }
  canvas.text(lx + 24, ly0 + 10, fmt(vcap, 5), "font-size=\"11\"");
  canvas.text(lx + 24, ly0 + lh, fmt(vmin, 5), "font-size=\"11\"");
  canvas.rect(lx, ly0 + lh + 14, 18, 12, "url(#na)",
              "stroke=\"#b0b0b0\" stroke-width=\"0.5\"");
  canvas.text(lx + 24, ly0 + lh + 24, "not available", "font-size=\"11\"");

  art.svg = canvas.finish();
  return art;
}

}  // namespace

std::array<PlotArtifact, 4> influence_heat_plots(const InfluenceReport& report,
                                                 CutoffMode mode) {
  const std::vector<std::string>& ids = report.index->unit_ids;
  return {
      heat_plot(report.joint, ids, PlotKind::JointInfluenceHeat,
                "Joint influence", report.cutoffs, mode),
      heat_plot(report.joint_effect, ids, PlotKind::JointEffectHeat,
                "Joint effects", report.cutoffs, mode),
      heat_plot(report.conditional, ids, PlotKind::ConditionalInfluenceHeat,
                "Conditional influence", report.cutoffs, mode),
      heat_plot(report.conditional_effect, ids,
                PlotKind::ConditionalEffectHeat, "Conditional effects",
                report.cutoffs, mode),
  };
}

}  // namespace paneldiag
