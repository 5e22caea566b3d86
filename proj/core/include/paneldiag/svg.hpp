#pragma once

#include <array>
#include <string>

#include "paneldiag/influence.hpp"

namespace paneldiag {

enum class PlotKind {
  LeverageVsResidual,
  JointInfluenceHeat,
  JointEffectHeat,
  ConditionalInfluenceHeat,
  ConditionalEffectHeat,
};

// Which cutoff the heat plots annotate as the active influence threshold.
enum class CutoffMode { FMedian, Unity, FourOverN };

const char* cutoff_mode_name(CutoffMode mode);
CutoffMode cutoff_mode_from_name(const std::string& name);
double cutoff_value(const Cutoffs& cutoffs, CutoffMode mode);

struct PlotArtifact {
  PlotKind kind = PlotKind::LeverageVsResidual;
  std::string data_csv;  // table backing the plot: N rows (scatter), N*N (heat)
  std::string svg;       // rendered document, deterministic for fixed input
};

// Scatter of outlyingness (x) against leverage (y), one point per unit,
// solid reference lines at the averages 1/N and k/N, dashed cutoff lines at
// 2/N and 2k/N, anomalous units labeled with their ids.
PlotArtifact leverage_residual_plot(const InfluenceReport& report);

// Heat maps of the four pair matrices in report order: joint influence (own
// influence on the diagonal), joint effect, conditional influence,
// conditional effect. Color is linear from dark blue to red, clipped at the
// 99th percentile of finite cells; not-available cells render as a hatch.
std::array<PlotArtifact, 4> influence_heat_plots(const InfluenceReport& report,
                                                 CutoffMode mode);

}  // namespace paneldiag
