#pragma once

#include <string>
#include <vector>

#include "paneldiag/panel.hpp"

namespace paneldiag {

// Column bindings for a long-format CSV: one row per (unit, period)
// observation, header row required.
struct CsvSchema {
  std::string unit_col = "unit";
  std::string time_col = "time";
  std::string y_col = "y";
  std::vector<std::string> x_cols = {"x"};
};

// Parses long-format CSV text into a validated panel. Rows may appear in any
// order; they are sorted into the canonical unit/period layout. Malformed
// cells, missing columns and duplicate (unit, period) pairs raise validation
// errors naming the 1-based row.
PanelDataset parse_csv(const std::string& text, const CsvSchema& schema);

// parse_csv over the contents of a file; unreadable paths raise io errors.
PanelDataset load_csv(const std::string& path, const CsvSchema& schema);

// Long-format export with columns unit, time, y, then the regressors. Values
// are rendered shortest-round-trip, so reloading reproduces the panel exactly.
std::string to_csv_text(const PanelDataset& data);
void write_csv(const PanelDataset& data, const std::string& path);

// Shortest decimal rendering that parses back to the same double. Shared by
// every text emitter so reruns are byte-identical.
std::string format_double(double v);

// Writes text to path, raising io errors on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace paneldiag
