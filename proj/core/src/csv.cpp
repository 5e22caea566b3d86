#include "paneldiag/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "panel-core";

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

double parse_cell(const std::string& cell, const std::string& col, int row) {
  if (cell.empty())
    throw ValidationError(kModule, "row " + std::to_string(row) +
                                       ": missing value in column " + col);
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ValidationError(kModule, "row " + std::to_string(row) +
                                       ": value '" + cell + "' in column " +
                                       col + " is not a finite number");
  return v;
}

}  // namespace

PanelDataset parse_csv(const std::string& text, const CsvSchema& schema) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(kModule, "empty CSV input, header row required");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_row(line);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw ValidationError(kModule, "column '" + name + "' not found in header");
    return static_cast<int>(it - header.begin());
  };
  const int unit_c = column(schema.unit_col);
  const int time_c = column(schema.time_col);
  const int y_c = column(schema.y_col);
  if (schema.x_cols.empty())
    throw ValidationError(kModule, "schema names no regressor columns");
  std::vector<int> x_c;
  for (const auto& name : schema.x_cols) x_c.push_back(column(name));

  struct Row {
    std::string time;
    double y;
    std::vector<double> x;
    int source_row;
  };
  // id_less keys give the canonical unit and period order directly.
  std::map<std::string, std::map<std::string, Row, decltype(&id_less)>,
           decltype(&id_less)>
      units(&id_less);

  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size())
      throw ValidationError(kModule, "row " + std::to_string(row_no) + " has " +
                                         std::to_string(cells.size()) +
                                         " cells, header has " +
                                         std::to_string(header.size()));
    Row row;
    row.time = cells[time_c];
    row.y = parse_cell(cells[y_c], schema.y_col, row_no);
    for (int c : x_c) row.x.push_back(parse_cell(cells[c], header[c], row_no));
    row.source_row = row_no;

    const std::string& unit = cells[unit_c];
    if (unit.empty() || row.time.empty())
      throw ValidationError(kModule, "row " + std::to_string(row_no) +
                                         ": empty unit or period id");
    auto unit_it = units.try_emplace(unit, &id_less).first;
    auto [it, inserted] = unit_it->second.emplace(row.time, std::move(row));
    if (!inserted)
      throw ValidationError(kModule,
                            "row " + std::to_string(row_no) +
                                ": duplicate observation for unit " + unit +
                                ", period " + it->second.time + " (first at row " +
                                std::to_string(it->second.source_row) + ")");
    (void)it;
  }
  if (units.empty())
    throw ValidationError(kModule, "CSV contains no data rows");

  PanelIndex index;
  index.x_names = schema.x_cols;
  index.offsets.push_back(0);
  int rows = 0;
  for (const auto& [unit, obs] : units) {
    index.unit_ids.push_back(unit);
    for (const auto& [time, row] : obs) index.time_ids.push_back(time);
    rows += static_cast<int>(obs.size());
    index.offsets.push_back(rows);
  }

  Eigen::VectorXd y(rows);
  Eigen::MatrixXd x(rows, static_cast<int>(schema.x_cols.size()));
  int at = 0;
  for (const auto& [unit, obs] : units) {
    for (const auto& [time, row] : obs) {
      y(at) = row.y;
      for (int c = 0; c < x.cols(); ++c) x(at, c) = row.x[c];
      ++at;
    }
  }
  return PanelDataset(std::move(index), std::move(y), std::move(x));
}

PanelDataset load_csv(const std::string& path, const CsvSchema& schema) {
  return parse_csv(read_text_file(path), schema);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string to_csv_text(const PanelDataset& data) {
  const PanelIndex& index = data.index();
  std::string out = "unit,time,y";
  for (const auto& name : index.x_names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (int i = 0; i < index.n_units(); ++i) {
    for (int r = index.offsets[i]; r < index.offsets[i + 1]; ++r) {
      out += index.unit_ids[i];
      out += ',';
      out += index.time_ids[r];
      out += ',';
      out += format_double(data.y()(r));
      for (int c = 0; c < data.x().cols(); ++c) {
        out += ',';
        out += format_double(data.x()(r, c));
      }
      out += '\n';
    }
  }
  return out;
}

void write_csv(const PanelDataset& data, const std::string& path) {
  write_text_file(path, to_csv_text(data));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("report-cli", "cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("report-cli", "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("report-cli", "cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("report-cli", "read failed for " + path);
  return buf.str();
}

}  // namespace paneldiag
