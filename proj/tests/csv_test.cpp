#include <doctest.h>

#include <charconv>
#include <string>

#include "paneldiag/csv.hpp"
#include "paneldiag/errors.hpp"
#include "testutil.hpp"

using paneldiag::CsvSchema;
using paneldiag::parse_csv;
using paneldiag::PanelDataset;
using paneldiag::ValidationError;

TEST_CASE("rows are sorted into the canonical unit/period layout") {
  const std::string text =
      "unit,time,y,x\n"
      "10,2,4.0,0.4\n"
      "2,1,1.0,0.1\n"
      "10,1,3.0,0.3\n"
      "2,2,2.0,0.2\n";
  const PanelDataset panel = parse_csv(text, CsvSchema{});
  CHECK(panel.index().unit_ids == std::vector<std::string>{"2", "10"});
  CHECK(panel.index().time_ids ==
        std::vector<std::string>{"1", "2", "1", "2"});
  CHECK(panel.y()(0) == 1.0);
  CHECK(panel.y()(3) == 4.0);
  CHECK(panel.x()(2, 0) == 0.3);
}

TEST_CASE("schema maps arbitrary column names and orders regressors") {
  const std::string text =
      "wage,country,year,gdp,pop\n"
      "1.5,DEU,1991,2.0,3.0\n"
      "1.6,DEU,1992,2.1,3.1\n"
      "0.9,FRA,1991,1.0,4.0\n"
      "1.0,FRA,1992,1.1,4.1\n";
  CsvSchema schema;
  schema.unit_col = "country";
  schema.time_col = "year";
  schema.y_col = "wage";
  schema.x_cols = {"pop", "gdp"};
  const PanelDataset panel = parse_csv(text, schema);
  CHECK(panel.index().unit_ids == std::vector<std::string>{"DEU", "FRA"});
  CHECK(panel.index().x_names == std::vector<std::string>{"pop", "gdp"});
  CHECK(panel.x()(0, 0) == 3.0);  // pop first per the schema
  CHECK(panel.x()(0, 1) == 2.0);
}

TEST_CASE("malformed input raises row-addressed validation errors") {
  SUBCASE("missing column") {
    try {
      parse_csv("unit,time,z\n1,1,1\n", CsvSchema{});
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("'y'") != std::string::npos);
    }
  }
  SUBCASE("non-numeric cell names the row") {
    const std::string text =
        "unit,time,y,x\n1,1,1.0,0.1\n1,2,oops,0.2\n2,1,1,1\n2,2,1,1\n";
    try {
      parse_csv(text, CsvSchema{});
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
      CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }
  }
  SUBCASE("duplicate observation names unit and period") {
    const std::string text =
        "unit,time,y,x\n1,1,1,1\n1,1,2,2\n2,1,1,1\n2,2,1,1\n";
    try {
      parse_csv(text, CsvSchema{});
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("duplicate") != std::string::npos);
      CHECK(what.find("unit 1") != std::string::npos);
    }
  }
  SUBCASE("ragged row rejected") {
    CHECK_THROWS_AS(parse_csv("unit,time,y,x\n1,1,1\n", CsvSchema{}),
                    ValidationError);
  }
  SUBCASE("empty cell rejected") {
    CHECK_THROWS_AS(
        parse_csv("unit,time,y,x\n1,1,,0.1\n1,2,1,1\n2,1,1,1\n2,2,1,1\n",
                  CsvSchema{}),
        ValidationError);
  }
  SUBCASE("single-period unit rejected via panel validation") {
    CHECK_THROWS_AS(
        parse_csv("unit,time,y,x\n1,1,1,1\n1,2,1,2\n2,1,1,1\n", CsvSchema{}),
        ValidationError);
  }
}

TEST_CASE("quoted cells and CRLF line endings parse") {
  const std::string text =
      "unit,time,y,x\r\n\"North, West\",1,1.0,0.1\r\n\"North, "
      "West\",2,2.0,0.2\r\nEast,1,3.0,0.3\r\nEast,2,4.0,0.4\r\n";
  const PanelDataset panel = parse_csv(text, CsvSchema{});
  CHECK(panel.n_units() == 2);
  CHECK(panel.index().unit_ids[1] == "North, West");
}

TEST_CASE("export and reload reproduce the panel exactly") {
  const PanelDataset panel = testutil::random_panel(77, 8, 3, 6, 2);
  CsvSchema schema;
  schema.x_cols = panel.index().x_names;
  const PanelDataset reloaded = parse_csv(paneldiag::to_csv_text(panel), schema);
  CHECK(reloaded.index().unit_ids == panel.index().unit_ids);
  CHECK(reloaded.index().time_ids == panel.index().time_ids);
  CHECK((reloaded.y() - panel.y()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((reloaded.x() - panel.x()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("format_double round-trips awkward values") {
  // std::stod rejects denormals on glibc, so parse with from_chars instead.
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -4.9e-324, 0.0, 123456789.123456}) {
    const std::string s = paneldiag::format_double(v);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(res.ec == std::errc{});
    CHECK(back == v);
  }
}
