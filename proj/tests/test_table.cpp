#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "uwimg/errors.hpp"
#include "uwimg/table.hpp"

using namespace uwimg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::path("uwimg_test_tmp") / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("csv writing round-trips exact doubles, holes and quoting") {
  TempDir tmp("table_csv");
  ComparisonTable t;
  t.corner = "method";
  t.columns = {"uiqm", "psnr", "weird,name"};
  t.add_row("he", {1.0 / 3.0, 20.123456789012345, 0.1});
  t.add_row("udcp", {std::nullopt, std::numeric_limits<double>::infinity(),
                     -0.25});
  t.add_row("says \"hi\"", {2.0, 3.0, 4.0});

  const fs::path file = tmp.path / "t.csv";
  write_table_csv(t, file);
  auto rows = parse_csv(file);
  REQUIRE(rows.size() == 5);  // header + 3 rows + mean
  CHECK(rows[0] == std::vector<std::string>{"method", "uiqm", "psnr",
                                            "weird,name"});
  CHECK(rows[1][0] == "he");
  CHECK(std::stod(rows[1][1]) == 1.0 / 3.0);  // exact round trip
  CHECK(std::stod(rows[1][2]) == 20.123456789012345);
  CHECK(rows[2][1].empty());  // absent cell
  CHECK(std::isinf(std::stod(rows[2][2])));
  CHECK(rows[3][0] == "says \"hi\"");

  // Mean row equals column means of populated cells.
  CHECK(rows[4][0] == "mean");
  CHECK(std::stod(rows[4][1]) == doctest::Approx((1.0 / 3.0 + 2.0) / 2.0));
  CHECK(std::stod(rows[4][3]) ==
        doctest::Approx((0.1 - 0.25 + 4.0) / 3.0).epsilon(1e-15));
}

TEST_CASE("column means skip holes and match cell averages to 1e-9") {
  ComparisonTable t;
  t.columns = {"a", "b"};
  t.add_row("r1", {1.0, std::nullopt});
  t.add_row("r2", {2.0, 10.0});
  t.add_row("r3", {std::nullopt, 20.0});
  auto means = t.column_means();
  REQUIRE(means[0].has_value());
  CHECK(std::abs(*means[0] - 1.5) < 1e-9);
  CHECK(std::abs(*means[1] - 15.0) < 1e-9);

  CHECK_THROWS_AS(t.add_row("bad", {1.0}), InvalidParameter);
}

TEST_CASE("markdown marks per-column extrema and caps rows") {
  ComparisonTable t;
  t.corner = "image";
  t.columns = {"uiqm"};
  t.add_row("a", {1.0});
  t.add_row("b", {3.0});
  t.add_row("c", {2.0});
  std::string md = table_to_markdown(t, true, true);
  CHECK(md.find("**3.0000**") != std::string::npos);  // column max bold
  CHECK(md.find("*1.0000*") != std::string::npos);    // column min italic
  CHECK(md.find("| mean") != std::string::npos);

  std::string capped = table_to_markdown(t, false, false, 2);
  CHECK(capped.find("| c") == std::string::npos);
  CHECK(capped.find("more rows") != std::string::npos);
}

TEST_CASE("csv parser handles RFC 4180 edge cases") {
  auto rows = parse_csv_text("a,\"b,c\",\"d\"\"e\"\r\n1,,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"1", "", "3"});

  auto multiline = parse_csv_text("\"line1\nline2\",x\n");
  REQUIRE(multiline.size() == 1);
  CHECK(multiline[0][0] == "line1\nline2");

  CHECK_THROWS_AS(parse_csv_text("\"unterminated"), FormatError);
}
