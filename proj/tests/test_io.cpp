#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "qvlab/constructions.hpp"
#include "qvlab/io.hpp"

using namespace qvlab;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(io::format_double(INFINITY), "inf");
  EXPECT_EQ(io::format_double(-INFINITY), "-inf");
  EXPECT_EQ(io::format_double(NAN), "nan");
  for (double v : {1e-300, 123456.789, -2.5e17, 5e-324}) EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  EXPECT_TRUE(std::isinf(io::parse_double("inf")));
  EXPECT_THROW(io::parse_double("1.0x"), DomainError);
}

TEST(ReportCsv, HeaderAndRows) {
  const auto u = construct::make_losange(0.0, 1.0);
  const auto rep = almost_deficiency(u, 0.5, {ball(0.5, 0.5)});
  std::ostringstream os;
  io::write_report_csv(os, rep);
  EXPECT_EQ(os.str(), "center,radius,dir_u,dir_min,figure_of_merit\n0.5,0.5,2,0," + io::format_double(rep.supremum) + "\n");
}

TEST(ReportJson, FieldsAndInfinity) {
  const auto u = construct::make_losange(0.0, 1.0);
  const auto j = io::report_json(quasi_k_ratio(u, {{0.0, 1.0}}));
  EXPECT_EQ(j["mode"], "quasi_K");
  EXPECT_TRUE(j["alpha"].is_null());
  EXPECT_EQ(j["supremum"], "inf");
  EXPECT_EQ(j["witness"]["figure_of_merit"], "inf");
  EXPECT_EQ(j["records"].size(), 1u);
  const auto almost = io::report_json(almost_deficiency(u, 0.5, {ball(0.5, 0.5)}), false);
  EXPECT_EQ(almost["alpha"], 0.5);
  EXPECT_FALSE(almost.contains("records"));
}

TEST(FunctionCsv, Columns) {
  std::ostringstream os;
  io::write_function_csv(os, construct::make_diamond(0.0, 1.0, 0.0));
  EXPECT_EQ(os.str(), "x,branch_1,branch_2\n0,0,0\n0.5,0,0.5\n1,0.5,0.5\n");
}

TEST(ScanCsv, Columns) {
  std::ostringstream os;
  io::write_scan_csv(os, scan(construct::make_losange(0.0, 1.0), 3));
  EXPECT_EQ(os.str(), "x,sigma,flagged\n0,1,1\n0.5,2,1\n1,1,1\n");
}

TEST(Json, DimensionDecayDisk) {
  const auto s = scan(construct::cantor_level({6, construct::Flavor::diamond, {}}), 730);
  const auto d = io::dimension_json(box_dimension(s, {1.0 / 3, 1.0 / 9, 1.0 / 27, 1.0 / 81, 1.0 / 243, 1.0 / 729}));
  EXPECT_EQ(d["scales"].size(), 6u);
  EXPECT_TRUE(d.contains("slope"));
  EXPECT_TRUE(d.contains("r2"));
  const auto line = construct::make_double_line(0.0, 1.0, 0.0);
  const auto dj = io::decay_json(energy_decay_exponent(line, 0.5, 0.25, geometric_scales(2.0, 4)));
  EXPECT_DOUBLE_EQ(dj["slope"].get<double>(), 1.0);
  const auto m = disk::minimize_disk(disk::sorted_trace(disk::cos_trace(), 16, 4));
  const auto k = io::disk_json(m, disk::check_squeeze_2d(m));
  EXPECT_EQ(k["angles"].size(), 16u);
  EXPECT_EQ(k["branches"][0]["a"].size(), 4u);
  EXPECT_TRUE(k["squeeze"]["holds"].get<bool>());
}
