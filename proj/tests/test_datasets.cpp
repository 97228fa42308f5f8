#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "bsod/datasets.hpp"

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("bsod_test_" + name); }

TEST(Generators, OutlierCounts) {
  EXPECT_EQ(bsod::outlier_count_for(10000, 0.10), 1111u);
  EXPECT_EQ(bsod::outlier_count_for(10000, 0.01), 101u);
  EXPECT_EQ(bsod::outlier_count_for(10000, 0.15), 1765u);
  const auto ds = bsod::gen_circle(10000, 0.10, 1);
  EXPECT_EQ(ds.points.size(), 11111u);
  EXPECT_EQ(ds.outlier_count(), 1111u);
  EXPECT_NEAR(ds.contamination, 0.1, 1.0 / 11111);
}

TEST(Generators, InvalidContamination) {
  for (double c : {0.0, 1.0, -0.1, 2.0}) {
    try {
      bsod::gen_moons(100, c, 0);
      FAIL() << c;
    } catch (const bsod::Error& e) {
      EXPECT_EQ(e.code(), bsod::Errc::InvalidContamination);
    }
  }
}

TEST(Generators, CircleGeometry) {
  const auto ds = bsod::gen_circle(5000, 0.05, 3);
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    const double x = ds.points(i, 0), y = ds.points(i, 1);
    if (ds.labels[i] == bsod::Label::Inlier) {
      const double r = std::hypot(x, y);
      EXPECT_GE(r, 0.75);
      EXPECT_LE(r, 1.25);
    } else {
      EXPECT_LE(std::abs(x), 1.4);
      EXPECT_LE(std::abs(y), 1.4);
    }
  }
}

TEST(Generators, MoonsSplitAndShape) {
  const auto odd = bsod::gen_moons(11, 0.1, 0, {0.0, 0.5});
  // noiseless: moon A has y = sin t >= 0, moon B has y = 0.5 - sin t <= 0.5
  for (std::size_t i = 0; i < 6; ++i) EXPECT_GE(odd.points(i, 1), 0.0);
  for (std::size_t i = 6; i < 11; ++i) EXPECT_LE(odd.points(i, 1), 0.5);
  EXPECT_EQ(bsod::outlier_count_for(10000, 0.15), 1765u);
}

TEST(Generators, DeterministicAndFinite) {
  const auto a = bsod::gen_moons(3000, 0.15, 42);
  const auto b = bsod::gen_moons(3000, 0.15, 42);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(a.points, bsod::gen_moons(3000, 0.15, 43).points);
  for (double x : a.points.data()) EXPECT_TRUE(std::isfinite(x));
}

TEST(Csv, RoundTripsExactly) {
  const auto ds = bsod::gen_circle(500, 0.1, 7);
  const auto path = temp_file("roundtrip.csv");
  bsod::save_csv(ds, path.string());
  const auto back = bsod::load_csv(path.string());
  EXPECT_EQ(back.points, ds.points);
  EXPECT_EQ(back.labels, ds.labels);
  fs::remove(path);
}

TEST(Csv, LabelColumnIsOptional) {
  const auto ds = bsod::from_csv("x0,x1\n1,2\n3,4\n");
  EXPECT_FALSE(ds.labeled());
  EXPECT_EQ(ds.points.size(), 2u);
}

TEST(Csv, HeaderOnly) {
  try {
    bsod::from_csv("x0,x1,label\n");
    FAIL();
  } catch (const bsod::Error& e) {
    EXPECT_EQ(e.code(), bsod::Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("no data rows"), std::string::npos);
  }
}

TEST(Csv, NonNumericCoordinateNamesItsLine) {
  try {
    bsod::from_csv("x0,x1,label\n1,2,0\n3,abc,1\n");
    FAIL();
  } catch (const bsod::Error& e) {
    EXPECT_EQ(e.code(), bsod::Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Csv, MissingCoordinateColumn) {
  try {
    bsod::from_csv("a,b\n1,2\n");
    FAIL();
  } catch (const bsod::Error& e) {
    EXPECT_EQ(e.code(), bsod::Errc::MissingColumn);
  }
}

TEST(Csv, MissingFileIsIoError) {
  try {
    bsod::load_csv("/nonexistent/dir/file.csv");
    FAIL();
  } catch (const bsod::Error& e) {
    EXPECT_EQ(e.code(), bsod::Errc::Io);
  }
}

}  // namespace
