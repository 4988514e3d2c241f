#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "stbc/design_io.hpp"

using namespace stbc;

namespace {

void expect_same(const STBCDesign& a, const STBCDesign& b) {
  ASSERT_EQ(a.n_t, b.n_t);
  ASSERT_EQ(a.T, b.T);
  ASSERT_EQ(a.weights.size(), b.weights.size());
  EXPECT_EQ(a.layers, b.layers);
  EXPECT_EQ(a.groups_per_layer, b.groups_per_layer);
  EXPECT_EQ(a.layout.groups, b.layout.groups);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.layer_multipliers, b.layer_multipliers);
  EXPECT_EQ(a.layer_scalar, b.layer_scalar);
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    EXPECT_EQ(max_abs_diff(a.weights[i], b.weights[i]), 0.0) << "weight " << i + 1;
  }
}

}  // namespace

TEST(DesignIo, RoundTripsBuiltDesigns) {
  for (int a : {1, 2, 3})
    for (std::size_t layers : {1u, 2u}) {
      const auto d = build_design(a, layers, std::polar(1.0, 0.3));
      const auto text = design_to_string(d);
      const auto back = parse_design(text);
      expect_same(d, back);
      EXPECT_EQ(design_to_string(back), text);
    }
}

TEST(DesignIo, RoundTripsThroughAFile) {
  const auto d = build_design(2, 2);
  const auto path = (std::filesystem::temp_directory_path() / "stbc_io_test.txt").string();
  save_design(path, d);
  expect_same(d, load_design(path));
  std::remove(path.c_str());
  EXPECT_THROW(load_design(path), Error);
}

TEST(DesignIo, MinimalHandWrittenFile) {
  const std::string text =
      "# two weights\n"
      "n_t 1\nT 1\n"
      "group 0\ngroup 1\n"
      "weight 1\n1\n"
      "weight 2\n0+1i\n";
  const auto d = parse_design(text);
  EXPECT_EQ(d.weights.size(), 2u);
  EXPECT_EQ(d.layers, 1u);
  EXPECT_EQ(d.groups_per_layer, 2u);
  EXPECT_EQ(d.weights[1](0, 0), kJ);
  EXPECT_TRUE(d.labels.empty());
}

TEST(DesignIo, CorruptedFilesReportTheLine) {
  const std::string good = design_to_string(build_design(1, 1));
  auto expect_parse_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_design(text);
      ADD_FAILURE() << "no error for: " << needle;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ParseError) << e.what();
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  std::string bad = good;
  bad.replace(bad.find("n_t 2"), 5, "n_t x");
  expect_parse_error(bad, "line 2");
  expect_parse_error(good + "bogus 1\n", "unknown key");
  std::string renum = good;
  renum.replace(renum.find("weight 2"), 8, "weight 5");
  expect_parse_error(renum, "numbered");
  std::string truncated = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
  EXPECT_THROW(parse_design(truncated), Error);
}

TEST(DesignIo, StructuralProblemsAreCaughtAfterParsing) {
  std::string text = design_to_string(build_design(1, 1));
  text.replace(text.find("group 0"), 7, "group 1");
  EXPECT_THROW(parse_design(text), Error);
}
