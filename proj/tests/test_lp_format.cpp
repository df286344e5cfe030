#include <gtest/gtest.h>

#include <limits>

#include "rbb/lp_format.hpp"

using namespace rbb;
using lp::Sense;

namespace {

lp::Model sample() {
  lp::Model m;
  m.comments = {"sample model"};
  m.objective_name = "cost";
  m.objective = {{1, "x"}, {2.5, "y"}, {-1, "z"}};
  m.rows = {{"r1", {{1, "x"}, {1, "y"}}, Sense::GreaterEqual, 1},
            {"r2", {{-3, "x"}, {0.125, "z"}}, Sense::LessEqual, -2},
            {"r3", {{1, "y"}}, Sense::Equal, 0}};
  m.bounds = {{"z", 0, 10}, {"y", 1, 1}};
  m.binaries = {"x"};
  m.generals = {"z"};
  return m;
}

void expect_error(const std::string& text, std::size_t line) {
  try {
    lp::parse(text);
    FAIL() << "expected ParseError for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

}  // namespace

TEST(LpWrite, Layout) {
  EXPECT_EQ(lp::write(sample()),
            "\\ sample model\n"
            "Minimize\n"
            " cost: 1 x + 2.5 y - 1 z\n"
            "Subject To\n"
            " r1: 1 x + 1 y >= 1\n"
            " r2: - 3 x + 0.125 z <= -2\n"
            " r3: 1 y = 0\n"
            "Bounds\n"
            " 0 <= z <= 10\n"
            " y = 1\n"
            "Binary\n"
            " x\n"
            "General\n"
            " z\n"
            "End\n");
}

TEST(LpParse, RoundTrip) {
  const auto m = sample();
  const auto back = lp::parse(lp::write(m));
  EXPECT_EQ(back.comments, m.comments);
  EXPECT_EQ(back.objective_name, m.objective_name);
  EXPECT_EQ(back.objective, m.objective);
  EXPECT_EQ(back.rows, m.rows);
  EXPECT_EQ(back.bounds, m.bounds);
  EXPECT_EQ(back.binaries, m.binaries);
  EXPECT_EQ(back.generals, m.generals);
  EXPECT_EQ(back.variables(), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(LpParse, KeywordsContinuationAndDefaults) {
  const auto m = lp::parse(
      "MAXIMIZE\n"
      " obj: x + y\n"
      "   - 2 w\n"
      "st\n"
      " c1: x + y\n"
      "     <= 4\n"
      " c2 : 2 x - y >= -1 \\ trailing comment\n"
      "bounds\n"
      " w >= 1\n"
      " x <= 3\n"
      " y free\n"
      "binaries\n"
      " w\n"
      "end\n");
  EXPECT_FALSE(m.minimize);
  EXPECT_EQ(m.objective, (std::vector<lp::Term>{{1, "x"}, {1, "y"}, {-2, "w"}}));
  ASSERT_EQ(m.rows.size(), 2u);
  EXPECT_EQ(m.rows[0].rhs, 4);
  EXPECT_EQ(m.rows[1].name, "c2");
  EXPECT_EQ(m.rows[1].terms, (std::vector<lp::Term>{{2, "x"}, {-1, "y"}}));
  EXPECT_EQ(m.rows[1].rhs, -1);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(m.bounds[0], (lp::Bound{"w", 1, inf}));
  EXPECT_EQ(m.bounds[1], (lp::Bound{"x", 0, 3}));
  EXPECT_EQ(m.bounds[2], (lp::Bound{"y", -inf, inf}));
  EXPECT_EQ(m.binaries, (std::vector<std::string>{"w"}));
}

TEST(LpParse, RowFamilies) {
  const auto m = lp::parse("Minimize\n c: x\nSubject To\n e1: x >= 0\n e1_2: x >= 0\n e10_1: x >= 0\nEnd\n");
  EXPECT_EQ(m.rows_in_family("e1"), 2u);
  EXPECT_EQ(m.rows_in_family("e10"), 1u);
}

TEST(LpParse, ErrorsCarryLineNumbers) {
  expect_error("Subject To\n c: x >= 1\nEnd\n", 1);
  expect_error("Minimize\n c: x\nSubject To\n r: x + >= 1\nEnd\n", 4);
  expect_error("Minimize\n c: x\nSubject To\n r: x y >= 1\nEnd\n", 4);
  expect_error("Minimize\n c: x\nSubject To\n r: x + y\nEnd\n", 4);
  expect_error("Minimize\n c: x\nSubject To\n r: x >= one\nEnd\n", 4);
  expect_error("Minimize\n c: x\nBounds\n 0 <= x <\nEnd\n", 4);
  expect_error("Minimize\n c: x\nBinary\n 1x\nEnd\n", 4);
  expect_error("Minimize\n c: x\nSubject To\n r: x >= 1\n", 4);
  expect_error("x + y\n", 1);
}
