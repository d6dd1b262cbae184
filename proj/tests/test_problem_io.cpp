#include <gtest/gtest.h>

#include "qvi/cli/problem_io.hpp"

namespace qvi::cli {
namespace {

using nlohmann::json;

json example2_doc() {
  return json::parse(R"({
    "dim": 2,
    "operator": {"kind": "affine", "matrix": [[0.22, 0], [0, 0.25]], "L": 0.25, "mu": 0.22},
    "base_set": {"kind": "polytope", "bounds": {"lower": [0, 0], "upper": [1, 1]},
                 "halfspaces": [{"normal": [1, 1], "offset": 1}]},
    "moving_set": {"kind": "translated-base",
                   "base": {"kind": "box", "bounds": {"lower": [0, 0], "upper": [1, 1]}},
                   "shift_matrix": [["1/64", 0], [0, "1/64"]], "lipschitz_l": "1/64"},
    "params": {"xi": 4, "seed": 7, "max_iter": 500},
    "starts": [{"x0": [0, 1], "y0": [0, 1]}]
  })");
}

std::string field_of(const json& doc) {
  try {
    parse_problem(doc);
  } catch (const InputError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(ParseNumber, DecimalsAndFractions) {
  EXPECT_EQ(parse_number(json(0.5), "/x"), 0.5);
  EXPECT_EQ(parse_number(json("0.25"), "/x"), 0.25);
  EXPECT_EQ(parse_number(json("1/128"), "/x"), 1.0 / 128.0);
  EXPECT_EQ(parse_number(json("-3/4"), "/x"), -0.75);
  EXPECT_THROW(parse_number(json("1/0"), "/x"), InputError);
  EXPECT_THROW(parse_number(json("abc"), "/x"), InputError);
  EXPECT_THROW(parse_number(json(true), "/x"), InputError);
}

TEST(ParseProblem, ExampleTwo) {
  const ProblemFile f = parse_problem(example2_doc());
  EXPECT_EQ(f.problem.dim(), 2);
  EXPECT_DOUBLE_EQ(f.problem.constraint_map().lipschitz(), 1.0 / 64.0);
  EXPECT_EQ(f.problem.constraint_map().shift()(0, 0), 1.0 / 64.0);
  EXPECT_EQ(f.params.xi, 4.0);
  EXPECT_EQ(f.params.seed, 7u);
  EXPECT_EQ(f.params.max_iter, 500u);
  EXPECT_FALSE(f.params.alpha.has_value());
  ASSERT_EQ(f.starts.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<Polytope>(f.problem.domain()));
}

TEST(ParseProblem, ErrorsNameTheField) {
  json d = example2_doc();
  d.erase("operator");
  EXPECT_EQ(field_of(d), "/operator");

  d = example2_doc();
  d["operator"]["matrix"][1] = json::array({1, "x"});
  EXPECT_EQ(field_of(d), "/operator/matrix/1/1");

  d = example2_doc();
  d["moving_set"]["kind"] = "spiral";
  EXPECT_EQ(field_of(d), "/moving_set/kind");

  d = example2_doc();
  d["starts"] = json::array();
  EXPECT_EQ(field_of(d), "/starts");

  d = example2_doc();
  d["starts"][0]["y0"] = json::array({1, 2, 3});
  EXPECT_EQ(field_of(d), "/starts/0/y0");

  d = example2_doc();
  d["base_set"]["halfspaces"][0]["offset"] = 5;
  EXPECT_EQ(field_of(d), "/base_set");

  d = example2_doc();
  d["params"]["xi"] = -1;
  EXPECT_EQ(field_of(d), "/params/xi");

  d = example2_doc();
  d["moving_set"]["lipschitz_l"] = "1/128";
  EXPECT_EQ(field_of(d), "/moving_set");
}

TEST(ParseProblem, SegmentFamily) {
  const json d = json::parse(R"({
    "dim": 2,
    "operator": {"kind": "affine", "matrix": [[1, 0], [0, 1]]},
    "base_set": {"kind": "box", "bounds": {"lower": [0, 0], "upper": [1, 0]}},
    "moving_set": {"kind": "segment-family", "a0": [0, 0], "a_matrix": [[0, 0], [1, 0]],
                   "b0": [1, 0], "lipschitz_l": 1},
    "starts": [{"x0": [0, 0], "y0": [1, 2]}]
  })");
  const ProblemFile f = parse_problem(d);
  const Point z{{1.0, 2.0}};
  EXPECT_EQ(f.problem.constraint_map().project(Point{{1.0, 0.0}}, z), (Point{{0.0, 1.0}}));
}

TEST(RoundTrip, CanonicalFormIsStable) {
  const ProblemFile f = parse_problem(example2_doc());
  const json once = to_json(f);
  const ProblemFile g = parse_problem(once);
  EXPECT_EQ(to_json(g), once);
  EXPECT_EQ(problem_hash(f), problem_hash(g));
  EXPECT_EQ(problem_hash(f).size(), 16u);
  EXPECT_EQ(g.problem.op().lipschitz(), f.problem.op().lipschitz());
  EXPECT_EQ(g.problem.constraint_map().shift(), f.problem.constraint_map().shift());
  EXPECT_EQ(g.starts[0].x0, f.starts[0].x0);
}

TEST(RoundTrip, HashChangesWithContent) {
  json d = example2_doc();
  const std::string h = problem_hash(parse_problem(d));
  d["starts"][0]["x0"] = json::array({0.5, 0.5});
  EXPECT_NE(problem_hash(parse_problem(d)), h);
}

TEST(LoadProblemFile, MissingFile) {
  try {
    load_problem_file("/nonexistent/problem.json");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_EQ(e.field(), "/");
  }
}

}  // namespace
}  // namespace qvi::cli
