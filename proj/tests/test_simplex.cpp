#include "doctest.h"

#include "choquet/simplex.hpp"

using namespace clab;
using Sense = LinearProgram::Sense;

TEST_CASE("textbook maximization") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  LinearProgram lp;
  lp.objective = {3, 5};
  lp.add_row({1, 0}, Sense::LessEqual, 4);
  lp.add_row({0, 2}, Sense::LessEqual, 12);
  lp.add_row({3, 2}, Sense::LessEqual, 18);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.objective == doctest::Approx(36));
  CHECK(sol.x[0] == doctest::Approx(2));
  CHECK(sol.x[1] == doctest::Approx(6));
}

TEST_CASE("equality and >= rows need phase one") {
  // min x + y  s.t. x + y >= 2, x - y = 1 -> x = 1.5, y = 0.5
  LinearProgram lp;
  lp.objective = {-1, -1};
  lp.add_row({1, 1}, Sense::GreaterEqual, 2);
  lp.add_row({1, -1}, Sense::Equal, 1);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.x[0] == doctest::Approx(1.5));
  CHECK(sol.x[1] == doctest::Approx(0.5));
}

TEST_CASE("negative right-hand sides are normalized") {
  LinearProgram lp;
  lp.objective = {1};
  lp.add_row({-1}, Sense::LessEqual, -0.5); // x >= 0.5
  lp.add_row({1}, Sense::LessEqual, 3);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.x[0] == doctest::Approx(3));
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram bad;
  bad.objective = {1, 1};
  bad.add_row({1, 1}, Sense::LessEqual, 1);
  bad.add_row({1, 1}, Sense::GreaterEqual, 2);
  auto sol = solve_lp(bad);
  CHECK(sol.status == LpSolution::Status::Infeasible);
  CHECK(sol.infeasibility > 0.5);

  LinearProgram open;
  open.objective = {1, 0};
  open.add_row({-1, 1}, Sense::LessEqual, 1);
  CHECK(solve_lp(open).status == LpSolution::Status::Unbounded);
}

TEST_CASE("degenerate vertex terminates") {
  // Klee-Minty style cube in 3 dimensions plus redundant degenerate rows.
  LinearProgram lp;
  lp.objective = {4, 2, 1};
  lp.add_row({1, 0, 0}, Sense::LessEqual, 5);
  lp.add_row({4, 1, 0}, Sense::LessEqual, 25);
  lp.add_row({8, 4, 1}, Sense::LessEqual, 125);
  lp.add_row({1, 1, 0}, Sense::LessEqual, 0);
  lp.add_row({0, 1, 1}, Sense::LessEqual, 0);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.objective == doctest::Approx(0));
}
