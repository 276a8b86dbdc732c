#pragma once

#include <vector>

namespace clab {

/// Dense linear program: maximize c.x subject to row constraints and x >= 0.
struct LinearProgram {
  enum class Sense { LessEqual, GreaterEqual, Equal };

  struct Row {
    std::vector<double> coefficients;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<Row> rows;

  std::size_t variables() const { return objective.size(); }
  void add_row(std::vector<double> coefficients, Sense sense, double rhs) {
    rows.push_back(Row{std::move(coefficients), sense, rhs});
  }
};

struct LpSolution {
  enum class Status { Optimal, Infeasible, Unbounded };

  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Phase-one residual: sum of artificial variables at the end of phase one.
  double infeasibility = 0.0;
};

/// Two-phase tableau simplex. Dantzig pricing with a switch to Bland's rule
/// after a run of degenerate pivots, so it always terminates. Intended for the
/// small dense problems of this library (hundreds to a few thousand rows).
LpSolution solve_lp(const LinearProgram& lp, double tolerance = 1e-9);

} // namespace clab
