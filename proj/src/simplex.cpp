#include "choquet/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choquet/error.hpp"

namespace clab {

namespace {

constexpr double kPivotEpsilon = 1e-12;
constexpr std::size_t kDegenerateRunBeforeBland = 50;

class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0),
        allowed_(cols, true) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs holds the objective value.
  double& cost(std::size_t c) { return at(rows_, c); }
  double& value() { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<bool>& allowed() { return allowed_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = at(i, c);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= factor * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Sets the reduced-cost row for maximizing `c` (indexed by column).
  void load_objective(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) at(rows_, j) = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) at(rows_, j) = c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(rows_, j) -= cb * at(i, j);
    }
  }

  // Returns false when the problem is unbounded.
  bool optimize(double tol) {
    std::size_t degenerate_run = 0;
    const std::size_t max_iterations = 50 * (rows_ + cols_) + 1000;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      std::size_t enter = cols_;
      double best = tol;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allowed_[j]) continue;
        const double d = at(rows_, j);
        if (d > best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == cols_) return true;

      std::size_t leave = rows_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotEpsilon) continue;
        const double r = rhs(i) / a;
        if (r < ratio - 1e-15 || (std::abs(r - ratio) <= 1e-15 && leave < rows_ && basis_[i] < basis_[leave])) {
          ratio = r;
          leave = i;
        }
      }
      if (leave == rows_) return false;
      degenerate_run = ratio <= 1e-15 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }

private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

} // namespace

LpSolution solve_lp(const LinearProgram& lp, double tolerance) {
  using Sense = LinearProgram::Sense;
  const std::size_t n = lp.variables();
  const std::size_t m = lp.rows.size();

  std::size_t slack_count = 0, artificial_count = 0;
  for (const auto& row : lp.rows) {
    if (row.coefficients.size() != n) throw StructuralError("LP row has wrong width");
    const bool flip = row.rhs < 0.0;
    Sense s = row.sense;
    if (flip && s == Sense::LessEqual) s = Sense::GreaterEqual;
    else if (flip && s == Sense::GreaterEqual) s = Sense::LessEqual;
    if (s != Sense::Equal) ++slack_count;
    if (s != Sense::LessEqual) ++artificial_count;
  }

  const std::size_t cols = n + slack_count + artificial_count;
  Tableau t(m, cols);
  std::size_t next_slack = n, next_artificial = n + slack_count;
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    Sense s = row.sense;
    if (sign < 0 && s == Sense::LessEqual) s = Sense::GreaterEqual;
    else if (sign < 0 && s == Sense::GreaterEqual) s = Sense::LessEqual;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * row.coefficients[j];
    t.rhs(i) = sign * row.rhs;
    rhs_scale = std::max(rhs_scale, std::abs(row.rhs));
    if (s == Sense::LessEqual) {
      t.at(i, next_slack) = 1.0;
      t.basis()[i] = next_slack++;
    } else {
      if (s == Sense::GreaterEqual) t.at(i, next_slack++) = -1.0;
      t.at(i, next_artificial) = 1.0;
      t.basis()[i] = next_artificial++;
    }
  }

  LpSolution out;
  // Phase one: maximize -(sum of artificials).
  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = n + slack_count; j < cols; ++j) phase1[j] = -1.0;
    t.load_objective(phase1);
    t.optimize(tolerance * 1e-3);
    out.infeasibility = t.value();
    if (out.infeasibility > tolerance * rhs_scale) {
      out.status = LpSolution::Status::Infeasible;
      return out;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < n + slack_count) continue;
      for (std::size_t j = 0; j < n + slack_count; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = n + slack_count; j < cols; ++j) t.allowed()[j] = false;
  }

  std::vector<double> phase2(cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), phase2.begin());
  t.load_objective(phase2);
  if (!t.optimize(tolerance * 1e-3)) {
    out.status = LpSolution::Status::Unbounded;
    return out;
  }

  out.status = LpSolution::Status::Optimal;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis()[i] < n) out.x[t.basis()[i]] = std::max(0.0, t.rhs(i));
  }
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += lp.objective[j] * out.x[j];
  return out;
}

} // namespace clab
