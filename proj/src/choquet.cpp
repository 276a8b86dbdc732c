#include "choquet/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "choquet/error.hpp"

namespace clab {

double choquet(const StepFunction& f, const FuzzyMeasure& mu) {
  const auto& pieces = f.pieces();
  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pieces[a].value > pieces[b].value; });

  auto acc = mu.accumulator();
  double total = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double level = pieces[order[k]].value;
    if (level < 0.0) throw DomainError("Choquet integrand has a negative value");
    if (level == 0.0) break;
    while (k < order.size() && pieces[order[k]].value == level) {
      acc.add(pieces[order[k]].cell);
      ++k;
    }
    const double next = k < order.size() ? std::max(pieces[order[k]].value, 0.0) : 0.0;
    total += (level - next) * acc.value();
  }
  return total;
}

std::vector<double> choquet(const VectorStepFunction& f, const FuzzyMeasure& mu) {
  std::vector<double> out(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i) out[i] = choquet(f.component(i), mu);
  return out;
}

double choquet_restricted(const StepFunction& f, const FuzzyMeasure& mu, const IntervalSet& a) {
  return choquet(f.restricted(a), mu);
}

bool ChoquetPropertyReport::all_passed() const {
  for (const auto* r : all()) {
    if (r->checked && !r->passed) return false;
  }
  return true;
}

namespace {

// Records |deviation| (or a signed excess for inequalities) and keeps the first
// counterexample beyond tolerance.
void note(IntegralPropertyResult& r, double deviation, double tolerance, const std::string& what) {
  ++r.trials;
  r.worst_deviation = std::max(r.worst_deviation, deviation);
  if (deviation > tolerance && r.passed) {
    r.passed = false;
    r.counterexample = what;
  }
}

std::string describe(const char* label, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(12);
  os << label << ": lhs=" << lhs << " rhs=" << rhs;
  return os.str();
}

} // namespace

ChoquetPropertyReport check_choquet_properties(const FuzzyMeasure& mu, std::size_t trials,
                                               std::uint64_t seed,
                                               const ChoquetCheckOptions& options) {
  if (trials == 0) throw DomainError("check_choquet_properties needs at least one trial");
  Rng rng(seed);
  ChoquetPropertyReport report;
  const double tol = options.tolerance;
  const bool check_sub = options.force_subadditivity || mu.submodular_by_construction();
  report.subadditivity.checked = check_sub;

  for (std::size_t i = 0; i < trials; ++i) {
    const StepFunction f = random_step_function(rng, options.max_cells, options.max_value);
    const double If = choquet(f, mu);

    const double c = uniform(rng, 0.0, 3.0);
    {
      const double lhs = choquet(f.scaled(c), mu);
      note(report.homogeneity, std::abs(lhs - c * If), tol, describe("int(c f) vs c int(f)", lhs, c * If));
    }
    {
      const StepFunction bump = random_step_function(rng, options.max_cells, options.max_value);
      const StepFunction h = f + bump;
      const double Ih = choquet(h, mu);
      note(report.monotonicity, If - Ih, tol, describe("f <= h but int(f) > int(h)", If, Ih));
    }
    {
      const double lhs = choquet(f.plus(c), mu);
      const double rhs = If + c * mu.total();
      note(report.translation, std::abs(lhs - rhs), tol, describe("int(f + c)", lhs, rhs));
    }
    if (check_sub) {
      const StepFunction g = random_step_function(rng, options.max_cells, options.max_value);
      const double lhs = choquet(f + g, mu);
      const double rhs = If + choquet(g, mu);
      note(report.subadditivity, lhs - rhs, tol, describe("int(f + g) > int(f) + int(g)", lhs, rhs));
    }
    {
      const auto [a, b] = random_comonotone_pair(rng, options.max_cells, options.max_value);
      const double lhs = choquet(a + b, mu);
      const double rhs = choquet(a, mu) + choquet(b, mu);
      note(report.comonotonic_additivity, std::abs(lhs - rhs), tol,
           describe("comonotone int(f + h)", lhs, rhs));
    }
    {
      const double cut = uniform(rng, 0.0, options.max_value);
      const StepFunction low = f.min_with(cut);
      const StepFunction high =
          StepFunction::combine(f, low, [](double x, double y) { return x - y; });
      const double rhs = choquet(low, mu) + choquet(high, mu);
      note(report.horizontal_additivity, std::abs(If - rhs), tol,
           describe("int(f) vs int(f ^ c) + int(f - f ^ c)", If, rhs));
    }
  }
  return report;
}

} // namespace clab
