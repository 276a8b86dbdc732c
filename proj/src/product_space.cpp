#include "choquet/product_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "choquet/error.hpp"
#include "choquet/simplex.hpp"

namespace clab {

namespace {

constexpr double kNormalizedTolerance = 1e-12;
constexpr double kRealizeTolerance = 1e-6;

void require_sections(const SectionFamily& fam, std::size_t count, const char* what) {
  if (count != fam.size()) {
    std::ostringstream os;
    os << what << " has " << count << " sections but the family has " << fam.size()
       << " nodes";
    throw StructuralError(os.str());
  }
}

std::vector<FuzzyMeasure> normalize_all(std::vector<FuzzyMeasure> measures) {
  for (auto& mu : measures) {
    if (!(mu.total() > 0.0)) throw DomainError("cannot normalize a section with zero total mass");
    mu = mu.scaled(1.0 / mu.total());
  }
  return measures;
}

} // namespace

SectionFamily SectionFamily::homothetic(std::size_t nodes, const FuzzyMeasure& base,
                                        bool normalize, std::vector<double> scales) {
  if (nodes == 0) throw StructuralError("a section family needs at least one node");
  if (!scales.empty() && scales.size() != nodes) {
    throw StructuralError("homothetic scales must have one entry per node");
  }
  std::vector<FuzzyMeasure> measures;
  measures.reserve(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    if (scales.empty()) {
      measures.push_back(base);
      continue;
    }
    if (!(scales[k] > 0.0) || !std::isfinite(scales[k])) {
      throw DomainError("homothetic scales must be positive and finite");
    }
    measures.push_back(base.scaled(scales[k]));
  }
  if (normalize) measures = normalize_all(std::move(measures));
  return SectionFamily(Mode::Homothetic, std::move(measures));
}

SectionFamily SectionFamily::sectioned(std::size_t nodes, std::vector<IntervalSet> blocks,
                                       std::vector<Interval> y_intervals) {
  if (nodes == 0) throw StructuralError("a section family needs at least one node");
  if (blocks.size() != y_intervals.size()) {
    throw StructuralError("sectioned family needs one y-interval per block");
  }
  std::vector<Interval> sorted = y_intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = 0.0;
  for (const auto& j : sorted) {
    if (!(j.hi > j.lo) || std::abs(j.lo - reach) > 1e-12) {
      throw StructuralError("y-intervals must tile [0, 1] without gaps or overlaps");
    }
    reach = j.hi;
  }
  if (std::abs(reach - 1.0) > 1e-12) {
    throw StructuralError("y-intervals must tile [0, 1] without gaps or overlaps");
  }
  std::vector<FuzzyMeasure> measures;
  measures.reserve(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double y = (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
    std::vector<double> weights(blocks.size(), 0.0);
    for (std::size_t i = 0; i < y_intervals.size(); ++i) {
      if (y >= y_intervals[i].lo && y < y_intervals[i].hi) weights[i] = 1.0;
    }
    measures.push_back(FuzzyMeasure::sectioned(blocks, std::move(weights)));
  }
  return SectionFamily(Mode::Sectioned, std::move(measures));
}

SectionFamily SectionFamily::heterogeneous(std::vector<FuzzyMeasure> measures, bool normalize) {
  if (measures.empty()) throw StructuralError("a section family needs at least one node");
  if (normalize) measures = normalize_all(std::move(measures));
  return SectionFamily(Mode::Heterogeneous, std::move(measures));
}

double SectionFamily::node(std::size_t k) const {
  if (k >= measures_.size()) throw StructuralError("y-node index out of range");
  return (static_cast<double>(k) + 0.5) / static_cast<double>(measures_.size());
}

bool SectionFamily::normalized() const {
  return std::all_of(measures_.begin(), measures_.end(), [](const FuzzyMeasure& mu) {
    return std::abs(mu.total() - 1.0) <= kNormalizedTolerance;
  });
}

bool SectionFamily::sections_submodular() const {
  return std::all_of(measures_.begin(), measures_.end(),
                     [](const FuzzyMeasure& mu) { return mu.submodular_by_construction(); });
}

double SectionFamily::max_total() const {
  double best = 0.0;
  for (const auto& mu : measures_) best = std::max(best, mu.total());
  return best;
}

FilteringFamily SectionFamily::uniform_chain() const {
  if (!convex_type()) {
    throw UnsupportedModeError("heterogeneous section families have no uniform filtering chain");
  }
  return filtering_family(measures_.front(), IntervalSet::full());
}

std::string SectionFamily::describe() const {
  std::ostringstream os;
  switch (mode_) {
  case Mode::Homothetic: os << "homothetic"; break;
  case Mode::Sectioned: os << "sectioned"; break;
  case Mode::Heterogeneous: os << "heterogeneous"; break;
  }
  os << " family, K=" << measures_.size() << ", node 0: " << measures_.front().describe();
  return os.str();
}

bool ProductSet::is_subset_of(const ProductSet& other) const {
  if (sections.size() != other.sections.size()) return false;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    if (!sections[k].is_subset_of(other.sections[k])) return false;
  }
  return true;
}

SectionalFunction SectionalFunction::from_values(std::vector<std::vector<double>> values) {
  if (values.empty()) throw StructuralError("sectional function needs at least one node");
  const std::size_t dim = values.front().size();
  if (dim == 0) throw StructuralError("sectional function values must be non-empty vectors");
  for (const auto& v : values) {
    if (v.size() != dim) throw StructuralError("sectional function values differ in dimension");
    for (double c : v) {
      if (!std::isfinite(c) || c < 0.0) {
        throw DomainError("sectional function values must be finite and non-negative");
      }
    }
  }
  SectionalFunction out;
  out.dim = dim;
  out.values = std::move(values);
  return out;
}

SectionalFunction SectionalFunction::constant(std::size_t nodes, std::span<const double> value) {
  return from_values(std::vector<std::vector<double>>(
      nodes, std::vector<double>(value.begin(), value.end())));
}

SectionalFunction SectionalFunction::scalar(std::span<const double> values) {
  std::vector<std::vector<double>> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back({v});
  return from_values(std::move(rows));
}

ProductStepFunction ProductStepFunction::from_sections(std::vector<VectorStepFunction> sections) {
  if (sections.empty()) throw StructuralError("product function needs at least one section");
  const std::size_t dim = sections.front().dim();
  for (const auto& s : sections) {
    if (s.dim() != dim) throw StructuralError("product function sections differ in dimension");
  }
  ProductStepFunction out;
  out.dim = dim;
  out.sections = std::move(sections);
  return out;
}

ProductStepFunction ProductStepFunction::from_scalar_sections(
    std::span<const StepFunction> sections) {
  std::vector<VectorStepFunction> lifted;
  lifted.reserve(sections.size());
  for (const auto& s : sections) lifted.push_back(VectorStepFunction::from_scalar(s));
  return from_sections(std::move(lifted));
}

ProductStepFunction ProductStepFunction::from_sectional(const SectionalFunction& phi) {
  std::vector<VectorStepFunction> lifted;
  lifted.reserve(phi.size());
  for (const auto& v : phi.values) lifted.push_back(VectorStepFunction::constant(v));
  return from_sections(std::move(lifted));
}

std::vector<StepFunction> ProductStepFunction::component(std::size_t i) const {
  std::vector<StepFunction> out;
  out.reserve(sections.size());
  for (const auto& s : sections) out.push_back(s.component(i));
  return out;
}

double product_measure(const SectionFamily& fam, const ProductSet& h) {
  require_sections(fam, h.sections.size(), "product set");
  double sum = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) sum += fam.at(k)(h.sections[k]);
  return sum * fam.weight();
}

std::vector<double> integrate_product(const SectionFamily& fam, const ProductStepFunction& f) {
  require_sections(fam, f.size(), "integrand");
  std::vector<double> sum(f.dim, 0.0);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const auto section = choquet(f.sections[k], fam.at(k));
    for (std::size_t i = 0; i < f.dim; ++i) sum[i] += section[i];
  }
  for (double& v : sum) v *= fam.weight();
  return sum;
}

double integrate_product(const SectionFamily& fam, std::span<const StepFunction> f) {
  require_sections(fam, f.size(), "integrand");
  double sum = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) sum += choquet(f[k], fam.at(k));
  return sum * fam.weight();
}

FubiniReport fubini_check(const SectionFamily& fam, std::span<const StepFunction> f,
                          std::size_t tnodes) {
  require_sections(fam, f.size(), "integrand");
  if (tnodes < 100) throw DomainError("fubini_check needs at least 100 t-nodes");
  FubiniReport report;
  report.tnodes = tnodes;
  report.iterated = integrate_product(fam, f);

  double top = 0.0;
  for (const auto& s : f) top = std::max(top, s.max_value());
  if (top > 0.0) {
    const double h = top / static_cast<double>(tnodes);
    // column[j] accumulates int_0^1 mu_y([f(., y) > t_j]) dy, t_j descending.
    std::vector<double> column(tnodes, 0.0);
    for (std::size_t k = 0; k < fam.size(); ++k) {
      auto atoms = f[k].atoms();
      std::sort(atoms.begin(), atoms.end(),
                [](const auto& a, const auto& b) { return a.value > b.value; });
      auto acc = fam.at(k).accumulator();
      std::size_t next = 0;
      for (std::size_t j = 0; j < tnodes; ++j) {
        const double t = top - (static_cast<double>(j) + 0.5) * h;
        while (next < atoms.size() && atoms[next].value > t) {
          acc.add(IntervalSet::interval(atoms[next].where.lo, atoms[next].where.hi));
          ++next;
        }
        column[j] += acc.value();
      }
    }
    double sum = 0.0;
    for (double c : column) sum += c;
    report.direct = sum * fam.weight() * h;
  }
  report.deviation = std::abs(report.direct - report.iterated);
  return report;
}

std::vector<double> integrate_sectional_over(const SectionFamily& fam, const SectionalFunction& phi,
                                             const ProductSet& h) {
  require_sections(fam, phi.size(), "sectional function");
  require_sections(fam, h.sections.size(), "product set");
  std::vector<double> sum(phi.dim, 0.0);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const double mass = fam.at(k)(h.sections[k]);
    for (std::size_t i = 0; i < phi.dim; ++i) sum[i] += phi.values[k][i] * mass;
  }
  for (double& v : sum) v *= fam.weight();
  return sum;
}

namespace {

double dot(std::span<const double> p, std::span<const double> v) {
  if (p.size() != v.size()) throw StructuralError("price and bundle dimensions differ");
  return std::inner_product(p.begin(), p.end(), v.begin(), 0.0);
}

void require_price(std::span<const double> p) {
  for (double c : p) {
    if (!std::isfinite(c) || c < 0.0) throw DomainError("price components must be non-negative");
  }
}

} // namespace

CommuteReport scalar_product_commutes(const SectionFamily& fam, std::span<const double> p,
                                      const SectionalFunction& phi) {
  require_sections(fam, phi.size(), "sectional function");
  require_price(p);
  CommuteReport report;
  double lhs = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    lhs += choquet(StepFunction::constant(dot(p, phi.values[k])), fam.at(k));
  }
  report.lhs = lhs * fam.weight();
  report.rhs = dot(p, integrate_product(fam, ProductStepFunction::from_sectional(phi)));
  report.deviation = std::abs(report.lhs - report.rhs);
  return report;
}

CommuteReport scalar_product_commutes(const SectionFamily& fam, std::span<const double> p,
                                      const StepFunction& g, const SectionalFunction& h) {
  require_sections(fam, h.size(), "sectional function");
  require_price(p);
  CommuteReport report;
  std::vector<VectorStepFunction> sections;
  sections.reserve(fam.size());
  double lhs = 0.0;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    lhs += choquet(g.scaled(dot(p, h.values[k])), fam.at(k));
    std::vector<StepFunction> components;
    for (double c : h.values[k]) components.push_back(g.scaled(c));
    sections.push_back(VectorStepFunction::from_components(components));
  }
  report.lhs = lhs * fam.weight();
  report.rhs = dot(p, integrate_product(fam, ProductStepFunction::from_sections(sections)));
  report.deviation = std::abs(report.lhs - report.rhs);
  return report;
}

ProductSet construct_set_from_tau(const SectionFamily& fam, std::span<const double> tau) {
  require_sections(fam, tau.size(), "tau");
  const auto chain = fam.uniform_chain();
  ProductSet out;
  out.sections.reserve(tau.size());
  for (double t : tau) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("tau values must lie in [0, 1]");
    out.sections.push_back(chain.at(t));
  }
  return out;
}

RangeRealization range_realize(const SectionFamily& fam, const SectionalFunction& phi,
                               std::span<const double> target) {
  require_sections(fam, phi.size(), "sectional function");
  if (target.size() != phi.dim) throw StructuralError("target and integrand dimensions differ");
  if (!fam.convex_type()) {
    throw UnsupportedModeError("range realization needs a family of convex type");
  }
  if (!fam.normalized()) throw UnsupportedModeError("range realization needs a normalized family");

  const std::size_t K = fam.size();
  const std::size_t n = phi.dim;
  // a[k] is node k's full contribution mu_k(X) phi(y_k) / K.
  std::vector<std::vector<double>> a(K, std::vector<double>(n));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      a[k][i] = fam.at(k).total() * phi.values[k][i] * fam.weight();
    }
  }

  LinearProgram feas;
  feas.objective.assign(K, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(K);
    for (std::size_t k = 0; k < K; ++k) row[k] = a[k][i];
    feas.add_row(std::move(row), LinearProgram::Sense::Equal, target[i]);
  }
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> row(K, 0.0);
    row[k] = 1.0;
    feas.add_row(std::move(row), LinearProgram::Sense::LessEqual, 1.0);
  }
  const auto sol = solve_lp(feas);

  RangeRealization out;
  if (sol.status == LpSolution::Status::Optimal) {
    out.feasible = true;
    out.tau.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      // sigma(y_k) = tau_k mu_k(X) phi(y_k) is the selection of the segment;
      // tau is read back on the component where phi is largest.
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (phi.values[k][i] > phi.values[k][best]) best = i;
      }
      const double denom = fam.at(k).total() * phi.values[k][best];
      const double sigma = std::clamp(sol.x[k], 0.0, 1.0) * denom;
      out.tau[k] = denom > 0.0 ? std::clamp(sigma / denom, 0.0, 1.0) : 0.0;
    }
    out.set = construct_set_from_tau(fam, out.tau);
    out.achieved = integrate_sectional_over(fam, phi, out.set);
    for (std::size_t i = 0; i < n; ++i) {
      out.residual = std::max(out.residual, std::abs(out.achieved[i] - target[i]));
    }
    if (out.residual > kRealizeTolerance) {
      std::ostringstream os;
      os << "range realization missed its target by " << out.residual;
      throw Error(os.str());
    }
    return out;
  }

  // Separation: maximize d.target - sum_k max(0, a_k.d) over d in [-1, 1]^n,
  // with d = d' - 1 so that all variables are non-negative.
  LinearProgram sep;
  sep.objective.assign(n + K, 0.0);
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sep.objective[i] = target[i];
    shift += target[i];
  }
  for (std::size_t k = 0; k < K; ++k) {
    sep.objective[n + k] = -1.0;
    std::vector<double> row(n + K, 0.0);
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = -a[k][i];
      rhs -= a[k][i];
    }
    row[n + k] = 1.0;
    sep.add_row(std::move(row), LinearProgram::Sense::GreaterEqual, rhs);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n + K, 0.0);
    row[i] = 1.0;
    sep.add_row(std::move(row), LinearProgram::Sense::LessEqual, 2.0);
  }
  const auto cut = solve_lp(sep);
  out.feasible = false;
  if (cut.status == LpSolution::Status::Optimal) {
    out.separating_direction.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.separating_direction[i] = cut.x[i] - 1.0;
    out.gap = cut.objective - shift;
  }
  return out;
}

} // namespace clab
