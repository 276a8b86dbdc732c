#include "choquet/economy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "choquet/error.hpp"
#include "choquet/random.hpp"

namespace clab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void require_allocation(const Economy& eco, const SectionalFunction& f) {
  if (f.size() != eco.nodes() || f.dim != eco.goods()) {
    std::ostringstream os;
    os << "allocation has shape " << f.size() << "x" << f.dim << ", economy expects "
       << eco.nodes() << "x" << eco.goods();
    throw StructuralError(os.str());
  }
}

// Calls visit(x) for every composition of `total` into `parts` non-negative
// integers; stops early when visit returns true.
template <class Visit>
bool for_each_composition(std::size_t parts, std::size_t total, std::vector<std::size_t>& buf,
                          Visit&& visit) {
  if (parts == 1) {
    buf.push_back(total);
    const bool stop = visit(buf);
    buf.pop_back();
    return stop;
  }
  for (std::size_t first = 0; first <= total; ++first) {
    buf.push_back(first);
    const bool stop = for_each_composition(parts - 1, total - first, buf, visit);
    buf.pop_back();
    if (stop) return true;
  }
  return false;
}

} // namespace

Economy::Economy(SectionFamily family, SectionalFunction endowment, Preference preferences)
    : family_(std::move(family)), endowment_(std::move(endowment)),
      preferences_(std::move(preferences)) {}

Economy Economy::create(SectionFamily family, SectionalFunction endowment,
                        Preference preferences) {
  if (!family.convex_type()) {
    throw UnsupportedModeError("economy needs a section family of convex type");
  }
  if (!family.normalized()) throw UnsupportedModeError("economy needs mu_y(X) = 1 at every node");
  if (!family.sections_submodular()) {
    throw UnsupportedModeError("economy needs submodular section measures");
  }
  if (endowment.size() != family.size()) {
    throw StructuralError("endowment needs one bundle per y-node");
  }
  if (preferences.nodes() != family.size()) {
    throw StructuralError("preferences need one entry per y-node");
  }
  if (preferences.goods() != endowment.dim) {
    throw StructuralError("preferences and endowment disagree on the number of goods");
  }
  for (const auto& v : endowment.values) {
    for (double c : v) {
      if (!(c > 0.0)) throw DomainError("endowment must be strictly positive at every node");
    }
  }
  Economy eco(std::move(family), std::move(endowment), std::move(preferences));
  eco.aggregate_ = integrate_sectional_over(eco.family_, eco.endowment_,
                                            ProductSet::full(eco.family_.size()));
  return eco;
}

std::vector<double> normalize_price(std::span<const double> p) {
  double sum = 0.0;
  for (double c : p) {
    if (!std::isfinite(c) || c < 0.0) throw InvalidPriceError("price components must be >= 0");
    sum += c;
  }
  if (!(sum > 0.0)) throw InvalidPriceError("price vector is zero");
  std::vector<double> out(p.begin(), p.end());
  for (double& c : out) c /= sum;
  return out;
}

FeasibilityResult is_feasible(const Economy& eco, const Allocation& f) {
  require_allocation(eco, f);
  FeasibilityResult r;
  r.integral = integrate_sectional_over(eco.family(), f, ProductSet::full(eco.nodes()));
  for (std::size_t i = 0; i < eco.goods(); ++i) {
    r.deviation = std::max(r.deviation, std::abs(r.integral[i] - eco.aggregate_endowment()[i]));
  }
  r.feasible = r.deviation <= kFeasibilityTolerance;
  return r;
}

bool budget_check(const Economy& eco, std::span<const double> p, std::span<const double> bundle,
                  std::size_t node) {
  if (p.size() != eco.goods() || bundle.size() != eco.goods()) {
    throw StructuralError("price or bundle dimension mismatch");
  }
  return dot(p, bundle) <= dot(p, eco.endowment().at(node)) + 1e-12;
}

MaximalityResult is_maximal_in_budget(const Economy& eco, std::span<const double> p_raw,
                                      const Allocation& f, std::size_t node,
                                      std::size_t resolution) {
  require_allocation(eco, f);
  if (p_raw.size() != eco.goods()) throw StructuralError("price dimension mismatch");
  const auto p = normalize_price(p_raw);
  const auto& prefs = eco.preferences();
  const auto& fk = f.at(node);
  const double wealth = dot(p, eco.endowment().at(node));
  MaximalityResult r;
  if (dot(p, fk) > wealth + kPriceTolerance * std::max(1.0, wealth)) {
    r.maximal = false;
    r.reason = "bundle is not affordable";
    return r;
  }

  if (prefs.kind() == Preference::Kind::CobbDouglas) {
    const auto d = prefs.demand(node, p, wealth);
    if (!d) {
      r.maximal = false;
      r.violator = fk;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) (*r.violator)[i] += 1.0;
      }
      r.reason = "a desired good is free";
      return r;
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < d->size(); ++i) gap = std::max(gap, std::abs((*d)[i] - fk[i]));
    if (gap > kDemandTolerance) {
      r.maximal = false;
      r.violator = *d;
      std::ostringstream os;
      os << "differs from demand by " << gap;
      r.reason = os.str();
    }
    return r;
  }

  if (resolution == 0) throw DomainError("grid resolution must be positive");
  std::vector<std::size_t> paid;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) paid.push_back(i);
  }
  std::vector<double> x(p.size());
  std::vector<std::size_t> buf;
  for_each_composition(paid.size(), resolution, buf, [&](const std::vector<std::size_t>& c) {
    for (std::size_t i = 0; i < p.size(); ++i) x[i] = fk[i] + 1.0;
    for (std::size_t j = 0; j < paid.size(); ++j) {
      const std::size_t i = paid[j];
      x[i] = static_cast<double>(c[j]) / static_cast<double>(resolution) * wealth / p[i];
    }
    if (prefs.strictly_prefers(node, x, fk)) {
      r.maximal = false;
      r.violator = x;
      r.reason = "affordable bundle strictly preferred";
      return true;
    }
    return false;
  });
  return r;
}

WalrasVerdict check_walras(const Economy& eco, const Allocation& f, std::span<const double> p,
                           std::size_t resolution) {
  WalrasVerdict v;
  v.w1 = is_feasible(eco, f);
  for (std::size_t k = 0; k < eco.nodes(); ++k) {
    auto m = is_maximal_in_budget(eco, p, f, k, resolution);
    if (!m.maximal) {
      v.w2 = false;
      v.failing_nodes.push_back(k);
      if (!v.first_failure) v.first_failure = std::move(m);
    }
  }
  return v;
}

StrassenVerdict check_strassen(const Economy& eco, const Allocation& f,
                               std::span<const double> p_raw) {
  require_allocation(eco, f);
  const auto p = normalize_price(p_raw);
  StrassenVerdict v;
  for (std::size_t k = 0; k < eco.nodes(); ++k) {
    const double pe = dot(p, eco.endowment().at(k));
    const double pf = dot(p, f.at(k));
    v.max_gap = std::max(v.max_gap, std::abs(pf - pe));
    if (pe > pf + kStrassenTolerance) {
      v.holds = false;
      v.violations.push_back(k);
    }
  }
  return v;
}

SectionalFunction sectionalize(const SectionFamily& fam, const ProductStepFunction& s,
                               const ProductSet& a) {
  if (s.size() != fam.size() || a.sections.size() != fam.size()) {
    throw StructuralError("sectionalize needs one section per y-node");
  }
  std::vector<std::vector<double>> values(fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const auto& mu = fam.at(k);
    const double mass = mu(a.sections[k]);
    if (mass > 0.0) {
      values[k] = choquet(s.sections[k].restricted(a.sections[k]), mu);
      for (double& c : values[k]) c /= mass;
      continue;
    }
    for (const auto& piece : s.sections[k].pieces()) {
      if (piece.cell.contains(0.0)) values[k] = piece.value;
    }
  }
  return SectionalFunction::from_values(std::move(values));
}

C1Report check_c1(const SectionFamily& fam, std::size_t trials, std::uint64_t seed) {
  C1Report r;
  r.trials = trials;
  r.sections_subadditive = fam.sections_submodular();
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<StepFunction> f, g, sum;
    for (std::size_t k = 0; k < fam.size(); ++k) {
      f.push_back(random_step_function(rng, 12, 3.0));
      g.push_back(random_step_function(rng, 12, 3.0));
      sum.push_back(f.back() + g.back());
    }
    const double excess =
        integrate_product(fam, sum) - integrate_product(fam, f) - integrate_product(fam, g);
    r.worst_excess = std::max(r.worst_excess, excess);
    if (excess > 1e-9) ++r.violations;
  }
  return r;
}

C2Report check_c2(const SectionFamily& fam, const SectionalFunction& f,
                  const SectionalFunction& g) {
  if (f.size() != fam.size() || g.size() != fam.size() || f.dim != g.dim) {
    throw StructuralError("check_c2 needs two sectional functions of the same shape");
  }
  C2Report r;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    for (std::size_t i = 0; i < f.dim; ++i) {
      if (f.values[k][i] > g.values[k][i] + 1e-12) r.pointwise = false;
    }
  }
  double best = 0.0;
  auto consider = [&](ProductSet a) {
    ++r.coalitions;
    const auto lf = integrate_sectional_over(fam, f, a);
    const auto lg = integrate_sectional_over(fam, g, a);
    for (std::size_t i = 0; i < f.dim; ++i) {
      if (lf[i] - lg[i] > best) {
        best = lf[i] - lg[i];
        r.violating = a;
        r.component = i;
        r.lhs = lf[i];
        r.rhs = lg[i];
      }
    }
  };
  for (std::size_t k = 0; k < fam.size(); ++k) {
    auto a = ProductSet::empty(fam.size());
    a.sections[k] = IntervalSet::full();
    consider(std::move(a));
  }
  constexpr std::size_t kBlocks = 8;
  for (std::size_t b = 0; b < kBlocks; ++b) {
    auto a = ProductSet::empty(fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k) {
      if (k * kBlocks / fam.size() == b) a.sections[k] = IntervalSet::full();
    }
    consider(std::move(a));
  }
  consider(ProductSet::full(fam.size()));
  return r;
}

CobbDouglasEquilibrium cobb_douglas_equilibrium(const Economy& eco) {
  const auto& prefs = eco.preferences();
  if (prefs.kind() != Preference::Kind::CobbDouglas) {
    throw InvalidPreferenceError("closed-form equilibrium needs Cobb-Douglas preferences");
  }
  const std::size_t n = eco.goods();
  const std::size_t K = eco.nodes();
  const auto& e = eco.endowment();
  // m[j][i] = sum_k a_jk e_ik / sum_k e_jk.
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double ej = 0.0;
    for (std::size_t k = 0; k < K; ++k) ej += e.values[k][j];
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += prefs.parameters(k)[j] * e.values[k][i];
      m[j][i] = s / ej;
    }
  }
  CobbDouglasEquilibrium out;
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  for (; out.iterations < 100000; ++out.iterations) {
    std::vector<double> next(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) next[j] = dot(m[j], p);
    next = normalize_price(next);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::abs(next[j] - p[j]));
    p = std::move(next);
    if (change < 1e-15) break;
  }
  std::vector<std::vector<double>> alloc(K);
  for (std::size_t k = 0; k < K; ++k) {
    alloc[k] = *prefs.demand(k, p, dot(p, e.values[k]));
  }
  out.price = std::move(p);
  out.allocation = SectionalFunction::from_values(std::move(alloc));
  return out;
}

} // namespace clab
