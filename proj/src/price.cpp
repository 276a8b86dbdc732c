#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "choquet/economy.hpp"
#include "choquet/error.hpp"
#include "choquet/random.hpp"
#include "choquet/simplex.hpp"

namespace clab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double bundle_scale(std::span<const double> a, std::span<const double> b) {
  double s = 1e-12;
  for (double c : a) s = std::max(s, c);
  for (double c : b) s = std::max(s, c);
  return s;
}

// A point of the upper contour set {s : s >= f_k} (weak preference at node k).
// Boundary draws move along the indifference surface; interior draws add a
// positive perturbation on top.
std::vector<double> draw_upper_contour(const Economy& eco, std::size_t k,
                                       std::span<const double> fk, bool interior, Rng& rng) {
  const auto& prefs = eco.preferences();
  const std::size_t n = eco.goods();
  const double scale = bundle_scale(fk, eco.endowment().at(k));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> s(fk.begin(), fk.end());

  switch (prefs.kind()) {
  case Preference::Kind::CobbDouglas: {
    const auto& a = prefs.parameters(k);
    if (std::isinf(prefs.utility(k, fk))) {
      for (double& c : s) c = uniform(rng, 0.0, 2.0 * scale);
      break;
    }
    // Tangent moves in log space keep sum_i a_i ln s_i fixed.
    std::vector<double> w(n);
    for (double& c : w) c = normal(rng);
    const double aw = dot(a, w);
    const double aa = dot(a, a);
    for (std::size_t i = 0; i < n; ++i) w[i] -= aw / aa * a[i];
    const double t = uniform(rng, -0.8, 0.8);
    for (std::size_t i = 0; i < n; ++i) s[i] = fk[i] * std::exp(t * w[i]);
    break;
  }
  case Preference::Kind::Linear: {
    const auto& wts = prefs.parameters(k);
    std::vector<double> w(n);
    for (double& c : w) c = normal(rng);
    const double ww = dot(wts, w);
    const double nn = dot(wts, wts);
    for (std::size_t i = 0; i < n; ++i) w[i] -= ww / nn * wts[i];
    double t = uniform(rng, -scale, scale);
    for (std::size_t i = 0; i < n; ++i) {
      if (fk[i] + t * w[i] < 0.0) t = -fk[i] / w[i];
    }
    for (std::size_t i = 0; i < n; ++i) s[i] = std::max(0.0, fk[i] + t * w[i]);
    break;
  }
  case Preference::Kind::CoordinateDominance: {
    std::vector<bool> relevant(n, false);
    for (std::size_t j : prefs.relevant(k)) relevant[j] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (relevant[i]) continue;
      s[i] = uniform(rng) < 0.3 ? 0.0 : uniform(rng, 0.0, 2.0 * scale);
    }
    break;
  }
  }
  if (interior) {
    for (double& c : s) c += uniform(rng, 0.0, 0.3 * scale);
  }
  return s;
}

ProductSet random_coalition(const Economy& eco, Rng& rng) {
  const auto& fam = eco.family();
  const std::size_t K = fam.size();
  const double roll = uniform(rng);
  if (roll < 0.25) {
    std::vector<double> tau(K, 0.0);
    tau[std::uniform_int_distribution<std::size_t>(0, K - 1)(rng)] =
        uniform(rng) < 0.5 ? 1.0 : uniform(rng);
    return construct_set_from_tau(fam, tau);
  }
  if (roll < 0.65) {
    std::vector<double> tau(K);
    for (double& t : tau) t = uniform(rng) < 0.3 ? 0.0 : uniform(rng);
    return construct_set_from_tau(fam, tau);
  }
  if (roll < 0.7) return ProductSet::full(K);
  ProductSet h = ProductSet::empty(K);
  for (auto& section : h.sections) {
    if (uniform(rng) < 0.5) section = random_interval_set(rng);
  }
  return h;
}

} // namespace

IfSample make_I_f_sample(const Economy& eco, const SectionalFunction& s, ProductSet coalition,
                         std::string origin) {
  const auto& fam = eco.family();
  IfSample out;
  const auto with_s = integrate_sectional_over(fam, s, coalition);
  const auto with_e = integrate_sectional_over(fam, eco.endowment(), coalition);
  out.z.resize(eco.goods());
  for (std::size_t i = 0; i < eco.goods(); ++i) out.z[i] = with_s[i] - with_e[i];
  out.tau.resize(fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) out.tau[k] = fam.at(k)(coalition.sections[k]);
  out.s = s;
  out.coalition = std::move(coalition);
  out.origin = std::move(origin);
  return out;
}

std::vector<IfSample> sample_I_f(const Economy& eco, const Allocation& f, std::size_t samples,
                                 std::uint64_t seed) {
  if (f.size() != eco.nodes() || f.dim != eco.goods()) {
    throw StructuralError("allocation shape does not match the economy");
  }
  std::vector<IfSample> cloud;
  if (samples == 0) return cloud;
  const std::size_t K = eco.nodes();
  const std::size_t n = eco.goods();

  cloud.push_back(make_I_f_sample(eco, f, ProductSet::empty(K), "empty coalition"));
  cloud.push_back(make_I_f_sample(eco, f, ProductSet::full(K), "s = f on X*"));

  // psi = z / m(X*) + f realizes z exactly on X* for feasible f.
  const double mass = product_measure(eco.family(), ProductSet::full(K));
  double unit = 0.0;
  for (double c : eco.aggregate_endowment()) unit = std::max(unit, 0.1 * c);
  for (std::size_t probe = 0; probe <= n; ++probe) {
    std::vector<double> z(n, probe == n ? unit : 0.0);
    if (probe < n) z[probe] = unit;
    auto psi = f.values;
    for (auto& v : psi) {
      for (std::size_t i = 0; i < n; ++i) v[i] += z[i] / mass;
    }
    cloud.push_back(make_I_f_sample(eco, SectionalFunction::from_values(std::move(psi)),
                                    ProductSet::full(K), "interior probe"));
  }

  for (std::size_t k = 0; k < K; ++k) {
    auto single = ProductSet::empty(K);
    single.sections[k] = IntervalSet::full();
    cloud.push_back(make_I_f_sample(eco, f, std::move(single), "s = f on one section"));
  }

  Rng rng(seed);
  for (std::size_t draw = 0; draw < samples; ++draw) {
    std::vector<std::vector<double>> s(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double roll = uniform(rng);
      if (roll < 0.1) {
        s[k] = f.values[k];
      } else {
        s[k] = draw_upper_contour(eco, k, f.values[k], roll >= 0.55, rng);
      }
    }
    cloud.push_back(make_I_f_sample(eco, SectionalFunction::from_values(std::move(s)),
                                    random_coalition(eco, rng), "random selection"));
  }
  return cloud;
}

PriceResult find_price(std::span<const IfSample> cloud, std::size_t goods) {
  PriceResult out;
  out.cloud_size = cloud.size();
  std::vector<std::vector<double>> unit;
  for (const auto& sample : cloud) {
    if (sample.z.size() != goods) throw StructuralError("sample dimension mismatch");
    double norm = 0.0;
    for (double c : sample.z) norm = std::max(norm, std::abs(c));
    if (norm > 0.0) {
      std::vector<double> u = sample.z;
      for (double& c : u) c /= norm;
      unit.push_back(std::move(u));
    }
  }
  if (unit.empty()) throw InsufficientSamplesError("the I_f sample cloud is empty or all zero");

  // Cutting planes: maximize delta s.t. p.u_j >= delta over an active subset,
  // add the most violated rows until none remain.
  std::vector<double> p(goods, 1.0 / static_cast<double>(goods));
  std::vector<std::size_t> order(unit.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<bool> active(unit.size(), false);
  auto add_worst = [&](std::size_t count) {
    std::vector<std::pair<double, std::size_t>> score;
    for (std::size_t j = 0; j < unit.size(); ++j) {
      if (!active[j]) score.emplace_back(dot(p, unit[j]), j);
    }
    std::sort(score.begin(), score.end());
    for (std::size_t i = 0; i < std::min(count, score.size()); ++i) active[score[i].second] = true;
  };
  add_worst(30);
  double delta = 0.0;
  for (int round = 0; round < 500; ++round) {
    LinearProgram lp;
    lp.objective.assign(goods + 1, 0.0);
    lp.objective[goods] = 1.0;
    std::vector<double> simplex(goods + 1, 1.0);
    simplex[goods] = 0.0;
    lp.add_row(std::move(simplex), LinearProgram::Sense::Equal, 1.0);
    std::vector<double> cap(goods + 1, 0.0);
    cap[goods] = 1.0;
    lp.add_row(std::move(cap), LinearProgram::Sense::LessEqual, 2.0);
    for (std::size_t j = 0; j < unit.size(); ++j) {
      if (!active[j]) continue;
      std::vector<double> row(unit[j]);
      row.push_back(-1.0);
      lp.add_row(std::move(row), LinearProgram::Sense::GreaterEqual, -1.0);
    }
    const auto sol = solve_lp(lp);
    if (sol.status != LpSolution::Status::Optimal) throw Error("price LP did not reach an optimum");
    for (std::size_t i = 0; i < goods; ++i) p[i] = std::max(0.0, sol.x[i]);
    delta = sol.x[goods] - 1.0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& u : unit) worst = std::min(worst, dot(p, u));
    if (worst >= delta - 1e-12) break;
    add_worst(20);
  }
  p = normalize_price(p);
  out.price = p;
  out.worst = std::numeric_limits<double>::infinity();
  for (const auto& sample : cloud) {
    const double v = dot(p, sample.z);
    out.worst = std::min(out.worst, v);
    if (v < -kPriceTolerance) out.violated.push_back(sample);
  }
  out.found = out.violated.empty();
  return out;
}

PriceResult find_price(const Economy& eco, const Allocation& f, std::size_t samples,
                       std::uint64_t seed) {
  const auto cloud = sample_I_f(eco, f, samples, seed);
  return find_price(cloud, eco.goods());
}

ConvexityReport check_I_f_convexity(const Economy& eco, const Allocation& f, std::size_t trials,
                                    std::uint64_t seed) {
  ConvexityReport r;
  r.trials = trials;
  if (trials == 0) return r;
  const auto& fam = eco.family();
  const std::size_t K = eco.nodes();
  const std::size_t n = eco.goods();
  const auto cloud = sample_I_f(eco, f, std::max<std::size_t>(2 * trials, 20), seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, cloud.size() - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& a = cloud[pick(rng)];
    const auto& b = cloud[pick(rng)];
    const double c = uniform(rng, 1e-6, 1.0);
    std::vector<double> tau(K);
    std::vector<std::vector<double>> s(K, std::vector<double>(n));
    for (std::size_t k = 0; k < K; ++k) {
      tau[k] = std::clamp(c * a.tau[k] + (1.0 - c) * b.tau[k], 0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        s[k][i] = tau[k] > 0.0 ? (c * a.tau[k] * a.s.values[k][i] +
                                  (1.0 - c) * b.tau[k] * b.s.values[k][i]) /
                                     tau[k]
                               : f.values[k][i];
      }
      if (tau[k] > 0.0 && !eco.preferences().weakly_prefers(k, s[k], f.values[k], 1e-9)) {
        ++r.membership_failures;
      }
    }
    const auto mixed = make_I_f_sample(eco, SectionalFunction::from_values(std::move(s)),
                                       construct_set_from_tau(fam, tau), "mixture");
    for (std::size_t i = 0; i < n; ++i) {
      const double expect = c * a.z[i] + (1.0 - c) * b.z[i];
      r.max_deviation = std::max(r.max_deviation, std::abs(mixed.z[i] - expect));
    }
  }
  return r;
}

EndowmentVerdict endowment_is_walrasian(const Economy& eco, std::size_t samples,
                                        std::uint64_t seed) {
  const auto& prefs = eco.preferences();
  if (prefs.kind() != Preference::Kind::CoordinateDominance) {
    throw InvalidPreferenceError("endowment check needs coordinate-dominance preferences");
  }
  bool any = false;
  for (std::size_t k = 0; k < prefs.nodes(); ++k) any = any || !prefs.relevant(k).empty();
  if (!any) throw InvalidPreferenceError("every set A_j = {y : j in J_y} is empty");

  EndowmentVerdict v;
  v.price = find_price(eco, eco.endowment(), samples, seed);
  if (!v.price.found) return v;
  v.walras = check_walras(eco, eco.endowment(), v.price.price);
  v.walrasian = v.walras->equilibrium();
  return v;
}

} // namespace clab
