#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "choquet/economy.hpp"
#include "choquet/error.hpp"
#include "choquet/random.hpp"

namespace clab {

namespace {

constexpr double kBalanceTolerance = 1e-8;

struct Generator {
  std::string name;
  std::vector<std::vector<double>> bundle; // per node
  std::vector<bool> preferred;             // bundle[k] strictly preferred to f[k]
};

// All price vectors on the simplex grid with step 1/steps.
std::vector<std::vector<double>> price_grid(std::size_t goods, std::size_t steps) {
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> c(goods, 0);
  // Odometer over compositions of `steps` into `goods` parts.
  auto emit = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i + 1 == goods) {
      c[i] = left;
      std::vector<double> p(goods);
      for (std::size_t j = 0; j < goods; ++j) p[j] = static_cast<double>(c[j]) / steps;
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[i] = v;
      self(self, i + 1, left - v);
    }
  };
  emit(emit, 0, steps);
  return out;
}

std::vector<Generator> build_generators(const Economy& eco, const Allocation& f,
                                        std::size_t grid) {
  const auto& prefs = eco.preferences();
  const auto& e = eco.endowment();
  const std::size_t K = eco.nodes();
  std::vector<Generator> gens;
  gens.push_back({"endowment", e.values, {}});
  gens.push_back({"allocation plus surplus", f.values, {}});
  for (const auto& p : price_grid(eco.goods(), std::max<std::size_t>(grid, 1))) {
    Generator g;
    std::ostringstream os;
    os << "demand at p=(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
    g.name = os.str();
    bool ok = true;
    for (std::size_t k = 0; k < K && ok; ++k) {
      const auto d = prefs.demand(k, p, std::inner_product(p.begin(), p.end(), e.values[k].begin(), 0.0));
      if (!d) ok = false;
      else g.bundle.push_back(*d);
    }
    if (ok) gens.push_back(std::move(g));
  }
  for (auto& g : gens) {
    g.preferred.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      g.preferred[k] = prefs.strictly_prefers(k, g.bundle[k], f.values[k]);
    }
  }
  return gens;
}

ImprovementWitness sectional_witness(const Economy& eco, ImprovementMode mode, ProductSet s,
                                     std::vector<std::vector<double>> g, std::string origin) {
  ImprovementWitness w;
  w.mode = mode;
  w.coalition = std::move(s);
  w.allocation = ProductStepFunction::from_sectional(SectionalFunction::from_values(std::move(g)));
  w.origin = std::move(origin);
  (void)eco;
  return w;
}

class BudgetCounter {
public:
  explicit BudgetCounter(std::size_t budget) : budget_(budget) {}
  bool spend(SearchReport& r) {
    if (r.evaluations >= budget_) {
      r.truncated = true;
      return false;
    }
    ++r.evaluations;
    return true;
  }

private:
  std::size_t budget_;
};

// Tries generator `gen` on the coalition with per-node weights tau. The
// candidate is g = d + xi / W on active nodes, xi = sum_k tau_k (e_k - d_k),
// W = sum_k tau_k, which balances int_S g = int_S e exactly.
std::optional<ImprovementWitness> try_candidate(const Economy& eco, const Allocation& f,
                                                const Generator& gen,
                                                const std::vector<double>& tau,
                                                const std::vector<double>& xi, double weight,
                                                bool all_preferred) {
  const std::size_t n = eco.goods();
  double low = std::numeric_limits<double>::infinity();
  for (double c : xi) low = std::min(low, c);
  if (!(weight > 0.0)) return std::nullopt;
  if (low < -1e-12 * std::max(1.0, weight)) return std::nullopt;
  if (!all_preferred && !(low > 0.0)) return std::nullopt;

  std::vector<std::vector<double>> g = f.values;
  for (std::size_t k = 0; k < eco.nodes(); ++k) {
    if (!(tau[k] > 0.0)) continue;
    for (std::size_t i = 0; i < n; ++i) g[k][i] = std::max(0.0, gen.bundle[k][i] + xi[i] / weight);
    if (!all_preferred && !eco.preferences().strictly_prefers(k, g[k], f.values[k])) {
      return std::nullopt;
    }
  }
  auto w = sectional_witness(eco, ImprovementMode::Improve,
                             construct_set_from_tau(eco.family(), tau), std::move(g), gen.name);
  if (!verify_witness(eco, f, w).valid) return std::nullopt;
  return w;
}

SearchReport search_improve(const Economy& eco, const Allocation& f, std::size_t budget,
                            const SearchOptions& opt) {
  SearchReport r;
  BudgetCounter counter(budget);
  const std::size_t K = eco.nodes();
  const std::size_t n = eco.goods();
  const std::size_t B = std::max<std::size_t>(1, std::min(opt.blocks, K));
  const std::size_t L = std::max<std::size_t>(1, opt.levels);
  const auto& e = eco.endowment();
  const auto gens = build_generators(eco, f, opt.price_grid);
  r.generators = gens.size();

  std::vector<std::size_t> block_of(K), block_size(B, 0);
  for (std::size_t k = 0; k < K; ++k) {
    block_of[k] = k * B / K;
    ++block_size[block_of[k]];
  }
  // Per generator and block: all nodes preferred, and the summed excess e - d.
  std::vector<std::vector<bool>> block_ok(gens.size(), std::vector<bool>(B, true));
  std::vector<std::vector<std::vector<double>>> block_excess(
      gens.size(), std::vector<std::vector<double>>(B, std::vector<double>(n, 0.0)));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t b = block_of[k];
      if (!gens[g].preferred[k]) block_ok[g][b] = false;
      for (std::size_t i = 0; i < n; ++i) block_excess[g][b][i] += e.values[k][i] - gens[g].bundle[k][i];
    }
  }

  std::vector<std::size_t> level(B, 0);
  std::vector<double> tau(K), xi(n);
  for (;;) {
    // Advance the odometer; the all-zero vector is skipped.
    std::size_t pos = 0;
    while (pos < B && level[pos] == L) level[pos++] = 0;
    if (pos == B) break;
    ++level[pos];
    ++r.coalitions;
    double weight = 0.0;
    for (std::size_t b = 0; b < B; ++b) weight += static_cast<double>(level[b]) / L * block_size[b];
    for (std::size_t k = 0; k < K; ++k) tau[k] = static_cast<double>(level[block_of[k]]) / L;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (!counter.spend(r)) return r;
      bool ok = true;
      std::fill(xi.begin(), xi.end(), 0.0);
      for (std::size_t b = 0; b < B; ++b) {
        if (level[b] == 0) continue;
        ok = ok && block_ok[g][b];
        const double t = static_cast<double>(level[b]) / L;
        for (std::size_t i = 0; i < n; ++i) xi[i] += t * block_excess[g][b][i];
      }
      if (auto w = try_candidate(eco, f, gens[g], tau, xi, weight, ok)) {
        r.witness = std::move(w);
        return r;
      }
    }
  }

  Rng rng(opt.seed);
  for (std::size_t c = 0; c < opt.random_coalitions; ++c) {
    ++r.coalitions;
    double weight = 0.0;
    for (double& t : tau) {
      t = uniform(rng) < 0.3 ? 0.0 : uniform(rng);
      weight += t;
    }
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (!counter.spend(r)) return r;
      bool ok = true;
      std::fill(xi.begin(), xi.end(), 0.0);
      for (std::size_t k = 0; k < K; ++k) {
        if (!(tau[k] > 0.0)) continue;
        ok = ok && gens[g].preferred[k];
        for (std::size_t i = 0; i < n; ++i) xi[i] += tau[k] * (e.values[k][i] - gens[g].bundle[k][i]);
      }
      if (auto w = try_candidate(eco, f, gens[g], tau, xi, weight, ok)) {
        r.witness = std::move(w);
        return r;
      }
    }
  }
  return r;
}

// Solves choquet(two-level function, mu) = target for the level on X \ T,
// given level `first` on T with mu(T) = theta and mu(X \ T) = nu.
std::optional<double> second_level(double target, double first, double theta, double nu) {
  if (theta < 1.0) {
    const double below = (target - theta * first) / (1.0 - theta);
    if (below >= 0.0 && below <= first + 1e-15) return below;
  }
  if (nu > 0.0) {
    const double above = (target - first * (1.0 - nu)) / nu;
    if (above >= first) return above;
  }
  return std::nullopt;
}

SearchReport search_strong(const Economy& eco, const Allocation& f, std::size_t budget,
                           const SearchOptions& opt) {
  SearchReport r;
  BudgetCounter counter(budget);
  const auto& fam = eco.family();
  const auto& prefs = eco.preferences();
  const auto& e = eco.endowment();
  const std::size_t K = eco.nodes();
  const std::size_t n = eco.goods();
  const std::size_t B = std::max<std::size_t>(1, std::min(opt.blocks, K));

  // Sectional g: per-section balance forces g = e on active sections.
  std::vector<bool> e_better(K);
  for (std::size_t k = 0; k < K; ++k) e_better[k] = prefs.strictly_prefers(k, e.values[k], f.values[k]);
  r.generators = 1;
  auto attempt = [&](const std::vector<std::size_t>& members, const char* origin) -> bool {
    ++r.coalitions;
    if (!counter.spend(r)) return true;
    for (std::size_t k : members) {
      if (!e_better[k]) return false;
    }
    auto s = ProductSet::empty(K);
    auto g = f.values;
    for (std::size_t k : members) {
      s.sections[k] = IntervalSet::full();
      g[k] = e.values[k];
    }
    auto w = sectional_witness(eco, ImprovementMode::StronglyImprove, std::move(s), std::move(g), origin);
    if (verify_witness(eco, f, w).valid) {
      r.witness = std::move(w);
      return true;
    }
    return false;
  };
  for (std::size_t b = 0; b < B; ++b) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < K; ++k) {
      if (k * B / K == b) members.push_back(k);
    }
    if (attempt(members, "g = e on a y-block")) return r;
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (attempt({k}, "g = e on one section")) return r;
  }

  // Two-level g per section: b1 on the chain prefix T, b2 on X \ T.
  const auto chain = fam.uniform_chain();
  const auto prices = price_grid(n, std::max<std::size_t>(opt.price_grid, 1));
  r.generators += prices.size();
  const double thetas[] = {0.25, 0.5, 0.75};
  for (std::size_t k = 0; k < K; ++k) {
    const auto& mu = fam.at(k);
    for (double theta : thetas) {
      const auto t_set = chain.at(theta);
      const auto rest = t_set.complement();
      const double nu = mu(rest);
      ++r.coalitions;
      for (const auto& p : prices) {
        if (!counter.spend(r)) return r;
        const double wealth = std::inner_product(p.begin(), p.end(), e.values[k].begin(), 0.0);
        const auto b1 = prefs.demand(k, p, wealth);
        if (!b1 || !prefs.strictly_prefers(k, *b1, f.values[k])) continue;
        std::vector<double> b2(n);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          const auto v = second_level(e.values[k][i], (*b1)[i], mu(t_set), nu);
          if (!v) ok = false;
          else b2[i] = *v;
        }
        if (!ok || !prefs.strictly_prefers(k, b2, f.values[k])) continue;
        std::vector<VectorStepFunction> sections;
        for (std::size_t j = 0; j < K; ++j) {
          if (j != k) {
            sections.push_back(VectorStepFunction::constant(f.values[j]));
            continue;
          }
          sections.push_back(VectorStepFunction::from_pieces(n, {{t_set, *b1}, {rest, b2}}));
        }
        ImprovementWitness w;
        w.mode = ImprovementMode::StronglyImprove;
        w.coalition = ProductSet::empty(K);
        w.coalition.sections[k] = IntervalSet::full();
        w.allocation = ProductStepFunction::from_sections(std::move(sections));
        w.origin = "two-level allocation on one section";
        if (verify_witness(eco, f, w).valid) {
          r.witness = std::move(w);
          return r;
        }
      }
    }
  }
  return r;
}

} // namespace

SearchReport search_improvement(const Economy& eco, const Allocation& f, ImprovementMode mode,
                                std::size_t budget, const SearchOptions& options) {
  if (budget == 0) throw InvalidBudgetError("search budget must be positive");
  if (f.size() != eco.nodes() || f.dim != eco.goods()) {
    throw StructuralError("allocation shape does not match the economy");
  }
  return mode == ImprovementMode::Improve ? search_improve(eco, f, budget, options)
                                          : search_strong(eco, f, budget, options);
}

WitnessCheck verify_witness(const Economy& eco, const Allocation& f,
                            const ImprovementWitness& witness) {
  WitnessCheck c;
  const auto& fam = eco.family();
  const std::size_t K = eco.nodes();
  const std::size_t n = eco.goods();
  const auto& s = witness.coalition;
  const auto& g = witness.allocation;
  if (s.sections.size() != K || g.size() != K || g.dim != n) {
    c.failure = "witness shape does not match the economy";
    return c;
  }
  c.coalition_measure = product_measure(fam, s);
  if (!(c.coalition_measure > 0.0)) {
    c.failure = "coalition has measure zero";
    return c;
  }
  std::vector<double> lhs(n, 0.0), rhs(n, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& mu = fam.at(k);
    const double mass = mu(s.sections[k]);
    if (!(mass > 0.0)) continue;
    for (const auto& piece : g.sections[k].pieces()) {
      if (!(mu(piece.cell.intersect(s.sections[k])) > 0.0)) continue;
      if (!eco.preferences().strictly_prefers(k, piece.value, f.values[k])) {
        std::ostringstream os;
        os << "allocation not strictly preferred on section " << k;
        c.failure = os.str();
        return c;
      }
    }
    const auto section = choquet(g.sections[k].restricted(s.sections[k]), mu);
    for (std::size_t i = 0; i < n; ++i) {
      const double own = mass * eco.endowment().values[k][i];
      if (witness.mode == ImprovementMode::StronglyImprove) {
        c.balance_deviation = std::max(c.balance_deviation, std::abs(section[i] - own));
      }
      lhs[i] += section[i];
      rhs[i] += own;
    }
  }
  if (witness.mode == ImprovementMode::Improve) {
    for (std::size_t i = 0; i < n; ++i) {
      c.balance_deviation = std::max(c.balance_deviation, std::abs(lhs[i] - rhs[i]) * fam.weight());
    }
  }
  if (c.balance_deviation > kBalanceTolerance) {
    c.failure = "coalition balance violated";
    return c;
  }
  c.valid = true;
  return c;
}

std::optional<ImprovementWitness> witness_from_sample(const Economy& eco, const Allocation& f,
                                                      const IfSample& sample) {
  const std::size_t K = eco.nodes();
  const std::size_t n = eco.goods();
  auto coalition = ProductSet::empty(K);
  auto g = f.values;
  bool any = false;
  for (std::size_t k = 0; k < K; ++k) {
    const double mass = eco.family().at(k)(sample.coalition.sections[k]);
    if (!(mass > 0.0)) continue;
    bool nonpositive = true, nonzero = false;
    std::vector<double> zy(n);
    for (std::size_t i = 0; i < n; ++i) {
      zy[i] = (sample.s.values[k][i] - eco.endowment().values[k][i]) * mass;
      if (zy[i] > 1e-15) nonpositive = false;
      if (zy[i] < -1e-12) nonzero = true;
    }
    if (!nonpositive || !nonzero) continue;
    any = true;
    coalition.sections[k] = sample.coalition.sections[k];
    for (std::size_t i = 0; i < n; ++i) g[k][i] = std::max(0.0, sample.s.values[k][i] - zy[i] / mass);
  }
  if (!any) return std::nullopt;
  auto w = sectional_witness(eco, ImprovementMode::StronglyImprove, std::move(coalition),
                             std::move(g), "reconstructed from an I_f sample");
  if (!verify_witness(eco, f, w).valid) return std::nullopt;
  return w;
}

} // namespace clab
