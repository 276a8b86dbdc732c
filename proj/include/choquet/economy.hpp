#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "choquet/preference.hpp"
#include "choquet/product_space.hpp"

namespace clab {

inline constexpr double kFeasibilityTolerance = 1e-8;
inline constexpr double kDemandTolerance = 1e-6;
inline constexpr double kPriceTolerance = 1e-9;
inline constexpr double kStrassenTolerance = 1e-9;

using Allocation = SectionalFunction;

/// Pure exchange economy over X x [0,1]: a normalized family of convex type
/// with submodular sections, a sectional endowment e >> 0 and one preorder per
/// y-node.
class Economy {
public:
  /// Throws UnsupportedModeError for a family that is not of convex type,
  /// normalized and submodular, DomainError for an endowment that is not
  /// strictly positive, StructuralError on size mismatches.
  static Economy create(SectionFamily family, SectionalFunction endowment, Preference preferences);

  const SectionFamily& family() const { return family_; }
  const SectionalFunction& endowment() const { return endowment_; }
  const Preference& preferences() const { return preferences_; }
  std::size_t goods() const { return endowment_.dim; }
  std::size_t nodes() const { return family_.size(); }
  const std::vector<double>& aggregate_endowment() const { return aggregate_; }

private:
  Economy(SectionFamily family, SectionalFunction endowment, Preference preferences);

  SectionFamily family_;
  SectionalFunction endowment_;
  Preference preferences_;
  std::vector<double> aggregate_;
};

/// p >= 0, p != 0, rescaled to sum 1. Throws InvalidPriceError otherwise.
std::vector<double> normalize_price(std::span<const double> p);

struct FeasibilityResult {
  bool feasible = false;
  double deviation = 0.0;
  std::vector<double> integral;
};

FeasibilityResult is_feasible(const Economy& eco, const Allocation& f);

bool budget_check(const Economy& eco, std::span<const double> p, std::span<const double> bundle,
                  std::size_t node);

struct MaximalityResult {
  bool maximal = true;
  std::optional<std::vector<double>> violator;
  std::string reason;
};

/// Cobb-Douglas: compares f(y_k) with the closed-form demand. Otherwise grid
/// search over the budget simplex at 1/resolution per axis, with every free
/// good raised above f. Throws InvalidPriceError for p = 0.
MaximalityResult is_maximal_in_budget(const Economy& eco, std::span<const double> p,
                                      const Allocation& f, std::size_t node,
                                      std::size_t resolution = 200);

struct WalrasVerdict {
  FeasibilityResult w1;
  bool w2 = true;
  std::vector<std::size_t> failing_nodes;
  std::optional<MaximalityResult> first_failure;

  bool equilibrium() const { return w1.feasible && w2; }
};

WalrasVerdict check_walras(const Economy& eco, const Allocation& f, std::span<const double> p,
                           std::size_t resolution = 200);

struct StrassenVerdict {
  bool holds = true;
  std::vector<std::size_t> violations;
  /// max_k |p.f(y_k) - p.e(y_k)|; 0 up to tolerance means equality per node.
  double max_gap = 0.0;
};

StrassenVerdict check_strassen(const Economy& eco, const Allocation& f, std::span<const double> p);

/// One point z = int_H s dm - int_H e dm of I_f together with its generators.
/// tau[k] = mu_k(H_k) (the family is normalized).
struct IfSample {
  std::vector<double> z;
  SectionalFunction s;
  std::vector<double> tau;
  ProductSet coalition;
  std::string origin;
};

IfSample make_I_f_sample(const Economy& eco, const SectionalFunction& s, ProductSet coalition,
                         std::string origin);

/// Deterministic part (empty coalition, s = f on X*, interior probes
/// z/m(X*) + f, s = f on every single node) followed by `samples` random
/// draws of sectional selections of the upper contour sets and coalitions
/// from the tau-family and random section unions. samples = 0 yields an empty
/// cloud.
std::vector<IfSample> sample_I_f(const Economy& eco, const Allocation& f, std::size_t samples,
                                 std::uint64_t seed);

struct PriceResult {
  bool found = false;
  std::vector<double> price;
  /// min_j p.z_j over the cloud.
  double worst = 0.0;
  std::vector<IfSample> violated;
  std::size_t cloud_size = 0;
};

/// Maximizes min_j p.z_j / |z_j| over the simplex; the price is accepted when
/// every raw p.z_j >= -1e-9. Throws InsufficientSamplesError when the cloud is
/// empty or all zero.
PriceResult find_price(const Economy& eco, const Allocation& f, std::size_t samples,
                       std::uint64_t seed);
PriceResult find_price(std::span<const IfSample> cloud, std::size_t goods);

enum class ImprovementMode { Improve, StronglyImprove };

struct ImprovementWitness {
  ImprovementMode mode = ImprovementMode::Improve;
  ProductSet coalition;
  ProductStepFunction allocation;
  std::string origin;
};

struct SearchOptions {
  std::size_t levels = 4;
  std::size_t blocks = 8;
  std::size_t price_grid = 50;
  std::size_t random_coalitions = 2000;
  std::uint64_t seed = 42;
};

struct SearchReport {
  std::optional<ImprovementWitness> witness;
  std::size_t coalitions = 0;
  std::size_t generators = 0;
  std::size_t evaluations = 0;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultSearchBudget = 100'000'000;

/// Improve mode: coalitions H_tau with tau constant on y-blocks and quantized
/// to {0, 1/L, ..., 1}, plus random coalitions; candidate allocations are
/// e, f and per-node demands on a price grid, shifted by the coalition's
/// surplus so that balance holds exactly. Strong mode: g = e on sections where
/// e is strictly preferred, and two-level g per section solved from the
/// per-section balance. `budget` caps candidate evaluations (0 throws
/// InvalidBudgetError). Every returned witness passed verify_witness.
SearchReport search_improvement(const Economy& eco, const Allocation& f, ImprovementMode mode,
                                std::size_t budget = kDefaultSearchBudget,
                                const SearchOptions& options = {});

struct WitnessCheck {
  bool valid = false;
  double coalition_measure = 0.0;
  double balance_deviation = 0.0;
  std::string failure;
};

WitnessCheck verify_witness(const Economy& eco, const Allocation& f,
                            const ImprovementWitness& witness);

/// The separation argument's construction: on the sections where the sample
/// has z_y <= 0, z_y != 0, set g = s - z_y / mu_y(A_y) (which equals e there).
/// Returns the witness only if it verifies.
std::optional<ImprovementWitness> witness_from_sample(const Economy& eco, const Allocation& f,
                                                      const IfSample& sample);

/// phi(y_k) = choquet(s(., y_k) 1_A, mu_k) / mu_k(A_k) where mu_k(A_k) > 0,
/// else s(., y_k) on its leftmost piece.
SectionalFunction sectionalize(const SectionFamily& fam, const ProductStepFunction& s,
                               const ProductSet& a);

struct ConvexityReport {
  std::size_t trials = 0;
  double max_deviation = 0.0;
  std::size_t membership_failures = 0;
};

/// Mixes random pairs of I_f samples with tau = c tau1 + (1-c) tau2 and
/// s = (c tau1 s1 + (1-c) tau2 s2) / tau and measures the distance of the
/// resulting point from c z1 + (1-c) z2.
ConvexityReport check_I_f_convexity(const Economy& eco, const Allocation& f, std::size_t trials,
                                    std::uint64_t seed);

struct C1Report {
  std::size_t trials = 0;
  bool sections_subadditive = false;
  std::size_t violations = 0;
  double worst_excess = 0.0;
};

/// int (f + g) dm <= int f dm + int g dm on random non-negative product step
/// functions.
C1Report check_c1(const SectionFamily& fam, std::size_t trials, std::uint64_t seed);

struct C2Report {
  /// f <= g at every node (componentwise, 1e-12).
  bool pointwise = true;
  /// A coalition from the single-node and tau-block families with
  /// int_A f dm > int_A g dm in `component`.
  std::optional<ProductSet> violating;
  std::size_t component = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t coalitions = 0;
};

C2Report check_c2(const SectionFamily& fam, const SectionalFunction& f, const SectionalFunction& g);

struct EndowmentVerdict {
  bool walrasian = false;
  PriceResult price;
  std::optional<WalrasVerdict> walras;
};

/// find_price on f = e followed by check_walras. Throws InvalidPreferenceError
/// unless preferences are coordinate dominance with some non-empty J.
EndowmentVerdict endowment_is_walrasian(const Economy& eco, std::size_t samples = 2000,
                                        std::uint64_t seed = 42);

struct CobbDouglasEquilibrium {
  std::vector<double> price;
  Allocation allocation;
  std::size_t iterations = 0;
};

/// Fixed point of p_j E_j = sum_i p_i (1/K) sum_k a_jk e_ik by power
/// iteration; the allocation is the per-node demand.
CobbDouglasEquilibrium cobb_douglas_equilibrium(const Economy& eco);

} // namespace clab
