#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "choquet/choquet.hpp"
#include "choquet/filtering.hpp"
#include "choquet/fuzzy_measure.hpp"
#include "choquet/step_function.hpp"

namespace clab {

inline constexpr std::size_t kDefaultYNodes = 100;

/// Family {mu_y} of section measures sampled at the K midpoint nodes
/// y_k = (k - 1/2) / K, each carrying quadrature weight 1/K. Defines the
/// decomposable measure m(H) = int_0^1 mu_y(H_y) dy.
class SectionFamily {
public:
  enum class Mode { Homothetic, Sectioned, Heterogeneous };

  /// Every node uses `base` (times scales[k] if given). With `normalize` the
  /// node measures are rescaled to total mass 1.
  static SectionFamily homothetic(std::size_t nodes, const FuzzyMeasure& base, bool normalize,
                                  std::vector<double> scales = {});

  /// Finite-sections model: blocks E_1..E_r of X and a partition of [0,1] into
  /// y-intervals J_1..J_r; at nodes in J_i the measure is
  /// lebesgue(. & E_i) / lebesgue(E_i). Always normalized.
  static SectionFamily sectioned(std::size_t nodes, std::vector<IntervalSet> blocks,
                                 std::vector<Interval> y_intervals);

  /// One measure per node; no uniform filtering chain is claimed.
  static SectionFamily heterogeneous(std::vector<FuzzyMeasure> measures, bool normalize);

  Mode mode() const { return mode_; }
  std::size_t size() const { return measures_.size(); }
  double node(std::size_t k) const;
  double weight() const { return 1.0 / static_cast<double>(measures_.size()); }
  const FuzzyMeasure& at(std::size_t k) const { return measures_.at(k); }
  std::span<const FuzzyMeasure> measures() const { return measures_; }

  /// Homothetic and sectioned families admit one filtering chain valid for
  /// every node simultaneously.
  bool convex_type() const { return mode_ != Mode::Heterogeneous; }
  /// mu_y(X) = 1 at every node (within 1e-12).
  bool normalized() const;
  /// Every node measure is subadditive and submodular by construction.
  bool sections_submodular() const;
  double max_total() const;

  /// The chain X_t on X shared by all nodes. Throws UnsupportedModeError for
  /// heterogeneous families.
  FilteringFamily uniform_chain() const;

  std::string describe() const;

private:
  SectionFamily(Mode mode, std::vector<FuzzyMeasure> measures)
      : mode_(mode), measures_(std::move(measures)) {}

  Mode mode_;
  std::vector<FuzzyMeasure> measures_;
};

/// Subset of X x [0,1] given by its y-sections at the nodes.
struct ProductSet {
  std::vector<IntervalSet> sections;

  static ProductSet empty(std::size_t nodes) { return {std::vector<IntervalSet>(nodes)}; }
  static ProductSet full(std::size_t nodes) {
    return {std::vector<IntervalSet>(nodes, IntervalSet::full())};
  }
  bool is_subset_of(const ProductSet& other) const;
};

/// Function of y only, f(x, y) = phi(y), stored as one R^n_+ value per node.
struct SectionalFunction {
  std::size_t dim = 1;
  std::vector<std::vector<double>> values;

  /// Validates shape and non-negativity; throws StructuralError / DomainError.
  static SectionalFunction from_values(std::vector<std::vector<double>> values);
  static SectionalFunction constant(std::size_t nodes, std::span<const double> value);
  static SectionalFunction scalar(std::span<const double> values);

  std::size_t size() const { return values.size(); }
  const std::vector<double>& at(std::size_t k) const { return values.at(k); }
};

/// General integrand on X x [0,1]: a (vector) step function per node.
struct ProductStepFunction {
  std::size_t dim = 1;
  std::vector<VectorStepFunction> sections;

  static ProductStepFunction from_sections(std::vector<VectorStepFunction> sections);
  static ProductStepFunction from_scalar_sections(std::span<const StepFunction> sections);
  static ProductStepFunction from_sectional(const SectionalFunction& phi);

  std::size_t size() const { return sections.size(); }
  /// Scalar function of component i.
  std::vector<StepFunction> component(std::size_t i) const;
};

/// m(H) = (1/K) sum_k mu_k(H_k). Throws StructuralError on a section-count
/// mismatch.
double product_measure(const SectionFamily& fam, const ProductSet& h);

/// Iterated integral (1/K) sum_k choquet(f(., y_k), mu_k), componentwise.
std::vector<double> integrate_product(const SectionFamily& fam, const ProductStepFunction& f);
double integrate_product(const SectionFamily& fam, std::span<const StepFunction> f);

struct FubiniReport {
  double direct = 0.0;   // int_0^M m([f > t]) dt by t-quadrature
  double iterated = 0.0; // integrate_product
  double deviation = 0.0;
  std::size_t tnodes = 0;
};

/// Evaluates int m([f > t]) dt on `tnodes` midpoint t-nodes, where each
/// m([f > t]) is itself the y-average of mu_y([f(., y) > t]), and compares it
/// with the iterated integral. Throws DomainError when tnodes < 100.
FubiniReport fubini_check(const SectionFamily& fam, std::span<const StepFunction> f,
                          std::size_t tnodes);

/// (1/K) sum_k phi(y_k) mu_k(H_k), componentwise.
std::vector<double> integrate_sectional_over(const SectionFamily& fam, const SectionalFunction& phi,
                                             const ProductSet& h);

struct CommuteReport {
  double lhs = 0.0; // int p . f dm
  double rhs = 0.0; // p . int f dm
  double deviation = 0.0;
};

/// int p . phi dm against p . int phi dm for a sectional phi.
CommuteReport scalar_product_commutes(const SectionFamily& fam, std::span<const double> p,
                                      const SectionalFunction& phi);
/// Same for the separable integrand f(x, y) = g(x) h(y).
CommuteReport scalar_product_commutes(const SectionFamily& fam, std::span<const double> p,
                                      const StepFunction& g, const SectionalFunction& h);

/// H with H_{y_k} = X_{tau_k} from the family's uniform chain, so that
/// mu_k(H_k) = tau_k mu_k(X). Throws UnsupportedModeError when the family is
/// not of convex type and DomainError for tau outside [0, 1].
ProductSet construct_set_from_tau(const SectionFamily& fam, std::span<const double> tau);

struct RangeRealization {
  bool feasible = false;
  // Feasible case.
  ProductSet set;
  std::vector<double> tau;
  std::vector<double> achieved;
  double residual = 0.0; // sup-norm distance between achieved and target
  // Infeasible case: d with d . target - max_{z in D} d . z = gap > 0.
  std::vector<double> separating_direction;
  double gap = 0.0;
};

/// Decides whether `target` lies in the range {int_H phi dm} (the Aumann
/// integral of the segments [0, mu_y(X) phi(y)]) and, if so, returns a
/// realizing set. Requires a normalized family of convex type
/// (UnsupportedModeError otherwise). Throws Error if a feasible realization
/// misses the target by more than 1e-6.
RangeRealization range_realize(const SectionFamily& fam, const SectionalFunction& phi,
                               std::span<const double> target);

} // namespace clab
