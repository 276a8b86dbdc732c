#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace clab {

/// Strict preference u > v must clear this margin (in utility units for
/// Cobb-Douglas and linear, in every relevant coordinate for dominance), so
/// floating-point ties never count as improvements.
inline constexpr double kPreferenceMargin = 1e-9;

/// Per-node preorders on R^n_+. Agents on the same y-section share one
/// preorder.
class Preference {
public:
  enum class Kind { CobbDouglas, Linear, CoordinateDominance };

  /// U(u) = sum_i a_i ln u_i with every a in the open simplex (sum 1 within
  /// 1e-9).
  static Preference cobb_douglas(std::vector<std::vector<double>> exponents);
  /// U(u) = w . u with w >> 0.
  static Preference linear(std::vector<std::vector<double>> weights);
  /// u > v iff u_j > v_j for every j in J_k; u >= v iff u_j >= v_j on J_k.
  /// Indices are zero-based.
  static Preference coordinate_dominance(std::size_t goods,
                                         std::vector<std::vector<std::size_t>> sets);

  Kind kind() const { return kind_; }
  std::size_t nodes() const { return params_.size(); }
  std::size_t goods() const { return goods_; }

  const std::vector<double>& parameters(std::size_t k) const { return params_.at(k); }
  const std::vector<std::size_t>& relevant(std::size_t k) const { return sets_.at(k); }

  bool strictly_prefers(std::size_t k, std::span<const double> u, std::span<const double> v,
                        double margin = kPreferenceMargin) const;
  /// Membership of u in the upper contour set of v, up to `tolerance`.
  bool weakly_prefers(std::size_t k, std::span<const double> u, std::span<const double> v,
                      double tolerance = 1e-12) const;

  /// Cobb-Douglas and linear only; -inf when a Cobb-Douglas bundle has a zero
  /// coordinate with positive exponent.
  double utility(std::size_t k, std::span<const double> u) const;

  /// A utility-maximizing bundle in the budget {x : p.x <= wealth}, or nullopt
  /// when the maximum is not attained (a desired good is free). For dominance
  /// preferences returns the bundle spending equally per unit on J_k.
  std::optional<std::vector<double>> demand(std::size_t k, std::span<const double> p,
                                            double wealth) const;

  std::string describe() const;

private:
  Preference(Kind kind, std::size_t goods) : kind_(kind), goods_(goods) {}

  Kind kind_;
  std::size_t goods_ = 0;
  std::vector<std::vector<double>> params_;
  std::vector<std::vector<std::size_t>> sets_;
};

} // namespace clab
