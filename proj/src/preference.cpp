#include "choquet/preference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "choquet/error.hpp"

namespace clab {

namespace {

std::size_t common_goods(const std::vector<std::vector<double>>& rows, const char* what) {
  if (rows.empty()) throw InvalidPreferenceError(std::string(what) + " needs at least one node");
  const std::size_t n = rows.front().size();
  if (n == 0) throw InvalidPreferenceError(std::string(what) + " needs at least one good");
  for (const auto& r : rows) {
    if (r.size() != n) throw StructuralError(std::string(what) + " rows differ in length");
  }
  return n;
}

void require_same_size(std::span<const double> u, std::span<const double> v, std::size_t n) {
  if (u.size() != n || v.size() != n) throw StructuralError("bundle dimension mismatch");
}

} // namespace

Preference Preference::cobb_douglas(std::vector<std::vector<double>> exponents) {
  Preference out(Kind::CobbDouglas, common_goods(exponents, "Cobb-Douglas preference"));
  for (const auto& a : exponents) {
    double sum = 0.0;
    for (double c : a) {
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidPreferenceError("Cobb-Douglas exponents must be positive");
      }
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidPreferenceError("Cobb-Douglas exponents must sum to 1");
    }
  }
  out.params_ = std::move(exponents);
  out.sets_.resize(out.params_.size());
  return out;
}

Preference Preference::linear(std::vector<std::vector<double>> weights) {
  Preference out(Kind::Linear, common_goods(weights, "linear preference"));
  for (const auto& w : weights) {
    for (double c : w) {
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidPreferenceError("linear preference weights must be positive");
      }
    }
  }
  out.params_ = std::move(weights);
  out.sets_.resize(out.params_.size());
  return out;
}

Preference Preference::coordinate_dominance(std::size_t goods,
                                            std::vector<std::vector<std::size_t>> sets) {
  if (goods == 0) throw InvalidPreferenceError("dominance preference needs at least one good");
  if (sets.empty()) throw InvalidPreferenceError("dominance preference needs at least one node");
  Preference out(Kind::CoordinateDominance, goods);
  for (auto& j : sets) {
    std::vector<bool> seen(goods, false);
    for (std::size_t i : j) {
      if (i >= goods) throw InvalidPreferenceError("dominance index out of range");
      if (seen[i]) throw InvalidPreferenceError("dominance set lists a good twice");
      seen[i] = true;
    }
    std::sort(j.begin(), j.end());
  }
  out.sets_ = std::move(sets);
  out.params_.resize(out.sets_.size());
  return out;
}

double Preference::utility(std::size_t k, std::span<const double> u) const {
  const auto& a = params_.at(k);
  if (u.size() != goods_) throw StructuralError("bundle dimension mismatch");
  switch (kind_) {
  case Kind::CobbDouglas: {
    double s = 0.0;
    for (std::size_t i = 0; i < goods_; ++i) {
      if (!(u[i] > 0.0)) return -std::numeric_limits<double>::infinity();
      s += a[i] * std::log(u[i]);
    }
    return s;
  }
  case Kind::Linear: return std::inner_product(a.begin(), a.end(), u.begin(), 0.0);
  case Kind::CoordinateDominance: break;
  }
  throw UnsupportedModeError("dominance preferences have no utility representation");
}

bool Preference::strictly_prefers(std::size_t k, std::span<const double> u,
                                  std::span<const double> v, double margin) const {
  require_same_size(u, v, goods_);
  if (kind_ == Kind::CoordinateDominance) {
    for (std::size_t j : sets_.at(k)) {
      if (!(u[j] > v[j] + margin)) return false;
    }
    return true;
  }
  const double uu = utility(k, u);
  const double uv = utility(k, v);
  if (std::isinf(uv)) return !std::isinf(uu);
  return uu > uv + margin;
}

bool Preference::weakly_prefers(std::size_t k, std::span<const double> u,
                                std::span<const double> v, double tolerance) const {
  require_same_size(u, v, goods_);
  if (kind_ == Kind::CoordinateDominance) {
    for (std::size_t j : sets_.at(k)) {
      if (u[j] < v[j] - tolerance) return false;
    }
    return true;
  }
  const double uv = utility(k, v);
  if (std::isinf(uv)) return true;
  return utility(k, u) >= uv - tolerance;
}

std::optional<std::vector<double>> Preference::demand(std::size_t k, std::span<const double> p,
                                                      double wealth) const {
  if (p.size() != goods_) throw StructuralError("price dimension mismatch");
  std::vector<double> x(goods_, 0.0);
  switch (kind_) {
  case Kind::CobbDouglas: {
    const auto& a = params_.at(k);
    for (std::size_t i = 0; i < goods_; ++i) {
      if (!(p[i] > 0.0)) return std::nullopt;
      x[i] = a[i] * wealth / p[i];
    }
    return x;
  }
  case Kind::Linear: {
    const auto& w = params_.at(k);
    std::size_t best = 0;
    for (std::size_t i = 0; i < goods_; ++i) {
      if (!(p[i] > 0.0)) return std::nullopt;
      if (w[i] / p[i] > w[best] / p[best]) best = i;
    }
    x[best] = wealth / p[best];
    return x;
  }
  case Kind::CoordinateDominance: {
    double cost = 0.0;
    for (std::size_t j : sets_.at(k)) {
      if (!(p[j] > 0.0)) return std::nullopt;
      cost += p[j];
    }
    if (!(cost > 0.0)) return x;
    for (std::size_t j : sets_.at(k)) x[j] = wealth / cost;
    return x;
  }
  }
  return std::nullopt;
}

std::string Preference::describe() const {
  std::ostringstream os;
  switch (kind_) {
  case Kind::CobbDouglas: os << "cobb_douglas"; break;
  case Kind::Linear: os << "linear"; break;
  case Kind::CoordinateDominance: os << "coordinate_dominance"; break;
  }
  os << " over " << goods_ << " goods at " << nodes() << " nodes";
  return os.str();
}

} // namespace clab
