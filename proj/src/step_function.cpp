#include "choquet/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "choquet/error.hpp"

namespace clab {

namespace {

// Checks that the cells tile [0, 1) exactly and returns (interval, cell index)
// pairs sorted by position.
std::vector<std::pair<Interval, std::size_t>> tile(const std::vector<const IntervalSet*>& cells) {
  std::vector<std::pair<Interval, std::size_t>> parts;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const auto& iv : cells[i]->intervals()) parts.emplace_back(iv, i);
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
  double cursor = 0.0;
  for (const auto& [iv, idx] : parts) {
    if (iv.lo != cursor) {
      throw StructuralError(iv.lo > cursor ? "step function cells leave a gap at " +
                                                 std::to_string(cursor)
                                           : "step function cells overlap at " +
                                                 std::to_string(iv.lo));
    }
    cursor = iv.hi;
  }
  if (cursor != 1.0) throw StructuralError("step function cells do not reach 1");
  return parts;
}

void require_value(double v) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError("step function value must be finite and non-negative, got " +
                      std::to_string(v));
  }
}

std::vector<double> breakpoints_of(const std::vector<StepFunction::Atom>& atoms) {
  std::vector<double> out;
  for (const auto& a : atoms) out.push_back(a.where.lo);
  out.push_back(1.0);
  return out;
}

double value_at(const std::vector<StepFunction::Atom>& atoms, double x) {
  auto it = std::upper_bound(atoms.begin(), atoms.end(), x,
                             [](double v, const StepFunction::Atom& a) { return v < a.where.hi; });
  if (it == atoms.end()) return atoms.empty() ? 0.0 : atoms.back().value;
  return it->value;
}

} // namespace

StepFunction StepFunction::from_pieces(std::vector<Piece> pieces) {
  std::erase_if(pieces, [](const Piece& p) { return p.cell.empty(); });
  std::vector<const IntervalSet*> cells;
  for (const auto& p : pieces) {
    require_value(p.value);
    cells.push_back(&p.cell);
  }
  tile(cells);
  return StepFunction(std::move(pieces));
}

StepFunction StepFunction::constant(double c) {
  return from_pieces({Piece{IntervalSet::full(), c}});
}

StepFunction StepFunction::indicator(const IntervalSet& a, double height) {
  return from_pieces({Piece{a, height}, Piece{a.complement(), 0.0}});
}

StepFunction StepFunction::on_uniform_cells(std::span<const double> values) {
  if (values.empty()) throw StructuralError("step function needs at least one cell");
  std::vector<double> breaks(values.size() + 1);
  for (std::size_t i = 0; i <= values.size(); ++i) {
    breaks[i] = static_cast<double>(i) / static_cast<double>(values.size());
  }
  return on_breaks(breaks, values);
}

StepFunction StepFunction::on_breaks(std::span<const double> breaks,
                                     std::span<const double> values) {
  if (breaks.size() != values.size() + 1) {
    throw StructuralError("step function needs one more break than values");
  }
  std::vector<Piece> pieces;
  pieces.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) throw StructuralError("step function breaks must increase");
    pieces.push_back({IntervalSet::interval(breaks[i], breaks[i + 1]), values[i]});
  }
  return from_pieces(std::move(pieces));
}

double StepFunction::max_value() const {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::max(m, p.value);
  return m;
}

double StepFunction::operator()(double x) const {
  for (const auto& p : pieces_) {
    if (p.cell.contains(x)) return p.value;
  }
  return 0.0;
}

IntervalSet StepFunction::superlevel(double t) const {
  std::vector<Interval> parts;
  for (const auto& p : pieces_) {
    if (p.value > t) parts.insert(parts.end(), p.cell.intervals().begin(), p.cell.intervals().end());
  }
  return IntervalSet::union_of(std::move(parts));
}

std::vector<StepFunction::Atom> StepFunction::atoms() const {
  std::vector<Atom> out;
  for (const auto& p : pieces_) {
    for (const auto& iv : p.cell.intervals()) out.push_back({iv, p.value});
  }
  std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) { return a.where.lo < b.where.lo; });
  return out;
}

StepFunction StepFunction::restricted(const IntervalSet& a) const {
  std::vector<Piece> out;
  out.reserve(pieces_.size() + 1);
  IntervalSet outside = a.complement();
  for (const auto& p : pieces_) {
    IntervalSet inside = p.cell.intersect(a);
    if (!inside.empty()) out.push_back({std::move(inside), p.value});
  }
  if (!outside.empty()) out.push_back({std::move(outside), 0.0});
  return StepFunction(std::move(out));
}

StepFunction StepFunction::scaled(double c) const {
  require_value(c);
  auto out = pieces_;
  for (auto& p : out) p.value *= c;
  return StepFunction(std::move(out));
}

StepFunction StepFunction::plus(double c) const {
  auto out = pieces_;
  for (auto& p : out) {
    p.value += c;
    require_value(p.value);
  }
  return StepFunction(std::move(out));
}

StepFunction StepFunction::min_with(double c) const {
  auto out = pieces_;
  for (auto& p : out) p.value = std::min(p.value, c);
  return StepFunction(std::move(out));
}

StepFunction StepFunction::combine(const StepFunction& f, const StepFunction& h,
                                   const std::function<double(double, double)>& op) {
  const auto fa = f.atoms();
  const auto ha = h.atoms();
  std::vector<Piece> out;
  std::size_t i = 0, j = 0;
  double lo = 0.0;
  Interval run{0.0, 0.0};
  double run_value = 0.0;
  bool have_run = false;
  while (i < fa.size() && j < ha.size()) {
    const double hi = std::min(fa[i].where.hi, ha[j].where.hi);
    const double v = op(fa[i].value, ha[j].value);
    require_value(v);
    if (have_run && v == run_value) {
      run.hi = hi;
    } else {
      if (have_run) out.push_back({IntervalSet::interval(run.lo, run.hi), run_value});
      run = {lo, hi};
      run_value = v;
      have_run = true;
    }
    lo = hi;
    if (fa[i].where.hi == hi) ++i;
    if (ha[j].where.hi == hi) ++j;
  }
  if (have_run) out.push_back({IntervalSet::interval(run.lo, run.hi), run_value});
  return StepFunction(std::move(out));
}

StepFunction operator+(const StepFunction& f, const StepFunction& h) {
  return StepFunction::combine(f, h, std::plus<double>{});
}

// ---------------------------------------------------------------------------

VectorStepFunction VectorStepFunction::from_pieces(std::size_t dim, std::vector<Piece> pieces) {
  if (dim == 0) throw StructuralError("vector step function needs dimension >= 1");
  std::erase_if(pieces, [](const Piece& p) { return p.cell.empty(); });
  std::vector<const IntervalSet*> cells;
  for (const auto& p : pieces) {
    if (p.value.size() != dim) throw StructuralError("vector step function value has wrong dimension");
    for (double v : p.value) require_value(v);
    cells.push_back(&p.cell);
  }
  tile(cells);
  return VectorStepFunction(dim, std::move(pieces));
}

VectorStepFunction VectorStepFunction::constant(std::span<const double> value) {
  return from_pieces(value.size(),
                     {Piece{IntervalSet::full(), std::vector<double>(value.begin(), value.end())}});
}

VectorStepFunction VectorStepFunction::from_scalar(const StepFunction& f) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) out.push_back({p.cell, {p.value}});
  return VectorStepFunction(1, std::move(out));
}

VectorStepFunction VectorStepFunction::from_components(std::span<const StepFunction> components) {
  if (components.empty()) throw StructuralError("vector step function needs components");
  std::vector<std::vector<StepFunction::Atom>> atoms;
  std::vector<double> breaks;
  for (const auto& c : components) {
    atoms.push_back(c.atoms());
    auto b = breakpoints_of(atoms.back());
    breaks.insert(breaks.end(), b.begin(), b.end());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<Piece> out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    std::vector<double> value;
    for (const auto& a : atoms) value.push_back(value_at(a, mid));
    out.push_back({IntervalSet::interval(breaks[k], breaks[k + 1]), std::move(value)});
  }
  return VectorStepFunction(components.size(), std::move(out));
}

StepFunction VectorStepFunction::component(std::size_t i) const {
  if (i >= dim_) throw StructuralError("component index out of range");
  std::vector<StepFunction::Piece> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back({p.cell, p.value[i]});
  return StepFunction::from_pieces(std::move(out));
}

StepFunction VectorStepFunction::dot(std::span<const double> p) const {
  if (p.size() != dim_) throw StructuralError("price dimension mismatch");
  std::vector<StepFunction::Piece> out;
  out.reserve(pieces_.size());
  for (const auto& piece : pieces_) {
    double v = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) v += p[i] * piece.value[i];
    out.push_back({piece.cell, v});
  }
  return StepFunction::from_pieces(std::move(out));
}

VectorStepFunction VectorStepFunction::restricted(const IntervalSet& a) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) {
    IntervalSet inside = p.cell.intersect(a);
    if (!inside.empty()) out.push_back({std::move(inside), p.value});
  }
  IntervalSet outside = a.complement();
  if (!outside.empty()) out.push_back({std::move(outside), std::vector<double>(dim_, 0.0)});
  return VectorStepFunction(dim_, std::move(out));
}

// ---------------------------------------------------------------------------

StepFunction random_step_function(Rng& rng, std::size_t max_cells, double max_value) {
  const std::size_t atoms =
      1 + std::uniform_int_distribution<std::size_t>(0, max_cells > 0 ? max_cells - 1 : 0)(rng);
  std::vector<double> breaks{0.0, 1.0};
  while (breaks.size() < atoms + 1) breaks.push_back(snap_to_grid(uniform(rng)));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Atoms are dealt into cells; roughly a third of cells absorb a second atom.
  std::vector<std::vector<Interval>> cells;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Interval iv{breaks[i], breaks[i + 1]};
    if (!cells.empty() && uniform(rng) < 0.3) {
      const std::size_t target = std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng);
      cells[target].push_back(iv);
    } else {
      cells.push_back({iv});
    }
  }
  std::vector<StepFunction::Piece> pieces;
  for (auto& c : cells) {
    double v = uniform(rng, 0.0, max_value);
    if (uniform(rng) < 0.1) v = 0.0;
    pieces.push_back({IntervalSet::union_of(std::move(c)), v});
  }
  return StepFunction::from_pieces(std::move(pieces));
}

std::pair<StepFunction, StepFunction> random_comonotone_pair(Rng& rng, std::size_t cells,
                                                             double max_value) {
  if (cells == 0) cells = 1;
  std::vector<double> breaks{0.0, 1.0};
  while (breaks.size() < cells + 1) breaks.push_back(snap_to_grid(uniform(rng)));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const std::size_t n = breaks.size() - 1;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> fv(n), hv(n);
  for (auto& v : fv) v = uniform(rng, 0.0, max_value);
  for (auto& v : hv) v = uniform(rng, 0.0, max_value);
  std::sort(fv.begin(), fv.end());
  std::sort(hv.begin(), hv.end());

  std::vector<double> f_vals(n), h_vals(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    f_vals[order[rank]] = fv[rank];
    h_vals[order[rank]] = hv[rank];
  }
  return {StepFunction::on_breaks(breaks, f_vals), StepFunction::on_breaks(breaks, h_vals)};
}

} // namespace clab
