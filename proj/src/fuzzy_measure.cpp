#include "choquet/fuzzy_measure.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "choquet/error.hpp"

namespace clab {

namespace {

void require_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("measure scale must be positive and finite");
  }
}

} // namespace

FuzzyMeasure FuzzyMeasure::distorted(Distortion g, double scale) {
  require_scale(scale);
  FuzzyMeasure mu;
  mu.mode_ = Mode::Distorted;
  mu.scale_ = scale;
  mu.distortion_ = std::move(g);
  mu.total_ = scale * mu.distortion_(1.0);
  return mu;
}

FuzzyMeasure FuzzyMeasure::sectioned(std::vector<IntervalSet> blocks, std::vector<double> weights,
                                     double scale) {
  require_scale(scale);
  if (blocks.empty() || blocks.size() != weights.size()) {
    throw StructuralError("sectioned measure needs one weight per block");
  }
  IntervalSet covered;
  double length_sum = 0.0;
  for (const auto& block : blocks) {
    if (block.lebesgue() <= 0.0) throw StructuralError("sectioned measure has a null block");
    if (!covered.intersect(block).empty()) {
      throw StructuralError("sectioned measure blocks overlap");
    }
    covered = covered.unite(block);
    length_sum += block.lebesgue();
  }
  if (std::abs(length_sum - 1.0) > 1e-12 || std::abs(covered.lebesgue() - 1.0) > 1e-12) {
    throw StructuralError("sectioned measure blocks do not cover [0, 1)");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("sectioned measure weights must be non-negative");
    }
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw DomainError("sectioned measure weights sum to zero");

  FuzzyMeasure mu;
  mu.mode_ = Mode::Sectioned;
  mu.scale_ = scale;
  mu.blocks_ = std::move(blocks);
  mu.weights_ = std::move(weights);
  for (const auto& block : mu.blocks_) mu.block_lebesgue_.push_back(block.lebesgue());
  mu.total_ = scale * weight_sum;
  return mu;
}

double FuzzyMeasure::operator()(const IntervalSet& a) const {
  if (a.empty()) return 0.0;
  if (mode_ == Mode::Distorted) return scale_ * distortion_(a.lebesgue());
  double value = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    value += weights_[i] * a.intersect(blocks_[i]).lebesgue() / block_lebesgue_[i];
  }
  return scale_ * value;
}

FuzzyMeasure FuzzyMeasure::scaled(double c) const {
  require_scale(c);
  FuzzyMeasure copy = *this;
  copy.scale_ *= c;
  copy.total_ *= c;
  return copy;
}

bool FuzzyMeasure::submodular_by_construction() const {
  return mode_ == Mode::Sectioned || distortion_.concave();
}

std::string FuzzyMeasure::describe() const {
  std::ostringstream os;
  if (mode_ == Mode::Distorted) {
    os << "distorted " << distortion_.describe();
  } else {
    os << "sectioned-additive (" << blocks_.size() << " blocks)";
  }
  if (scale_ != 1.0) os << " x " << scale_;
  return os.str();
}

FuzzyMeasure::Accumulator::Accumulator(const FuzzyMeasure& mu)
    : mu_(&mu), block_lengths_(mu.blocks_.size(), 0.0) {}

void FuzzyMeasure::Accumulator::add(const IntervalSet& piece) {
  if (mu_->mode_ == Mode::Distorted) {
    length_ += piece.lebesgue();
    return;
  }
  for (std::size_t i = 0; i < mu_->blocks_.size(); ++i) {
    block_lengths_[i] += piece.intersect(mu_->blocks_[i]).lebesgue();
  }
}

double FuzzyMeasure::Accumulator::value() const {
  if (mu_->mode_ == Mode::Distorted) return mu_->scale_ * mu_->distortion_(length_);
  double value = 0.0;
  for (std::size_t i = 0; i < block_lengths_.size(); ++i) {
    value += mu_->weights_[i] * block_lengths_[i] / mu_->block_lebesgue_[i];
  }
  return mu_->scale_ * value;
}

} // namespace clab
