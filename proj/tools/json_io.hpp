#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "choquet/economy.hpp"
#include "choquet/fuzzy_measure.hpp"
#include "choquet/product_space.hpp"
#include "choquet/step_function.hpp"

namespace clab::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; ConfigError on a missing file or bad syntax.
Json load(const std::filesystem::path& path);

// Every reader rejects unknown keys and wrong types with ConfigError whose
// message names the offending JSON path.

Distortion read_distortion(const Json& j, const std::string& where);
FuzzyMeasure read_measure(const Json& j, const std::string& where);
IntervalSet read_interval_set(const Json& j, const std::string& where);

/// {"kind":"steps","cells":[..],"values":[..]}, {"kind":"uniform","values":[..]},
/// {"kind":"constant","value":c}, {"kind":"indicator","set":[..],"height":h},
/// {"kind":"power","exponent":r,"cells":N} (x^r sampled at cell midpoints).
/// `default_cells` applies when a sampled kind omits "cells".
StepFunction read_step_function(const Json& j, const std::string& where,
                                std::size_t default_cells);

/// {"K":..,"mode":"homothetic"|"sectioned"|"heterogeneous",...}. A positive
/// `k_override` replaces "K".
SectionFamily read_family(const Json& j, const std::string& where, std::size_t k_override = 0);

/// Per-node vectors: an array with one row per node (or a single row that is
/// broadcast), {"affine":[v0, v1]} for v0 + y (v1 - v0), or
/// {"piecewise":[{"y":[lo,hi],"value":v},..]}.
std::vector<std::vector<double>> read_node_vectors(const Json& j, const std::string& where,
                                                   std::size_t nodes);

Economy read_economy(const Json& j, const std::string& where, std::size_t k_override = 0);

Json to_json(const IntervalSet& a);
Json to_json(const ProductSet& h);
Json to_json(const ImprovementWitness& w);
Json to_json(const SearchReport& r);

} // namespace clab::io
