#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "choquet/error.hpp"

namespace clab::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) fail(where, "unknown key \"" + item.key() + "\"");
  }
}

const Json& require(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) fail(where, "expected a positive integer");
  return j.get<std::size_t>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Interval read_interval(const Json& j, const std::string& where) {
  const auto v = numbers(j, where);
  if (v.size() != 2) fail(where, "expected [lo, hi]");
  return {v[0], v[1]};
}

// Either a single interval [a, b] or an interval set [[a, b], ...].
IntervalSet read_block(const Json& j, const std::string& where) {
  if (j.is_array() && !j.empty() && j[0].is_number()) {
    const auto iv = read_interval(j, where);
    return IntervalSet::from_intervals({iv});
  }
  return read_interval_set(j, where);
}

template <class F>
auto rethrow_as_config(const std::string& where, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

double node_y(std::size_t k, std::size_t nodes) {
  return (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
}

// Per-node items: an array of length K or 1, or {"piecewise":[{"y":..,"value":..}]}.
template <class Item, class Read>
std::vector<Item> read_per_node(const Json& j, const std::string& where, std::size_t nodes,
                                Read&& read) {
  std::vector<Item> out;
  if (j.is_array()) {
    if (j.size() != nodes && j.size() != 1) {
      fail(where, "expected " + std::to_string(nodes) + " entries (or 1 to broadcast), got " +
                      std::to_string(j.size()));
    }
    for (std::size_t k = 0; k < nodes; ++k) {
      const std::size_t idx = j.size() == 1 ? 0 : k;
      out.push_back(read(j[idx], where + "[" + std::to_string(idx) + "]"));
    }
    return out;
  }
  allow_keys(j, where, {"piecewise"});
  const auto& pieces = require(j, where, "piecewise");
  if (!pieces.is_array() || pieces.empty()) fail(where + ".piecewise", "expected a non-empty array");
  std::vector<std::pair<Interval, Item>> table;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string w = where + ".piecewise[" + std::to_string(i) + "]";
    allow_keys(pieces[i], w, {"y", "value"});
    table.emplace_back(read_interval(require(pieces[i], w, "y"), w + ".y"),
                       read(require(pieces[i], w, "value"), w + ".value"));
  }
  for (std::size_t k = 0; k < nodes; ++k) {
    const double y = node_y(k, nodes);
    bool hit = false;
    for (const auto& [iv, item] : table) {
      if (y >= iv.lo && y < iv.hi) {
        out.push_back(item);
        hit = true;
        break;
      }
    }
    if (!hit) fail(where, "no piece covers y = " + std::to_string(y));
  }
  return out;
}

} // namespace

Json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

Distortion read_distortion(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto kind = text(require(j, where, "kind"), where + ".kind");
  return rethrow_as_config(where, [&] {
    if (kind == "identity") {
      allow_keys(j, where, {"kind"});
      return Distortion::identity();
    }
    if (kind == "power") {
      allow_keys(j, where, {"kind", "alpha"});
      return Distortion::power(number(require(j, where, "alpha"), where + ".alpha"));
    }
    if (kind == "piecewise_linear") {
      allow_keys(j, where, {"kind", "knots"});
      const auto& knots = require(j, where, "knots");
      if (!knots.is_array()) fail(where + ".knots", "expected an array of [s, g] pairs");
      std::vector<Knot> ks;
      for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto p = read_interval(knots[i], where + ".knots[" + std::to_string(i) + "]");
        ks.push_back({p.lo, p.hi});
      }
      return Distortion::piecewise_linear(std::move(ks));
    }
    fail(where + ".kind", "unknown distortion kind \"" + kind + "\"");
  });
}

IntervalSet read_interval_set(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of [lo, hi] pairs");
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ivs.push_back(read_interval(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return rethrow_as_config(where, [&] { return IntervalSet::from_intervals(std::move(ivs)); });
}

FuzzyMeasure read_measure(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto mode = text(require(j, where, "mode"), where + ".mode");
  const double scale = j.contains("scale") ? number(j.at("scale"), where + ".scale") : 1.0;
  return rethrow_as_config(where, [&] {
    if (mode == "distorted") {
      allow_keys(j, where, {"mode", "distortion", "scale"});
      return FuzzyMeasure::distorted(
          read_distortion(require(j, where, "distortion"), where + ".distortion"), scale);
    }
    if (mode == "sectioned") {
      allow_keys(j, where, {"mode", "blocks", "weights", "scale"});
      const auto& blocks = require(j, where, "blocks");
      if (!blocks.is_array()) fail(where + ".blocks", "expected an array");
      std::vector<IntervalSet> bs;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        bs.push_back(read_block(blocks[i], where + ".blocks[" + std::to_string(i) + "]"));
      }
      return FuzzyMeasure::sectioned(std::move(bs),
                                     numbers(require(j, where, "weights"), where + ".weights"),
                                     scale);
    }
    fail(where + ".mode", "unknown measure mode \"" + mode + "\"");
  });
}

StepFunction read_step_function(const Json& j, const std::string& where,
                                std::size_t default_cells) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto kind = text(require(j, where, "kind"), where + ".kind");
  return rethrow_as_config(where, [&] {
    if (kind == "steps") {
      allow_keys(j, where, {"kind", "cells", "values"});
      const auto& cells = require(j, where, "cells");
      const auto values = numbers(require(j, where, "values"), where + ".values");
      if (!cells.is_array() || cells.size() != values.size()) {
        fail(where, "\"cells\" and \"values\" must have the same length");
      }
      std::vector<StepFunction::Piece> pieces;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        pieces.push_back({read_block(cells[i], where + ".cells[" + std::to_string(i) + "]"), values[i]});
      }
      return StepFunction::from_pieces(std::move(pieces));
    }
    if (kind == "uniform") {
      allow_keys(j, where, {"kind", "values"});
      const auto values = numbers(require(j, where, "values"), where + ".values");
      return StepFunction::on_uniform_cells(values);
    }
    if (kind == "constant") {
      allow_keys(j, where, {"kind", "value"});
      return StepFunction::constant(number(require(j, where, "value"), where + ".value"));
    }
    if (kind == "indicator") {
      allow_keys(j, where, {"kind", "set", "height"});
      const double h = j.contains("height") ? number(j.at("height"), where + ".height") : 1.0;
      return StepFunction::indicator(read_interval_set(require(j, where, "set"), where + ".set"), h);
    }
    if (kind == "power") {
      allow_keys(j, where, {"kind", "exponent", "cells"});
      const double r = number(require(j, where, "exponent"), where + ".exponent");
      const std::size_t n =
          j.contains("cells") ? count(j.at("cells"), where + ".cells") : default_cells;
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = std::pow((static_cast<double>(i) + 0.5) / n, r);
      return StepFunction::on_uniform_cells(v);
    }
    fail(where + ".kind", "unknown function kind \"" + kind + "\"");
  });
}

SectionFamily read_family(const Json& j, const std::string& where, std::size_t k_override) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::size_t K =
      k_override > 0 ? k_override
                     : (j.contains("K") ? count(j.at("K"), where + ".K") : kDefaultYNodes);
  const auto mode = text(require(j, where, "mode"), where + ".mode");
  const bool normalized = !j.contains("normalized") || [&] {
    if (!j.at("normalized").is_boolean()) fail(where + ".normalized", "expected a boolean");
    return j.at("normalized").get<bool>();
  }();
  return rethrow_as_config(where, [&] {
    if (mode == "homothetic") {
      allow_keys(j, where, {"K", "mode", "distortion", "measure", "normalized", "scales"});
      if (j.contains("distortion") == j.contains("measure")) {
        fail(where, "give exactly one of \"distortion\" or \"measure\"");
      }
      const auto base = j.contains("measure")
                            ? read_measure(j.at("measure"), where + ".measure")
                            : FuzzyMeasure::distorted(read_distortion(j.at("distortion"), where + ".distortion"));
      std::vector<double> scales;
      if (j.contains("scales")) {
        for (const auto& row : read_node_vectors(j.at("scales"), where + ".scales", K)) {
          if (row.size() != 1) fail(where + ".scales", "expected one scale per node");
          scales.push_back(row[0]);
        }
      }
      return SectionFamily::homothetic(K, base, normalized, std::move(scales));
    }
    if (mode == "sectioned") {
      allow_keys(j, where, {"K", "mode", "blocks", "yintervals"});
      const auto& blocks = require(j, where, "blocks");
      const auto& ys = require(j, where, "yintervals");
      if (!blocks.is_array() || !ys.is_array()) fail(where, "blocks and yintervals must be arrays");
      std::vector<IntervalSet> bs;
      std::vector<Interval> js;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        bs.push_back(read_block(blocks[i], where + ".blocks[" + std::to_string(i) + "]"));
      }
      for (std::size_t i = 0; i < ys.size(); ++i) {
        js.push_back(read_interval(ys[i], where + ".yintervals[" + std::to_string(i) + "]"));
      }
      return SectionFamily::sectioned(K, std::move(bs), std::move(js));
    }
    if (mode == "heterogeneous") {
      allow_keys(j, where, {"K", "mode", "distortions", "alpha_linear", "normalized"});
      if (j.contains("distortions") == j.contains("alpha_linear")) {
        fail(where, "give exactly one of \"distortions\" or \"alpha_linear\"");
      }
      std::vector<FuzzyMeasure> ms;
      if (j.contains("alpha_linear")) {
        const auto ends = numbers(j.at("alpha_linear"), where + ".alpha_linear");
        if (ends.size() != 2) fail(where + ".alpha_linear", "expected [alpha at y=0, alpha at y=1]");
        for (std::size_t k = 0; k < K; ++k) {
          const double y = node_y(k, K);
          ms.push_back(FuzzyMeasure::distorted(Distortion::power(ends[0] + y * (ends[1] - ends[0]))));
        }
      } else {
        ms = read_per_node<FuzzyMeasure>(j.at("distortions"), where + ".distortions", K,
                                         [](const Json& d, const std::string& w) {
                                           return FuzzyMeasure::distorted(read_distortion(d, w));
                                         });
      }
      return SectionFamily::heterogeneous(std::move(ms), normalized);
    }
    fail(where + ".mode", "unknown family mode \"" + mode + "\"");
  });
}

std::vector<std::vector<double>> read_node_vectors(const Json& j, const std::string& where,
                                                   std::size_t nodes) {
  if (j.is_object() && j.contains("affine")) {
    allow_keys(j, where, {"affine"});
    const auto& ends = j.at("affine");
    if (!ends.is_array() || ends.size() != 2) fail(where + ".affine", "expected [v at y=0, v at y=1]");
    const auto v0 = numbers(ends[0], where + ".affine[0]");
    const auto v1 = numbers(ends[1], where + ".affine[1]");
    if (v0.size() != v1.size()) fail(where + ".affine", "end points differ in length");
    std::vector<std::vector<double>> out(nodes, std::vector<double>(v0.size()));
    for (std::size_t k = 0; k < nodes; ++k) {
      const double y = node_y(k, nodes);
      for (std::size_t i = 0; i < v0.size(); ++i) out[k][i] = v0[i] + y * (v1[i] - v0[i]);
    }
    return out;
  }
  return read_per_node<std::vector<double>>(j, where, nodes, [](const Json& v, const std::string& w) {
    if (v.is_number()) return std::vector<double>{number(v, w)};
    return numbers(v, w);
  });
}

Economy read_economy(const Json& j, const std::string& where, std::size_t k_override) {
  allow_keys(j, where, {"family", "n", "endowment", "preferences", "allocation", "price"});
  auto fam = read_family(require(j, where, "family"), where + ".family", k_override);
  const std::size_t K = fam.size();
  const std::size_t n = count(require(j, where, "n"), where + ".n");
  auto e = read_node_vectors(require(j, where, "endowment"), where + ".endowment", K);
  for (const auto& row : e) {
    if (row.size() != n) fail(where + ".endowment", "rows must have n entries");
  }
  const auto& pj = require(j, where, "preferences");
  const std::string pw = where + ".preferences";
  if (!pj.is_object()) fail(pw, "expected an object");
  const auto kind = text(require(pj, pw, "kind"), pw + ".kind");
  return rethrow_as_config(where, [&] {
    std::optional<Preference> prefs;
    if (kind == "cobb_douglas") {
      allow_keys(pj, pw, {"kind", "exponents"});
      prefs = Preference::cobb_douglas(read_node_vectors(require(pj, pw, "exponents"), pw + ".exponents", K));
    } else if (kind == "linear") {
      allow_keys(pj, pw, {"kind", "weights"});
      prefs = Preference::linear(read_node_vectors(require(pj, pw, "weights"), pw + ".weights", K));
    } else if (kind == "coordinate_dominance") {
      allow_keys(pj, pw, {"kind", "sets"});
      auto sets = read_per_node<std::vector<std::size_t>>(
          require(pj, pw, "sets"), pw + ".sets", K, [n](const Json& v, const std::string& w) {
            std::vector<std::size_t> s;
            if (!v.is_array()) fail(w, "expected an array of 1-based goods");
            for (const auto& x : v) {
              if (!x.is_number_integer() || x.get<long long>() < 1 ||
                  x.get<std::size_t>() > n) {
                fail(w, "goods are numbered 1.." + std::to_string(n));
              }
              s.push_back(x.get<std::size_t>() - 1);
            }
            return s;
          });
      prefs = Preference::coordinate_dominance(n, std::move(sets));
    } else {
      fail(pw + ".kind", "unknown preference kind \"" + kind + "\"");
    }
    return Economy::create(std::move(fam), SectionalFunction::from_values(std::move(e)), std::move(*prefs));
  });
}

Json to_json(const IntervalSet& a) {
  Json out = Json::array();
  for (const auto& iv : a.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

Json to_json(const ProductSet& h) {
  Json sections = Json::array();
  for (const auto& s : h.sections) sections.push_back(to_json(s));
  return Json{{"sections", sections}};
}

Json to_json(const ImprovementWitness& w) {
  Json sections = Json::array();
  for (const auto& s : w.allocation.sections) {
    Json pieces = Json::array();
    for (const auto& p : s.pieces()) pieces.push_back({{"cell", to_json(p.cell)}, {"value", p.value}});
    sections.push_back(pieces);
  }
  return Json{{"mode", w.mode == ImprovementMode::Improve ? "improve" : "strongly_improve"},
              {"origin", w.origin},
              {"coalition", to_json(w.coalition)},
              {"allocation", {{"sections", sections}}}};
}

Json to_json(const SearchReport& r) {
  return Json{{"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
              {"searched",
               {{"coalitions", r.coalitions},
                {"generators", r.generators},
                {"evaluations", r.evaluations},
                {"truncated", r.truncated}}}};
}

} // namespace clab::io
