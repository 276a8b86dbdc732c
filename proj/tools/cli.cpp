#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "choquet/choquet.hpp"
#include "choquet/economy.hpp"
#include "choquet/error.hpp"
#include "choquet/measure_checks.hpp"
#include "json_io.hpp"

namespace clab::cli {

namespace {

using io::Json;

struct RunConfig {
  std::string config;
  std::string measure;
  std::string function;
  std::string out;
  std::string mode = "walras";
  std::string target;
  std::string scenario = "cobb-douglas";
  std::uint64_t seed = 42;
  std::size_t nodes = 0; // 0: take K from the configuration
  std::size_t cells = 1000;
  std::size_t trials = 500;
  std::size_t tnodes = 10000;
  std::size_t samples = 2000;
  std::size_t budget = kDefaultSearchBudget;
  double tolerance = 2e-3;
};

struct Outcome {
  Json report;
  int code = kSuccess;
};

Json header(const char* command) {
  return Json{{"schema", kSchema}, {"command", command}};
}

std::string twelve_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json property_json(const PropertyCheck& c) {
  Json j{{"name", c.name}, {"passed", c.passed}, {"worst_excess", c.worst_excess}};
  if (c.witness) {
    j["witness"] = {{"a", io::to_json(c.witness->a)},
                    {"b", io::to_json(c.witness->b)},
                    {"lhs", c.witness->lhs},
                    {"rhs", c.witness->rhs}};
  }
  return j;
}

Json integral_property_json(const IntegralPropertyResult& r) {
  Json j{{"name", r.name},       {"checked", r.checked},
         {"passed", r.passed},   {"trials", r.trials},
         {"worst_deviation", r.worst_deviation}};
  if (!r.counterexample.empty()) j["counterexample"] = r.counterexample;
  return j;
}

std::vector<StepFunction> read_product_function(const Json& j, std::size_t nodes,
                                                std::size_t cells) {
  if (j.is_object() && j.contains("kind") && j.at("kind") == "per_node") {
    for (const auto& item : j.items()) {
      if (item.key() != "kind" && item.key() != "sections") {
        throw ConfigError("function: unknown key \"" + item.key() + "\"");
      }
    }
    if (!j.contains("sections") || !j.at("sections").is_array()) {
      throw ConfigError("function.sections: expected an array");
    }
    const auto& s = j.at("sections");
    if (s.size() != nodes && s.size() != 1) {
      throw ConfigError("function.sections: expected " + std::to_string(nodes) + " entries");
    }
    std::vector<StepFunction> out;
    for (std::size_t k = 0; k < nodes; ++k) {
      const std::size_t idx = s.size() == 1 ? 0 : k;
      out.push_back(io::read_step_function(s[idx], "function.sections[" + std::to_string(idx) + "]", cells));
    }
    return out;
  }
  return std::vector<StepFunction>(nodes, io::read_step_function(j, "function", cells));
}

std::vector<double> parse_target(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("--target: cannot parse \"" + item + "\" as a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--target: expected a comma-separated list of numbers");
  return out;
}

Outcome cmd_integrate(const RunConfig& cfg) {
  const auto mu = io::read_measure(io::load(cfg.measure), "measure");
  const auto f = io::read_step_function(io::load(cfg.function), "function", cfg.cells);
  const double v = choquet(f, mu);
  Outcome o{header("integrate")};
  o.report["measure"] = mu.describe();
  o.report["value"] = v;
  o.report["value_12g"] = twelve_digits(v);
  return o;
}

Outcome cmd_check_measure(const RunConfig& cfg) {
  const auto mu = io::read_measure(io::load(cfg.measure), "measure");
  const auto set_report = check_properties(mu, cfg.trials, cfg.seed);
  const auto integral_report = check_choquet_properties(mu, cfg.trials, cfg.seed);
  Outcome o{header("check-measure")};
  o.report["measure"] = mu.describe();
  o.report["seed"] = cfg.seed;
  o.report["trials"] = cfg.trials;
  o.report["set_function"] = Json::array({property_json(set_report.monotone),
                                          property_json(set_report.subadditive),
                                          property_json(set_report.submodular)});
  Json props = Json::array();
  for (const auto* r : integral_report.all()) props.push_back(integral_property_json(*r));
  o.report["integral"] = props;
  const bool ok = set_report.all_passed() && integral_report.all_passed();
  o.report["passed"] = ok;
  o.code = ok ? kSuccess : kViolation;
  return o;
}

Outcome cmd_fubini(const RunConfig& cfg) {
  const auto fam = io::read_family(io::load(cfg.config), "family", cfg.nodes);
  const auto f = read_product_function(io::load(cfg.function), fam.size(), cfg.cells);
  const auto r = fubini_check(fam, f, cfg.tnodes);
  Outcome o{header("fubini-check")};
  o.report["family"] = fam.describe();
  o.report["tnodes"] = r.tnodes;
  o.report["direct"] = r.direct;
  o.report["iterated"] = r.iterated;
  o.report["deviation"] = r.deviation;
  o.report["tolerance"] = cfg.tolerance;
  const bool ok = r.deviation <= cfg.tolerance;
  o.report["passed"] = ok;
  o.code = ok ? kSuccess : kViolation;
  return o;
}

Outcome cmd_range(const RunConfig& cfg) {
  const auto fam = io::read_family(io::load(cfg.config), "family", cfg.nodes);
  const auto phi = SectionalFunction::from_values(
      cfg.function.empty() ? std::vector<std::vector<double>>(fam.size(), {1.0})
                           : io::read_node_vectors(io::load(cfg.function), "function", fam.size()));
  const auto target = parse_target(cfg.target.empty() ? "0.37" : cfg.target);
  if (target.size() != phi.dim) {
    throw ConfigError("--target has " + std::to_string(target.size()) + " components, the function has " +
                      std::to_string(phi.dim));
  }
  const auto r = range_realize(fam, phi, target);
  Outcome o{header("range-demo")};
  o.report["family"] = fam.describe();
  o.report["target"] = target;
  o.report["feasible"] = r.feasible;
  if (r.feasible) {
    o.report["achieved"] = r.achieved;
    o.report["residual"] = r.residual;
    o.report["tau"] = r.tau;
    o.report["set"] = io::to_json(r.set);
  } else {
    o.report["separating_direction"] = r.separating_direction;
    o.report["gap"] = r.gap;
  }
  return o;
}

Json walras_json(const WalrasVerdict& v) {
  Json j{{"w1", v.w1.feasible},
         {"w2", v.w2},
         {"feasibility_deviation", v.w1.deviation},
         {"failing_nodes", v.failing_nodes}};
  if (v.first_failure) {
    j["first_failure"] = {{"reason", v.first_failure->reason},
                          {"violator", v.first_failure->violator ? Json(*v.first_failure->violator)
                                                                 : Json(nullptr)}};
  }
  return j;
}

Json price_json(const PriceResult& r) {
  Json violated = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(r.violated.size(), 5); ++i) {
    violated.push_back({{"z", r.violated[i].z}, {"origin", r.violated[i].origin}});
  }
  return Json{{"found", r.found},
              {"price", r.price},
              {"worst", r.worst},
              {"cloud_size", r.cloud_size},
              {"violated_count", r.violated.size()},
              {"violated_examples", violated}};
}

Json strassen_json(const StrassenVerdict& v) {
  return Json{{"holds", v.holds}, {"max_gap", v.max_gap}, {"violations", v.violations}};
}

Outcome cmd_economy(const RunConfig& cfg) {
  const auto j = io::load(cfg.config);
  const auto eco = io::read_economy(j, "economy", cfg.nodes);
  const std::size_t K = eco.nodes();
  Outcome o{header("economy-check")};
  o.report["mode"] = cfg.mode;
  o.report["preferences"] = eco.preferences().describe();
  o.report["family"] = eco.family().describe();

  if (cfg.mode == "endowment") {
    const auto v = endowment_is_walrasian(eco, cfg.samples, cfg.seed);
    o.report["walrasian"] = v.walrasian;
    o.report["price"] = price_json(v.price);
    if (v.walras) o.report["walras"] = walras_json(*v.walras);
    o.code = v.walrasian ? kSuccess : kViolation;
    return o;
  }

  std::optional<Allocation> f;
  std::optional<std::vector<double>> p;
  if (j.contains("allocation")) {
    f = SectionalFunction::from_values(io::read_node_vectors(j.at("allocation"), "economy.allocation", K));
    o.report["allocation_source"] = "configuration";
  } else if (eco.preferences().kind() == Preference::Kind::CobbDouglas) {
    const auto eq = cobb_douglas_equilibrium(eco);
    f = eq.allocation;
    p = eq.price;
    o.report["allocation_source"] = "closed-form equilibrium";
  } else {
    f = eco.endowment();
    o.report["allocation_source"] = "endowment";
  }
  if (j.contains("price")) {
    const auto raw = io::read_node_vectors(Json::array({j.at("price")}), "economy.price", 1);
    p = normalize_price(raw.front());
  }

  if (cfg.mode == "walras") {
    if (!p) {
      const auto found = find_price(eco, *f, cfg.samples, cfg.seed);
      o.report["supporting_price"] = price_json(found);
      if (!found.found) {
        o.report["walras"] = nullptr;
        o.code = kViolation;
        return o;
      }
      p = found.price;
    }
    const auto v = check_walras(eco, *f, *p);
    o.report["price"] = *p;
    o.report["walras"] = walras_json(v);
    o.report["strassen"] = strassen_json(check_strassen(eco, *f, *p));
    o.code = v.equilibrium() ? kSuccess : kViolation;
    return o;
  }
  SearchOptions opt;
  opt.seed = cfg.seed;
  if (cfg.mode == "core") {
    const auto r = search_improvement(eco, *f, ImprovementMode::Improve, cfg.budget, opt);
    o.report["core_search"] = io::to_json(r);
    if (p) o.report["price"] = *p;
    o.code = r.witness ? kViolation : kSuccess;
    return o;
  }
  if (cfg.mode == "large-core") {
    const auto price = find_price(eco, *f, cfg.samples, cfg.seed);
    const auto r = search_improvement(eco, *f, ImprovementMode::StronglyImprove, cfg.budget, opt);
    o.report["supporting_price"] = price_json(price);
    o.report["price"] = price.found ? Json(price.price) : Json(nullptr);
    o.report["core_search"] = io::to_json(r);
    o.code = (price.found && !r.witness) ? kSuccess : kViolation;
    return o;
  }
  throw ConfigError("--mode must be one of walras, core, large-core, endowment");
}

Economy demo_cobb_douglas(std::size_t K) {
  std::vector<std::vector<double>> a(K), e(K, {1.0, 1.0});
  for (std::size_t k = 0; k < K; ++k) {
    const double y = (static_cast<double>(k) + 0.5) / static_cast<double>(K);
    a[k] = {y, 1.0 - y};
  }
  return Economy::create(
      SectionFamily::homothetic(K, FuzzyMeasure::distorted(Distortion::identity()), true),
      SectionalFunction::from_values(e), Preference::cobb_douglas(a));
}

Outcome cmd_demo(const RunConfig& cfg) {
  const std::size_t K = cfg.nodes > 0 ? cfg.nodes : kDefaultYNodes;
  Outcome o{header("demo")};
  o.report["scenario"] = cfg.scenario;
  o.report["K"] = K;
  SearchOptions opt;
  opt.seed = cfg.seed;
  if (cfg.scenario == "cobb-douglas") {
    const auto eco = demo_cobb_douglas(K);
    const auto eq = cobb_douglas_equilibrium(eco);
    const auto v = check_walras(eco, eq.allocation, eq.price);
    const auto supporting = find_price(eco, eq.allocation, cfg.samples, cfg.seed);
    const auto search = search_improvement(eco, eq.allocation, ImprovementMode::Improve, cfg.budget, opt);
    o.report["price"] = eq.price;
    o.report["walras"] = walras_json(v);
    o.report["supporting_price"] = price_json(supporting);
    o.report["strassen"] = strassen_json(check_strassen(eco, eq.allocation, eq.price));
    o.report["core_search"] = io::to_json(search);
    o.code = (v.equilibrium() && supporting.found && !search.witness) ? kSuccess : kViolation;
    return o;
  }
  if (cfg.scenario == "gains-from-trade") {
    const auto eco = demo_cobb_douglas(K);
    const auto search = search_improvement(eco, eco.endowment(), ImprovementMode::Improve, cfg.budget, opt);
    o.report["core_search"] = io::to_json(search);
    o.code = search.witness ? kViolation : kSuccess;
    return o;
  }
  if (cfg.scenario == "coordinate-dominance") {
    std::vector<std::vector<std::size_t>> sets(K);
    for (std::size_t k = 0; k < K; ++k) sets[k] = {2 * k < K ? 0u : 1u};
    const auto eco = Economy::create(
        SectionFamily::homothetic(K, FuzzyMeasure::distorted(Distortion::identity()), true),
        SectionalFunction::constant(K, std::vector<double>{1.0, 1.0}),
        Preference::coordinate_dominance(2, std::move(sets)));
    const auto v = endowment_is_walrasian(eco, cfg.samples, cfg.seed);
    o.report["walrasian"] = v.walrasian;
    o.report["price"] = price_json(v.price);
    if (v.walras) o.report["walras"] = walras_json(*v.walras);
    o.code = v.walrasian ? kSuccess : kViolation;
    return o;
  }
  throw ConfigError("--scenario must be one of cobb-douglas, gains-from-trade, coordinate-dominance");
}

void emit(const RunConfig& cfg, const Json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + cfg.out);
  file << text;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Choquet integrals over product spaces and exchange economies", "choquet-lab"};
  app.require_subcommand(1, 1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed")->check(CLI::PositiveNumber);
    sub->add_option("--K", cfg.nodes, "number of y-nodes (overrides the configuration)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--cells", cfg.cells, "x-cells for sampled functions")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
  };

  auto* integrate = app.add_subcommand("integrate", "Choquet integral of a step function");
  integrate->add_option("--measure", cfg.measure)->required();
  integrate->add_option("--function", cfg.function)->required();
  common(integrate);

  auto* check = app.add_subcommand("check-measure", "property checks for a fuzzy measure");
  check->add_option("--measure", cfg.measure)->required();
  check->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  common(check);

  auto* fubini = app.add_subcommand("fubini-check", "direct against iterated product integral");
  fubini->add_option("--config", cfg.config, "section family JSON")->required();
  fubini->add_option("--function", cfg.function)->required();
  fubini->add_option("--tnodes", cfg.tnodes)->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
  fubini->add_option("--tolerance", cfg.tolerance)->check(CLI::PositiveNumber);
  common(fubini);

  auto* range = app.add_subcommand("range-demo", "realize a point of the range of a sectional integral");
  range->add_option("--config", cfg.config, "section family JSON")->required();
  range->add_option("--function", cfg.function, "per-node vectors JSON (default 1)");
  range->add_option("--target", cfg.target, "comma-separated target point");
  common(range);

  auto* economy = app.add_subcommand("economy-check", "equilibrium and core checks");
  economy->add_option("--config", cfg.config, "economy JSON")->required();
  economy->add_option("--mode", cfg.mode)
      ->check(CLI::IsMember({"walras", "core", "large-core", "endowment"}));
  economy->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  economy->add_option("--budget", cfg.budget)->check(CLI::PositiveNumber);
  common(economy);

  auto* demo = app.add_subcommand("demo", "built-in scenarios");
  demo->add_option("--scenario", cfg.scenario)
      ->check(CLI::IsMember({"cobb-douglas", "gains-from-trade", "coordinate-dominance"}));
  demo->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  demo->add_option("--budget", cfg.budget)->check(CLI::PositiveNumber);
  common(demo);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kFailure;
  }

  try {
    Outcome o;
    if (integrate->parsed()) o = cmd_integrate(cfg);
    else if (check->parsed()) o = cmd_check_measure(cfg);
    else if (fubini->parsed()) o = cmd_fubini(cfg);
    else if (range->parsed()) o = cmd_range(cfg);
    else if (economy->parsed()) o = cmd_economy(cfg);
    else o = cmd_demo(cfg);
    emit(cfg, o.report, out);
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kFailure;
  }
}

} // namespace clab::cli
