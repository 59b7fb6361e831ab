#include "dancer/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dancer/cli/errors.hpp"
#include "dancer/cli/io.hpp"

namespace dancer::cli {

namespace {

/// Typed access to one JSON object that remembers which keys were read, so
/// that leftovers can be reported as unknown fields.
class Section {
 public:
  Section(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a JSON object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(field(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key), "expected a finite number");
    return x;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(field(key), "must be positive");
    return x;
  }

  int integer(const std::string& key, int fallback, int min_value) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
    const auto x = v->get<long long>();
    if (x < min_value || x > 1'000'000) throw ConfigError(field(key), "must be >= " + std::to_string(min_value));
    return static_cast<int>(x);
  }

  bool boolean(const std::string& key, bool fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(field(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array() || v->empty()) throw ConfigError(field(key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto& e = (*v)[i];
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "expected a finite number");
      out.push_back(e.get<double>());
    }
    return out;
  }

  RadialGrid grid(const std::string& key, const RadialGrid& fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    Section sub(*v, field(key));
    const double r_max = sub.positive("r_max", fallback.r_max());
    const double step = sub.positive("step", fallback.step());
    sub.finish();
    try {
      return RadialGrid(r_max, step);
    } catch (const InvalidArgument& e) {
      throw ConfigError(sub.field("step"), e.what());
    }
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown field");
  }

 private:
  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

bool integer_ratio(double a, double b) {
  const double q = a / b;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void check_epsilon(const std::string& field, double eps, double eps_max) {
  if (std::abs(eps) > eps_max)
    throw ConfigError(field, "|epsilon| = " + short_number(std::abs(eps)) + " exceeds picard.epsilon_max = " +
                                 short_number(eps_max));
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "ground-state") return Command::ground_state;
  if (name == "spectrum") return Command::spectrum;
  if (name == "helmholtz") return Command::helmholtz;
  if (name == "construct") return Command::construct;
  if (name == "sweep") return Command::sweep;
  if (name == "validate-exponents") return Command::validate_exponents;
  throw ConfigError("command", "unknown command '" + name + "'");
}

std::string command_name(Command command) {
  switch (command) {
    case Command::ground_state: return "ground-state";
    case Command::spectrum: return "spectrum";
    case Command::helmholtz: return "helmholtz";
    case Command::construct: return "construct";
    case Command::sweep: return "sweep";
    case Command::validate_exponents: return "validate-exponents";
  }
  return "unknown";
}

RunConfig parse_config(Command command, const Json& doc, const Overrides& overrides) {
  RunConfig c;
  c.command = command;
  Section root(doc, "");
  if (root.string("command", command_name(command)) != command_name(command))
    throw ConfigError("command", "config was written for a different command than '" + command_name(command) + "'");

  if (const Json* p = root.find("params")) {
    Section s(*p, "params");
    c.params.m = s.integer("m", c.params.m, 1);
    c.params.n = s.integer("n", c.params.n, 3);
    c.params.p = s.number("p", c.params.p);
    if (!(c.params.p > 1.0)) throw ConfigError("params.p", "must be > 1");
    s.finish();
  }
  if (command != Command::validate_exponents && !c.params.subcritical())
    throw ConfigError("params.p", "no bound state: p is not below (m+2)/(m-2)");

  c.node_count = root.integer("node_count", c.node_count, 0);
  c.ode_grid = root.grid("ode_grid", c.ode_grid);
  c.bound_tolerance = root.positive("bound_tolerance", c.bound_tolerance);
  c.eigen_count = root.integer("eigen_count", c.eigen_count, 1);
  c.sector = root.integer("sector", c.sector, 0);
  c.grids.s_grid = root.grid("s_grid", c.grids.s_grid);
  c.grids.r_grid = root.grid("r_grid", c.grids.r_grid);
  if (c.grids.s_grid.r_max() > c.ode_grid.r_max() + 1e-12)
    throw ConfigError("s_grid.r_max", "exceeds ode_grid.r_max");
  if (!integer_ratio(c.grids.s_grid.step(), c.ode_grid.step()))
    throw ConfigError("s_grid.step", "must be an integer multiple of ode_grid.step");

  if (const Json* p = root.find("picard")) {
    Section s(*p, "picard");
    auto& pc = c.picard;
    pc.tolerance = s.positive("tolerance", pc.tolerance);
    pc.max_outer = s.integer("max_outer", pc.max_outer, 1);
    pc.max_inner = s.integer("max_inner", pc.max_inner, 1);
    pc.damping = s.positive("damping", pc.damping);
    if (pc.damping > 1.0) throw ConfigError("picard.damping", "must lie in (0, 1]");
    pc.epsilon_max = s.positive("epsilon_max", pc.epsilon_max);
    pc.holder_alpha = s.positive("holder_alpha", pc.holder_alpha);
    if (pc.holder_alpha > 1.0) throw ConfigError("picard.holder_alpha", "must lie in (0, 1]");
    pc.split.tolerance = s.positive("split_tolerance", pc.split.tolerance);
    pc.split.holder_alpha = pc.holder_alpha;
    s.finish();
  }

  c.epsilon = root.number("epsilon", c.epsilon);
  if (overrides.epsilon) c.epsilon = *overrides.epsilon;
  check_epsilon(overrides.epsilon ? "--epsilon" : "epsilon", c.epsilon, c.picard.epsilon_max);
  c.epsilons = root.numbers("epsilons", c.epsilons);
  for (std::size_t i = 0; i < c.epsilons.size(); ++i)
    check_epsilon("epsilons[" + std::to_string(i) + "]", c.epsilons[i], c.picard.epsilon_max);
  if (command == Command::sweep && c.epsilons.size() < 2)
    throw ConfigError("epsilons", "a sweep needs at least two values");

  if (const Json* p = root.find("helmholtz")) {
    Section s(*p, "helmholtz");
    auto& h = c.helmholtz;
    if (s.find("lambda")) h.lambda = s.positive("lambda", 1.0);
    if (const Json* src = s.find("sources")) {
      if (!src->is_array() || src->empty()) throw ConfigError("helmholtz.sources", "expected a non-empty array");
      for (std::size_t i = 0; i < src->size(); ++i) {
        const auto& pt = (*src)[i];
        const std::string f = "helmholtz.sources[" + std::to_string(i) + "]";
        if (!pt.is_array() || pt.size() != static_cast<std::size_t>(c.params.n))
          throw ConfigError(f, "expected an array of params.n coordinates");
        std::vector<double> y;
        for (const auto& e : pt) {
          if (!e.is_number()) throw ConfigError(f, "expected numbers");
          y.push_back(e.get<double>());
        }
        h.sources.push_back(std::move(y));
      }
    }
    h.half_width = s.positive("half_width", h.half_width);
    h.slice_step = s.positive("slice_step", h.slice_step);
    h.forcing_power = s.positive("forcing_power", h.forcing_power);
    h.k1 = s.number("k1", h.k1);
    h.k2 = s.number("k2", h.k2);
    h.k3 = s.number("k3", h.k3);
    s.finish();
  }
  if (c.helmholtz.sources.empty()) c.helmholtz.sources.push_back(std::vector<double>(c.params.n, 0.0));

  c.workers = root.integer("workers", c.workers, 1);
  c.override_exponents = root.boolean("override_exponents", false) || overrides.override_exponents;
  c.out = root.string("out", c.out.string());
  if (overrides.out) c.out = *overrides.out;
  root.finish();
  return c;
}

RunConfig load_config(Command command, const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(command, doc, overrides);
}

Json snapshot(const RunConfig& c) {
  Json sources = Json::array();
  for (const auto& y : c.helmholtz.sources) sources.push_back(y);
  Json helm = {{"sources", sources},       {"half_width", c.helmholtz.half_width},
               {"slice_step", c.helmholtz.slice_step}, {"forcing_power", c.helmholtz.forcing_power},
               {"k1", c.helmholtz.k1},      {"k2", c.helmholtz.k2},
               {"k3", c.helmholtz.k3}};
  if (c.helmholtz.lambda) helm["lambda"] = *c.helmholtz.lambda;
  Json out = {{"command", command_name(c.command)},
          {"params", to_json(c.params)},
          {"node_count", c.node_count},
          {"ode_grid", to_json(c.ode_grid)},
          {"bound_tolerance", c.bound_tolerance},
          {"eigen_count", c.eigen_count},
          {"sector", c.sector},
          {"s_grid", to_json(c.grids.s_grid)},
          {"r_grid", to_json(c.grids.r_grid)},
          {"epsilon", c.epsilon},
          {"picard",
           {{"tolerance", c.picard.tolerance},
            {"max_outer", c.picard.max_outer},
            {"max_inner", c.picard.max_inner},
            {"damping", c.picard.damping},
            {"epsilon_max", c.picard.epsilon_max},
            {"holder_alpha", c.picard.holder_alpha},
            {"split_tolerance", c.picard.split.tolerance}}},
          {"helmholtz", helm},
          {"workers", c.workers},
          {"override_exponents", c.override_exponents}};
  if (!c.epsilons.empty()) out["epsilons"] = c.epsilons;
  return out;
}

}  // namespace dancer::cli
