#include "smartflow/config.hpp"

#include "smartflow/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace smartflow {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += ", ";
    s += fmt(v[i]);
  }
  return s;
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value,
                            const char *expected) {
  throw ConfigError("config: key '" + key + "' has malformed value '" + value +
                    "' (expected " + expected + ")");
}

double to_double(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  char *end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
    bad_value(key, value, "a finite number");
  return d;
}

long long to_integer(const std::string &key, const std::string &value,
                     long long lo) {
  const std::string v = trim(value);
  char *end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || n < lo)
    bad_value(key, value, "an integer in range");
  return n;
}

std::uint64_t to_unsigned(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  char *end = nullptr;
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size())
    bad_value(key, value, "a non-negative integer");
  return n;
}

bool to_bool(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  if (v == "true")
    return true;
  if (v == "false")
    return false;
  bad_value(key, value, "true or false");
}

std::vector<double> to_list(const std::string &key, const std::string &value) {
  std::vector<double> out;
  const std::string v = trim(value);
  if (v.empty())
    return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, item));
  return out;
}

template <typename E>
E to_enum(const std::string &key, const std::string &value,
          const std::vector<std::pair<const char *, E>> &names) {
  const std::string v = trim(value);
  for (const auto &[n, e] : names)
    if (v == n)
      return e;
  std::string expected = "one of";
  for (const auto &[n, e] : names)
    expected += std::string(" ") + n;
  bad_value(key, value, expected.c_str());
}

template <typename E>
const char *enum_name(E e, const std::vector<std::pair<const char *, E>> &names) {
  for (const auto &[n, v] : names)
    if (v == e)
      return n;
  return "?";
}

const std::vector<std::pair<const char *, ProblemKind>> kProblems{
    {"flow-rate", ProblemKind::FlowRate},
    {"pressure-drop", ProblemKind::PressureDrop}};
const std::vector<std::pair<const char *, ExponentSpec::Kind>> kExponents{
    {"constant", ExponentSpec::Kind::Constant},
    {"piecewise", ExponentSpec::Kind::Piecewise},
    {"affine", ExponentSpec::Kind::Affine}};
const std::vector<std::pair<const char *, DataSpec::Kind>> kData{
    {"none", DataSpec::Kind::None},
    {"constant", DataSpec::Kind::Constant},
    {"cos", DataSpec::Kind::Cos},
    {"table", DataSpec::Kind::Table},
    {"womersley", DataSpec::Kind::Womersley}};
const std::vector<std::pair<const char *, AlphaDiscretization>> kAlphaDisc{
    {"nodal", AlphaDiscretization::Nodal},
    {"average", AlphaDiscretization::Average}};
const std::vector<std::pair<const char *, BenchmarkSpec::Kind>> kBenchmarks{
    {"womersley", BenchmarkSpec::Kind::Womersley},
    {"constant", BenchmarkSpec::Kind::Constant},
    {"even", BenchmarkSpec::Kind::Even},
    {"noneven", BenchmarkSpec::Kind::NonEven}};

std::string pseudo_step_text(const PseudoStep &s) {
  switch (s.mode) {
  case PseudoStep::Mode::Off:
    return "off";
  case PseudoStep::Mode::Adaptive:
    return "adaptive";
  case PseudoStep::Mode::Fixed:
    return fmt(s.value);
  }
  return "adaptive";
}

PseudoStep parse_pseudo_step(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  if (v == "off")
    return {PseudoStep::Mode::Off, 0.0};
  if (v == "adaptive")
    return {PseudoStep::Mode::Adaptive, 0.0};
  const double d = to_double(key, v);
  if (!(d > 0.0))
    bad_value(key, value, "off, adaptive or a positive number");
  return {PseudoStep::Mode::Fixed, d};
}

using Setter = std::function<void(RunConfig &, const std::string &,
                                  const std::string &)>;

void add_data_setters(std::map<std::string, Setter> &s, const std::string &name,
                      DataSpec RunConfig::*member) {
  s[name] = [member](RunConfig &c, const std::string &k, const std::string &v) {
    // Shorthand: a bare number is a constant.
    const std::string t = trim(v);
    char *end = nullptr;
    std::strtod(t.c_str(), &end);
    if (!t.empty() && end == t.c_str() + t.size()) {
      (c.*member).kind = DataSpec::Kind::Constant;
      (c.*member).value = to_double(k, t);
    } else {
      (c.*member).kind = to_enum(k, v, kData);
    }
  };
  s[name + ".kind"] = [member](RunConfig &c, const std::string &k,
                               const std::string &v) {
    (c.*member).kind = to_enum(k, v, kData);
  };
  s[name + ".value"] = [member](RunConfig &c, const std::string &k,
                                const std::string &v) {
    (c.*member).value = to_double(k, v);
  };
  s[name + ".amplitude"] = [member](RunConfig &c, const std::string &k,
                                    const std::string &v) {
    (c.*member).amplitude = to_double(k, v);
  };
  s[name + ".frequency"] = [member](RunConfig &c, const std::string &k,
                                    const std::string &v) {
    (c.*member).frequency = to_double(k, v);
  };
  s[name + ".times"] = [member](RunConfig &c, const std::string &k,
                                const std::string &v) {
    (c.*member).times = to_list(k, v);
  };
  s[name + ".values"] = [member](RunConfig &c, const std::string &k,
                                 const std::string &v) {
    (c.*member).values = to_list(k, v);
  };
}

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> s;
    using C = RunConfig;
    using S = const std::string &;
    s["problem"] = [](C &c, S k, S v) { c.problem = to_enum(k, v, kProblems); };
    s["domain.radius"] = [](C &c, S k, S v) { c.radius = to_double(k, v); };
    s["time.period"] = [](C &c, S k, S v) { c.period = to_double(k, v); };
    s["time.steps"] = [](C &c, S k, S v) {
      c.steps = static_cast<std::size_t>(to_integer(k, v, 1));
    };
    s["mesh.elements"] = [](C &c, S k, S v) {
      c.elements = static_cast<std::size_t>(to_integer(k, v, 2));
    };
    s["mesh.degree"] = [](C &c, S k, S v) {
      c.degree = static_cast<int>(to_integer(k, v, 1));
    };
    s["stress.p"] = [](C &c, S k, S v) {
      const std::string t = trim(v);
      if (t == "constant" || t == "piecewise" || t == "affine") {
        c.exponent.kind = to_enum(k, t, kExponents);
      } else {
        c.exponent.kind = ExponentSpec::Kind::Constant;
        c.exponent.value = to_double(k, t);
      }
    };
    s["stress.p.kind"] = [](C &c, S k, S v) {
      c.exponent.kind = to_enum(k, v, kExponents);
    };
    s["stress.p.value"] = [](C &c, S k, S v) {
      c.exponent.value = to_double(k, v);
    };
    s["stress.p.breakpoints"] = [](C &c, S k, S v) {
      c.exponent.breakpoints = to_list(k, v);
    };
    s["stress.p.values"] = [](C &c, S k, S v) {
      c.exponent.values = to_list(k, v);
    };
    s["stress.p.c0"] = [](C &c, S k, S v) { c.exponent.c0 = to_double(k, v); };
    s["stress.p.c1"] = [](C &c, S k, S v) { c.exponent.c1 = to_double(k, v); };
    s["stress.delta"] = [](C &c, S k, S v) { c.delta = to_double(k, v); };
    add_data_setters(s, "alpha", &RunConfig::alpha);
    add_data_setters(s, "gamma", &RunConfig::gamma);
    s["alpha.discretization"] = [](C &c, S k, S v) {
      c.alpha_discretization = to_enum(k, v, kAlphaDisc);
    };
    s["picard.tol_stop"] = [](C &c, S k, S v) {
      c.picard.tol_stop = to_double(k, v);
    };
    s["picard.max_iters"] = [](C &c, S k, S v) {
      c.picard.max_iters = static_cast<int>(to_integer(k, v, 1));
    };
    s["inner.tol_abs"] = [](C &c, S k, S v) {
      c.picard.inner_tol_abs = to_double(k, v);
    };
    s["inner.max_iters"] = [](C &c, S k, S v) {
      c.picard.inner_max_iters = static_cast<int>(to_integer(k, v, 1));
    };
    s["inner.pseudo_step"] = [](C &c, S k, S v) {
      c.picard.pseudo_step = parse_pseudo_step(k, v);
    };
    s["output.dir"] = [](C &c, S, S v) { c.output_dir = trim(v); };
    s["seed"] = [](C &c, S k, S v) { c.seed = to_unsigned(k, v); };
    s["selftest.samples"] = [](C &c, S k, S v) {
      c.selftest_samples = static_cast<std::size_t>(to_integer(k, v, 1));
    };
    s["benchmark.kind"] = [](C &c, S k, S v) {
      c.benchmark.kind = to_enum(k, v, kBenchmarks);
    };
    s["benchmark.omega"] = [](C &c, S k, S v) {
      c.benchmark.omega = static_cast<int>(to_integer(k, v, 1));
    };
    s["benchmark.p"] = [](C &c, S k, S v) { c.benchmark.p = to_double(k, v); };
    s["benchmark.shell_radii"] = [](C &c, S k, S v) {
      c.benchmark.shell_radii = to_list(k, v);
    };
    s["benchmark.shell_exponents"] = [](C &c, S k, S v) {
      c.benchmark.shell_exponents = to_list(k, v);
    };
    s["benchmark.zeta"] = [](C &c, S k, S v) {
      c.benchmark.zeta = to_double(k, v);
    };
    s["benchmark.p_left"] = [](C &c, S k, S v) {
      c.benchmark.p_left = to_double(k, v);
    };
    s["benchmark.p_right"] = [](C &c, S k, S v) {
      c.benchmark.p_right = to_double(k, v);
    };
    s["study.first_level"] = [](C &c, S k, S v) {
      c.first_level = static_cast<int>(to_integer(k, v, 0));
    };
    s["study.last_level"] = [](C &c, S k, S v) {
      c.last_level = static_cast<int>(to_integer(k, v, 0));
    };
    s["study.pressure"] = [](C &c, S k, S v) {
      c.study_pressure = to_bool(k, v);
    };
    s["exact.samples"] = [](C &c, S k, S v) {
      c.exact_samples = static_cast<std::size_t>(to_integer(k, v, 2));
    };
    s["exact.time"] = [](C &c, S k, S v) { c.exact_time = to_double(k, v); };
    return s;
  }();
  return table;
}

using Entries = std::vector<std::pair<std::string, std::string>>;

RunConfig apply_entries(const Entries &entries) {
  RunConfig c;
  std::set<std::string> seen;
  for (const auto &[key, value] : entries) {
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("config: unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ConfigError("config: duplicate key '" + key + "'");
    it->second(c, key, value);
  }
  c.validate();
  return c;
}

Entries parse_key_value(const std::string &text) {
  Entries out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(number) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("config: line " + std::to_string(number) +
                        ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

void flatten_json(const nlohmann::json &j, const std::string &prefix,
                  Entries &out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      flatten_json(it.value(), key, out);
    }
    return;
  }
  if (prefix.empty())
    throw ConfigError("config: JSON document must be an object");
  if (j.is_array()) {
    std::vector<double> values;
    for (const auto &e : j) {
      if (!e.is_number())
        throw ConfigError("config: key '" + prefix +
                          "' must be an array of numbers");
      values.push_back(e.get<double>());
    }
    out.emplace_back(prefix, fmt_list(values));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? "true" : "false");
  } else if (j.is_number_integer()) {
    out.emplace_back(prefix, std::to_string(j.get<long long>()));
  } else if (j.is_number()) {
    out.emplace_back(prefix, fmt(j.get<double>()));
  } else {
    throw ConfigError("config: key '" + prefix + "' has unsupported JSON type");
  }
}

void validate_data(const DataSpec &d, const char *name, double period) {
  const std::string n = name;
  switch (d.kind) {
  case DataSpec::Kind::Table: {
    if (d.times.empty() || d.times.size() != d.values.size())
      throw ConfigError("config: " + n +
                        ".times and .values must be non-empty and equal length");
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      if (d.times[i] < 0.0 || d.times[i] >= period)
        throw ConfigError("config: " + n + ".times must lie in [0, period)");
      if (i && !(d.times[i] > d.times[i - 1]))
        throw ConfigError("config: " + n + ".times must be strictly increasing");
    }
    break;
  }
  case DataSpec::Kind::Womersley:
    if (n != "alpha")
      throw ConfigError("config: womersley data applies to alpha only");
    if (d.frequency < 1.0 || d.frequency != std::floor(d.frequency))
      throw ConfigError("config: alpha.frequency must be a positive integer "
                        "for womersley data");
    break;
  default:
    break;
  }
}

} // namespace

ExponentField ExponentSpec::build(const Interval &domain) const {
  try {
    switch (kind) {
    case Kind::Constant:
      return ExponentField::constant(value);
    case Kind::Piecewise:
      return ExponentField::piecewise(breakpoints, values);
    case Kind::Affine:
      return ExponentField::affine(c0, c1, domain);
    }
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("config: invalid exponent: ") + e.what());
  }
  throw ConfigError("config: invalid exponent kind");
}

void RunConfig::validate() const {
  if (!(radius > 0.0))
    throw ConfigError("config: domain.radius must be > 0");
  if (!(period > 0.0))
    throw ConfigError("config: time.period must be > 0");
  if (steps < 1)
    throw ConfigError("config: time.steps must be >= 1");
  if (elements < 2)
    throw ConfigError("config: mesh.elements must be >= 2");
  if (degree != 1 && degree != 2)
    throw ConfigError("config: mesh.degree must be 1 or 2");
  const Interval domain = Interval::symmetric(radius);
  const ExponentField p = exponent.build(domain);
  if (!(p.p_minus() > 1.0))
    throw ConfigError("config: exponent must satisfy p_minus > 1");
  try {
    p.check_breakpoints_inside(domain);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(delta >= 0.0))
    throw ConfigError("config: stress.delta must be >= 0");
  if (problem == ProblemKind::FlowRate && alpha.kind == DataSpec::Kind::None)
    throw ConfigError("config: flow-rate problem requires alpha data");
  if (problem == ProblemKind::PressureDrop &&
      gamma.kind == DataSpec::Kind::None)
    throw ConfigError("config: pressure-drop problem requires gamma data");
  validate_data(alpha, "alpha", period);
  validate_data(gamma, "gamma", period);
  try {
    picard.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (first_level > last_level || last_level > 20)
    throw ConfigError("config: study levels must satisfy first <= last <= 20");
  if (output_dir.empty())
    throw ConfigError("config: output.dir must not be empty");
  try {
    (void)build_benchmark(*this);
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    throw ConfigError(std::string("config: invalid benchmark: ") + e.what());
  }
}

RunConfig parse_config(const std::string &text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
      throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    Entries entries;
    flatten_json(j, "", entries);
    return apply_entries(entries);
  }
  return apply_entries(parse_key_value(text));
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>>
config_entries(const RunConfig &c) {
  Entries e;
  e.emplace_back("problem", enum_name(c.problem, kProblems));
  e.emplace_back("domain.radius", fmt(c.radius));
  e.emplace_back("time.period", fmt(c.period));
  e.emplace_back("time.steps", std::to_string(c.steps));
  e.emplace_back("mesh.elements", std::to_string(c.elements));
  e.emplace_back("mesh.degree", std::to_string(c.degree));
  e.emplace_back("stress.p.kind", enum_name(c.exponent.kind, kExponents));
  e.emplace_back("stress.p.value", fmt(c.exponent.value));
  e.emplace_back("stress.p.breakpoints", fmt_list(c.exponent.breakpoints));
  e.emplace_back("stress.p.values", fmt_list(c.exponent.values));
  e.emplace_back("stress.p.c0", fmt(c.exponent.c0));
  e.emplace_back("stress.p.c1", fmt(c.exponent.c1));
  e.emplace_back("stress.delta", fmt(c.delta));
  for (const auto &[name, d] :
       {std::pair<const char *, const DataSpec *>{"alpha", &c.alpha},
        {"gamma", &c.gamma}}) {
    const std::string n = name;
    e.emplace_back(n + ".kind", enum_name(d->kind, kData));
    e.emplace_back(n + ".value", fmt(d->value));
    e.emplace_back(n + ".amplitude", fmt(d->amplitude));
    e.emplace_back(n + ".frequency", fmt(d->frequency));
    e.emplace_back(n + ".times", fmt_list(d->times));
    e.emplace_back(n + ".values", fmt_list(d->values));
  }
  e.emplace_back("alpha.discretization",
                 enum_name(c.alpha_discretization, kAlphaDisc));
  e.emplace_back("picard.tol_stop", fmt(c.picard.tol_stop));
  e.emplace_back("picard.max_iters", std::to_string(c.picard.max_iters));
  e.emplace_back("inner.tol_abs", fmt(c.picard.inner_tol_abs));
  e.emplace_back("inner.max_iters", std::to_string(c.picard.inner_max_iters));
  e.emplace_back("inner.pseudo_step", pseudo_step_text(c.picard.pseudo_step));
  e.emplace_back("output.dir", c.output_dir);
  e.emplace_back("seed", std::to_string(c.seed));
  e.emplace_back("selftest.samples", std::to_string(c.selftest_samples));
  e.emplace_back("benchmark.kind", enum_name(c.benchmark.kind, kBenchmarks));
  e.emplace_back("benchmark.omega", std::to_string(c.benchmark.omega));
  e.emplace_back("benchmark.p", fmt(c.benchmark.p));
  e.emplace_back("benchmark.shell_radii", fmt_list(c.benchmark.shell_radii));
  e.emplace_back("benchmark.shell_exponents",
                 fmt_list(c.benchmark.shell_exponents));
  e.emplace_back("benchmark.zeta", fmt(c.benchmark.zeta));
  e.emplace_back("benchmark.p_left", fmt(c.benchmark.p_left));
  e.emplace_back("benchmark.p_right", fmt(c.benchmark.p_right));
  e.emplace_back("study.first_level", std::to_string(c.first_level));
  e.emplace_back("study.last_level", std::to_string(c.last_level));
  e.emplace_back("study.pressure", c.study_pressure ? "true" : "false");
  e.emplace_back("exact.samples", std::to_string(c.exact_samples));
  e.emplace_back("exact.time", fmt(c.exact_time));
  return e;
}

std::string serialize_config(const RunConfig &config) {
  std::string out;
  for (const auto &[k, v] : config_entries(config))
    out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> preset_names() {
  return {"zero",          "womersley",     "pressure-cos", "steady-constant",
          "steady-even",   "steady-noneven", "affine",      "table"};
}

RunConfig preset(const std::string &name) {
  RunConfig c;
  if (name == "zero") {
    c.alpha.kind = DataSpec::Kind::Constant;
    c.alpha.value = 0.0;
  } else if (name == "womersley") {
    c.period = 2.0 * std::numbers::pi;
    c.steps = 32;
    c.elements = 32;
    c.alpha.kind = DataSpec::Kind::Womersley;
    c.benchmark.kind = BenchmarkSpec::Kind::Womersley;
  } else if (name == "pressure-cos") {
    c.problem = ProblemKind::PressureDrop;
    c.period = 2.0 * std::numbers::pi;
    c.steps = 32;
    c.elements = 32;
    c.gamma.kind = DataSpec::Kind::Cos;
    c.benchmark.kind = BenchmarkSpec::Kind::Womersley;
  } else if (name == "steady-constant") {
    c.exponent.value = 2.5;
    c.alpha.kind = DataSpec::Kind::Constant;
    c.alpha.value = 0.75;
    c.benchmark.kind = BenchmarkSpec::Kind::Constant;
    c.benchmark.p = 2.5;
  } else if (name == "steady-even") {
    c.exponent.kind = ExponentSpec::Kind::Piecewise;
    c.exponent.breakpoints = {-0.5, 0.5};
    c.exponent.values = {1.5, 2.5, 1.5};
    c.alpha.kind = DataSpec::Kind::Constant;
    c.alpha.value = 0.586868;
    c.benchmark.kind = BenchmarkSpec::Kind::Even;
  } else if (name == "steady-noneven") {
    c.exponent.kind = ExponentSpec::Kind::Piecewise;
    c.exponent.breakpoints = {0.5};
    c.exponent.values = {2.5, 1.5};
    c.alpha.kind = DataSpec::Kind::Constant;
    c.alpha.value = 0.684009;
    c.benchmark.kind = BenchmarkSpec::Kind::NonEven;
  } else if (name == "affine") {
    c.exponent.kind = ExponentSpec::Kind::Affine;
    c.exponent.c0 = 2.0;
    c.exponent.c1 = 0.5;
    c.delta = 0.1;
    c.alpha.kind = DataSpec::Kind::Cos;
    c.alpha.value = 0.5;
    c.alpha.amplitude = 0.25;
    c.alpha.frequency = 2.0 * std::numbers::pi;
  } else if (name == "table") {
    c.exponent.value = 1.8;
    c.alpha.kind = DataSpec::Kind::Table;
    c.alpha.times = {0.0, 0.25, 0.5, 0.75};
    c.alpha.values = {0.2, 0.6, 0.3, -0.1};
    c.alpha_discretization = AlphaDiscretization::Average;
  } else {
    throw ConfigError("config: unknown preset '" + name + "'");
  }
  c.validate();
  return c;
}

Interval config_domain(const RunConfig &config) {
  return Interval::symmetric(config.radius);
}

StressModel build_stress(const RunConfig &config) {
  return StressModel(config.exponent.build(config_domain(config)),
                     config.delta);
}

TimeGrid build_time_grid(const RunConfig &config) {
  return TimeGrid(config.period, config.steps);
}

FeSpacePtr build_space(const RunConfig &config) {
  const ExponentField p = config.exponent.build(config_domain(config));
  return FeSpace::make(
      uniform_mesh(config_domain(config), config.elements, p.breakpoints()),
      config.degree);
}

std::function<double(double)> data_function(const DataSpec &data,
                                            const RunConfig &config) {
  switch (data.kind) {
  case DataSpec::Kind::None:
    return [](double) { return 0.0; };
  case DataSpec::Kind::Constant:
    return [v = data.value](double) { return v; };
  case DataSpec::Kind::Cos:
    return [v = data.value, a = data.amplitude, w = data.frequency](double t) {
      return v + a * std::cos(w * t);
    };
  case DataSpec::Kind::Table:
    return [times = data.times, values = data.values,
            period = config.period](double t) {
      double s = std::fmod(t, period);
      if (s < 0.0)
        s += period;
      const std::size_t n = times.size();
      if (n == 1)
        return values[0];
      // Locate the interval [t_k, t_{k+1}) with wrap-around.
      std::size_t k = static_cast<std::size_t>(
          std::upper_bound(times.begin(), times.end(), s) - times.begin());
      double t0, t1, v0, v1;
      if (k == 0) {
        t0 = times[n - 1] - period;
        v0 = values[n - 1];
        t1 = times[0];
        v1 = values[0];
      } else if (k == n) {
        t0 = times[n - 1];
        v0 = values[n - 1];
        t1 = times[0] + period;
        v1 = values[0];
      } else {
        t0 = times[k - 1];
        v0 = values[k - 1];
        t1 = times[k];
        v1 = values[k];
      }
      return v0 + (v1 - v0) * (s - t0) / (t1 - t0);
    };
  case DataSpec::Kind::Womersley: {
    const WomersleyParams params{config.radius,
                                 static_cast<int>(data.frequency)};
    return [params, a = data.amplitude](double t) {
      return a * womersley_flowrate(params, t);
    };
  }
  }
  return [](double) { return 0.0; };
}

FlowRateProblem build_flow_rate_problem(const RunConfig &config) {
  const FeSpacePtr space = build_space(config);
  const TimeGrid grid = build_time_grid(config);
  return FlowRateProblem{
      build_stress(config), space, grid,
      discretize_alpha(data_function(config.alpha, config), grid,
                       config.alpha_discretization),
      build_chi_h(space, default_chi(config_domain(config)))};
}

PressureProblem build_pressure_problem(const RunConfig &config) {
  const TimeGrid grid = build_time_grid(config);
  const auto gamma = data_function(config.gamma, config);
  std::vector<double> values;
  for (std::size_t m = 1; m <= grid.steps(); ++m)
    values.push_back(gamma(grid.node(m)));
  return PressureProblem{build_stress(config), build_space(config), grid,
                         TimeSeries(grid, std::move(values), false)};
}

ExactSolution build_benchmark(const RunConfig &config) {
  const BenchmarkSpec &b = config.benchmark;
  switch (b.kind) {
  case BenchmarkSpec::Kind::Womersley:
    return womersley_solution({config.radius, b.omega});
  case BenchmarkSpec::Kind::Constant:
    return steady_solution(SteadySpec::constant(b.p, config.radius));
  case BenchmarkSpec::Kind::Even:
    return steady_solution(
        SteadySpec::even(b.shell_radii, b.shell_exponents, config.radius));
  case BenchmarkSpec::Kind::NonEven:
    return steady_solution(
        SteadySpec::noneven(b.zeta, b.p_left, b.p_right, config.radius));
  }
  throw ConfigError("config: invalid benchmark kind");
}

StudyConfig build_study(const RunConfig &config) {
  StudyConfig s;
  if (config.benchmark.kind == BenchmarkSpec::Kind::Womersley) {
    s = womersley_study(config.radius, config.last_level,
                        config.benchmark.omega);
  } else {
    s = steady_study(SteadySpec::constant(2.0), config.last_level);
    s.exact = build_benchmark(config);
  }
  s.first_level = config.first_level;
  s.degree = config.degree;
  s.delta = config.delta;
  s.alpha_discretization = config.alpha_discretization;
  s.picard = config.picard;
  s.pressure_problem = config.study_pressure;
  return s;
}

} // namespace smartflow
