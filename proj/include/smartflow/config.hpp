#pragma once

#include "smartflow/bench.hpp"
#include "smartflow/exact.hpp"
#include "smartflow/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace smartflow {

enum class ProblemKind { FlowRate, PressureDrop };

/// Serializable exponent description; built into an ExponentField on demand.
struct ExponentSpec {
  enum class Kind { Constant, Piecewise, Affine };
  Kind kind = Kind::Constant;
  double value = 2.0;              ///< Constant
  std::vector<double> breakpoints; ///< Piecewise
  std::vector<double> values;      ///< Piecewise, one more than breakpoints
  double c0 = 2.0;                 ///< Affine p(x) = c0 + c1 x
  double c1 = 0.0;

  [[nodiscard]] ExponentField build(const Interval &domain) const;
  friend bool operator==(const ExponentSpec &, const ExponentSpec &) = default;
};

/// Time-dependent scalar data for alpha or Gamma.
///   constant:  value
///   cos:       value + amplitude cos(frequency t)
///   table:     periodic piecewise-linear interpolation of (times, values)
///   womersley: amplitude times the flow rate of the Womersley profile with
///              omega = frequency (alpha only)
struct DataSpec {
  enum class Kind { None, Constant, Cos, Table, Womersley };
  Kind kind = Kind::None;
  double value = 0.0;
  double amplitude = 1.0;
  double frequency = 1.0;
  std::vector<double> times;
  std::vector<double> values;

  friend bool operator==(const DataSpec &, const DataSpec &) = default;
};

/// Exact benchmark selection for `exact` and `convergence`.
struct BenchmarkSpec {
  enum class Kind { Womersley, Constant, Even, NonEven };
  Kind kind = Kind::Womersley;
  int omega = 1;
  double p = 2.5;
  std::vector<double> shell_radii{0.5};
  std::vector<double> shell_exponents{1.5, 2.5};
  double zeta = 0.5;
  double p_left = 2.5;
  double p_right = 1.5;

  friend bool operator==(const BenchmarkSpec &, const BenchmarkSpec &) = default;
};

struct RunConfig {
  ProblemKind problem = ProblemKind::FlowRate;
  double radius = 1.0;
  double period = 1.0;
  std::size_t steps = 16;
  std::size_t elements = 16;
  int degree = 1;
  ExponentSpec exponent{};
  double delta = 0.0;
  DataSpec alpha{};
  DataSpec gamma{};
  AlphaDiscretization alpha_discretization = AlphaDiscretization::Nodal;
  PicardConfig picard{};
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t selftest_samples = 1000;
  BenchmarkSpec benchmark{};
  int first_level = 1;
  int last_level = 7;
  bool study_pressure = false;
  std::size_t exact_samples = 101;
  double exact_time = 0.0;

  /// Throws ConfigError when fields are inconsistent.
  void validate() const;
  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

/// Parses the dotted key-value format, or JSON when the first non-blank
/// character is '{'. Throws ConfigError on unknown keys, malformed values and
/// inconsistent settings.
[[nodiscard]] RunConfig parse_config(const std::string &text);
[[nodiscard]] RunConfig load_config(const std::string &path);
/// Canonical key-value text; parse_config(serialize_config(c)) == c.
[[nodiscard]] std::string serialize_config(const RunConfig &config);
/// Ordered (key, value) pairs of the canonical form.
[[nodiscard]] std::vector<std::pair<std::string, std::string>>
config_entries(const RunConfig &config);

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
[[nodiscard]] RunConfig preset(const std::string &name);

[[nodiscard]] Interval config_domain(const RunConfig &config);
[[nodiscard]] StressModel build_stress(const RunConfig &config);
[[nodiscard]] TimeGrid build_time_grid(const RunConfig &config);
[[nodiscard]] FeSpacePtr build_space(const RunConfig &config);
[[nodiscard]] std::function<double(double)> data_function(const DataSpec &data,
                                                          const RunConfig &config);
[[nodiscard]] FlowRateProblem build_flow_rate_problem(const RunConfig &config);
[[nodiscard]] PressureProblem build_pressure_problem(const RunConfig &config);
[[nodiscard]] ExactSolution build_benchmark(const RunConfig &config);
[[nodiscard]] StudyConfig build_study(const RunConfig &config);

} // namespace smartflow
