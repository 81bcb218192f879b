#pragma once

#include "smartflow/grid.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace smartflow {

/// Uniform partition of (0, L) into M slabs I_m = (t_{m-1}, t_m], plus the
/// extra slab I_0 = (-tau, 0] carrying the initial state.
class TimeGrid {
public:
  TimeGrid(double period, std::size_t steps);

  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] std::size_t steps() const { return steps_; }
  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] double node(std::size_t m) const {
    return tau_ * static_cast<double>(m);
  }

  friend bool operator==(const TimeGrid &, const TimeGrid &) = default;

private:
  double period_;
  std::size_t steps_;
  double tau_;
};

/// Scalar piecewise-constant-in-time data. Index m addresses slab I_m; the
/// series either carries slab 0 (m = 0..M) or starts at slab 1 (m = 1..M).
class TimeSeries {
public:
  TimeSeries(TimeGrid grid, std::vector<double> values, bool with_slab0);

  [[nodiscard]] const TimeGrid &grid() const { return grid_; }
  [[nodiscard]] bool with_slab0() const { return first_ == 0; }
  [[nodiscard]] std::size_t first_index() const { return first_; }
  [[nodiscard]] double operator[](std::size_t m) const {
    return values_[m - first_];
  }
  [[nodiscard]] double &operator[](std::size_t m) { return values_[m - first_]; }
  [[nodiscard]] const std::vector<double> &values() const { return values_; }

  /// CSV with columns m,t_m,value.
  void write_csv(std::ostream &os) const;

private:
  TimeGrid grid_;
  std::vector<double> values_;
  std::size_t first_;
};

/// Time-indexed family of finite element functions on one space.
class SpaceTimeFunction {
public:
  SpaceTimeFunction(TimeGrid grid, std::vector<FeFunction> values,
                    bool with_slab0);

  [[nodiscard]] const TimeGrid &grid() const { return grid_; }
  [[nodiscard]] bool with_slab0() const { return first_ == 0; }
  [[nodiscard]] std::size_t first_index() const { return first_; }
  [[nodiscard]] const FeFunction &operator[](std::size_t m) const {
    return values_[m - first_];
  }
  [[nodiscard]] FeFunction &operator[](std::size_t m) {
    return values_[m - first_];
  }
  [[nodiscard]] const FeSpacePtr &space() const {
    return values_.front().space();
  }
  [[nodiscard]] const std::vector<FeFunction> &values() const {
    return values_;
  }

  /// CSV with columns m,t_m,x,v over all slabs and all nodes, boundary
  /// nodes included.
  void write_csv(std::ostream &os) const;

private:
  TimeGrid grid_;
  std::vector<FeFunction> values_;
  std::size_t first_;
};

/// Backward difference quotient on slabs 1..M. Requires slab 0.
[[nodiscard]] SpaceTimeFunction d_tau(const SpaceTimeFunction &f);
[[nodiscard]] TimeSeries d_tau(const TimeSeries &f);

/// Nodal interpolant: slab m carries alpha(t_m), m = 0..M.
[[nodiscard]] TimeSeries interp_I0(const std::function<double(double)> &alpha,
                                   const TimeGrid &grid);

/// Slab averages (1/tau) int_{I_m} g dt on slabs 1..M, 5-point Gauss.
[[nodiscard]] TimeSeries project_Pi0(const std::function<double(double)> &g,
                                     const TimeGrid &grid);

/// Residual of the discrete integration-by-parts formula
///   int (d_tau f, g) dt = (f_M, g_M) - (f_0, g_0) - int (d_tau g, f_{m-1}) dt
/// normalized by the largest magnitude term. Both inputs need slab 0.
using InnerProduct =
    std::function<double(const FeFunction &, const FeFunction &)>;
[[nodiscard]] double check_discrete_ibp(const SpaceTimeFunction &f,
                                        const SpaceTimeFunction &g,
                                        const InnerProduct &inner);

/// Residual of the reduced identity
///   int (d_tau f, f) dt = 1/2 (|f_M|^2 - |f_0|^2) + int tau/2 |d_tau f|^2 dt,
/// relative to the largest term.
[[nodiscard]] double check_discrete_ibp_reduced(const SpaceTimeFunction &f,
                                                const InnerProduct &inner);

} // namespace smartflow
