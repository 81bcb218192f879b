#include "smartflow/timegrid.hpp"

#include "smartflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace smartflow {

TimeGrid::TimeGrid(double period, std::size_t steps)
    : period_(period), steps_(steps),
      tau_(period / static_cast<double>(steps)) {
  if (steps == 0)
    throw std::invalid_argument("TimeGrid: need at least one step");
  if (!(period > 0.0))
    throw std::invalid_argument("TimeGrid: period must be positive");
}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values,
                       bool with_slab0)
    : grid_(grid), values_(std::move(values)), first_(with_slab0 ? 0 : 1) {
  if (values_.size() != grid_.steps() + 1 - first_)
    throw std::invalid_argument("TimeSeries: length does not match grid");
}

void TimeSeries::write_csv(std::ostream &os) const {
  os << "m,t_m,value\n" << std::setprecision(17);
  for (std::size_t m = first_; m <= grid_.steps(); ++m)
    os << m << ',' << grid_.node(m) << ',' << (*this)[m] << '\n';
}

SpaceTimeFunction::SpaceTimeFunction(TimeGrid grid,
                                     std::vector<FeFunction> values,
                                     bool with_slab0)
    : grid_(grid), values_(std::move(values)), first_(with_slab0 ? 0 : 1) {
  if (values_.size() != grid_.steps() + 1 - first_)
    throw std::invalid_argument("SpaceTimeFunction: length does not match grid");
  for (const auto &v : values_)
    if (v.space() != values_.front().space())
      throw std::invalid_argument(
          "SpaceTimeFunction: all slabs must share one space");
}

void SpaceTimeFunction::write_csv(std::ostream &os) const {
  os << "m,t_m,x,v\n" << std::setprecision(17);
  const FeSpace &space = *this->space();
  const Interval dom = space.mesh().domain();
  for (std::size_t m = first_; m <= grid_.steps(); ++m) {
    const double t = grid_.node(m);
    os << m << ',' << t << ',' << dom.left << ",0\n";
    const auto &c = (*this)[m].coefficients();
    for (std::size_t i = 0; i < c.size(); ++i)
      os << m << ',' << t << ',' << space.dof_coordinates()[i] << ',' << c[i]
         << '\n';
    os << m << ',' << t << ',' << dom.right << ",0\n";
  }
}

SpaceTimeFunction d_tau(const SpaceTimeFunction &f) {
  if (!f.with_slab0())
    throw std::invalid_argument("d_tau: input needs slab 0");
  const TimeGrid &g = f.grid();
  std::vector<FeFunction> out;
  out.reserve(g.steps());
  for (std::size_t m = 1; m <= g.steps(); ++m)
    out.push_back((1.0 / g.tau()) * (f[m] - f[m - 1]));
  return {g, std::move(out), false};
}

TimeSeries d_tau(const TimeSeries &f) {
  if (!f.with_slab0())
    throw std::invalid_argument("d_tau: input needs slab 0");
  const TimeGrid &g = f.grid();
  std::vector<double> out;
  out.reserve(g.steps());
  for (std::size_t m = 1; m <= g.steps(); ++m)
    out.push_back((f[m] - f[m - 1]) / g.tau());
  return {g, std::move(out), false};
}

TimeSeries interp_I0(const std::function<double(double)> &alpha,
                     const TimeGrid &grid) {
  std::vector<double> v;
  v.reserve(grid.steps() + 1);
  for (std::size_t m = 0; m <= grid.steps(); ++m)
    v.push_back(alpha(grid.node(m)));
  return {grid, std::move(v), true};
}

TimeSeries project_Pi0(const std::function<double(double)> &g,
                       const TimeGrid &grid) {
  std::vector<double> v;
  v.reserve(grid.steps());
  for (std::size_t m = 1; m <= grid.steps(); ++m)
    v.push_back(integrate_gauss(g, grid.node(m - 1), grid.node(m), 5) /
                grid.tau());
  return {grid, std::move(v), false};
}

double check_discrete_ibp(const SpaceTimeFunction &f,
                          const SpaceTimeFunction &g,
                          const InnerProduct &inner) {
  if (!f.with_slab0() || !g.with_slab0())
    throw std::invalid_argument("check_discrete_ibp: inputs need slab 0");
  const TimeGrid &grid = f.grid();
  const double tau = grid.tau();
  const std::size_t mm = grid.steps();
  const auto df = d_tau(f);
  const auto dg = d_tau(g);
  double lhs = 0.0;
  double tail = 0.0;
  double scale = 0.0;
  for (std::size_t m = 1; m <= mm; ++m) {
    const double a = tau * inner(df[m], g[m]);
    const double b = tau * inner(dg[m], f[m - 1]);
    lhs += a;
    tail += b;
    scale = std::max({scale, std::abs(a), std::abs(b)});
  }
  const double end_m = inner(f[mm], g[mm]);
  const double end_0 = inner(f[0], g[0]);
  scale = std::max({scale, std::abs(end_m), std::abs(end_0), 1e-300});
  const double rhs = end_m - end_0 - tail;
  return std::abs(lhs - rhs) / scale;
}

double check_discrete_ibp_reduced(const SpaceTimeFunction &f,
                                  const InnerProduct &inner) {
  if (!f.with_slab0())
    throw std::invalid_argument("check_discrete_ibp_reduced: needs slab 0");
  const TimeGrid &grid = f.grid();
  const double tau = grid.tau();
  const std::size_t mm = grid.steps();
  const auto df = d_tau(f);
  double lhs = 0.0;
  double dissip = 0.0;
  double scale = 0.0;
  for (std::size_t m = 1; m <= mm; ++m) {
    const double a = tau * inner(df[m], f[m]);
    const double b = tau * 0.5 * tau * inner(df[m], df[m]);
    lhs += a;
    dissip += b;
    scale = std::max({scale, std::abs(a), std::abs(b)});
  }
  const double end_m = 0.5 * inner(f[mm], f[mm]);
  const double end_0 = 0.5 * inner(f[0], f[0]);
  scale = std::max({scale, end_m, end_0, 1e-300});
  return std::abs(lhs - (end_m - end_0 + dissip)) / scale;
}

} // namespace smartflow
