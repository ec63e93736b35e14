// Fixed-step 4th-order integration of states and evolution operators.
#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "heod/liouville.hpp"

namespace heod {

struct TimeGrid {
  double t_end = 0.0;
  int steps = 0;

  TimeGrid() = default;
  TimeGrid(double end, int n) : t_end(end), steps(n) {
    if (n < 1) throw invalid_model_error("TimeGrid: steps must be >= 1");
    if (end <= 0.0) throw invalid_model_error("TimeGrid: t_end must be > 0");
  }

  double dt() const { return t_end / steps; }
};

template <class StateT>
struct Trajectory {
  std::vector<double> times;
  std::vector<StateT> samples;

  const StateT& final_sample() const { return samples.back(); }
  double final_time() const { return times.back(); }
};

namespace detail {

// Generator compiled to sparse coordinate form with channel coefficients
// tabulated at half-step resolution.  Tables depend only on the channel
// functions and the grid, so modulated copies share them.
class CompiledGenerator {
public:
  CompiledGenerator(const Generator& gen, const TimeGrid& grid)
      : dim_(gen.dim()), grid_(grid) {
    const auto& mats = gen.channel_matrices();
    const auto& fns = gen.channel_functions();
    const int half_steps = 2 * grid.steps + 1;
    const double half_dt = 0.5 * grid.dt();
    auto tables = std::make_shared<std::vector<std::vector<Complex>>>();
    for (std::size_t k = 0; k < mats.size(); ++k) {
      std::vector<Complex> table;
      if (fns[k]) {
        table.resize(half_steps);
        for (int j = 0; j < half_steps; ++j) table[j] = fns[k](j * half_dt);
      }
      tables->push_back(std::move(table));
      for (int c = 0; c < dim_; ++c)
        for (int r = 0; r < dim_; ++r)
          if (mats[k](r, c) != Complex(0.0, 0.0)) {
            rows_.push_back(r);
            cols_.push_back(c);
            vals_.push_back(mats[k](r, c));
            chan_.push_back(static_cast<int>(k));
          }
    }
    tables_ = std::move(tables);
  }

  /// Copy with entry values transformed (e.g. encoding phases); shares tables.
  template <class Fn>
  CompiledGenerator transformed_values(Fn&& fn) const {
    CompiledGenerator out(*this);
    for (std::size_t e = 0; e < vals_.size(); ++e)
      out.vals_[e] = fn(rows_[e], cols_[e], vals_[e]);
    return out;
  }

  int dim() const { return dim_; }
  const TimeGrid& grid() const { return grid_; }

  /// y = -i H(t) x with t = half_index * dt/2.
  void apply_rhs(int half_index, const Complex* x, Complex* y) const {
    for (int i = 0; i < dim_; ++i) y[i] = Complex(0.0, 0.0);
    std::size_t e = 0;
    const std::size_t total = vals_.size();
    while (e < total) {
      const int k = chan_[e];
      const auto& table = (*tables_)[k];
      const Complex coef = table.empty() ? Complex(1.0, 0.0) : table[half_index];
      while (e < total && chan_[e] == k) {
        y[rows_[e]] += (coef * vals_[e]) * x[cols_[e]];
        ++e;
      }
    }
    for (int i = 0; i < dim_; ++i) y[i] = Complex(y[i].imag(), -y[i].real());
  }

private:
  int dim_;
  TimeGrid grid_;
  std::shared_ptr<const std::vector<std::vector<Complex>>> tables_;
  std::vector<int> rows_, cols_, chan_;
  std::vector<Complex> vals_;
};

struct Rk4Workspace {
  std::vector<Complex> k1, k2, k3, k4, tmp;
  explicit Rk4Workspace(int dim) : k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}
};

inline void rk4_step(const CompiledGenerator& g, int step, std::vector<Complex>& y,
                     Rk4Workspace& w) {
  const int d = g.dim();
  const double h = g.grid().dt();
  const int base = 2 * step;

  g.apply_rhs(base, y.data(), w.k1.data());
  for (int i = 0; i < d; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
  g.apply_rhs(base + 1, w.tmp.data(), w.k2.data());
  for (int i = 0; i < d; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
  g.apply_rhs(base + 1, w.tmp.data(), w.k3.data());
  for (int i = 0; i < d; ++i) w.tmp[i] = y[i] + h * w.k3[i];
  g.apply_rhs(base + 2, w.tmp.data(), w.k4.data());
  for (int i = 0; i < d; ++i)
    y[i] += (h / 6.0) * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

inline bool all_finite(const std::vector<Complex>& y) {
  for (const auto& v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

/// Integrates to t_end and returns only the final state.
inline std::vector<Complex> rk4_final(const CompiledGenerator& g,
                                      std::vector<Complex> y, Rk4Workspace& w) {
  for (int i = 0; i < g.grid().steps; ++i) {
    rk4_step(g, i, y, w);
    if (!all_finite(y))
      throw numeric_overflow_error("non-finite state at step " + std::to_string(i + 1) +
                                   ", t = " + std::to_string((i + 1) * g.grid().dt()));
  }
  return y;
}

}  // namespace detail

/// Integrates i d rho/dt = H(t) rho with the classical 4th-order scheme.
/// Samples are recorded every `stride` steps (stride 0 keeps only the initial
/// and final states); the first sample is the initial condition exactly.
inline Trajectory<StateVector> propagate_state(const Generator& gen, const StateVector& rho0,
                                               const TimeGrid& grid, int stride = 0) {
  if (rho0.size() != gen.dim())
    throw invalid_model_error("propagate_state: state size mismatch");
  const detail::CompiledGenerator cg(gen, grid);
  detail::Rk4Workspace w(gen.dim());
  std::vector<Complex> y(rho0.data(), rho0.data() + rho0.size());

  Trajectory<StateVector> traj;
  traj.times.push_back(0.0);
  traj.samples.push_back(rho0);
  const double dt = grid.dt();
  for (int i = 0; i < grid.steps; ++i) {
    detail::rk4_step(cg, i, y, w);
    if (!detail::all_finite(y))
      throw numeric_overflow_error("non-finite state at step " + std::to_string(i + 1) +
                                   ", t = " + std::to_string((i + 1) * dt));
    const bool record = (stride > 0 && (i + 1) % stride == 0) || i + 1 == grid.steps;
    if (record) {
      traj.times.push_back((i + 1) * dt);
      traj.samples.push_back(Eigen::Map<const StateVector>(y.data(), gen.dim()));
    }
  }
  return traj;
}

/// Evolution-operator counterpart with U(0) = I; columns evolve independently.
inline Trajectory<Superoperator> propagate_evolution(const Generator& gen, const TimeGrid& grid,
                                                     int stride = 0) {
  const int d = gen.dim();
  const detail::CompiledGenerator cg(gen, grid);
  detail::Rk4Workspace w(d);

  std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(d, Complex(0.0, 0.0)));
  for (int c = 0; c < d; ++c) cols[c][c] = 1.0;

  auto pack = [&]() {
    Superoperator u(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) u(r, c) = cols[c][r];
    return u;
  };

  Trajectory<Superoperator> traj;
  traj.times.push_back(0.0);
  traj.samples.push_back(Superoperator::Identity(d, d));
  const double dt = grid.dt();
  for (int i = 0; i < grid.steps; ++i) {
    for (int c = 0; c < d; ++c) {
      detail::rk4_step(cg, i, cols[c], w);
      if (!detail::all_finite(cols[c]))
        throw numeric_overflow_error("non-finite evolution column at step " +
                                     std::to_string(i + 1));
    }
    const bool record = (stride > 0 && (i + 1) % stride == 0) || i + 1 == grid.steps;
    if (record) {
      traj.times.push_back((i + 1) * dt);
      traj.samples.push_back(pack());
    }
  }
  return traj;
}

}  // namespace heod
