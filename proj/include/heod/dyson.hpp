// Pathway amplitudes as time-ordered nested quadratures of the Dyson series.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "heod/encoding.hpp"
#include "heod/liouville.hpp"

namespace heod {

/// Uniform quadrature grid over [0, T] with cumulative-trapezoid weights.
struct QuadratureGrid {
  double t_end = 0.0;
  int intervals = 0;

  QuadratureGrid() = default;
  QuadratureGrid(double end, int m) : t_end(end), intervals(m) {
    if (m < 2) throw invalid_model_error("QuadratureGrid: intervals must be >= 2");
    if (end <= 0.0) throw invalid_model_error("QuadratureGrid: t_end must be > 0");
  }

  double dt() const { return t_end / intervals; }
};

namespace detail {

/// Generator entries tabulated on the quadrature grid, filled lazily and
/// shared across the pathways of one truncated sum.
class EdgeTableCache {
public:
  EdgeTableCache(const Generator& gen, const QuadratureGrid& grid)
      : gen_(gen), grid_(grid) {}

  const std::vector<Complex>& edge(int row, int col) {
    auto& table = tables_[row * gen_.dim() + col];
    if (table.empty()) {
      const double dt = grid_.dt();
      table.resize(grid_.intervals + 1);
      for (int j = 0; j <= grid_.intervals; ++j) table[j] = gen_.entry(row, col, j * dt);
    }
    return table;
  }

private:
  const Generator& gen_;
  QuadratureGrid grid_;
  std::map<int, std::vector<Complex>> tables_;
};

inline Complex pathway_amplitude_cached(EdgeTableCache& cache, const Pathway& p,
                                        const QuadratureGrid& grid) {
  const int m = grid.intervals;
  const double dt = grid.dt();
  std::vector<Complex> f(m + 1, Complex(1.0, 0.0));
  std::vector<Complex> g(m + 1);
  for (std::size_t step = 1; step < p.states.size(); ++step) {
    const auto& edge = cache.edge(p.states[step] - 1, p.states[step - 1] - 1);
    for (int j = 0; j <= m; ++j) g[j] = edge[j] * f[j];
    f[0] = 0.0;
    for (int j = 1; j <= m; ++j) f[j] = f[j - 1] + 0.5 * dt * (g[j - 1] + g[j]);
  }

  Complex prefactor(1.0, 0.0);
  for (int i = 0; i < p.order(); ++i) prefactor *= Complex(0.0, -1.0);
  return prefactor * f[m];
}

}  // namespace detail

/// Amplitude of one pathway: (-i)^n times the nested time-ordered integral of
/// the product of its edge entries, evaluated iteratively as
///   f_0 = 1,  f_k(t) = int_0^t h_k(tau) f_{k-1}(tau) d tau,
/// where h_k is the generator entry of the k-th step.  Returns (-i)^n f_n(T).
inline Complex pathway_amplitude(const Generator& gen, const Pathway& p,
                                 const QuadratureGrid& grid) {
  if (p.states.size() < 2) throw invalid_pathway_error("pathway needs at least one step");
  const auto support = gen.support();
  for (std::size_t i = 1; i < p.states.size(); ++i) {
    const int a = p.states[i - 1];
    const int b = p.states[i];
    if (a < 1 || a > gen.dim() || b < 1 || b > gen.dim())
      throw invalid_pathway_error("pathway state out of range");
    if (!support(b - 1, a - 1))
      throw invalid_pathway_error("pathway edge " + std::to_string(a) + "->" +
                                  std::to_string(b) + " outside generator support");
  }
  detail::EdgeTableCache cache(gen, grid);
  return detail::pathway_amplitude_cached(cache, p, grid);
}

/// Amplitudes of several pathways sharing one edge-table cache.
inline std::vector<Complex> pathway_amplitudes(const Generator& gen,
                                               const std::vector<Pathway>& paths,
                                               const QuadratureGrid& grid) {
  const auto support = gen.support();
  detail::EdgeTableCache cache(gen, grid);
  std::vector<Complex> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    if (p.states.size() < 2) throw invalid_pathway_error("pathway needs at least one step");
    for (std::size_t i = 1; i < p.states.size(); ++i)
      if (!support(p.states[i] - 1, p.states[i - 1] - 1))
        throw invalid_pathway_error("pathway edge " + std::to_string(p.states[i - 1]) +
                                    "->" + std::to_string(p.states[i]) +
                                    " outside generator support");
    out.push_back(detail::pathway_amplitude_cached(cache, p, grid));
  }
  return out;
}

/// Truncated Dyson element <<target| U(T) |source>>: sum of all pathway
/// amplitudes up to max_order, plus the identity when source == target.
inline Complex truncated_sum(const Generator& gen, int source, int target, int max_order,
                             const QuadratureGrid& grid, bool allow_self = false) {
  const auto pathways =
      enumerate_pathways(gen.support(), source, target, max_order, allow_self);
  detail::EdgeTableCache cache(gen, grid);
  Complex total = source == target ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  for (const auto& p : pathways) total += detail::pathway_amplitude_cached(cache, p, grid);
  return total;
}

}  // namespace heod
