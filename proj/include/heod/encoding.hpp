// Encoding matrices, generator modulation and pathway enumeration.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "heod/liouville.hpp"

namespace heod {

using SupportMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Integer code matrix Gamma together with the sweep length N.
struct EncodingMatrix {
  Eigen::MatrixXi codes;  // D x D, symmetric, >= 0 (0 = unencoded)
  long samples = 0;       // N, power of two

  void validate() const {
    if (codes.rows() != codes.cols() || codes.rows() < 1)
      throw invalid_model_error("EncodingMatrix: codes must be square");
    for (int c = 0; c < codes.cols(); ++c)
      for (int r = 0; r < codes.rows(); ++r) {
        if (codes(r, c) < 0)
          throw invalid_model_error("EncodingMatrix: codes must be >= 0");
        if (codes(r, c) != codes(c, r))
          throw invalid_model_error("EncodingMatrix: codes must be symmetric");
      }
    if (samples < 2 || (samples & (samples - 1)) != 0)
      throw invalid_model_error("EncodingMatrix: samples must be a power of two >= 2");
  }

  int dim() const { return static_cast<int>(codes.rows()); }

  /// Code between two flat states, 1-based.
  int code_between(int flat_a, int flat_b) const { return codes(flat_a - 1, flat_b - 1); }
};

/// Ordered sequence of flat Liouville states, source first (1-based).
struct Pathway {
  std::vector<int> states;

  int order() const { return static_cast<int>(states.size()) - 1; }
  int source() const { return states.front(); }
  int target() const { return states.back(); }

  bool operator==(const Pathway& other) const { return states == other.states; }
  bool operator<(const Pathway& other) const {
    if (states.size() != other.states.size()) return states.size() < other.states.size();
    return states < other.states;
  }
};

/// Entry-wise modulation H_ij(t) -> H_ij(t) exp(2 pi i gamma_ij s / N).
inline Generator modulate(const Generator& gen, const EncodingMatrix& gamma, long s) {
  gamma.validate();
  if (gamma.dim() != gen.dim())
    throw invalid_model_error("modulate: encoding dimension mismatch");
  if (s < 0 || s >= gamma.samples)
    throw std::domain_error("modulate: s must lie in [0, N)");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(gamma.samples);
  std::vector<Eigen::MatrixXcd> mats = gen.channel_matrices();
  for (auto& m : mats)
    for (int c = 0; c < m.cols(); ++c)
      for (int r = 0; r < m.rows(); ++r)
        if (m(r, c) != Complex(0.0, 0.0) && gamma.codes(r, c) != 0) {
          const long phase = (static_cast<long>(gamma.codes(r, c)) * s) % gamma.samples;
          m(r, c) *= std::polar(1.0, step * static_cast<double>(phase));
        }
  return gen.with_matrices(std::move(mats));
}

struct FrequencyInfo {
  long raw = 0;  // sum of edge codes
  long bin = 0;  // raw mod N
};

/// Composite feature frequency of a pathway: the sum of its edge codes.
/// If a support matrix is supplied, every step must lie inside it.
inline FrequencyInfo pathway_frequency(const Pathway& p, const EncodingMatrix& gamma,
                                       const SupportMatrix* support = nullptr) {
  if (p.states.size() < 2) throw invalid_pathway_error("pathway needs at least one step");
  long raw = 0;
  for (std::size_t i = 1; i < p.states.size(); ++i) {
    const int a = p.states[i - 1];
    const int b = p.states[i];
    if (a < 1 || a > gamma.dim() || b < 1 || b > gamma.dim())
      throw invalid_pathway_error("pathway state out of range");
    if (support && !(*support)(b - 1, a - 1))
      throw invalid_pathway_error("pathway edge " + std::to_string(a) + "->" +
                                  std::to_string(b) + " outside generator support");
    raw += gamma.code_between(b, a);
  }
  return {raw, ((raw % gamma.samples) + gamma.samples) % gamma.samples};
}

/// All walks source -> target of length 1..max_order over the support.
/// A step a -> b requires a nonzero generator entry (b <- a); self-steps
/// are admitted only when allow_self is set and the diagonal is populated.
inline std::vector<Pathway> enumerate_pathways(const SupportMatrix& support, int source,
                                               int target, int max_order, bool allow_self) {
  const int dim = static_cast<int>(support.rows());
  if (source < 1 || source > dim || target < 1 || target > dim)
    throw invalid_pathway_error("enumerate_pathways: endpoint out of range");
  if (max_order < 1) return {};
  if (max_order > 8)
    throw limit_error("enumerate_pathways: max_order capped at 8, got " +
                      std::to_string(max_order));

  std::vector<Pathway> out;
  std::vector<int> walk{source};
  auto dfs = [&](auto&& self, int current) -> void {
    const int order = static_cast<int>(walk.size()) - 1;
    if (order >= 1 && current == target) out.push_back(Pathway{walk});
    if (order == max_order) return;
    for (int next = 1; next <= dim; ++next) {
      if (next == current && !allow_self) continue;
      if (!support(next - 1, current - 1)) continue;
      walk.push_back(next);
      self(self, next);
      walk.pop_back();
    }
  };
  dfs(dfs, source);
  std::sort(out.begin(), out.end());
  return out;
}

struct EncodingReport {
  long max_composite = 0;
  long min_samples = 1;  // smallest power of two > 2 * max_composite
  struct Collision {
    long bin = 0;
    std::vector<Pathway> pathways;
  };
  std::vector<Collision> collisions;
};

/// Collision and sample-count analysis of an encoding scheme.  Self-steps are
/// considered exactly on encoded diagonals (unencoded dwells do not move a
/// pathway out of its bin, so they are not separate walks here).
inline EncodingReport validate_encoding(const EncodingMatrix& gamma, const SupportMatrix& support,
                                        int source, int target, int max_order) {
  gamma.validate();
  EncodingReport report;
  if (!support.any()) return report;

  SupportMatrix masked = support;
  for (int i = 0; i < masked.rows(); ++i)
    masked(i, i) = support(i, i) && gamma.codes(i, i) > 0;

  const auto pathways = enumerate_pathways(masked, source, target, max_order, true);
  std::map<long, std::vector<Pathway>> by_bin;
  for (const auto& p : pathways) {
    const auto freq = pathway_frequency(p, gamma);
    report.max_composite = std::max(report.max_composite, freq.raw);
    by_bin[freq.bin].push_back(p);
  }
  while (report.min_samples <= 2 * report.max_composite) report.min_samples *= 2;
  for (auto& [bin, group] : by_bin)
    if (group.size() > 1)
      report.collisions.push_back({bin, std::move(group)});
  return report;
}

}  // namespace heod
