// Picture changes: interaction picture, rotating-wave approximation and the
// diagonal-eliminating affine transformation, plus the field-free closed form.
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "heod/liouville.hpp"

namespace heod {

enum class Picture { original, interaction, transformed };

struct PictureSpec {
  Picture picture = Picture::original;
  bool rwa = false;
  bool carry_phases = false;
};

inline const char* picture_name(Picture p) {
  switch (p) {
    case Picture::original: return "original";
    case Picture::interaction: return "interaction";
    case Picture::transformed: return "transformed";
  }
  return "?";
}

namespace detail {

/// Flat vector of Bohr frequencies h_(j,k) = w_j - w_k.
inline Eigen::VectorXd bohr_frequencies(const LevelSystem& sys) {
  const int d = sys.dim;
  Eigen::VectorXd h(d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) h(j * d + k) = sys.energies[j] - sys.energies[k];
  return h;
}

/// Splits a matrix into groups of entries sharing the exponent z_r - z_c.
/// Keys compare exactly; identical exponents arise from identical stored
/// values, so no tolerance is involved.
inline std::map<std::pair<double, double>, Eigen::MatrixXcd> group_by_exponent(
    const Eigen::MatrixXcd& m, const Eigen::VectorXcd& z) {
  std::map<std::pair<double, double>, Eigen::MatrixXcd> groups;
  const int d = static_cast<int>(m.rows());
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) {
      if (m(r, c) == Complex(0.0, 0.0)) continue;
      const Complex diff = z(r) - z(c);
      auto key = std::make_pair(diff.real(), diff.imag());
      auto it = groups.find(key);
      if (it == groups.end())
        it = groups.emplace(key, Eigen::MatrixXcd::Zero(d, d)).first;
      it->second(r, c) = m(r, c);
    }
  return groups;
}

inline void add_grouped_channels(Generator& gen, const Eigen::MatrixXcd& m,
                                 const Eigen::VectorXcd& z, const ScalarFn& base) {
  for (const auto& [key, mat] : group_by_exponent(m, z)) {
    const Complex diff(key.first, key.second);
    if (diff == Complex(0.0, 0.0)) {
      gen.add_channel(mat, base);
    } else if (base) {
      gen.add_channel(mat, [base, diff](double t) { return base(t) * std::exp(diff * t); });
    } else {
      gen.add_channel(mat, [diff](double t) { return std::exp(diff * t); });
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Interaction picture
// ---------------------------------------------------------------------------

/// V_I(t) family: the generator is split as H(t) = H0 + V(t) with H0 the real
/// Bohr diagonal, and V is rotated entry-wise, (V_I)_jk = V_jk e^{i(h_j-h_k)t}.
inline Generator interaction_picture(const LevelSystem& sys, const ControlField& field) {
  field.validate();
  const int dd = sys.dim * sys.dim;
  const Superoperator constant = build_liouvillian(sys, 0.0);
  const Superoperator dipole_part = build_liouvillian(sys, 1.0) - constant;
  const Eigen::VectorXd h = detail::bohr_frequencies(sys);
  const Eigen::VectorXcd z = Complex(0.0, 1.0) * h.cast<Complex>();

  Eigen::MatrixXcd v0 = constant;
  for (int i = 0; i < dd; ++i) v0(i, i) -= h(i);

  Generator gen(dd);
  detail::add_grouped_channels(gen, v0, z, nullptr);
  detail::add_grouped_channels(gen, dipole_part, z,
                               [field](double t) { return Complex(field_value(field, t), 0.0); });
  return gen;
}

/// Value of the interaction-picture generator at time t.
inline Superoperator interaction_generator(const LevelSystem& sys, const ControlField& field,
                                           double t) {
  return interaction_picture(sys, field).at(t);
}

// ---------------------------------------------------------------------------
// Rotating-wave approximation
// ---------------------------------------------------------------------------

/// RWA family: each oscillatory dipole entry keeps only its resonant field
/// component, leaving an envelope Rabi term; the diagonal is the constant
/// dissipative part.  Every driven entry must match exactly one component
/// within the 1/sigma resonance window.
inline Generator rwa_picture(const LevelSystem& sys, const ControlField& field,
                             bool carry_phases = false) {
  field.validate();
  const int dd = sys.dim * sys.dim;
  const Superoperator constant = build_liouvillian(sys, 0.0);
  const Superoperator dipole_part = build_liouvillian(sys, 1.0) - constant;
  const Eigen::VectorXd h = detail::bohr_frequencies(sys);
  const Eigen::VectorXcd z = Complex(0.0, 1.0) * h.cast<Complex>();

  Eigen::MatrixXcd v0 = constant;
  for (int i = 0; i < dd; ++i) v0(i, i) -= h(i);

  Generator gen(dd);
  detail::add_grouped_channels(gen, v0, z, nullptr);

  const bool driven = !field.is_zero() && !field.components.empty();
  if (driven) {
    const double window = 1.0 / field.envelope_width;
    Eigen::MatrixXcd rabi = Eigen::MatrixXcd::Zero(dd, dd);
    for (int c = 0; c < dd; ++c)
      for (int r = 0; r < dd; ++r) {
        if (dipole_part(r, c) == Complex(0.0, 0.0)) continue;
        const double gap = h(r) - h(c);
        int match = -1;
        for (std::size_t l = 0; l < field.components.size(); ++l) {
          if (std::abs(field.components[l].frequency - std::abs(gap)) < window) {
            if (match >= 0)
              throw rwa_mismatch_error("multiple field components resonant with gap " +
                                       std::to_string(std::abs(gap)));
            match = static_cast<int>(l);
          }
        }
        if (match < 0)
          throw rwa_mismatch_error("no field component resonant with gap " +
                                   std::to_string(std::abs(gap)));
        const auto& comp = field.components[match];
        Complex factor(0.5 * comp.amplitude, 0.0);
        if (carry_phases)
          factor *= std::polar(1.0, gap >= 0.0 ? -comp.phase : comp.phase);
        rabi(r, c) = dipole_part(r, c) * factor;
      }
    gen.add_channel(rabi,
                    [field](double t) { return Complex(field_envelope(field, t), 0.0); });
  }
  return gen;
}

/// Value of the RWA generator at time t.
inline Superoperator rwa_generator(const LevelSystem& sys, const ControlField& field, double t,
                                   bool carry_phases = false) {
  return rwa_picture(sys, field, carry_phases).at(t);
}

// ---------------------------------------------------------------------------
// Diagonal-eliminating transformation
// ---------------------------------------------------------------------------

/// Generator in the shifted and rescaled variables
///   rho~_mm = rho_mm - c_m,   rho~_mn = rho_mn e^{lambda_mn t},
/// with lambda_mn = i (H_I)_{mn,mn}.  Its diagonal is identically zero.
struct TransformedGenerator {
  Generator generator;
  StateVector steady;              // c, zero coherences
  Eigen::VectorXcd scale_exponents;  // lambda per flat index, 0 on populations

  int dim() const { return generator.dim(); }
};

/// Derives the zero-diagonal generator from an interaction-picture family and
/// a steady state c with H_I(t) c = 0.  Coherence rows and columns pick up the
/// exponential rescale; population-row diagonal terms are rewritten through
/// the trace-zero identity sum_m rho~_mm = 0.
inline TransformedGenerator eliminate_diagonals(const Generator& gen, const StateVector& steady) {
  const int dd = gen.dim();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dd))));
  if (d * d != dd)
    throw invalid_model_error("eliminate_diagonals: generator is not a Liouville superoperator");
  if (steady.size() != dd)
    throw shift_invalid_error("eliminate_diagonals: steady-state size mismatch");
  const LiouvilleIndexMap map(d);

  const auto& mats = gen.channel_matrices();
  const auto& fns = gen.channel_functions();

  // The diagonal must be constant in time: lambda would otherwise not exist.
  double scale = 0.0;
  for (const auto& m : mats) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < mats.size(); ++k)
    if (fns[k] && mats[k].diagonal().cwiseAbs().maxCoeff() > 1e-14 * scale)
      throw shift_invalid_error("eliminate_diagonals: time-dependent diagonal entries");

  // H_I(t) c = 0 for all t is equivalent to B_k c = 0 per channel.
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const double residual = (mats[k] * steady).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * std::max(1.0, scale))
      throw shift_invalid_error("eliminate_diagonals: generator does not annihilate the shift, "
                                "channel residual " + std::to_string(residual));
  }

  Eigen::MatrixXcd constant = Eigen::MatrixXcd::Zero(dd, dd);
  for (std::size_t k = 0; k < mats.size(); ++k)
    if (!fns[k]) constant += mats[k];

  Eigen::VectorXcd lambda = Eigen::VectorXcd::Zero(dd);
  for (int f = 1; f <= dd; ++f)
    if (!map.is_population(f)) lambda(f - 1) = Complex(0.0, 1.0) * constant(f - 1, f - 1);

  TransformedGenerator out{Generator(dd), steady, lambda};
  for (std::size_t k = 0; k < mats.size(); ++k) {
    Eigen::MatrixXcd m = mats[k];
    // Population rows: a * rho~_kk becomes -a * sum_{p != k} rho~_pp.
    for (int i = 1; i <= d; ++i) {
      const int fi = map.population(i) - 1;
      const Complex a = m(fi, fi);
      if (a == Complex(0.0, 0.0)) continue;
      for (int p = 1; p <= d; ++p)
        if (p != i) m(fi, map.population(p) - 1) -= a;
      m(fi, fi) = 0.0;
    }
    // Coherence diagonals cancel exactly against the derivative of the
    // rescale factor.
    for (int f = 1; f <= dd; ++f)
      if (!map.is_population(f)) m(f - 1, f - 1) = 0.0;
    detail::add_grouped_channels(out.generator, m, lambda, fns[k]);
  }
  return out;
}

/// Builds the transformed picture directly from model data: RWA interaction
/// picture when the field is active, plain interaction picture otherwise.
inline TransformedGenerator transformed_picture(const LevelSystem& sys, const ControlField& field,
                                                bool carry_phases = false) {
  const Generator base = field.is_zero() ? interaction_picture(sys, field)
                                         : rwa_picture(sys, field, carry_phases);
  return eliminate_diagonals(base, steady_state(sys));
}

enum class MapDirection { forward, backward };

/// Applies the affine state map (or its inverse) at time t.
inline StateVector map_state(const StateVector& state, const StateVector& steady,
                             const Eigen::VectorXcd& exponents, double t, MapDirection dir) {
  if (state.size() != steady.size() || state.size() != exponents.size())
    throw invalid_model_error("map_state: size mismatch");
  StateVector out(state.size());
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (dir == MapDirection::forward)
      out(i) = (state(i) - steady(i)) * std::exp(exponents(i) * t);
    else
      out(i) = state(i) * std::exp(-exponents(i) * t) + steady(i);
  }
  return out;
}

inline StateVector map_state(const StateVector& state, const TransformedGenerator& tg, double t,
                             MapDirection dir) {
  return map_state(state, tg.steady, tg.scale_exponents, t, dir);
}

// ---------------------------------------------------------------------------
// Field-free closed form
// ---------------------------------------------------------------------------

/// Populations (rho_11, rho_22, rho_33) of the dissipation-only three-level
/// cascade from the initial state (1, 0, 0).
inline std::array<double, 3> analytic_field_free(double gamma12, double gamma23, double t) {
  if (gamma12 <= 0.0 || gamma23 <= 0.0)
    throw std::domain_error("analytic_field_free: rates must be positive");
  const double omega =
      std::sqrt(gamma12 * gamma12 - gamma12 * gamma23 + gamma23 * gamma23);
  const double a = (gamma12 + gamma23) / (6.0 * omega) - 1.0 / 6.0;
  const double b = (-gamma12 - gamma23) / (6.0 * omega) - 1.0 / 6.0;
  const double e_minus = std::exp((-gamma12 - gamma23 - omega) * t);
  const double e_plus = std::exp((-gamma12 - gamma23 + omega) * t);

  const double p11 = 1.0 / 3.0 -
                     a * (-gamma12 + gamma23 - omega) * e_minus / gamma23 -
                     b * (-gamma12 + gamma23 + omega) * e_plus / gamma23;
  const double p22 = 1.0 / 3.0 -
                     a * (gamma12 + omega) * e_minus / gamma23 -
                     b * (gamma12 - omega) * e_plus / gamma23;
  const double p33 = 1.0 / 3.0 + a * e_minus + b * e_plus;
  return {p11, p22, p33};
}

}  // namespace heod
