// Liouville-space model data and generator construction.
//
// Density matrices are vectorized row-major: the pair (j,k), 1 <= j,k <= d,
// maps to the flat index (j-1)*d + k (1-based).  All public functions taking
// "flat" state indices, sources or targets use this 1-based convention;
// raw Eigen objects are indexed 0-based as usual.
//
// Generators obey the evolution law  i d|rho>>/dt = H(t) |rho>>.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "heod/errors.hpp"

namespace heod {

using Complex = std::complex<double>;

/// D x D complex matrix acting on vectorized density matrices.
using Superoperator = Eigen::MatrixXcd;

/// Length-D complex vector of rho_jk in index-map order.
using StateVector = Eigen::VectorXcd;

/// Scalar time dependence of one generator channel.
using ScalarFn = std::function<Complex(double)>;

// ---------------------------------------------------------------------------
// Index conventions
// ---------------------------------------------------------------------------

/// Bijection between level pairs (j,k) and flat Liouville indices.
class LiouvilleIndexMap {
public:
  explicit LiouvilleIndexMap(int dim) : dim_(dim) {
    if (dim < 2) throw invalid_model_error("index map requires dim >= 2");
  }

  int dim() const { return dim_; }
  int size() const { return dim_ * dim_; }

  /// (j,k) -> flat, all 1-based.
  int flat(int j, int k) const {
    check_level(j);
    check_level(k);
    return (j - 1) * dim_ + k;
  }

  /// flat -> (j,k), all 1-based.
  std::pair<int, int> levels(int flat) const {
    check_flat(flat);
    return {(flat - 1) / dim_ + 1, (flat - 1) % dim_ + 1};
  }

  bool is_population(int flat) const {
    auto [j, k] = levels(flat);
    return j == k;
  }

  /// Flat index of the population rho_mm.
  int population(int m) const { return flat(m, m); }

private:
  void check_level(int j) const {
    if (j < 1 || j > dim_) throw invalid_model_error("level index out of range");
  }
  void check_flat(int f) const {
    if (f < 1 || f > size()) throw invalid_model_error("flat index out of range");
  }
  int dim_;
};

inline LiouvilleIndexMap index_map(int dim) { return LiouvilleIndexMap(dim); }

// ---------------------------------------------------------------------------
// Physical model data
// ---------------------------------------------------------------------------

/// Directed dissipation channel |to><from| with rate alpha >= 0.
struct LindbladChannel {
  int from = 0;
  int to = 0;
  double rate = 0.0;
};

struct LevelSystem {
  int dim = 0;
  std::vector<double> energies;  // Bohr energies, energies[0] == 0
  Eigen::MatrixXd dipole;        // symmetric, zero diagonal
  std::vector<LindbladChannel> channels;
  double eta = 0.0;              // environment coupling strength

  void validate() const {
    if (dim < 2) throw invalid_model_error("LevelSystem: dim must be >= 2");
    if (static_cast<int>(energies.size()) != dim)
      throw invalid_model_error("LevelSystem: energies size mismatch");
    if (energies[0] != 0.0)
      throw invalid_model_error("LevelSystem: ground-state energy must be 0");
    if (dipole.rows() != dim || dipole.cols() != dim)
      throw invalid_model_error("LevelSystem: dipole shape mismatch");
    for (int j = 0; j < dim; ++j) {
      if (dipole(j, j) != 0.0)
        throw invalid_model_error("LevelSystem: dipole diagonal must be zero");
      for (int k = 0; k < j; ++k)
        if (dipole(j, k) != dipole(k, j))
          throw invalid_model_error("LevelSystem: dipole must be symmetric");
    }
    if (eta < 0.0) throw invalid_model_error("LevelSystem: eta must be >= 0");
    for (const auto& ch : channels) {
      if (ch.from < 1 || ch.from > dim || ch.to < 1 || ch.to > dim)
        throw invalid_model_error("LevelSystem: channel endpoint out of range");
      if (ch.from == ch.to)
        throw invalid_model_error("LevelSystem: channel endpoints must differ");
      if (ch.rate < 0.0)
        throw invalid_model_error("LevelSystem: channel rate must be >= 0");
    }
  }
};

struct FieldComponent {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

struct ControlField {
  double total_time = 0.0;     // T
  double envelope_width = 0.0; // sigma
  std::vector<FieldComponent> components;

  void validate() const {
    if (total_time <= 0.0) throw invalid_model_error("ControlField: T must be > 0");
    if (envelope_width <= 0.0)
      throw invalid_model_error("ControlField: sigma must be > 0");
  }

  bool is_zero() const {
    for (const auto& c : components)
      if (c.amplitude != 0.0) return false;
    return true;
  }
};

/// Gaussian envelope centred at T/2.
inline double field_envelope(const ControlField& f, double t) {
  const double u = (t - 0.5 * f.total_time) / f.envelope_width;
  return std::exp(-0.5 * u * u);
}

/// E(t) = exp(-(t-T/2)^2 / 2 sigma^2) * sum_l A_l cos(v_l t + theta_l).
inline double field_value(const ControlField& f, double t) {
  double carrier = 0.0;
  for (const auto& c : f.components)
    carrier += c.amplitude * std::cos(c.frequency * t + c.phase);
  return field_envelope(f, t) * carrier;
}

// ---------------------------------------------------------------------------
// Time-dependent generators
// ---------------------------------------------------------------------------

/// Generator family H(t) = sum_k f_k(t) * B_k with constant matrices B_k.
///
/// Channel 0 is the constant part (scalar function identically 1); additional
/// channels carry an explicit scalar time dependence.  The split is exact for
/// every picture used here, so entry-wise modulation and picture transforms
/// act on the matrices alone.
class Generator {
public:
  explicit Generator(int dim) : dim_(dim) {
    if (dim < 1) throw invalid_model_error("Generator: dim must be >= 1");
  }

  int dim() const { return dim_; }

  /// Adds f(t) * coeffs.  A null function means a constant channel; constant
  /// channels are merged into a single slot.
  Generator& add_channel(const Eigen::MatrixXcd& coeffs, ScalarFn f = nullptr) {
    if (coeffs.rows() != dim_ || coeffs.cols() != dim_)
      throw invalid_model_error("Generator: channel shape mismatch");
    if (!f) {
      if (mats_.empty() || fns_[0]) {
        mats_.insert(mats_.begin(), coeffs);
        fns_.insert(fns_.begin(), nullptr);
      } else {
        mats_[0] += coeffs;
      }
    } else {
      mats_.push_back(coeffs);
      fns_.push_back(std::move(f));
    }
    return *this;
  }

  std::size_t channels() const { return mats_.size(); }
  const std::vector<Eigen::MatrixXcd>& channel_matrices() const { return mats_; }
  const std::vector<ScalarFn>& channel_functions() const { return fns_; }

  /// Dense value H(t).
  Superoperator at(double t) const {
    Superoperator h = Superoperator::Zero(dim_, dim_);
    for (std::size_t k = 0; k < mats_.size(); ++k)
      h += coefficient(k, t) * mats_[k];
    return h;
  }

  /// Single entry H(row,col)(t), 0-based matrix indices.
  Complex entry(int row, int col, double t) const {
    Complex v = 0.0;
    for (std::size_t k = 0; k < mats_.size(); ++k)
      v += coefficient(k, t) * mats_[k](row, col);
    return v;
  }

  Complex coefficient(std::size_t k, double t) const {
    return fns_[k] ? fns_[k](t) : Complex(1.0, 0.0);
  }

  /// y = H(t) x.
  void apply(double t, const StateVector& x, StateVector& y) const {
    y.setZero(dim_);
    for (std::size_t k = 0; k < mats_.size(); ++k)
      y.noalias() += coefficient(k, t) * (mats_[k] * x);
  }

  /// True where any channel has a nonzero entry.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support() const {
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> s(dim_, dim_);
    s.setConstant(false);
    for (const auto& m : mats_)
      for (int c = 0; c < dim_; ++c)
        for (int r = 0; r < dim_; ++r)
          if (m(r, c) != Complex(0.0, 0.0)) s(r, c) = true;
    return s;
  }

  /// Returns a copy with every channel matrix replaced.
  Generator with_matrices(std::vector<Eigen::MatrixXcd> mats) const {
    if (mats.size() != mats_.size())
      throw invalid_model_error("Generator: channel count mismatch");
    Generator g(dim_);
    g.mats_ = std::move(mats);
    g.fns_ = fns_;
    return g;
  }

private:
  int dim_;
  std::vector<Eigen::MatrixXcd> mats_;
  std::vector<ScalarFn> fns_;
};

// ---------------------------------------------------------------------------
// Liouvillian construction
// ---------------------------------------------------------------------------

namespace detail {

/// Superoperator of [A, .] for a Hilbert-space matrix A.
inline Superoperator commutator_superoperator(const Eigen::MatrixXcd& a) {
  const int d = static_cast<int>(a.rows());
  const int dd = d * d;
  Superoperator s = Superoperator::Zero(dd, dd);
  auto flat = [d](int j, int k) { return j * d + k; };  // 0-based here
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      for (int m = 0; m < d; ++m) {
        s(flat(j, k), flat(m, k)) += a(j, m);   // left multiplication
        s(flat(j, k), flat(j, m)) -= a(m, k);   // right multiplication
      }
    }
  return s;
}

/// Superoperator of the Lindblad dissipator for jump channels |to><from|.
inline Superoperator dissipator_superoperator(int d,
                                              const std::vector<LindbladChannel>& channels) {
  const int dd = d * d;
  Superoperator s = Superoperator::Zero(dd, dd);
  auto flat = [d](int j, int k) { return j * d + k; };
  for (const auto& ch : channels) {
    const int from = ch.from - 1;
    const int to = ch.to - 1;
    const double a = ch.rate;
    s(flat(to, to), flat(from, from)) += a;          // L rho L+
    for (int k = 0; k < d; ++k) {
      s(flat(from, k), flat(from, k)) -= 0.5 * a;    // -1/2 L+L rho
      s(flat(k, from), flat(k, from)) -= 0.5 * a;    // -1/2 rho L+L
    }
  }
  return s;
}

}  // namespace detail

/// Liouville-space generator at a fixed field value e:
/// H = [H0 - mu e, .] + i eta F, so that i d rho/dt = H rho reproduces the
/// master equation element-wise.
inline Superoperator build_liouvillian(const LevelSystem& sys, double field_amplitude) {
  sys.validate();
  const int d = sys.dim;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) h(j, j) = sys.energies[j];
  h -= field_amplitude * sys.dipole.cast<Complex>();
  Superoperator out = detail::commutator_superoperator(h);
  out += Complex(0.0, sys.eta) * detail::dissipator_superoperator(d, sys.channels);
  return out;
}

/// Full time-dependent family H(t) = C + E(t) X.
inline Generator liouvillian_generator(const LevelSystem& sys, const ControlField& field) {
  field.validate();
  const Superoperator constant = build_liouvillian(sys, 0.0);
  const Superoperator dipole_part = build_liouvillian(sys, 1.0) - constant;
  Generator g(sys.dim * sys.dim);
  g.add_channel(constant);
  g.add_channel(dipole_part, [field](double t) { return Complex(field_value(field, t), 0.0); });
  return g;
}

// ---------------------------------------------------------------------------
// Steady state
// ---------------------------------------------------------------------------

/// Field-free fixed point with trace one and zero coherences.
///
/// The population block of H(field = 0) is solved for its null space by SVD;
/// anything other than a one-dimensional null space raises
/// degenerate_steady_state_error.
inline StateVector steady_state(const LevelSystem& sys) {
  sys.validate();
  const int d = sys.dim;
  const LiouvilleIndexMap map(d);
  const Superoperator h0 = build_liouvillian(sys, 0.0);

  Eigen::MatrixXcd pop(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      pop(m, n) = h0(map.population(m + 1) - 1, map.population(n + 1) - 1);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pop, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(sv(0), 1e-300);
  int null_dim = 0;
  for (int i = 0; i < d; ++i)
    if (sv(i) <= tol) ++null_dim;
  if (null_dim != 1)
    throw degenerate_steady_state_error(
        "population block null space has dimension " + std::to_string(null_dim));

  Eigen::VectorXcd v = svd.matrixV().col(d - 1);
  const Complex total = v.sum();
  if (std::abs(total) < 1e-12)
    throw degenerate_steady_state_error("steady-state populations are traceless");
  v /= total;

  StateVector c = StateVector::Zero(d * d);
  for (int m = 0; m < d; ++m)
    c(map.population(m + 1) - 1) = Complex(v(m).real(), 0.0);

  const double residual = (h0 * c).norm();
  if (residual > 1e-12)
    throw degenerate_steady_state_error("steady-state residual " + std::to_string(residual));
  return c;
}

}  // namespace heod
