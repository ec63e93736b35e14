// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace heod {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid physical model data (bad dimensions, asymmetric dipole, ...).
class invalid_model_error : public error {
public:
  using error::error;
};

/// A pathway references an edge outside the generator support.
class invalid_pathway_error : public error {
public:
  using error::error;
};

/// Combinatorial guard tripped (e.g. pathway order above the enumeration cap).
class limit_error : public error {
public:
  using error::error;
};

/// Field-free generator has no unique trace-one fixed point.
class degenerate_steady_state_error : public error {
public:
  using error::error;
};

/// A driven transition has no (or no unique) resonant field component.
class rwa_mismatch_error : public error {
public:
  using error::error;
};

/// The affine shift requires a steady state annihilated by the generator.
class shift_invalid_error : public error {
public:
  using error::error;
};

/// Non-finite values appeared during integration.
class numeric_overflow_error : public error {
public:
  using error::error;
};

/// Malformed or inconsistent run configuration.
class config_error : public error {
public:
  using error::error;
};

}  // namespace heod
