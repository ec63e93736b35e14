// Command implementations behind the CLI subcommands.
#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "heod/config.hpp"
#include "heod/dyson.hpp"
#include "heod/reports.hpp"
#include "heod/sweep.hpp"
#include "heod/transforms.hpp"

namespace heod {

struct CommandOptions {
  std::string out_dir = ".";
  int workers = 1;
};

namespace detail {

inline std::string out_path(const CommandOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

/// Generator the sweep propagates, per configured picture.
inline Generator sweep_generator(const RunConfig& cfg) {
  switch (cfg.picture.picture) {
    case Picture::original:
      return liouvillian_generator(cfg.system, cfg.field);
    case Picture::interaction:
      return cfg.picture.rwa ? rwa_picture(cfg.system, cfg.field, cfg.picture.carry_phases)
                             : interaction_picture(cfg.system, cfg.field);
    case Picture::transformed:
      return transformed_picture(cfg.system, cfg.field, cfg.picture.carry_phases).generator;
  }
  throw config_error("unknown picture");
}

/// Generator whose bare pathway integrals define the quadrature reference.
/// Decoding in the original picture is compared against interaction-picture
/// pathway amplitudes; the transformed picture is compared against itself.
inline Generator oracle_generator(const RunConfig& cfg) {
  switch (cfg.picture.picture) {
    case Picture::original:
      return interaction_picture(cfg.system, cfg.field);
    case Picture::interaction:
      return cfg.picture.rwa ? rwa_picture(cfg.system, cfg.field, cfg.picture.carry_phases)
                             : interaction_picture(cfg.system, cfg.field);
    case Picture::transformed:
      return transformed_picture(cfg.system, cfg.field, cfg.picture.carry_phases).generator;
  }
  throw config_error("unknown picture");
}

/// Support used for pathway enumeration: self-steps are admitted exactly on
/// encoded diagonals, so unencoded dwells never spawn duplicate pathways.
inline SupportMatrix assignment_support(const Generator& gen, const EncodingMatrix& gamma) {
  SupportMatrix s = gen.support();
  for (int i = 0; i < s.rows(); ++i) s(i, i) = s(i, i) && gamma.codes(i, i) > 0;
  return s;
}

struct SweepArtifacts {
  Generator generator;
  SweepRecord record;
  Spectrum spectrum;
  std::vector<Pathway> pathways;
  PathwayReport report;
  double threshold_abs = 0.0;
};

inline SweepArtifacts run_pathway_pipeline(const RunConfig& cfg, const CommandOptions& opts) {
  Generator gen = sweep_generator(cfg);

  const auto support = gen.support();
  const auto check = validate_encoding(cfg.encoding, support, cfg.source, cfg.target,
                                       cfg.max_order);
  if (cfg.encoding.samples < check.min_samples)
    throw config_error("encoding.samples = " + std::to_string(cfg.encoding.samples) +
                       " aliases composite frequencies up to " +
                       std::to_string(check.max_composite) + " at order " +
                       std::to_string(cfg.max_order) + "; need at least " +
                       std::to_string(check.min_samples));

  SweepRecord record = run_sweep(gen, cfg.encoding, cfg.source, cfg.target, cfg.grid(),
                                 opts.workers, cfg.scheme,
                                 picture_name(cfg.picture.picture));
  Spectrum spectrum = decode_spectrum(record);

  double peak = 0.0;
  for (const auto& a : spectrum.amplitudes) peak = std::max(peak, std::abs(a));
  const double threshold_abs = cfg.threshold * peak;

  auto pathways = enumerate_pathways(assignment_support(gen, cfg.encoding), cfg.source,
                                     cfg.target, cfg.max_order, true);
  PathwayReport report = assign_pathways(spectrum, pathways, cfg.encoding, threshold_abs);
  return {std::move(gen), std::move(record), std::move(spectrum), std::move(pathways),
          std::move(report), threshold_abs};
}

}  // namespace detail

/// simulate: propagate the source state and write the population trajectory.
/// Picture transforms are undone before writing, so the file always holds
/// physical matrix elements.
inline int cmd_simulate(const RunConfig& cfg, const CommandOptions& opts) {
  const LiouvilleIndexMap map(cfg.system.dim);
  const Generator gen = detail::sweep_generator(cfg);

  StateVector rho0 = StateVector::Zero(gen.dim());
  rho0(cfg.source - 1) = 1.0;

  TransformedGenerator transformed{Generator(1), StateVector(), Eigen::VectorXcd()};
  const bool is_transformed = cfg.picture.picture == Picture::transformed;
  if (is_transformed) {
    transformed = transformed_picture(cfg.system, cfg.field, cfg.picture.carry_phases);
    rho0 = map_state(rho0, transformed, 0.0, MapDirection::forward);
  }

  Trajectory<StateVector> traj = propagate_state(gen, rho0, cfg.grid(), cfg.stride());

  const Eigen::VectorXd bohr = detail::bohr_frequencies(cfg.system);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const double t = traj.times[i];
    if (is_transformed)
      traj.samples[i] = map_state(traj.samples[i], transformed, t, MapDirection::backward);
    if (cfg.picture.picture != Picture::original)
      for (int f = 0; f < gen.dim(); ++f)
        traj.samples[i](f) *= std::polar(1.0, -bohr(f) * t);
  }

  const std::string path = detail::out_path(opts, "trajectory.csv");
  write_trajectory_csv(path, traj, map);
  std::cout << "wrote " << path << " (" << traj.samples.size() << " samples)\n";
  return 0;
}

/// pathways: sweep, decode and assign; writes the report CSV/JSON and the
/// spectrum dump.
inline int cmd_pathways(const RunConfig& cfg, const CommandOptions& opts) {
  const LiouvilleIndexMap map(cfg.system.dim);
  auto art = detail::run_pathway_pipeline(cfg, opts);

  write_pathway_csv(detail::out_path(opts, "pathways.csv"), art.report, cfg.scheme, map);
  write_pathways_json(detail::out_path(opts, "pathways.json"), art.report, art.record,
                      art.threshold_abs, cfg.threshold, map);
  write_spectrum_csv(detail::out_path(opts, "spectrum.csv"), art.spectrum);
  std::cout << "pathways: " << art.report.rows.size() << " rows above threshold, "
            << art.report.unassigned.size() << " unassigned bins\n";
  return 0;
}

/// compare: decoded bin amplitudes against the quadrature reference, with the
/// per-pathway ratio R = (|U_oracle| - |U_decoded|) / |U_oracle|.
inline int cmd_compare(const RunConfig& cfg, const CommandOptions& opts) {
  const LiouvilleIndexMap map(cfg.system.dim);
  auto art = detail::run_pathway_pipeline(cfg, opts);

  const Generator oracle = detail::oracle_generator(cfg);
  const QuadratureGrid qgrid(cfg.field.total_time, cfg.steps);

  std::vector<Pathway> paths;
  for (const auto& row : art.report.rows) paths.push_back(row.pathway);
  const auto oracle_amps = pathway_amplitudes(oracle, paths, qgrid);

  std::vector<ComparisonRow> rows;
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < art.report.rows.size(); ++i) {
    ComparisonRow cmp;
    cmp.decoded = art.report.rows[i];
    cmp.oracle_amplitude = oracle_amps[i];
    const double mags = std::abs(cmp.oracle_amplitude);
    cmp.ratio = mags > 0.0 ? (mags - cmp.decoded.magnitude) / mags : 0.0;
    max_ratio = std::max(max_ratio, std::abs(cmp.ratio));
    rows.push_back(std::move(cmp));
  }

  write_compare_csv(detail::out_path(opts, "compare.csv"), rows, map);
  write_compare_json(detail::out_path(opts, "compare.json"), rows, art.record, max_ratio, map);
  std::cout << "compare: " << rows.size() << " pathways, max |R| = " << fmt12(max_ratio)
            << "\n";
  return 0;
}

/// validate-encoding: collision report and minimum sample count.
inline int cmd_validate_encoding(const RunConfig& cfg, const CommandOptions& opts) {
  const LiouvilleIndexMap map(cfg.system.dim);
  const Generator gen = detail::sweep_generator(cfg);
  const auto report = validate_encoding(cfg.encoding, gen.support(), cfg.source, cfg.target,
                                        cfg.max_order);
  write_encoding_report_json(detail::out_path(opts, "encoding_report.json"), report,
                             cfg.encoding.samples, map);
  std::cout << "max_composite: " << report.max_composite << "\n"
            << "min_samples:   " << report.min_samples << "\n"
            << "configured:    " << cfg.encoding.samples
            << (cfg.encoding.samples >= report.min_samples ? " (ok)" : " (too small)") << "\n"
            << "collisions:    " << report.collisions.size() << "\n";
  for (const auto& c : report.collisions) {
    std::cout << "  bin " << c.bin << ":";
    for (const auto& p : c.pathways) std::cout << ' ' << format_pathway(p, map);
    std::cout << "\n";
  }
  return 0;
}

/// Maps exceptions onto the documented exit codes: 2 for configuration and
/// validation problems, 3 for numeric failures.
template <class Fn>
inline int guarded_command(Fn&& fn) {
  try {
    return fn();
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const invalid_model_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rwa_mismatch_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const shift_invalid_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const degenerate_steady_state_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const limit_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_overflow_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace heod
