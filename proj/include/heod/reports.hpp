// Deterministic CSV and JSON report writers.
//
// Data files carry no timestamps and use fixed formatting ('.' decimal,
// '\n' line endings, 12 significant digits), so repeated runs of the same
// configuration produce byte-identical files.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heod/liouville.hpp"
#include "heod/propagation.hpp"
#include "heod/sweep.hpp"

namespace heod {

/// 12 significant digits, locale independent.
inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// "11>22>33" for single-digit levels, "(1,1)>(2,2)" otherwise.
inline std::string format_pathway(const Pathway& p, const LiouvilleIndexMap& map) {
  std::string out;
  for (std::size_t i = 0; i < p.states.size(); ++i) {
    if (i) out += '>';
    const auto [j, k] = map.levels(p.states[i]);
    if (map.dim() <= 9) {
      out += std::to_string(j);
      out += std::to_string(k);
    } else {
      out += '(' + std::to_string(j) + ',' + std::to_string(k) + ')';
    }
  }
  return out;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot open output file '" + path + "'");
  return out;
}

/// t, populations, trace and Hermiticity residual per sample.
inline void write_trajectory_csv(const std::string& path,
                                 const Trajectory<StateVector>& traj,
                                 const LiouvilleIndexMap& map) {
  auto out = open_output(path);
  out << "t";
  for (int m = 1; m <= map.dim(); ++m) out << ",rho_" << m << m;
  out << ",trace,herm_residual\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& state = traj.samples[i];
    out << fmt12(traj.times[i]);
    double trace = 0.0;
    for (int m = 1; m <= map.dim(); ++m) {
      const double p = state(map.population(m) - 1).real();
      trace += p;
      out << ',' << fmt12(p);
    }
    double herm = 0.0;
    for (int j = 1; j <= map.dim(); ++j)
      for (int k = 1; k <= map.dim(); ++k) {
        const Complex d =
            state(map.flat(j, k) - 1) - std::conj(state(map.flat(k, j) - 1));
        herm = std::max(herm, std::abs(d));
      }
    out << ',' << fmt12(trace) << ',' << fmt12(herm) << '\n';
  }
}

inline void write_pathway_csv(const std::string& path, const PathwayReport& report,
                              const std::string& scheme, const LiouvilleIndexMap& map) {
  auto out = open_output(path);
  out << "pathway,order,lf_raw,bin,magnitude,phase_rad,scheme\n";
  for (const auto& row : report.rows) {
    out << format_pathway(row.pathway, map) << ',' << row.pathway.order() << ','
        << row.raw_frequency << ',' << row.bin << ',' << fmt12(row.magnitude) << ','
        << fmt12(row.phase) << ',' << scheme << '\n';
  }
}

inline void write_spectrum_csv(const std::string& path, const Spectrum& spectrum) {
  auto out = open_output(path);
  out << "bin,re,im\n";
  for (long f = 0; f < spectrum.bins(); ++f)
    out << f << ',' << fmt12(spectrum.amplitudes[f].real()) << ','
        << fmt12(spectrum.amplitudes[f].imag()) << '\n';
}

namespace detail {

inline nlohmann::ordered_json complex_json(const Complex& v) {
  return {{"re", v.real()}, {"im", v.imag()}};
}

inline nlohmann::ordered_json row_json(const PathwayReportRow& row,
                                       const LiouvilleIndexMap& map) {
  nlohmann::ordered_json r;
  r["pathway"] = format_pathway(row.pathway, map);
  r["states"] = row.pathway.states;
  r["order"] = row.pathway.order();
  r["lf_raw"] = row.raw_frequency;
  r["bin"] = row.bin;
  r["amplitude"] = complex_json(row.amplitude);
  r["magnitude"] = row.magnitude;
  r["phase_rad"] = row.phase;
  r["ambiguous"] = row.ambiguous;
  return r;
}

}  // namespace detail

/// Full pathway report with run manifest: every magnitude and phase traces to
/// its (scheme, picture, bin) triple.
inline void write_pathways_json(const std::string& path, const PathwayReport& report,
                                const SweepRecord& record, double threshold_abs,
                                double threshold_rel, const LiouvilleIndexMap& map) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "pathways";
  j["picture"] = record.picture;
  j["scheme"] = record.scheme;
  j["samples"] = record.samples;
  j["steps"] = record.grid.steps;
  j["total_time"] = record.grid.t_end;
  const auto src = map.levels(record.source);
  const auto tgt = map.levels(record.target);
  j["source"] = {src.first, src.second};
  j["target"] = {tgt.first, tgt.second};
  j["threshold_relative"] = threshold_rel;
  j["threshold_absolute"] = threshold_abs;
  j["unencoded_element"] = detail::complex_json(record.values.front());
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) j["rows"].push_back(detail::row_json(row, map));
  j["unassigned"] = nlohmann::ordered_json::array();
  for (const auto& u : report.unassigned) {
    nlohmann::ordered_json e;
    e["bin"] = u.bin;
    e["amplitude"] = detail::complex_json(u.amplitude);
    e["magnitude"] = std::abs(u.amplitude);
    j["unassigned"].push_back(std::move(e));
  }
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

struct ComparisonRow {
  PathwayReportRow decoded;
  Complex oracle_amplitude;
  double ratio = 0.0;  // (|oracle| - |decoded|) / |oracle|
};

inline void write_compare_csv(const std::string& path, const std::vector<ComparisonRow>& rows,
                              const LiouvilleIndexMap& map) {
  auto out = open_output(path);
  out << "pathway,order,bin,decoded_magnitude,oracle_magnitude,ratio_R,"
         "decoded_phase_rad,oracle_phase_rad\n";
  for (const auto& r : rows) {
    out << format_pathway(r.decoded.pathway, map) << ',' << r.decoded.pathway.order() << ','
        << r.decoded.bin << ',' << fmt12(r.decoded.magnitude) << ','
        << fmt12(std::abs(r.oracle_amplitude)) << ',' << fmt12(r.ratio) << ','
        << fmt12(r.decoded.phase) << ',' << fmt12(std::arg(r.oracle_amplitude)) << '\n';
  }
}

inline void write_compare_json(const std::string& path, const std::vector<ComparisonRow>& rows,
                               const SweepRecord& record, double max_ratio,
                               const LiouvilleIndexMap& map) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "compare";
  j["picture"] = record.picture;
  j["scheme"] = record.scheme;
  j["samples"] = record.samples;
  j["max_ratio"] = max_ratio;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    auto e = detail::row_json(r.decoded, map);
    e["oracle_amplitude"] = detail::complex_json(r.oracle_amplitude);
    e["oracle_magnitude"] = std::abs(r.oracle_amplitude);
    e["oracle_phase_rad"] = std::arg(r.oracle_amplitude);
    e["ratio_R"] = r.ratio;
    j["rows"].push_back(std::move(e));
  }
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

inline void write_encoding_report_json(const std::string& path, const EncodingReport& report,
                                       long configured_samples,
                                       const LiouvilleIndexMap& map) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "encoding-report";
  j["max_composite"] = report.max_composite;
  j["min_samples"] = report.min_samples;
  j["configured_samples"] = configured_samples;
  j["collisions"] = nlohmann::ordered_json::array();
  for (const auto& c : report.collisions) {
    nlohmann::ordered_json e;
    e["bin"] = c.bin;
    e["pathways"] = nlohmann::ordered_json::array();
    for (const auto& p : c.pathways) e["pathways"].push_back(format_pathway(p, map));
    j["collisions"].push_back(std::move(e));
  }
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace heod
