// The encoded s-sweep, spectral decoding and pathway assignment.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "heod/encoding.hpp"
#include "heod/propagation.hpp"

namespace heod {

/// Final-time matrix elements u(s) = <<target| U(T, s) |source>> for
/// s = 0 .. N-1, with the run metadata that produced them.
struct SweepRecord {
  std::vector<Complex> values;
  long samples = 0;
  int source = 0;  // 1-based flat indices
  int target = 0;
  TimeGrid grid;
  EncodingMatrix encoding;
  std::string scheme;
  std::string picture;
};

/// Complex bin amplitudes c(f), f = 0 .. N-1.
struct Spectrum {
  std::vector<Complex> amplitudes;

  long bins() const { return static_cast<long>(amplitudes.size()); }
};

/// Runs the N encoded propagations from the source basis vector and records
/// the target element.  Propagations are independent; `workers` threads pull
/// sweep indices from a shared counter and write results by position, so the
/// output does not depend on scheduling.
inline SweepRecord run_sweep(const Generator& gen, const EncodingMatrix& gamma, int source,
                             int target, const TimeGrid& grid, int workers = 1,
                             std::string scheme = {}, std::string picture = {}) {
  gamma.validate();
  if (gamma.dim() != gen.dim())
    throw invalid_model_error("run_sweep: encoding dimension mismatch");
  if (source < 1 || source > gen.dim() || target < 1 || target > gen.dim())
    throw invalid_model_error("run_sweep: source/target out of range");

  const long n = gamma.samples;
  SweepRecord record;
  record.values.resize(n);
  record.samples = n;
  record.source = source;
  record.target = target;
  record.grid = grid;
  record.encoding = gamma;
  record.scheme = std::move(scheme);
  record.picture = std::move(picture);

  const detail::CompiledGenerator base(gen, grid);

  // Exact unit phases e^{2 pi i r / N}; code * s is reduced mod N first.
  std::vector<Complex> twiddle(n);
  for (long r = 0; r < n; ++r)
    twiddle[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                                     static_cast<double>(n));

  std::atomic<long> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&]() {
    detail::Rk4Workspace w(gen.dim());
    std::vector<Complex> y(gen.dim());
    for (;;) {
      const long s = next.fetch_add(1);
      if (s >= n) return;
      try {
        const auto modulated = base.transformed_values([&](int r, int c, Complex v) {
          const int code = gamma.codes(r, c);
          if (code == 0) return v;
          return v * twiddle[(static_cast<long>(code) * s) % n];
        });
        std::fill(y.begin(), y.end(), Complex(0.0, 0.0));
        y[source - 1] = 1.0;
        y = detail::rk4_final(modulated, std::move(y), w);
        record.values[s] = y[target - 1];
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
          error = std::make_exception_ptr(numeric_overflow_error(
              "sweep propagation failed at s = " + std::to_string(s) + ": " + e.what()));
        return;
      }
    }
  };

  const int thread_count = std::max(1, workers);
  if (thread_count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return record;
}

/// Inverse transform c(f) = (1/N) sum_s u(s) e^{-2 pi i f s / N} via an
/// iterative radix-2 FFT (N is a power of two by construction).
inline Spectrum decode_spectrum(const SweepRecord& record) {
  const long n = record.samples;
  std::vector<Complex> a = record.values;

  for (long i = 1, j = 0; i < n; ++i) {  // bit reversal
    long bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (long len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wl = std::polar(1.0, angle);
    for (long i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (long j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  for (auto& v : a) v /= static_cast<double>(n);
  return Spectrum{std::move(a)};
}

struct PathwayReportRow {
  Pathway pathway;
  long raw_frequency = 0;
  long bin = 0;
  Complex amplitude;
  double magnitude = 0.0;
  double phase = 0.0;
  bool ambiguous = false;  // bin shared by several enumerated pathways
};

struct UnassignedBin {
  long bin = 0;
  Complex amplitude;
};

struct PathwayReport {
  std::vector<PathwayReportRow> rows;
  std::vector<UnassignedBin> unassigned;
};

/// Matches each pathway to its spectral bin.  Pathways whose bin magnitude
/// falls below the (absolute) threshold are dropped; bins above threshold
/// with no enumerated pathway are listed as unassigned; several pathways on
/// one bin are flagged ambiguous and report the bin amplitude (their sum).
inline PathwayReport assign_pathways(const Spectrum& spectrum,
                                     const std::vector<Pathway>& pathways,
                                     const EncodingMatrix& gamma, double threshold) {
  PathwayReport report;
  std::map<long, int> bin_count;
  std::vector<FrequencyInfo> freqs;
  freqs.reserve(pathways.size());
  for (const auto& p : pathways) {
    freqs.push_back(pathway_frequency(p, gamma));
    ++bin_count[freqs.back().bin];
  }

  for (std::size_t i = 0; i < pathways.size(); ++i) {
    const Complex amp = spectrum.amplitudes[freqs[i].bin];
    if (std::abs(amp) < threshold) continue;
    PathwayReportRow row;
    row.pathway = pathways[i];
    row.raw_frequency = freqs[i].raw;
    row.bin = freqs[i].bin;
    row.amplitude = amp;
    row.magnitude = std::abs(amp);
    row.phase = std::arg(amp);
    row.ambiguous = bin_count[freqs[i].bin] > 1;
    report.rows.push_back(std::move(row));
  }

  for (long f = 0; f < spectrum.bins(); ++f) {
    if (std::abs(spectrum.amplitudes[f]) < threshold) continue;
    if (bin_count.find(f) == bin_count.end())
      report.unassigned.push_back({f, spectrum.amplitudes[f]});
  }
  return report;
}

}  // namespace heod
