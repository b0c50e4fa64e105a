#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "zzkit/config.hpp"
#include "zzkit/crossing.hpp"
#include "zzkit/design.hpp"
#include "zzkit/foster.hpp"
#include "zzkit/labeling.hpp"
#include "zzkit/protocols.hpp"
#include "zzkit/vector_fit.hpp"

namespace zzkit::io {

/// Evaluates f(0..n-1) on up to `threads` workers; results are stored by
/// index, so the output does not depend on scheduling. The first exception
/// thrown by any worker is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> slots(n);
  const std::size_t workers = std::min<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i] = f(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            slots[i] = f(i);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// zz-sweep ------------------------------------------------------------------

inline const std::vector<std::string> zz_sweep_header{"delta_hz", "zeta_exact_hz", "zeta_perturbative_hz",
                                                      "zeta_series_hz", "ambiguous_flag"};

struct ZzRow {
  double delta_hz = 0.0;
  double zeta_exact_hz = 0.0;
  double zeta_perturbative_hz = 0.0;  // NaN at a pole
  double zeta_series_hz = 0.0;        // NaN outside the series domain
  bool ambiguous = false;
  std::string error;  // non-empty: the point failed, flag column reads "error"
  std::optional<spectrum::LabeledSpectrum> spectrum;
};

std::vector<ZzRow> run_zz_sweep(const ZzSweepConfig& config, int threads = 1);
std::string zz_sweep_csv(const std::vector<ZzRow>& rows);
/// Per point: labels, energies, overlaps and the Pauli coefficients of the
/// dressed computational block (null when a label is ambiguous).
std::string zz_spectrum_json(const std::vector<ZzRow>& rows);

// blockade ------------------------------------------------------------------

inline const std::vector<std::string> blockade_header{"delay_s", "pulse_len_s", "p1_e", "p2_e"};
inline const std::vector<std::string> blockade_measured_header{"delay_s", "pulse_len_s", "p1_e", "p2_e",
                                                               "p1_e_measured", "p2_e_measured"};
inline const std::vector<std::string> spectral_header{"pulse_len_s", "delay_s", "p1_e", "spectral_power"};

struct BlockadeRow {
  double delay_s = 0.0;
  double pulse_len_s = 0.0;
  double p1_e = 0.0;
  double p2_e = 0.0;
  std::optional<double> p1_e_measured;
  std::optional<double> p2_e_measured;
  double norm_drift = 0.0;
  double trace_drift = 0.0;
};

struct SpectralRow {
  double pulse_len_s = 0.0;
  double delay_s = 0.0;
  double p1_e = 0.0;
  double spectral_power = 0.0;
  double norm_drift = 0.0;
};

/// delay mode: every pulse length, delays inner; pulse_length mode: every
/// delay, lengths inner.
std::vector<BlockadeRow> run_blockade_sweep(const BlockadeConfig& config, int threads = 1);
std::string blockade_csv(const std::vector<BlockadeRow>& rows);

std::vector<SpectralRow> run_blockade_spectral(const BlockadeConfig& config, int threads = 1);
std::string spectral_csv(const std::vector<SpectralRow>& rows);

// flux-spectroscopy ---------------------------------------------------------

inline const std::vector<std::string> flux_header{"flux_phi0", "q1_bare_hz", "q2_bare_hz", "lower_hz", "upper_hz"};

struct FluxResult {
  std::vector<spectrum::CrossingPoint> points;
  std::optional<double> two_j_hz;  // empty when the splitting has no interior minimum
  std::optional<double> flux_at_min;
  std::string note;
};

FluxResult run_flux_spectroscopy(const FluxSpectroscopyConfig& config, int threads = 1);
std::string flux_csv(const FluxResult& result);
std::string flux_summary_json(const FluxResult& result);

// ramsey --------------------------------------------------------------------

inline const std::vector<std::string> ramsey_header{"zeta_hz", "free_time_s", "p1_e_spectator_ground",
                                                    "p1_e_spectator_excited"};

struct RamseyRun {
  double zeta_model_hz = 0.0;
  dynamics::RamseyResult ground;
  dynamics::RamseyResult excited;
  double zeta_measured_hz = 0.0;
};

std::vector<RamseyRun> run_ramsey(const RamseyConfig& config, int threads = 1);
std::string ramsey_csv(const std::vector<RamseyRun>& runs);
std::string ramsey_summary_json(const std::vector<RamseyRun>& runs);

// optimize ------------------------------------------------------------------

inline const std::vector<std::string> history_header{"generation", "best_zeta_hz", "n_feasible"};

struct OptimizeOutput {
  std::vector<std::string> names;
  std::vector<double> best_x;
  double best_objective = 0.0;
  std::optional<optimizer::Candidate> candidate;  // physics problems only
  std::vector<optimizer::GenerationRecord> history;
  std::size_t evaluations = 0;
  std::string objective;
};

/// Seed and thread overrides apply when given.
OptimizeOutput run_optimize(const OptimizeConfig& config, std::optional<std::uint64_t> seed = std::nullopt,
                            std::optional<int> threads = std::nullopt);
std::string optimize_result_json(const OptimizeOutput& out);
std::string optimize_history_csv(const OptimizeOutput& out);

// foster-fit ----------------------------------------------------------------

inline const std::vector<std::string> admittance_header{"freq_rad_s", "re_y", "im_y"};

struct FosterFitOutput {
  circuit::RationalFit fit;
  std::vector<circuit::FosterMode> modes;
};

std::vector<circuit::FrequencySample> read_samples(const std::filesystem::path& path);
std::string samples_csv(const std::vector<circuit::FrequencySample>& samples);
FosterFitOutput run_foster_fit(const FosterFitConfig& config);
std::string foster_fit_json(const FosterFitOutput& out);

}  // namespace zzkit::io
