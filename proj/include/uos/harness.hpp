#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uos/bounds.hpp"
#include "uos/decoders.hpp"
#include "uos/sensing.hpp"
#include "uos/uos_model.hpp"

namespace uos {

enum class DecoderMode { Als, Exhaustive, Alternating };

const char* to_string(DecoderMode mode);
DecoderMode parse_decoder_mode(const std::string& text);

struct ExperimentConfig {
  ProblemShape shape;
  AssignmentSpec assignment = UniformLabels{};
  double coeff_scale = 1.0;
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  std::vector<int> k_grid;  // ascending, positive
  int trials_per_k = 10;
  DecoderMode decoder = DecoderMode::Als;
  DecodeConfig decode;
  std::uint64_t master_seed = 0;
};

/// 12 points from 0.5x to 2.0x dim_bound, rounded, deduplicated, at least 1.
std::vector<int> auto_k_grid(const ProblemShape& shape);

/// Reads the flat `key = value` format. Unknown keys are a Parse error.
ExperimentConfig parse_experiment_config(std::istream& is);

struct PhaseRecord {
  int m = 0, n = 0, clusters = 0;
  std::vector<int> ranks;
  int k = 0;
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  DecoderMode decoder = DecoderMode::Als;
  int trial = 0;
  std::uint64_t seed = 0;
  double nmse = 0.0;
  bool success = false;
  int iterations = 0;
  int restarts = 0;
  double wall_ms = 0.0;
  std::string reason;  // empty unless the trial threw
};

std::uint64_t trial_seed(std::uint64_t master_seed, int k, int trial);

/// One Monte-Carlo trial: sample subspaces, a UOS matrix and an ensemble from
/// the trial seed, measure, decode, score. Exceptions become a failed record.
PhaseRecord run_trial(const ExperimentConfig& config, int k, int trial, bool timing = false);

/// All trials, ordered by (k, trial). `jobs` OpenMP threads share the trial
/// list; the output does not depend on `jobs`.
std::vector<PhaseRecord> run_phase(const ExperimentConfig& config, int jobs = 1, bool timing = false);
std::vector<PhaseRecord> run_phase_serial(const ExperimentConfig& config, bool timing = false);

struct SummaryRow {
  int k = 0;
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
};

struct PhaseSummary {
  std::vector<SummaryRow> rows;
  std::vector<double> smoothed_rates;  // isotonic (nondecreasing) fit of the raw rates
  std::optional<double> k50;
  std::vector<int> flagged_k;  // k where the raw rate drops by > 3 binomial sds
};

/// Weighted pool-adjacent-violators fit.
std::vector<double> isotonic_fit(const std::vector<double>& values, const std::vector<double>& weights);

/// Linear interpolation of the (smoothed) success curve at 0.5. Returns the
/// first k when the curve starts at or above 0.5, nothing when it never gets there.
std::optional<double> interpolate_k50(const std::vector<int>& ks, const std::vector<double>& rates);

PhaseSummary summarize(const std::vector<PhaseRecord>& records);

void write_records_csv(std::ostream& os, const std::vector<PhaseRecord>& records);
void write_summary_csv(std::ostream& os, const PhaseSummary& summary, const ProblemShape& shape);

}  // namespace uos
