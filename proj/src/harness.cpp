#include "uos/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "uos/random.hpp"
#include "uos/text_io.hpp"

namespace uos {

const char* to_string(DecoderMode mode) {
  switch (mode) {
    case DecoderMode::Als: return "als";
    case DecoderMode::Exhaustive: return "exhaustive";
    case DecoderMode::Alternating: return "alternating";
  }
  return "unknown";
}

DecoderMode parse_decoder_mode(const std::string& text) {
  if (text == "als") return DecoderMode::Als;
  if (text == "exhaustive") return DecoderMode::Exhaustive;
  if (text == "alternating") return DecoderMode::Alternating;
  throw Error(ErrorKind::Parse, "unknown decoder mode '" + text + "'");
}

std::vector<int> auto_k_grid(const ProblemShape& shape) {
  const double bound = static_cast<double>(dim_bound(shape));
  std::vector<int> grid;
  for (int i = 0; i < 12; ++i) {
    const double k = std::round(bound * (0.5 + 1.5 * i / 11.0));
    const int v = std::max(1, static_cast<int>(k));
    if (grid.empty() || grid.back() != v) grid.push_back(v);
  }
  return grid;
}

namespace {

int to_int(const KeyValueEntry& e, const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(e.value, &used);
    if (used == e.value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parse, "line " + std::to_string(e.line) + ": " + key + " must be an integer");
}

double to_real(const KeyValueEntry& e, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used == e.value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parse, "line " + std::to_string(e.line) + ": " + key + " must be a number");
}

void validate(const ExperimentConfig& c) {
  if (c.shape.m < 1 || c.shape.n < 1) throw Error(ErrorKind::InvalidDimension, "m and n must be positive");
  if (c.shape.ranks.empty()) throw Error(ErrorKind::InvalidDimension, "ranks must be nonempty");
  if (c.k_grid.empty()) throw Error(ErrorKind::Domain, "k grid is empty");
  for (std::size_t i = 0; i < c.k_grid.size(); ++i) {
    if (c.k_grid[i] < 1) throw Error(ErrorKind::Domain, "k grid entries must be positive");
    if (i > 0 && c.k_grid[i] <= c.k_grid[i - 1]) throw Error(ErrorKind::Domain, "k grid must be strictly ascending");
  }
  if (c.trials_per_k < 1) throw Error(ErrorKind::Domain, "trials per k must be positive");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& is) {
  static const std::set<std::string> known = {
      "m", "n", "ranks", "assignment", "cluster_sizes", "labels", "coeff_scale", "ensemble", "k_grid",
      "trials", "decoder", "max_iterations", "rel_tolerance", "restarts", "ridge", "success_nmse",
      "outer_rounds", "seed"};
  const auto kv = parse_key_values(is);
  for (const auto& [key, entry] : kv)
    if (!known.count(key)) throw Error(ErrorKind::Parse, "line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
  for (const char* required : {"m", "n", "ranks"})
    if (!kv.count(required)) throw Error(ErrorKind::Parse, std::string("missing required key '") + required + "'");

  ExperimentConfig c;
  c.shape.m = to_int(kv.at("m"), "m");
  c.shape.n = to_int(kv.at("n"), "n");
  c.shape.ranks = parse_int_list(kv.at("ranks").value);

  const std::string mode = kv.count("assignment") ? kv.at("assignment").value : "uniform";
  if (mode == "uniform") {
    c.assignment = UniformLabels{};
  } else if (mode == "fixed") {
    if (!kv.count("cluster_sizes")) throw Error(ErrorKind::Parse, "assignment = fixed needs cluster_sizes");
    c.assignment = FixedSizes{parse_int_list(kv.at("cluster_sizes").value)};
  } else if (mode == "explicit") {
    if (!kv.count("labels")) throw Error(ErrorKind::Parse, "assignment = explicit needs labels");
    auto labels = parse_int_list(kv.at("labels").value);
    for (auto& l : labels) --l;
    c.assignment = ExplicitLabels{std::move(labels)};
  } else {
    throw Error(ErrorKind::Parse, "assignment must be uniform, fixed or explicit");
  }

  if (kv.count("coeff_scale")) c.coeff_scale = to_real(kv.at("coeff_scale"), "coeff_scale");
  if (kv.count("ensemble")) c.ensemble = parse_ensemble_kind(kv.at("ensemble").value);
  if (!kv.count("k_grid") || kv.at("k_grid").value == "auto")
    c.k_grid = auto_k_grid(c.shape);
  else
    c.k_grid = parse_int_list(kv.at("k_grid").value);
  if (kv.count("trials")) c.trials_per_k = to_int(kv.at("trials"), "trials");
  if (kv.count("decoder")) c.decoder = parse_decoder_mode(kv.at("decoder").value);
  if (kv.count("max_iterations")) c.decode.max_iterations = to_int(kv.at("max_iterations"), "max_iterations");
  if (kv.count("rel_tolerance")) c.decode.rel_tolerance = to_real(kv.at("rel_tolerance"), "rel_tolerance");
  if (kv.count("restarts")) c.decode.restarts = to_int(kv.at("restarts"), "restarts");
  if (kv.count("ridge")) c.decode.ridge = to_real(kv.at("ridge"), "ridge");
  if (kv.count("success_nmse")) c.decode.success_nmse = to_real(kv.at("success_nmse"), "success_nmse");
  if (kv.count("outer_rounds")) c.decode.outer_rounds = to_int(kv.at("outer_rounds"), "outer_rounds");
  if (kv.count("seed")) {
    const auto& e = kv.at("seed");
    try {
      std::size_t used = 0;
      c.master_seed = std::stoull(e.value, &used);
      if (used != e.value.size()) throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(e.line) + ": seed must be a nonnegative integer");
    }
  }
  validate(c);
  return c;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int k, int trial) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(trial)});
}

PhaseRecord run_trial(const ExperimentConfig& config, int k, int trial, bool timing) {
  PhaseRecord rec;
  rec.m = config.shape.m;
  rec.n = config.shape.n;
  rec.clusters = config.shape.clusters();
  rec.ranks = config.shape.ranks;
  rec.k = k;
  rec.ensemble = config.ensemble;
  rec.decoder = config.decoder;
  rec.trial = trial;
  rec.seed = trial_seed(config.master_seed, k, trial);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto subspaces = sample_ensemble(rec.m, rec.ranks, derive_seed(rec.seed, {1}));
    const auto truth = sample_uos(subspaces, rec.n, config.assignment, config.coeff_scale, derive_seed(rec.seed, {2}));
    const auto meas = MeasurementEnsemble::build(config.ensemble, k, rec.m, rec.n, derive_seed(rec.seed, {3}));
    const Vector y = meas.apply(truth.data);
    const std::uint64_t decode_seed = derive_seed(rec.seed, {4});

    RecoveryResult result;
    switch (config.decoder) {
      case DecoderMode::Als:
        result = als_decode(y, meas, truth.assignment, rec.ranks, config.decode, decode_seed);
        break;
      case DecoderMode::Exhaustive:
        result = exhaustive_decode(y, meas, rec.clusters, rec.ranks, config.decode, decode_seed);
        break;
      case DecoderMode::Alternating:
        result = alternating_decode(y, meas, rec.clusters, rec.ranks, config.decode, decode_seed);
        break;
    }
    rec.nmse = nmse(result.estimate, truth.data).value;
    rec.success = rec.nmse < config.decode.success_nmse;
    rec.iterations = result.iterations;
    rec.restarts = result.restarts_used;
  } catch (const std::exception& e) {
    rec.nmse = std::nan("");
    rec.success = false;
    rec.reason = e.what();
  }
  if (timing)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<PhaseRecord> run_phase_serial(const ExperimentConfig& config, bool timing) {
  validate(config);
  std::vector<PhaseRecord> out;
  for (int k : config.k_grid)
    for (int t = 0; t < config.trials_per_k; ++t) out.push_back(run_trial(config, k, t, timing));
  return out;
}

std::vector<PhaseRecord> run_phase(const ExperimentConfig& config, int jobs, bool timing) {
  validate(config);
  if (jobs < 1) throw Error(ErrorKind::Domain, "jobs must be positive");
  const int trials = config.trials_per_k;
  const auto total = static_cast<std::ptrdiff_t>(config.k_grid.size()) * trials;
  std::vector<PhaseRecord> out(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const int k = config.k_grid[static_cast<std::size_t>(idx / trials)];
    out[static_cast<std::size_t>(idx)] = run_trial(config, k, static_cast<int>(idx % trials), timing);
  }
  return out;
}

std::vector<double> isotonic_fit(const std::vector<double>& values, const std::vector<double>& weights) {
  struct Block {
    double mean, weight;
    std::size_t len;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double w = a.weight + b.weight;
      a.mean = w > 0 ? (a.mean * a.weight + b.mean * b.weight) / w : 0.5 * (a.mean + b.mean);
      a.weight = w;
      a.len += b.len;
    }
  }
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.len, b.mean);
  return out;
}

std::optional<double> interpolate_k50(const std::vector<int>& ks, const std::vector<double>& rates) {
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (rates[i] < 0.5) continue;
    if (i == 0) return static_cast<double>(ks[0]);
    const double frac = (0.5 - rates[i - 1]) / (rates[i] - rates[i - 1]);
    return ks[i - 1] + frac * (ks[i] - ks[i - 1]);
  }
  return std::nullopt;
}

PhaseSummary summarize(const std::vector<PhaseRecord>& records) {
  PhaseSummary s;
  std::map<int, SummaryRow> by_k;
  for (const auto& r : records) {
    auto& row = by_k[r.k];
    row.k = r.k;
    ++row.trials;
    if (r.success) ++row.successes;
  }
  for (const auto& [k, row] : by_k) s.rows.push_back(row);

  std::vector<int> ks;
  std::vector<double> rates, weights;
  for (auto& row : s.rows) {
    row.rate = static_cast<double>(row.successes) / row.trials;
    ks.push_back(row.k);
    rates.push_back(row.rate);
    weights.push_back(row.trials);
  }
  s.smoothed_rates = isotonic_fit(rates, weights);
  s.k50 = interpolate_k50(ks, s.smoothed_rates);

  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    const auto& a = s.rows[i - 1];
    const auto& b = s.rows[i];
    const double pooled = static_cast<double>(a.successes + b.successes) / (a.trials + b.trials);
    const double sd = std::sqrt(pooled * (1.0 - pooled) * (1.0 / a.trials + 1.0 / b.trials));
    if (a.rate - b.rate > 3.0 * sd && sd > 0.0) s.flagged_k.push_back(b.k);
  }
  return s;
}

namespace {

std::string csv_safe(std::string text) {
  for (auto& ch : text)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
  return text;
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<PhaseRecord>& records) {
  os << "m,n,K,ranks,k,ensemble,decoder,trial,seed,nmse,success,iters,restarts,wall_ms,reason\n";
  for (const auto& r : records) {
    os << r.m << ',' << r.n << ',' << r.clusters << ',' << join_ints(r.ranks, ';') << ',' << r.k << ','
       << to_string(r.ensemble) << ',' << to_string(r.decoder) << ',' << r.trial << ',' << r.seed << ','
       << format_double(r.nmse) << ',' << (r.success ? 1 : 0) << ',' << r.iterations << ',' << r.restarts << ','
       << format_double(r.wall_ms) << ',' << csv_safe(r.reason) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const PhaseSummary& summary, const ProblemShape& shape) {
  os << "k,trials,successes,rate\n";
  for (const auto& row : summary.rows)
    os << row.k << ',' << row.trials << ',' << row.successes << ',' << format_double(row.rate) << '\n';
  const auto bound = dim_bound(shape);
  os << "# k50=" << (summary.k50 ? format_double(*summary.k50) : std::string("NA")) << " bound=" << bound
     << " sufficient=" << bound + 1 << '\n';
}

}  // namespace uos
