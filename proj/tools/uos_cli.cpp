// Command-line front end: bound, sample, measure, decode, boxdim, phase.
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "uos/bounds.hpp"
#include "uos/decoders.hpp"
#include "uos/harness.hpp"
#include "uos/minkowski.hpp"
#include "uos/random.hpp"
#include "uos/sensing.hpp"
#include "uos/text_io.hpp"
#include "uos/uos_model.hpp"

using namespace uos;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  return out;
}

std::string opt_text(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "NA"; }

// "uniform", "sizes:3,4" or "labels:1,2,2" (one-based)
AssignmentSpec parse_assignment_spec(const std::string& text) {
  if (text == "uniform") return UniformLabels{};
  if (text.rfind("sizes:", 0) == 0) return FixedSizes{parse_int_list(text.substr(6))};
  if (text.rfind("labels:", 0) == 0) {
    auto labels = parse_int_list(text.substr(7));
    for (auto& l : labels) --l;
    return ExplicitLabels{std::move(labels)};
  }
  throw Error(ErrorKind::Parse, "assignment must be uniform, sizes:<list> or labels:<list>");
}

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gaussian;
  int k = 0, m = 0, n = 0;
  std::uint64_t seed = 0;
};

// kind=gaussian,k=40,m=6,n=8,seed=5
EnsembleSpec parse_ensemble_spec(const std::string& text) {
  EnsembleSpec spec;
  std::stringstream ss(text);
  std::string item;
  int seen = 0;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "ensemble spec entries are key=value");
    const std::string key = trim(item.substr(0, eq)), value = trim(item.substr(eq + 1));
    if (key == "kind") spec.kind = parse_ensemble_kind(value);
    else if (key == "k") spec.k = parse_int_list(value).at(0);
    else if (key == "m") spec.m = parse_int_list(value).at(0);
    else if (key == "n") spec.n = parse_int_list(value).at(0);
    else if (key == "seed") spec.seed = std::stoull(value);
    else throw Error(ErrorKind::Parse, "unknown ensemble spec key '" + key + "'");
    ++seen;
  }
  if (seen != 5) throw Error(ErrorKind::Parse, "ensemble spec needs kind, k, m, n and seed");
  return spec;
}

int cmd_bound(int m, int n, const std::string& ranks_text, bool compare, std::optional<int> total_rank) {
  const ProblemShape shape{m, n, parse_int_list(ranks_text)};
  if (m < 1 || n < 1) throw Error(ErrorKind::InvalidDimension, "m and n must be positive");
  std::optional<int> baseline;
  if (compare)
    baseline = total_rank ? *total_rank : std::accumulate(shape.ranks.begin(), shape.ranks.end(), 0);
  const auto report = make_bound_report(shape, baseline);
  const std::string ranks = join_ints(shape.ranks, ',');

  auto line = [](const char* key, const std::string& value) {
    std::cout << std::left << std::setw(18) << key << value << '\n';
  };
  line("m", std::to_string(m));
  line("n", std::to_string(n));
  line("ranks", ranks);
  line("dim_bound", std::to_string(report.dimension));
  line("uos_sufficient", std::to_string(report.sufficient));
  if (baseline) line("total_rank", std::to_string(*baseline));
  line("single_subspace", opt_text(report.single_subspace));
  line("savings", opt_text(report.savings));
  std::cout << '\n'
            << "m,n,ranks,dim_bound,uos_sufficient,single_subspace,savings\n"
            << m << ',' << n << ',' << join_ints(shape.ranks, ';') << ',' << report.dimension << ','
            << report.sufficient << ',' << opt_text(report.single_subspace) << ',' << opt_text(report.savings)
            << '\n';
  return 0;
}

int cmd_sample(int m, int n, const std::string& ranks, const std::string& assignment, double scale,
               std::uint64_t seed, const std::string& out) {
  const auto ens = sample_ensemble(m, parse_int_list(ranks), derive_seed(seed, {1}));
  const auto x = sample_uos(ens, n, parse_assignment_spec(assignment), scale, derive_seed(seed, {2}));
  auto os = open_out(out);
  write_matrix(os, x.data, &x.assignment.labels());
  return 0;
}

int cmd_measure(const std::string& matrix, const std::string& kind, int k, std::uint64_t seed,
                const std::string& out) {
  auto in = open_in(matrix);
  const auto x = read_matrix(in).data;
  const auto ens = MeasurementEnsemble::build(parse_ensemble_kind(kind), k, static_cast<int>(x.rows()),
                                              static_cast<int>(x.cols()), seed);
  auto os = open_out(out);
  write_vector(os, ens.apply(x));
  return 0;
}

int cmd_decode(const std::string& y_path, const std::string& spec_text, const std::string& mode_text,
               const std::string& assignment_text, const std::string& ranks_text, std::uint64_t seed,
               const DecodeConfig& config, const std::string& out, const std::string& truth_path) {
  const auto spec = parse_ensemble_spec(spec_text);
  const auto ens = MeasurementEnsemble::build(spec.kind, spec.k, spec.m, spec.n, spec.seed);
  auto yin = open_in(y_path);
  const Vector y = read_vector(yin);
  const auto ranks = parse_int_list(ranks_text);
  const int clusters = static_cast<int>(ranks.size());

  std::optional<MatrixFile> truth;
  if (!truth_path.empty()) {
    auto tin = open_in(truth_path);
    truth = read_matrix(tin);
  }

  RecoveryResult r;
  switch (parse_decoder_mode(mode_text)) {
    case DecoderMode::Als: {
      std::vector<int> labels;
      if (!assignment_text.empty()) {
        labels = parse_int_list(assignment_text);
        for (auto& l : labels) --l;
      } else if (truth && truth->labels) {
        labels = *truth->labels;
      } else {
        throw Error(ErrorKind::InvalidAssignment, "als mode needs --assignment (or labels in --truth)");
      }
      r = als_decode(y, ens, Assignment(labels, clusters), ranks, config, seed);
      break;
    }
    case DecoderMode::Exhaustive:
      r = exhaustive_decode(y, ens, clusters, ranks, config, seed);
      break;
    case DecoderMode::Alternating:
      r = alternating_decode(y, ens, clusters, ranks, config, seed);
      break;
  }

  if (!out.empty()) {
    auto os = open_out(out);
    write_matrix(os, r.estimate, &r.assignment.labels());
  } else {
    write_matrix(std::cout, r.estimate, &r.assignment.labels());
  }
  std::vector<int> one_based(r.assignment.labels());
  for (auto& l : one_based) ++l;
  std::cout << "residual=" << format_double(r.residual_norm) << " iterations=" << r.iterations
            << " restarts=" << r.restarts_used << " converged=" << (r.converged ? 1 : 0)
            << " assignment=" << join_ints(one_based, ',');
  if (truth) std::cout << " nmse=" << format_double(nmse(r.estimate, truth->data).value);
  std::cout << '\n';
  return 0;
}

int cmd_boxdim(const std::vector<std::string>& preset, std::size_t samples, std::uint64_t seed, int first,
               int last) {
  if (preset.empty()) throw Error(ErrorKind::Parse, "--preset is required");
  const std::string& name = preset[0];
  auto expect = [&](std::size_t count) {
    if (preset.size() != count) throw Error(ErrorKind::Parse, "preset '" + name + "' takes " + std::to_string(count - 1) + " arguments");
  };
  std::optional<PointCloud> cloud;
  if (name == "square") {
    expect(1);
    cloud = sample_unit_square(samples, seed);
  } else if (name == "segment") {
    expect(1);
    cloud = sample_segment(samples, 3, seed);
  } else if (name == "rank1-2x2") {
    expect(1);
    cloud = sample_rank1_2x2(samples, seed);
  } else if (name == "uos") {
    expect(5);
    SubspaceEnsemble shape;
    shape.m = parse_int_list(preset[1]).at(0);
    const int n = parse_int_list(preset[2]).at(0);
    const int clusters = parse_int_list(preset[3]).at(0);
    shape.ranks = parse_int_list(preset[4]);
    if (static_cast<int>(shape.ranks.size()) != clusters)
      throw Error(ErrorKind::Parse, "uos preset: K differs from the number of ranks");
    cloud = uos_cloud(shape, n, samples, seed);
  } else {
    throw Error(ErrorKind::Parse, "unknown preset '" + name + "'");
  }

  const auto ladder = dyadic_ladder(first, last);
  const auto est = estimate_dimension(*cloud, ladder);
  std::cout << "rho,count,logCount,negLogRho\n";
  for (std::size_t t = 0; t < ladder.size(); ++t)
    std::cout << format_double(ladder[t]) << ',' << est.counts[t] << ','
              << format_double(std::log(static_cast<double>(est.counts[t]))) << ','
              << format_double(-std::log(ladder[t])) << '\n';
  std::cout << "# slope=" << format_double(est.slope) << " lowerSlope=" << format_double(est.lower_slope)
            << " upperSlope=" << format_double(est.upper_slope) << '\n';
  return 0;
}

int cmd_phase(const std::string& config_path, const std::string& out, const std::string& summary_path, int jobs,
              bool timing) {
  auto in = open_in(config_path);
  const auto config = parse_experiment_config(in);
  const auto records = run_phase(config, jobs, timing);
  {
    auto os = open_out(out);
    write_records_csv(os, records);
  }
  const auto summary = summarize(records);
  if (!summary_path.empty()) {
    auto os = open_out(summary_path);
    write_summary_csv(os, summary, config.shape);
  }
  for (int k : summary.flagged_k)
    std::cerr << "warning: success rate drops by more than 3 binomial sd at k=" << k << '\n';
  std::cerr << "k50=" << (summary.k50 ? format_double(*summary.k50) : std::string("NA"))
            << " bound=" << dim_bound(config.shape) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Union-of-subspaces matrix sensing: bounds, sampling, recovery and phase transitions"};
  app.require_subcommand(1);

  int m = 0, n = 0, k = 0, jobs = 1, first = 1, last = 5;
  std::string ranks, assignment = "uniform", out, matrix, kind = "gaussian", y_path, spec, mode = "als",
                     labels, config_path, summary_path, truth;
  bool compare = false, timing = false;
  std::optional<int> total_rank;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::size_t samples = 1'000'000;
  std::vector<std::string> preset;
  DecodeConfig decode;

  auto* bound = app.add_subcommand("bound", "Measurement-count bound for a UOS shape");
  bound->add_option("--m", m, "rows")->required();
  bound->add_option("--n", n, "columns")->required();
  bound->add_option("--ranks", ranks, "comma-separated subspace ranks")->required();
  bound->add_flag("--compare-single", compare, "compare with a single subspace of rank --total-rank");
  bound->add_option("--total-rank", total_rank, "single-subspace rank (default: sum of ranks)");

  auto* sample = app.add_subcommand("sample", "Draw a UOS matrix");
  sample->add_option("--m", m)->required();
  sample->add_option("--n", n)->required();
  sample->add_option("--ranks", ranks)->required();
  sample->add_option("--assignment", assignment, "uniform | sizes:n1,n2,.. | labels:l1,l2,..");
  sample->add_option("--scale", scale, "coefficient scale");
  sample->add_option("--seed", seed);
  sample->add_option("--out", out)->required();

  auto* measure = app.add_subcommand("measure", "Apply a measurement ensemble to a matrix file");
  measure->add_option("--matrix", matrix)->required();
  measure->add_option("--kind", kind, "gaussian | rank1");
  measure->add_option("--k", k)->required();
  measure->add_option("--seed", seed);
  measure->add_option("--out", out)->required();

  auto* dec = app.add_subcommand("decode", "Recover a matrix from measurements");
  dec->add_option("--y", y_path)->required();
  dec->add_option("--ensemble-spec", spec, "kind=gaussian,k=K,m=M,n=N,seed=S")->required();
  dec->add_option("--mode", mode, "als | exhaustive | alternating");
  dec->add_option("--assignment", labels, "one-based labels for als mode");
  dec->add_option("--ranks", ranks)->required();
  dec->add_option("--seed", seed, "decoder seed");
  dec->add_option("--restarts", decode.restarts);
  dec->add_option("--max-iterations", decode.max_iterations);
  dec->add_option("--out", out, "estimate file (default: stdout)");
  dec->add_option("--truth", truth, "ground-truth matrix file, for NMSE");

  auto* box = app.add_subcommand("boxdim", "Box-counting dimension of a sampled set");
  box->add_option("--preset", preset, "square | segment | rank1-2x2 | uos M N K r1,r2,..")
      ->required()
      ->expected(1, 5);
  box->add_option("--samples", samples);
  box->add_option("--seed", seed);
  box->add_option("--first", first, "largest box is 2^-first");
  box->add_option("--last", last, "smallest box is 2^-last");

  auto* phase = app.add_subcommand("phase", "Monte-Carlo phase-transition sweep");
  phase->add_option("--config", config_path)->required();
  phase->add_option("--out", out)->required();
  phase->add_option("--summary", summary_path);
  phase->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  phase->add_flag("--timing", timing, "record wall_ms (makes records.csv run-dependent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bound) return cmd_bound(m, n, ranks, compare, total_rank);
    if (*sample) return cmd_sample(m, n, ranks, assignment, scale, seed, out);
    if (*measure) return cmd_measure(matrix, kind, k, seed, out);
    if (*dec) return cmd_decode(y_path, spec, mode, labels, ranks, seed, decode, out, truth);
    if (*box) return cmd_boxdim(preset, samples, seed, first, last);
    if (*phase) return cmd_phase(config_path, out, summary_path, jobs, timing);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
