#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uos/harness.hpp"

using namespace uos;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.shape = {6, 8, {1, 2}};
  c.assignment = FixedSizes{{4, 4}};
  c.k_grid = {10, 25, 40};
  c.trials_per_k = 3;
  c.decode.restarts = 3;
  c.master_seed = 17;
  return c;
}

std::string records_text(const std::vector<PhaseRecord>& r) {
  std::ostringstream os;
  write_records_csv(os, r);
  return os.str();
}

PhaseRecord outcome(int k, bool success) {
  PhaseRecord r;
  r.k = k;
  r.success = success;
  return r;
}

}  // namespace

TEST_CASE("auto k grid spans half to twice the bound") {
  const auto grid = auto_k_grid({20, 24, {2, 2}});
  REQUIRE(grid.size() == 12);
  CHECK(grid.front() == 60);
  CHECK(grid.back() == 240);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  CHECK(auto_k_grid({3, 3, {0}}) == std::vector<int>{1});
}

TEST_CASE("config parsing") {
  std::istringstream is(
      "# benchmark\nm = 20\nn = 24\nranks = 2,2\nassignment = fixed\ncluster_sizes = 12,12\n"
      "ensemble = rank1\nk_grid = 100,180\ntrials = 5\ndecoder = als\nrestarts = 4\nseed = 99\n"
      "success_nmse = 1e-5\n");
  const auto c = parse_experiment_config(is);
  CHECK(c.shape.m == 20);
  CHECK(c.shape.ranks == std::vector<int>{2, 2});
  CHECK(std::get<FixedSizes>(c.assignment).sizes == std::vector<int>{12, 12});
  CHECK(c.ensemble == EnsembleKind::RankOne);
  CHECK(c.k_grid == std::vector<int>{100, 180});
  CHECK(c.trials_per_k == 5);
  CHECK(c.decode.restarts == 4);
  CHECK(c.decode.success_nmse == 1e-5);
  CHECK(c.master_seed == 99u);

  std::istringstream labels("m = 2\nn = 3\nranks = 1,1\nassignment = explicit\nlabels = 1,2,2\n");
  CHECK(std::get<ExplicitLabels>(parse_experiment_config(labels).assignment).labels == std::vector<int>{0, 1, 1});

  std::istringstream defaults("m = 20\nn = 24\nranks = 2,2\n");
  CHECK(parse_experiment_config(defaults).k_grid == auto_k_grid({20, 24, {2, 2}}));

  for (const char* bad : {"m = 2\nn = 2\nranks = 1\nbogus = 1\n", "m = 2\nranks = 1\n",
                          "m = 2\nn = 2\nranks = 1\nk_grid = 5,3\n", "m = 2\nn = 2\nranks = 1\ntrials = x\n",
                          "m = 2\nn = 2\nranks = 1\ndecoder = magic\n", "m = 2\nn = 2\nranks = 1\nassignment = fixed\n"}) {
    std::istringstream bis(bad);
    CHECK_THROWS_AS(parse_experiment_config(bis), Error);
  }
}

TEST_CASE("zero-rank sweep decodes exactly") {
  ExperimentConfig c;
  c.shape = {4, 5, {0, 0}};
  c.k_grid = {1};
  c.trials_per_k = 1;
  const auto recs = run_phase(c);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].success);
  CHECK(recs[0].nmse == 0.0);
  CHECK(recs[0].reason.empty());
}

TEST_CASE("run_phase ordering, record invariants and worker independence") {
  const auto c = small_config();
  const auto serial = run_phase_serial(c);
  REQUIRE(serial.size() == 9);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].k == c.k_grid[i / 3]);
    CHECK(serial[i].trial == static_cast<int>(i % 3));
    CHECK(serial[i].seed == trial_seed(c.master_seed, serial[i].k, serial[i].trial));
    CHECK(serial[i].success == (serial[i].nmse < c.decode.success_nmse));
    CHECK(serial[i].wall_ms == 0.0);
  }
  const std::string reference = records_text(serial);
  CHECK(records_text(run_phase(c, 1)) == reference);
  CHECK(records_text(run_phase(c, 4)) == reference);
  CHECK(records_text(run_phase(c, 8)) == reference);
}

TEST_CASE("failed trials become records instead of aborting") {
  ExperimentConfig c;
  c.shape = {2, 25, {1, 1}};
  c.decoder = DecoderMode::Exhaustive;
  c.k_grid = {3};
  c.trials_per_k = 2;
  const auto recs = run_phase(c);
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK_FALSE(r.success);
    CHECK(std::isnan(r.nmse));
    CHECK(r.reason.find("K^n") != std::string::npos);
  }
  const auto text = records_text(recs);
  CHECK(text.find(",nan,0,") != std::string::npos);
}

TEST_CASE("records csv layout") {
  const auto text = records_text(run_phase_serial(small_config()));
  std::istringstream is(text);
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header == "m,n,K,ranks,k,ensemble,decoder,trial,seed,nmse,success,iters,restarts,wall_ms,reason");
  CHECK(first.rfind("6,8,2,1;2,10,gaussian,als,0,", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), ',') == 14);
}

TEST_CASE("summarize examples") {
  std::vector<PhaseRecord> all_ok{outcome(5, true), outcome(5, true), outcome(9, true)};
  auto s = summarize(all_ok);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].rate == 1.0);
  CHECK(s.rows[1].rate == 1.0);
  REQUIRE(s.k50.has_value());
  CHECK(*s.k50 == 5.0);

  std::vector<PhaseRecord> all_bad{outcome(5, false), outcome(9, false)};
  CHECK_FALSE(summarize(all_bad).k50.has_value());

  std::vector<PhaseRecord> mixed;
  for (int i = 0; i < 10; ++i) mixed.push_back(outcome(100, i < 2));
  for (int i = 0; i < 10; ++i) mixed.push_back(outcome(140, i < 8));
  s = summarize(mixed);
  REQUIRE(s.k50.has_value());
  CHECK(*s.k50 == doctest::Approx(120.0));
  CHECK(s.flagged_k.empty());

  std::ostringstream os;
  write_summary_csv(os, s, {20, 24, {2, 2}});
  CHECK(os.str() == "k,trials,successes,rate\n100,10,2,0.20000000000000001\n140,10,8,0.80000000000000004\n"
                    "# k50=120 bound=120 sufficient=121\n");
}

TEST_CASE("isotonic smoothing and drop flags") {
  const auto fit = isotonic_fit({0.0, 0.6, 0.4, 1.0}, {1, 1, 1, 1});
  CHECK(fit == std::vector<double>{0.0, 0.5, 0.5, 1.0});

  std::vector<PhaseRecord> drop;
  for (int i = 0; i < 20; ++i) drop.push_back(outcome(10, true));
  for (int i = 0; i < 20; ++i) drop.push_back(outcome(20, i < 2));
  for (int i = 0; i < 20; ++i) drop.push_back(outcome(30, true));
  const auto s = summarize(drop);
  CHECK(s.flagged_k == std::vector<int>{20});
  for (std::size_t i = 1; i < s.smoothed_rates.size(); ++i) CHECK(s.smoothed_rates[i] >= s.smoothed_rates[i - 1]);
}
