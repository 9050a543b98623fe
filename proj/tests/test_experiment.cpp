#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <sstream>

#include "robudom/experiment.hpp"
#include "robudom/regime.hpp"

using namespace robudom;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_grid = {120, 60};
  c.p_rule = {PRule::Kind::kFixed, 0.25};
  c.conflict = {ConflictRule::Kind::kStar, 0.0, 0.5};
  c.trials = 6;
  c.base_seed = 314;
  return c;
}

std::string jsonl(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  export_records(out, records, ExportFormat::kJsonLines);
  return out.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TrialRecord fake_record(Vertex n, double p, std::size_t size) {
  TrialRecord r;
  r.n = n;
  r.p = p;
  r.set_size = size;
  r.valid = true;
  return r;
}

}  // namespace

TEST_CASE("p rules and conflict sizes") {
  CHECK(PRule{PRule::Kind::kFixed, 0.3}.p(100) == 0.3);
  CHECK(PRule{PRule::Kind::kLambdaOverN, 5}.p(2000) == doctest::Approx(0.0025));
  CHECK(PRule{PRule::Kind::kPower, 1.4}.p(3000) == doctest::Approx(std::pow(3000.0, -1.4)));
  const ConflictRule sqrt_star{ConflictRule::Kind::kStar, 0.0, 0.5};
  CHECK(sqrt_star.size_for(1000) == 32);
  CHECK(sqrt_star.size_for(4000) == 64);
  CHECK(sqrt_star.size_for(10000) == 100);
  CHECK(sqrt_star.size_for(16000) == 127);
  CHECK(ConflictRule{ConflictRule::Kind::kStar, 50.0, -1.0}.size_for(5000) == 50);
  const ConflictRule reg{ConflictRule::Kind::kRegular, 4.0, -1.0};
  CHECK(to_string(reg.resolve(100, 1)) == to_string(reg.resolve(100, 1)));
  CHECK_FALSE(to_string(reg.resolve(100, 1)) == to_string(reg.resolve(100, 2)));
}

TEST_CASE("run_trials cardinality and ordering") {
  ExperimentConfig c = small_config();
  c.trials = 1;
  c.n_grid = {80};
  const auto one = run_trials(c, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].valid);
  CHECK(one[0].error.empty());

  c = small_config();
  const auto records = run_trials(c, 2);
  CHECK(records.size() == 12);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const bool ordered = records[i - 1].n < records[i].n ||
                         (records[i - 1].n == records[i].n &&
                          records[i - 1].trial_index < records[i].trial_index);
    CHECK(ordered);
  }
  for (const TrialRecord& r : records) {
    CHECK(r.valid);
    CHECK(r.seed == trial_seed(c.base_seed, r.n, r.trial_index));
    CHECK(r.ratio == doctest::Approx(r.set_size / u_n(r.n, 0.25)));
  }
  c.trials = 0;
  CHECK_THROWS_AS(run_trials(c), std::invalid_argument);
}

TEST_CASE("run_trials is independent of scheduling") {
  const ExperimentConfig c = small_config();
  const std::string a = jsonl(run_trials(c, 1));
  CHECK(a == jsonl(run_trials(c, 1)));
  CHECK(a == jsonl(run_trials(c, 3)));
  CHECK(a == jsonl(run_trials(c, 8)));
  ExperimentConfig other = c;
  other.base_seed = 315;
  CHECK_FALSE(a == jsonl(run_trials(other, 1)));
}

TEST_CASE("hypothesis failures become per-trial errors") {
  ExperimentConfig c;
  c.n_grid = {100};
  c.p_rule = {PRule::Kind::kFixed, 0.3};
  c.conflict = {ConflictRule::Kind::kStar, 90.0, -1.0};
  c.method = Method::kSampling;
  c.trials = 3;
  const auto records = run_trials(c, 1);
  REQUIRE(records.size() == 3);
  for (const TrialRecord& r : records) {
    CHECK_FALSE(r.valid);
    CHECK(r.error.find("Delta <= r0 n - 1") != std::string::npos);
  }
  CHECK_THROWS_AS(ratio_summary(records), std::invalid_argument);
}

TEST_CASE("summaries") {
  const std::vector<double> same(10, 1.25);
  const SummaryStats s = summarize(same);
  CHECK(s.mean == 1.25);
  CHECK(s.median == 1.25);
  CHECK(s.variance == 0.0);
  CHECK(s.count == 10);

  const std::vector<double> five = {5, 1, 4, 2, 3};
  const SummaryStats f = summarize(five);
  CHECK(f.median == 3);
  CHECK(f.q05 == doctest::Approx(1.2));
  CHECK(f.q95 == doctest::Approx(4.8));
  CHECK(f.variance == doctest::Approx(2.5));
  CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);

  const auto records = run_trials(small_config(), 1);
  for (const auto& [n, st] : ratio_summary(records)) {
    CHECK(st.q05 <= st.median);
    CHECK(st.median <= st.q95);
    CHECK(st.count == 6);
  }
  CHECK_THROWS_AS(ratio_summary(std::vector<TrialRecord>{}), std::invalid_argument);
}

TEST_CASE("sparse scaling") {
  const double n = 3000, p = std::pow(3000.0, -1.4);
  std::vector<TrialRecord> recs = {fake_record(3000, p, 40)};
  recs[0].isolated_edge_count = 40;
  recs[0].edge_count = 40;
  const SparseScalingReport rep = sparse_scaling(recs);
  CHECK(rep.normalized_size.mean == doctest::Approx(40.0 / (n * n * p)));
  CHECK(rep.isolated_edge_fraction.mean == 1.0);

  const std::vector<TrialRecord> dense = {fake_record(3000, 0.3, 10)};
  CHECK_THROWS_AS(sparse_scaling(dense), std::invalid_argument);

  // At np <= 0.02 nearly every edge is isolated.
  ExperimentConfig c;
  c.n_grid = {3000};
  c.p_rule = {PRule::Kind::kLambdaOverN, 0.015};
  c.method = Method::kSparse;
  c.ignore_isolated = true;
  c.trials = 40;
  const SparseScalingReport measured = sparse_scaling(run_trials(c, 1));
  CHECK(measured.isolated_edge_fraction.mean >= 0.9);
}

TEST_CASE("lambda sandwich") {
  CHECK(b_lambda(1.0) == 0.25);
  const std::vector<TrialRecord> wrong = {fake_record(2000, 0.3, 10)};
  CHECK_THROWS_AS(lambda_sandwich(wrong, 5, 0.2), std::invalid_argument);

  ExperimentConfig c;
  c.n_grid = {2000};
  c.p_rule = {PRule::Kind::kLambdaOverN, 5.0};
  c.method = Method::kAlteration;
  c.epsilon = 0.2;
  c.trials = 20;
  const LambdaSandwichReport rep = lambda_sandwich(run_trials(c, 1), 5.0, 0.2);
  CHECK(rep.b == doctest::Approx(0.521887582486820));
  CHECK(rep.a == doctest::Approx(5 * std::exp(-10.0)));
  CHECK(rep.upper_pass_fraction == 1.0);
  CHECK(rep.lower_pass_fraction == 1.0);
}

TEST_CASE("martingale Lipschitz check") {
  const LipschitzReport zero = martingale_lipschitz_check(12, 0.0, 20, 1);
  CHECK(zero.pass_fraction == 1.0);
  CHECK(zero.max_abs_difference == 0);
  CHECK(zero.max_l_j == 0);
  const LipschitzReport r = martingale_lipschitz_check(16, 0.3, 60, 2);
  CHECK(r.pass_fraction == 1.0);
  CHECK(r.max_l_j > 0);
  CHECK_THROWS_AS(martingale_lipschitz_check(25, 0.3, 1, 1), std::invalid_argument);
}

TEST_CASE("Spearman trend test") {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> up = {0.1, 0.2, 0.3, 0.4};
  const std::vector<double> down = {4, 3, 2, 1};
  CHECK(spearman_rho(x, up) == doctest::Approx(1.0));
  CHECK(spearman_rho(x, down) == doctest::Approx(-1.0));
  CHECK(spearman_p_increasing(4, 1.0) == doctest::Approx(1.0 / 24));
  CHECK(spearman_p_increasing(4, -1.0) == doctest::Approx(1.0));
  CHECK(spearman_p_increasing(8, 1.0) == doctest::Approx(1.0 / 40320));
}

TEST_CASE("variance growth from samples") {
  std::map<Vertex, std::vector<double>> constant = {
      {500, std::vector<double>(5, 3.0)},
      {1000, std::vector<double>(5, 3.0)},
      {2000, std::vector<double>(5, 3.0)}};
  const VarianceReport flat = variance_growth_from_samples(constant);
  for (const VarianceRow& r : flat.rows) CHECK(r.variance == 0.0);
  CHECK(flat.no_increasing_trend);
  CHECK(std::isnan(flat.fitted_beta));
  CHECK_FALSE(flat.note.empty());

  std::map<Vertex, std::vector<double>> growing;
  double spread = 1.0;
  for (Vertex n : {100u, 200u, 400u, 800u, 1600u}) {
    growing[n] = {0.0, spread * n, 2.0 * spread * n};
    spread *= 3.0;
  }
  const VarianceReport up = variance_growth_from_samples(growing);
  CHECK_FALSE(up.no_increasing_trend);

  constant.erase(2000);
  CHECK_THROWS_AS(variance_growth_from_samples(constant), std::invalid_argument);
  const std::vector<Vertex> two = {500, 1000};
  CHECK_THROWS_AS(variance_growth_check(two, 3.0, 5, 1), std::invalid_argument);
}

TEST_CASE("Chernoff empirical check") {
  const ChernoffCheck trivial = chernoff_empirical_check(10, 0.1, 0.1, 100, 1);
  CHECK(trivial.bound == 1.0);
  CHECK(trivial.pass);
  CHECK_THROWS_AS(chernoff_empirical_check(10, 0.1, 0.5, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_empirical_check(10, 0.1, 0.0, 100, 1), std::invalid_argument);

  const ChernoffCheck c = chernoff_empirical_check(1000, 0.5, 0.2, 100000, 3);
  CHECK(c.bound == doctest::Approx(2 * std::exp(-5.0)));
  CHECK(c.pass);

  double prev = 1.0;
  for (std::size_t t : {100, 400, 1600}) {
    const ChernoffCheck k = chernoff_empirical_check(t, 0.5, 0.1, 20000, 4);
    CHECK(k.empirical_freq < prev);
    prev = k.empirical_freq;
  }
}

TEST_CASE("export round trip") {
  std::vector<TrialRecord> records = run_trials(small_config(), 1);
  records.resize(3);
  records[1].error = "a \"quoted\", comma\nand newline";
  records[2].u_n = std::nan("");
  records[2].ratio = std::nan("");

  for (const ExportFormat f : {ExportFormat::kJsonLines, ExportFormat::kCsv}) {
    std::stringstream empty;
    export_records(empty, std::vector<TrialRecord>{}, f);
    CHECK(line_count(empty.str()) == (f == ExportFormat::kJsonLines ? 1u : 2u));
    CHECK(load_records(empty, f).empty());
  }

  std::stringstream js;
  export_records(js, records, ExportFormat::kJsonLines);
  CHECK(line_count(js.str()) == 4);
  CHECK(js.str().rfind("{\"schema\":\"robudom.trial_record\",\"version\":1}\n", 0) == 0);
  const auto back = load_records(js, ExportFormat::kJsonLines);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == records[i]);

  std::stringstream cs;
  export_records(cs, records, ExportFormat::kCsv);
  CHECK(line_count(cs.str()) == 6);  // the embedded newline adds one
  const auto csv_back = load_records(cs, ExportFormat::kCsv);
  REQUIRE(csv_back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(csv_back[i] == records[i]);

  CHECK_THROWS(export_records("/nonexistent-dir/x.jsonl", records, ExportFormat::kJsonLines));
  std::stringstream bad("{\"schema\":\"other\",\"version\":1}\n");
  CHECK_THROWS(load_records(bad, ExportFormat::kJsonLines));
}

TEST_CASE("config JSON") {
  ExperimentConfig c = small_config();
  c.checks = {{"all_valid"}, {"median_ratio_max", 2.0, 0, 0, 120}};
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.n_grid == c.n_grid);
  CHECK(back.conflict.power == 0.5);
  CHECK(back.checks.size() == 2);

  CHECK_THROWS_AS(config_from_json(R"({"n_grid":[10],"p_rule":{"kind":"fixed","value":0.5},"bogus":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"n_grid":[10],"p_rule":{"kind":"fixed","value":0.5},"trials":0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"n_grid":[],"p_rule":{"kind":"fixed","value":0.5}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"n_grid":[10],"p_rule":{"kind":"fixed","value":1.5}})"),
                  std::invalid_argument);
  const ExperimentConfig minimal =
      config_from_json(R"({"n_grid":[10],"p_rule":{"kind":"lambda_over_n","value":2}})");
  CHECK(minimal.trials == 1);
  CHECK(minimal.method == Method::kAuto);
}

TEST_CASE("configured checks") {
  ExperimentConfig c = small_config();
  c.checks = {{"all_valid"},
              {"median_ratio_max", 100.0},
              {"median_ratio_max", 0.01},
              {"median_ratio_max", 100.0, 0, 0, 999},
              {"no_such_check"}};
  const auto outcomes = evaluate_checks(c, run_trials(c, 1));
  REQUIRE(outcomes.size() == 5);
  CHECK(outcomes[0].passed);
  CHECK(outcomes[1].passed);
  CHECK_FALSE(outcomes[2].passed);
  CHECK_FALSE(outcomes[3].passed);
  CHECK_FALSE(outcomes[4].passed);
}
