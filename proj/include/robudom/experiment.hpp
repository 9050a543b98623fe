#pragma once

// Monte Carlo harness: seeded trial execution, summaries, and the
// statistical checks of the domination bounds.
//
// Variance and ratio claims are measured on constructor output, not on the
// true domination number, which is intractable beyond a few dozen vertices.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "robudom/constructors.hpp"
#include "robudom/graph.hpp"

namespace robudom {

struct PRule {
  enum class Kind { kFixed, kLambdaOverN, kPower };
  Kind kind = Kind::kFixed;
  double value = 0.0;  // p, lambda, or alpha in p = n^-alpha

  double p(Vertex n) const;
  std::string describe() const;
};

struct ConflictRule {
  enum class Kind { kEmpty, kStar, kMatching, kRegular };
  Kind kind = Kind::kEmpty;
  double size = 0.0;    // Delta, m or d when power < 0
  double power = -1.0;  // if >= 0, size = ceil(n^power)

  std::size_t size_for(Vertex n) const;
  // Random-regular conflicts draw their seed from (base_seed, n), so every
  // trial at a given n sees the same H.
  ConflictSpec resolve(Vertex n, std::uint64_t base_seed) const;
  std::string describe() const;
};

struct CheckSpec {
  // all_valid | median_ratio_max | median_ratio_non_increasing |
  // sparse_mean_band | sparse_relative_sd_max
  std::string kind;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  Vertex n = 0;  // restrict median_ratio_max to one n; 0 means every n
};

struct ExperimentConfig {
  std::vector<Vertex> n_grid;
  PRule p_rule;
  ConflictRule conflict;
  Method method = Method::kAuto;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  double epsilon = 0.1;
  double r0 = 0.1;
  bool ignore_isolated = false;
  std::vector<CheckSpec> checks;
};

struct TrialRecord {
  Vertex n = 0;
  std::size_t trial_index = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string method;       // requested
  std::string method_used;  // after auto routing or fallback
  std::string conflict;
  std::size_t set_size = 0;
  double u_n = 0.0;    // NaN when undefined
  double ratio = 0.0;  // set_size / u_n, NaN when u_n is undefined
  bool valid = false;
  std::size_t core_size = 0;
  std::size_t repair_size = 0;
  std::size_t preprocessed_size = 0;
  // Statistics of G \ H.
  std::size_t edge_count = 0;
  std::size_t isolated_edge_count = 0;
  std::size_t isolated_vertex_count = 0;
  std::string error;  // failed hypothesis or exception text; empty on success
  double wall_time_ms = 0.0;  // not serialized

  friend bool operator==(const TrialRecord& a, const TrialRecord& b);
};

std::uint64_t trial_seed(std::uint64_t base_seed, Vertex n, std::size_t trial_index);

// Worker count: ROBUDOM_THREADS if set, else hardware concurrency, at least 1.
std::size_t default_thread_count();

// One record per (n, trial), sorted by (n, trial_index). Output is identical
// for any thread count. threads == 0 uses default_thread_count(); an
// explicit count is still capped by ROBUDOM_THREADS.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, std::size_t threads = 0);

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double variance = 0.0;  // unbiased (n - 1)
  std::size_t count = 0;
};

// Quantiles interpolate linearly between order statistics.
SummaryStats summarize(std::span<const double> values);

// Ratio summary per n over records without errors. Empty groups throw.
std::map<Vertex, SummaryStats> ratio_summary(std::span<const TrialRecord> records);

struct SparseScalingReport {
  SummaryStats normalized_size;        // set_size / (n^2 p)
  SummaryStats isolated_edge_ratio;    // isolated edges / (n^2 p / 2)
  SummaryStats isolated_edge_fraction; // isolated edges / edges
  double relative_sd = 0.0;            // sd / mean of normalized_size
};

// Records must come from the sparse_zero regime.
SparseScalingReport sparse_scaling(std::span<const TrialRecord> records);

struct LambdaSandwichReport {
  double lambda = 0.0;
  double epsilon = 0.0;
  double a = 0.0;
  double b = 0.0;
  double upper_pass_fraction = 0.0;  // set_size / n <= b (1 + eps)
  double lower_pass_fraction = 0.0;  // isolated vertices + edges >= a (1 - eps) n
  std::size_t trials = 0;
};

// Records must come from the sparse_lambda regime.
LambdaSandwichReport lambda_sandwich(std::span<const TrialRecord> records, double lambda,
                                     double epsilon, double lambda0 = 100.0);

struct LipschitzReport {
  std::size_t trials = 0;
  std::size_t passes = 0;
  double pass_fraction = 0.0;
  std::size_t max_abs_difference = 0;
  std::size_t max_l_j = 0;
};

// Exact domination numbers of G \ H and G^(j) \ H versus l_j, the number of
// pairs at j that are edges in G or in G^(j). n <= 24.
LipschitzReport martingale_lipschitz_check(Vertex n, double p, std::size_t trials,
                                           std::uint64_t seed);
LipschitzReport martingale_lipschitz_check(Vertex n, double p, std::size_t trials,
                                           std::uint64_t seed, const ConflictGraph& h);

struct VarianceRow {
  Vertex n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double normalized = 0.0;  // variance / (n (log n)^2)
  double var_over_mean_sq = 0.0;
};

struct VarianceReport {
  std::vector<VarianceRow> rows;
  double spearman_rho = 0.0;
  double p_value_increasing = 1.0;  // one-sided, exact for <= 8 points
  bool no_increasing_trend = true;  // p_value_increasing >= 0.05
  double fitted_c = 0.0;            // variance ~ c n (log n)^beta
  double fitted_beta = 0.0;         // NaN when some variance is 0
  std::string note;
};

// Samples per n. Fewer than three grid points throws.
VarianceReport variance_growth_from_samples(const std::map<Vertex, std::vector<double>>& samples);

// Runs `method` on G(n, lambda / n) with H empty.
VarianceReport variance_growth_check(std::span<const Vertex> n_grid, double lambda,
                                     std::size_t trials, std::uint64_t seed,
                                     Method method = Method::kAuto, std::size_t threads = 0);

struct ChernoffCheck {
  std::size_t t = 0;
  double p = 0.0;
  double eta = 0.0;
  std::size_t trials = 0;
  double empirical_freq = 0.0;
  double bound = 1.0;
  bool pass = false;
};

// Frequency of |W - tp| >= eta tp for W ~ Binomial(t, p); passes iff it is at
// most bound + 3 sqrt(bound (1 - bound) / trials), or bound >= 1.
ChernoffCheck chernoff_empirical_check(std::size_t t, double p, double eta, std::size_t trials,
                                       std::uint64_t seed);

// One-sided exact (k <= 8) or normal-approximation p-value of Spearman's rho
// against an increasing alternative.
double spearman_rho(std::span<const double> x, std::span<const double> y);
double spearman_p_increasing(std::size_t k, double rho);

struct CheckOutcome {
  std::string kind;
  bool passed = false;
  std::string detail;
};

std::vector<CheckOutcome> evaluate_checks(const ExperimentConfig& config,
                                          std::span<const TrialRecord> records);

// --- serialization ---------------------------------------------------------

inline constexpr int kRecordSchemaVersion = 1;

enum class ExportFormat { kJsonLines, kCsv };

// A schema header line (JSON) or comment plus column line (CSV), then one
// line per record in a fixed field order.
void export_records(std::ostream& out, std::span<const TrialRecord> records, ExportFormat format);
void export_records(const std::string& path, std::span<const TrialRecord> records,
                    ExportFormat format);
std::vector<TrialRecord> load_records(std::istream& in, ExportFormat format);

void write_summary_csv(std::ostream& out, const std::map<Vertex, SummaryStats>& summary);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace robudom
