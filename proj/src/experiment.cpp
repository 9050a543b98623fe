#include "robudom/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "robudom/exact.hpp"
#include "robudom/regime.hpp"
#include "robudom/rng.hpp"

namespace robudom {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

TrialRecord run_one(const ExperimentConfig& config, const ConflictGraph& h,
                    const std::string& conflict_name, Vertex n, std::size_t index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord r;
  r.n = n;
  r.trial_index = index;
  r.p = config.p_rule.p(n);
  r.seed = trial_seed(config.base_seed, n, index);
  r.method = std::string(to_string(config.method));
  r.method_used = r.method;
  r.conflict = conflict_name;
  r.u_n = (r.p > 0.0 && r.p < 1.0) ? u_n(n, r.p) : kNaN;
  r.ratio = kNaN;

  const Graph g = gen_bernoulli({n, r.p, derive_seed(r.seed, StreamTag::kTrialGraph)});
  const Graph g_eff = graph_minus(g, h);
  const GraphStats s = stats(g_eff);
  r.edge_count = s.edge_count;
  r.isolated_edge_count = s.isolated_edge_count;
  r.isolated_vertex_count = s.isolated_vertex_count;

  ConstructorParams params;
  params.epsilon = config.epsilon;
  params.r0 = config.r0;
  params.seed = derive_seed(r.seed, StreamTag::kTrialConstruct);
  params.ignore_isolated = config.ignore_isolated;
  try {
    const ConstructionResult res = construct(config.method, g, h, r.p, params);
    r.method_used = std::string(to_string(res.method));
    r.set_size = res.size();
    r.core_size = res.core_size;
    r.repair_size = res.repair_size;
    r.preprocessed_size = res.preprocessed_size;
    r.ratio = std::isnan(r.u_n) ? kNaN : static_cast<double>(r.set_size) / r.u_n;
    r.valid = is_dominating(g_eff, res.dominating_set, res.ignore_isolated);
    if (!r.valid) r.error = "output is not a dominating set of G \\ H";
  } catch (const HypothesisError& e) {
    r.error = "hypothesis failed: " + std::string(e.what());
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void require_regime(std::span<const TrialRecord> records, RegimeKind want, const char* who) {
  if (records.empty()) throw std::invalid_argument(std::string(who) + ": no records");
  for (const TrialRecord& r : records) {
    const RegimeKind got = classify_regime(r.n, r.p).regime;
    if (got != want) {
      throw std::invalid_argument(std::string(who) + ": record at n = " + std::to_string(r.n) +
                                  " is in regime " + to_string(got) + ", expected " +
                                  to_string(want));
    }
  }
}

}  // namespace

double PRule::p(Vertex n) const {
  const double nn = static_cast<double>(n);
  switch (kind) {
    case Kind::kFixed:
      return value;
    case Kind::kLambdaOverN:
      return std::min(1.0, value / nn);
    case Kind::kPower:
      return std::min(1.0, std::pow(nn, -value));
  }
  return value;
}

std::string PRule::describe() const {
  switch (kind) {
    case Kind::kFixed:
      return "fixed(" + std::to_string(value) + ")";
    case Kind::kLambdaOverN:
      return "lambda_over_n(" + std::to_string(value) + ")";
    case Kind::kPower:
      return "power(" + std::to_string(value) + ")";
  }
  return "?";
}

std::size_t ConflictRule::size_for(Vertex n) const {
  if (power < 0.0) return static_cast<std::size_t>(std::llround(size));
  const double x = std::pow(static_cast<double>(n), power);
  const double r = std::round(x);
  // Guard exact powers against rounding up by one ulp.
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

ConflictSpec ConflictRule::resolve(Vertex n, std::uint64_t base_seed) const {
  const std::size_t k = size_for(n);
  switch (kind) {
    case Kind::kEmpty:
      return conflict::Empty{};
    case Kind::kStar:
      return conflict::Star{static_cast<Vertex>(k)};
    case Kind::kMatching:
      return conflict::Matching{k};
    case Kind::kRegular:
      return conflict::RandomRegular{static_cast<Vertex>(k),
                                     derive_seed(base_seed, StreamTag::kConflict, n)};
  }
  return conflict::Empty{};
}

std::string ConflictRule::describe() const {
  static constexpr const char* names[] = {"empty", "star", "matching", "regular"};
  std::string s = names[static_cast<int>(kind)];
  if (kind == Kind::kEmpty) return s;
  if (power >= 0.0) return s + "(ceil(n^" + std::to_string(power) + "))";
  return s + "(" + std::to_string(size_for(0)) + ")";
}

bool operator==(const TrialRecord& a, const TrialRecord& b) {
  return a.n == b.n && a.trial_index == b.trial_index && same_double(a.p, b.p) &&
         a.seed == b.seed && a.method == b.method && a.method_used == b.method_used &&
         a.conflict == b.conflict && a.set_size == b.set_size && same_double(a.u_n, b.u_n) &&
         same_double(a.ratio, b.ratio) && a.valid == b.valid && a.core_size == b.core_size &&
         a.repair_size == b.repair_size && a.preprocessed_size == b.preprocessed_size &&
         a.edge_count == b.edge_count && a.isolated_edge_count == b.isolated_edge_count &&
         a.isolated_vertex_count == b.isolated_vertex_count && a.error == b.error;
}

std::uint64_t trial_seed(std::uint64_t base_seed, Vertex n, std::size_t trial_index) {
  return derive_seed(base_seed, StreamTag::kTrial, n, trial_index);
}

static std::size_t env_thread_cap() {
  if (const char* env = std::getenv("ROBUDOM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return 0;
}

std::size_t default_thread_count() {
  const std::size_t cap = env_thread_cap();
  return cap ? cap : std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, std::size_t threads) {
  if (config.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (config.n_grid.empty()) throw std::invalid_argument("run_trials: empty n_grid");

  std::vector<Vertex> grid = config.n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<ConflictGraph> conflicts;
  std::vector<std::string> names;
  for (Vertex n : grid) {
    const ConflictSpec spec = config.conflict.resolve(n, config.base_seed);
    conflicts.push_back(build_conflict(spec, n));
    names.push_back(to_string(spec));
  }

  const std::size_t total = grid.size() * config.trials;
  std::vector<TrialRecord> records(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t gi = i / config.trials;
      records[i] = run_one(config, conflicts[gi], names[gi], grid[gi], i % config.trials);
    }
  };

  if (threads == 0) threads = default_thread_count();
  if (const std::size_t cap = env_thread_cap()) threads = std::min(threads, cap);
  threads = std::min(threads, total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  SummaryStats s;
  s.count = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.variance = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
  s.median = quantile_sorted(v, 0.5);
  s.q05 = quantile_sorted(v, 0.05);
  s.q95 = quantile_sorted(v, 0.95);
  return s;
}

std::map<Vertex, SummaryStats> ratio_summary(std::span<const TrialRecord> records) {
  std::map<Vertex, std::vector<double>> groups;
  for (const TrialRecord& r : records) {
    auto& g = groups[r.n];
    if (r.error.empty() && !std::isnan(r.ratio)) g.push_back(r.ratio);
  }
  if (groups.empty()) throw std::invalid_argument("ratio_summary: no records");
  std::map<Vertex, SummaryStats> out;
  for (const auto& [n, ratios] : groups) {
    if (ratios.empty()) {
      throw std::invalid_argument("ratio_summary: no successful trials at n = " +
                                  std::to_string(n));
    }
    out[n] = summarize(ratios);
  }
  return out;
}

SparseScalingReport sparse_scaling(std::span<const TrialRecord> records) {
  require_regime(records, RegimeKind::kSparseZero, "sparse_scaling");
  std::vector<double> size, iso_ratio, iso_frac;
  for (const TrialRecord& r : records) {
    if (!r.error.empty()) throw std::invalid_argument("sparse_scaling: failed trial: " + r.error);
    const double scale = static_cast<double>(r.n) * r.n * r.p;
    size.push_back(static_cast<double>(r.set_size) / scale);
    iso_ratio.push_back(static_cast<double>(r.isolated_edge_count) / (scale / 2.0));
    if (r.edge_count > 0) {
      iso_frac.push_back(static_cast<double>(r.isolated_edge_count) /
                         static_cast<double>(r.edge_count));
    }
  }
  SparseScalingReport rep;
  rep.normalized_size = summarize(size);
  rep.isolated_edge_ratio = summarize(iso_ratio);
  if (!iso_frac.empty()) rep.isolated_edge_fraction = summarize(iso_frac);
  rep.relative_sd = rep.normalized_size.mean > 0.0
                        ? std::sqrt(rep.normalized_size.variance) / rep.normalized_size.mean
                        : kNaN;
  return rep;
}

LambdaSandwichReport lambda_sandwich(std::span<const TrialRecord> records, double lambda,
                                     double epsilon, double lambda0) {
  require_regime(records, RegimeKind::kSparseLambda, "lambda_sandwich");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("lambda_sandwich: epsilon must lie in (0, 1)");
  }
  LambdaSandwichReport rep;
  rep.lambda = lambda;
  rep.epsilon = epsilon;
  rep.a = a_lambda(lambda, lambda0);
  rep.b = b_lambda(lambda);
  std::size_t upper = 0, lower = 0;
  for (const TrialRecord& r : records) {
    const double n = r.n;
    if (r.error.empty() && static_cast<double>(r.set_size) / n <= rep.b * (1.0 + epsilon)) {
      ++upper;
    }
    const double certificate =
        static_cast<double>(r.isolated_vertex_count + r.isolated_edge_count);
    if (certificate >= rep.a * (1.0 - epsilon) * n) ++lower;
  }
  rep.trials = records.size();
  rep.upper_pass_fraction = static_cast<double>(upper) / static_cast<double>(rep.trials);
  rep.lower_pass_fraction = static_cast<double>(lower) / static_cast<double>(rep.trials);
  return rep;
}

LipschitzReport martingale_lipschitz_check(Vertex n, double p, std::size_t trials,
                                           std::uint64_t seed) {
  return martingale_lipschitz_check(n, p, trials, seed, make_conflict(Graph::empty(n)));
}

LipschitzReport martingale_lipschitz_check(Vertex n, double p, std::size_t trials,
                                           std::uint64_t seed, const ConflictGraph& h) {
  if (n < 1 || n > 24) throw std::invalid_argument("martingale_lipschitz_check: need 1 <= n <= 24");
  if (h.graph.n() != n) throw std::invalid_argument("martingale_lipschitz_check: H has wrong n");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("martingale_lipschitz_check: bad p");
  LipschitzReport rep;
  rep.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t s = derive_seed(seed, StreamTag::kCheck, i);
    const Graph g = gen_bernoulli({n, p, derive_seed(s, StreamTag::kTrialGraph)});
    SplitMix64 rng(derive_seed(s, StreamTag::kCheck));
    const auto j = static_cast<Vertex>(uniform_below(rng, n));
    const Graph g2 = resample_vertex_edges(g, j, p, derive_seed(s, StreamTag::kResample));

    std::vector<Vertex> touched = g.neighbors(j);
    const std::vector<Vertex> more = g2.neighbors(j);
    touched.insert(touched.end(), more.begin(), more.end());
    const std::size_t l_j = VertexSet::from_unsorted(std::move(touched)).size();

    const std::size_t a = exact_domination(graph_minus(g, h)).gamma;
    const std::size_t b = exact_domination(graph_minus(g2, h)).gamma;
    const std::size_t diff = a > b ? a - b : b - a;
    if (diff <= l_j) ++rep.passes;
    rep.max_abs_difference = std::max(rep.max_abs_difference, diff);
    rep.max_l_j = std::max(rep.max_l_j, l_j);
  }
  rep.pass_fraction = trials ? static_cast<double>(rep.passes) / static_cast<double>(trials) : 1.0;
  return rep;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman_rho: need two equal-length samples of size >= 2");
  }
  return pearson(average_ranks(x), average_ranks(y));
}

double spearman_p_increasing(std::size_t k, double rho) {
  if (k < 2) return 1.0;
  if (k <= 8) {
    std::vector<double> base(k), perm(k);
    std::iota(base.begin(), base.end(), 1.0);
    perm = base;
    std::size_t hits = 0, total = 0;
    do {
      ++total;
      if (pearson(base, perm) >= rho - 1e-12) ++hits;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
  }
  const double z = rho * std::sqrt(static_cast<double>(k) - 1.0);
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

VarianceReport variance_growth_from_samples(
    const std::map<Vertex, std::vector<double>>& samples) {
  if (samples.size() < 3) {
    throw std::invalid_argument("variance_growth: need at least 3 grid points, got " +
                                std::to_string(samples.size()));
  }
  VarianceReport rep;
  rep.note = "variance of constructed set sizes, not of the exact domination number";
  std::vector<double> ns, norm;
  bool any_zero = false;
  for (const auto& [n, values] : samples) {
    if (values.size() < 2) throw std::invalid_argument("variance_growth: need >= 2 samples per n");
    const SummaryStats s = summarize(values);
    VarianceRow row;
    row.n = n;
    row.mean = s.mean;
    row.variance = s.variance;
    const double ln = std::log(static_cast<double>(n));
    row.normalized = s.variance / (static_cast<double>(n) * ln * ln);
    row.var_over_mean_sq = s.mean != 0.0 ? s.variance / (s.mean * s.mean) : kNaN;
    rep.rows.push_back(row);
    ns.push_back(n);
    norm.push_back(row.normalized);
    any_zero = any_zero || s.variance <= 0.0;
  }
  rep.spearman_rho = spearman_rho(ns, norm);
  rep.p_value_increasing = spearman_p_increasing(ns.size(), rep.spearman_rho);
  rep.no_increasing_trend = rep.p_value_increasing >= 0.05;

  if (any_zero) {
    rep.fitted_beta = kNaN;
    rep.fitted_c = 0.0;
  } else {
    // log(v / n) = log c + beta log log n, least squares.
    std::vector<double> xs, ys;
    for (const VarianceRow& row : rep.rows) {
      xs.push_back(std::log(std::log(static_cast<double>(row.n))));
      ys.push_back(std::log(row.variance / static_cast<double>(row.n)));
    }
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.fitted_beta = sxx > 0 ? sxy / sxx : kNaN;
    rep.fitted_c = std::exp(my - rep.fitted_beta * mx);
  }
  return rep;
}

VarianceReport variance_growth_check(std::span<const Vertex> n_grid, double lambda,
                                     std::size_t trials, std::uint64_t seed, Method method,
                                     std::size_t threads) {
  if (n_grid.size() < 3) {
    throw std::invalid_argument("variance_growth: need at least 3 grid points");
  }
  for (Vertex n : n_grid) {
    if (classify_regime(n, lambda / n).regime != RegimeKind::kSparseLambda) {
      throw std::invalid_argument("variance_growth: n = " + std::to_string(n) +
                                  " is not in the sparse_lambda regime");
    }
  }
  ExperimentConfig cfg;
  cfg.n_grid.assign(n_grid.begin(), n_grid.end());
  cfg.p_rule = {PRule::Kind::kLambdaOverN, lambda};
  cfg.method = method;
  cfg.trials = trials;
  cfg.base_seed = seed;
  const std::vector<TrialRecord> records = run_trials(cfg, threads);
  std::map<Vertex, std::vector<double>> samples;
  for (const TrialRecord& r : records) {
    if (!r.error.empty()) throw std::runtime_error("variance_growth: trial failed: " + r.error);
    samples[r.n].push_back(static_cast<double>(r.set_size));
  }
  return variance_growth_from_samples(samples);
}

ChernoffCheck chernoff_empirical_check(std::size_t t, double p, double eta, std::size_t trials,
                                       std::uint64_t seed) {
  if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("chernoff: eta must lie in (0, 1/2)");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("chernoff: p must lie in (0, 1]");
  if (t == 0 || trials == 0) throw std::invalid_argument("chernoff: t and trials must be >= 1");
  ChernoffCheck c;
  c.t = t;
  c.p = p;
  c.eta = eta;
  c.trials = trials;
  const double mu = static_cast<double>(t) * p;
  c.bound = chernoff_bound(mu, eta);
  SplitMix64 rng(derive_seed(seed, StreamTag::kCheck, t, std::bit_cast<std::uint64_t>(p)));
  std::binomial_distribution<long long> binom(static_cast<long long>(t), p);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    if (std::abs(static_cast<double>(binom(rng)) - mu) >= eta * mu) ++hits;
  }
  c.empirical_freq = static_cast<double>(hits) / static_cast<double>(trials);
  const double slack = 3.0 * std::sqrt(c.bound * (1.0 - c.bound) / static_cast<double>(trials));
  c.pass = c.bound >= 1.0 || c.empirical_freq <= c.bound + slack;
  return c;
}

std::vector<CheckOutcome> evaluate_checks(const ExperimentConfig& config,
                                          std::span<const TrialRecord> records) {
  std::vector<CheckOutcome> out;
  auto medians = [&] {
    std::map<Vertex, double> m;
    for (const auto& [n, s] : ratio_summary(records)) m[n] = s.median;
    return m;
  };
  for (const CheckSpec& spec : config.checks) {
    CheckOutcome o;
    o.kind = spec.kind;
    try {
      if (spec.kind == "all_valid") {
        const auto bad = std::count_if(records.begin(), records.end(),
                                       [](const TrialRecord& r) { return !r.valid; });
        o.passed = bad == 0;
        o.detail = std::to_string(bad) + " invalid of " + std::to_string(records.size());
      } else if (spec.kind == "median_ratio_max") {
        bool matched = false;
        o.passed = true;
        for (const auto& [n, med] : medians()) {
          if (spec.n != 0 && n != spec.n) continue;
          matched = true;
          o.detail += "n=" + std::to_string(n) + " median=" + std::to_string(med) + " ";
          o.passed = o.passed && med <= spec.value;
        }
        if (!matched) {
          o.passed = false;
          o.detail = "no records at n = " + std::to_string(spec.n);
        }
      } else if (spec.kind == "median_ratio_non_increasing") {
        o.passed = true;
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& [n, med] : medians()) {
          o.detail += "n=" + std::to_string(n) + " median=" + std::to_string(med) + " ";
          o.passed = o.passed && med <= prev;
          prev = med;
        }
      } else if (spec.kind == "sparse_mean_band") {
        const SparseScalingReport rep = sparse_scaling(records);
        o.passed = rep.normalized_size.mean >= spec.lo && rep.normalized_size.mean <= spec.hi;
        o.detail = "mean=" + std::to_string(rep.normalized_size.mean);
      } else if (spec.kind == "sparse_relative_sd_max") {
        const SparseScalingReport rep = sparse_scaling(records);
        o.passed = rep.relative_sd <= spec.value;
        o.detail = "relative_sd=" + std::to_string(rep.relative_sd);
      } else {
        o.detail = "unknown check kind";
      }
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace robudom
