#include "robudom/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "robudom/constructors.hpp"
#include "robudom/exact.hpp"
#include "robudom/experiment.hpp"
#include "robudom/regime.hpp"
#include "robudom/rng.hpp"

namespace robudom {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double uniform_in(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

ConflictGraph random_conflict(SplitMix64& rng, Vertex n) {
  switch (uniform_below(rng, 4)) {
    case 0:
      return build_conflict(conflict::Empty{}, n);
    case 1: {
      const auto delta = static_cast<Vertex>(uniform_below(rng, std::max<Vertex>(1, n / 4) + 1));
      return build_conflict(conflict::Star{std::min(delta, n - 1)}, n);
    }
    case 2:
      return build_conflict(conflict::Matching{uniform_below(rng, n / 2 + 1)}, n);
    default: {
      auto d = static_cast<Vertex>(1 + uniform_below(rng, std::min<Vertex>(6, n - 1)));
      if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) --d;
      return build_conflict(conflict::RandomRegular{d, rng()}, n);
    }
  }
}

constexpr std::array<Method, 7> kAllMethods = {
    Method::kAlteration, Method::kSampling, Method::kIterative, Method::kDistinctTuple,
    Method::kSparse,     Method::kGreedy,   Method::kAuto,
};

// --- 1 ---------------------------------------------------------------------

CriterionResult validity(const AcceptanceOptions& opt) {
  constexpr std::size_t kInstances = 10000;
  std::map<std::string, std::size_t> per_regime, per_method;
  std::size_t emitted = 0, invalid = 0, skipped = 0, errors = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < kInstances; ++i) {
    SplitMix64 rng(derive_seed(opt.seed, StreamTag::kCheck, 1, i));
    const auto target = uniform_below(rng, 5);
    Vertex n = static_cast<Vertex>(8 + uniform_below(rng, 293));
    double p = 0.0;
    switch (target) {
      case 0:
        p = uniform_in(rng, 0.005, 0.095) / n;
        break;
      case 1:
        p = uniform_in(rng, 0.1, std::log(static_cast<double>(n))) / n;
        break;
      case 2:  // p < 0.01 with np > log n needs n beyond ~650
        n = static_cast<Vertex>(700 + uniform_below(rng, 801));
        p = uniform_in(rng, 1.2 * std::log(static_cast<double>(n)) / n, 0.0099);
        break;
      case 3:
        p = uniform_in(rng, 0.01, 0.99);
        break;
      default:
        p = 1.0 - uniform_in(rng, 0.0001, 0.01);
        break;
    }
    const ConflictGraph h = random_conflict(rng, n);
    const Graph g = gen_bernoulli({n, p, rng()});
    const Method method = kAllMethods[uniform_below(rng, kAllMethods.size())];
    ConstructorParams params;
    params.epsilon = std::array{0.05, 0.1, 0.2, 0.4}[uniform_below(rng, 4)];
    params.seed = rng();
    params.ignore_isolated = method == Method::kSparse && uniform_below(rng, 2) == 1;
    params.preprocess = uniform_below(rng, 4) == 0;
    try {
      const ConstructionResult r = construct(method, g, h, p, params);
      ++emitted;
      ++per_regime[to_string(classify_regime(n, p).regime)];
      ++per_method[std::string(to_string(r.method))];
      if (!is_dominating(graph_minus(g, h), r.dominating_set, r.ignore_isolated)) {
        ++invalid;
        if (first_failure.empty()) first_failure = " first failure at instance " + std::to_string(i);
      }
    } catch (const HypothesisError&) {
      ++skipped;
    } catch (const std::exception& e) {
      ++errors;
      if (first_failure.empty()) first_failure = std::string(" first error: ") + e.what();
    }
  }
  CriterionResult res;
  res.passed = invalid == 0 && errors == 0 && per_regime.size() == 5;
  res.detail = std::to_string(emitted) + " sets emitted, " + std::to_string(invalid) +
               " invalid, " + std::to_string(skipped) + " hypothesis failures, " +
               std::to_string(errors) + " errors; regimes covered " +
               std::to_string(per_regime.size()) + "/5, methods used " +
               std::to_string(per_method.size()) + first_failure;
  return res;
}

// --- 2 ---------------------------------------------------------------------

CriterionResult sandwich(const AcceptanceOptions& opt) {
  constexpr std::size_t kInstances = 1000;
  std::size_t checks = 0, violations = 0, antitone_violations = 0;
  std::string first;
  for (std::size_t i = 0; i < kInstances; ++i) {
    SplitMix64 rng(derive_seed(opt.seed, StreamTag::kCheck, 2, i));
    const auto n = static_cast<Vertex>(4 + uniform_below(rng, 17));
    const double p = uniform01(rng);
    const ConflictGraph h = random_conflict(rng, n);
    const Graph g = gen_bernoulli({n, p, rng()});
    const Graph g_eff = graph_minus(g, h);
    const GammaPair gp = exact_gamma_pair(g, h);
    if (gp.gamma_gh < gp.gamma_g) {
      ++antitone_violations;
      if (first.empty()) first = " first antitone violation at instance " + std::to_string(i);
    }
    const std::size_t isolated = stats(g_eff).isolated_vertex_count;
    ConstructorParams params;
    params.seed = rng();
    for (const Method m : kAllMethods) {
      for (const bool ignore : {false, true}) {
        if (ignore && m != Method::kSparse) continue;
        params.ignore_isolated = ignore;
        try {
          const ConstructionResult r = construct(m, g, h, p, params);
          const std::size_t floor = r.ignore_isolated ? gp.gamma_gh - isolated : gp.gamma_gh;
          ++checks;
          if (r.size() < floor) {
            ++violations;
            if (first.empty()) {
              first = " first violation: " + std::string(to_string(m)) + " at instance " +
                      std::to_string(i);
            }
          }
        } catch (const HypothesisError&) {
        }
      }
    }
  }
  CriterionResult res;
  res.passed = violations == 0 && antitone_violations == 0;
  res.detail = std::to_string(kInstances) + " instances, " + std::to_string(checks) +
               " constructor sizes compared, " + std::to_string(violations) +
               " below exact gamma(G\\H), " + std::to_string(antitone_violations) +
               " with gamma(G\\H) < gamma(G)" + first;
  return res;
}

// --- 3 ---------------------------------------------------------------------

CriterionResult alteration_bound(const AcceptanceOptions& opt) {
  ExperimentConfig cfg;
  cfg.n_grid = {5000};
  cfg.p_rule = {PRule::Kind::kFixed, 0.2};
  cfg.conflict = {ConflictRule::Kind::kStar, 50.0, -1.0};
  cfg.method = Method::kAlteration;
  cfg.trials = 200;
  cfg.base_seed = derive_seed(opt.seed, StreamTag::kCheck, 3);
  cfg.epsilon = 0.2;
  const auto records = run_trials(cfg, opt.threads);

  const double un = u_n(5000, 0.2);
  const double fixed = static_cast<double>(sizing::alteration_size(5000, 0.2, 0.2, 50));
  std::size_t bound_ok = 0, repair_ok = 0, failed = 0;
  for (const TrialRecord& r : records) {
    if (!r.valid) {
      ++failed;
      continue;
    }
    if (static_cast<double>(r.set_size) <= fixed + static_cast<double>(r.repair_size)) ++bound_ok;
    if (static_cast<double>(r.repair_size) <= 0.2 * un) ++repair_ok;
  }
  const double frac = static_cast<double>(repair_ok) / static_cast<double>(records.size());
  CriterionResult res;
  res.passed = failed == 0 && bound_ok == records.size() && frac >= 0.95 &&
               std::abs(un - 30.9565534755) < 1e-6;
  res.detail = "u_n = " + num(un) + ", ceil((1+eps)u_n) + Delta = " + num(fixed) +
               ", size bound held in " + std::to_string(bound_ok) + "/" +
               std::to_string(records.size()) + ", repair <= eps u_n in " + std::to_string(repair_ok) + "/" +
               std::to_string(records.size());
  return res;
}

// --- 4 ---------------------------------------------------------------------

CriterionResult ratio_trend(const AcceptanceOptions& opt) {
  ExperimentConfig cfg;
  cfg.n_grid = {1000, 4000, 16000};
  cfg.p_rule = {PRule::Kind::kFixed, 0.3};
  cfg.conflict = {ConflictRule::Kind::kStar, 0.0, 0.5};
  cfg.method = Method::kAuto;
  cfg.trials = 100;
  cfg.base_seed = derive_seed(opt.seed, StreamTag::kCheck, 4);
  cfg.checks = {{"all_valid"},
                {"median_ratio_non_increasing"},
                {"median_ratio_max", 1.35, 0.0, 0.0, 16000}};
  const auto records = run_trials(cfg, opt.threads);
  const auto outcomes = evaluate_checks(cfg, records);
  const auto summary = ratio_summary(records);

  CriterionResult res;
  res.passed = std::all_of(outcomes.begin(), outcomes.end(), [](auto& o) { return o.passed; });
  res.detail = "median size/u_n:";
  for (const auto& [n, s] : summary) res.detail += " n=" + std::to_string(n) + " " + num(s.median);
  std::map<std::string, std::size_t> used;
  for (const TrialRecord& r : records) ++used[r.method_used];
  res.detail += "; methods";
  for (const auto& [m, c] : used) res.detail += " " + m + "=" + std::to_string(c);
  return res;
}

// --- 5 ---------------------------------------------------------------------

CriterionResult sparse_scaling_criterion(const AcceptanceOptions& opt) {
  ExperimentConfig cfg;
  cfg.n_grid = {3000};
  cfg.p_rule = {PRule::Kind::kPower, 1.4};
  cfg.method = Method::kSparse;
  cfg.ignore_isolated = true;
  cfg.trials = 200;
  cfg.base_seed = derive_seed(opt.seed, StreamTag::kCheck, 5);
  const auto records = run_trials(cfg, opt.threads);
  const SparseScalingReport rep = sparse_scaling(records);
  const bool valid =
      std::all_of(records.begin(), records.end(), [](auto& r) { return r.valid; });
  CriterionResult res;
  res.passed = valid && rep.normalized_size.mean >= 0.20 && rep.normalized_size.mean <= 0.60 &&
               rep.relative_sd <= 0.25;
  res.detail = "size/(n^2 p) mean " + num(rep.normalized_size.mean) + ", relative sd " +
               num(rep.relative_sd) + ", isolated edges/(n^2 p/2) " +
               num(rep.isolated_edge_ratio.mean) + ", isolated-edge fraction " +
               num(rep.isolated_edge_fraction.mean);
  return res;
}

// --- 6 ---------------------------------------------------------------------

CriterionResult lambda_sandwich_criterion(const AcceptanceOptions& opt) {
  ExperimentConfig cfg;
  cfg.n_grid = {2000};
  cfg.p_rule = {PRule::Kind::kLambdaOverN, 5.0};
  cfg.method = Method::kAlteration;
  cfg.epsilon = 0.2;
  cfg.trials = 200;
  cfg.base_seed = derive_seed(opt.seed, StreamTag::kCheck, 6);
  const auto records = run_trials(cfg, opt.threads);
  const LambdaSandwichReport rep = lambda_sandwich(records, 5.0, 0.2, 100.0);
  CriterionResult res;
  res.passed = rep.upper_pass_fraction >= 0.95 && rep.lower_pass_fraction >= 0.95;
  res.detail = "b(5)(1.2) = " + num(rep.b * 1.2) + " upper pass " + num(rep.upper_pass_fraction) +
               "; a(5)(0.8) = " + num(rep.a * 0.8) + " lower pass " +
               num(rep.lower_pass_fraction);
  return res;
}

// --- 7 ---------------------------------------------------------------------

CriterionResult martingale(const AcceptanceOptions& opt) {
  const LipschitzReport rep =
      martingale_lipschitz_check(16, 0.3, 500, derive_seed(opt.seed, StreamTag::kCheck, 7));
  CriterionResult res;
  res.passed = rep.passes == rep.trials && rep.trials == 500;
  res.detail = std::to_string(rep.passes) + "/" + std::to_string(rep.trials) +
               " trials satisfy |G - G^(j)| <= l_j; max |diff| " +
               std::to_string(rep.max_abs_difference) + ", max l_j " + std::to_string(rep.max_l_j);
  return res;
}

// --- 8 ---------------------------------------------------------------------

CriterionResult variance(const AcceptanceOptions& opt) {
  const std::array<Vertex, 4> grid = {500, 1000, 2000, 4000};
  const VarianceReport rep = variance_growth_check(
      grid, 3.0, 300, derive_seed(opt.seed, StreamTag::kCheck, 8), Method::kAuto, opt.threads);
  const VarianceRow& last = rep.rows.back();
  CriterionResult res;
  res.passed = rep.no_increasing_trend && last.n == 4000 && last.var_over_mean_sq <= 0.01;
  res.detail = "var/(n log^2 n):";
  for (const VarianceRow& r : rep.rows) res.detail += " " + num(r.normalized);
  res.detail += "; Spearman rho " + num(rep.spearman_rho) + " (one-sided p " +
                num(rep.p_value_increasing) + "); var/mean^2 at n=4000 " +
                num(last.var_over_mean_sq) + "; " + rep.note;
  return res;
}

// --- 9 ---------------------------------------------------------------------

CriterionResult chernoff(const AcceptanceOptions& opt) {
  // Frozen evaluations of the bound; a wrong constant in the exponent fails here.
  const bool identity_ok = std::abs(chernoff_bound(100.0, 0.2) - 0.735758882342885) < 1e-12 &&
                           std::abs(chernoff_bound(500.0, 0.2) - 0.0134758939981709) < 1e-14 &&
                           chernoff_bound(10.0, 0.1) == 1.0;
  std::size_t points = 0, passes = 0;
  std::string worst;
  double worst_margin = -1.0;
  for (const std::size_t t : {100, 400, 1600, 6400}) {
    for (const double p : {0.1, 0.5}) {
      for (const double eta : {0.1, 0.2, 0.4}) {
        const ChernoffCheck c = chernoff_empirical_check(
            t, p, eta, 100000, derive_seed(opt.seed, StreamTag::kCheck, 9));
        ++points;
        if (c.pass) ++passes;
        if (c.bound < 1.0) {
          const double margin = c.empirical_freq / c.bound;
          if (margin > worst_margin) {
            worst_margin = margin;
            worst = "t=" + std::to_string(t) + " p=" + num(p) + " eta=" + num(eta);
          }
        }
      }
    }
  }
  CriterionResult res;
  res.passed = identity_ok && passes == points;
  res.detail = std::string("frozen bound values ") + (identity_ok ? "match" : "MISMATCH") + ", " +
               std::to_string(passes) + "/" + std::to_string(points) +
               " grid points within bound + 3 SE; largest freq/bound " + num(worst_margin) +
               " at " + worst;
  return res;
}

// --- 10 --------------------------------------------------------------------

CriterionResult monotonicity(const AcceptanceOptions& opt) {
  constexpr double n = 1e4;
  constexpr std::size_t grid = 10000;
  const double lo = 10.0 / n;
  const double hi = 1.0 - 1.0 / (n * n * n);
  const bool certificate = un_decreasing_certificate(n, lo, hi, grid);
  const double step = (hi - lo) / static_cast<double>(grid + 1);
  std::size_t bad_slope = 0;
  double prev = u_n(n, lo + step);
  for (std::size_t i = 2; i <= grid; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double cur = u_n(n, x);
    if (!(cur < prev)) ++bad_slope;
    prev = cur;
  }
  CriterionResult res;
  res.passed = certificate && bad_slope == 0;
  res.detail = std::string("H(x) - x log n < 0 on the grid: ") + (certificate ? "yes" : "no") +
               "; non-negative finite-difference slopes: " + std::to_string(bad_slope);
  return res;
}

// --- 11 --------------------------------------------------------------------

std::string jsonl(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  export_records(out, records, ExportFormat::kJsonLines);
  return out.str();
}

CriterionResult determinism(const AcceptanceOptions& opt) {
  std::vector<ExperimentConfig> configs(3);
  configs[0].n_grid = {150, 400};
  configs[0].p_rule = {PRule::Kind::kFixed, 0.2};
  configs[0].conflict = {ConflictRule::Kind::kRegular, 0.0, 0.5};
  configs[0].trials = 12;
  configs[1].n_grid = {500, 1000};
  configs[1].p_rule = {PRule::Kind::kLambdaOverN, 3.0};
  configs[1].conflict = {ConflictRule::Kind::kMatching, 20.0, -1.0};
  configs[1].trials = 12;
  configs[2].n_grid = {2000};
  configs[2].p_rule = {PRule::Kind::kPower, 1.3};
  configs[2].method = Method::kSparse;
  configs[2].ignore_isolated = true;
  configs[2].trials = 12;
  std::size_t identical = 0;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    configs[i].base_seed = derive_seed(opt.seed, StreamTag::kCheck, 11, i);
    const std::string a = jsonl(run_trials(configs[i], 1));
    const std::string b = jsonl(run_trials(configs[i], 1));
    const std::string c = jsonl(run_trials(configs[i], 8));
    if (a == b && a == c) ++identical;
    bytes += a.size();
  }
  CriterionResult res;
  res.passed = identical == configs.size();
  res.detail = std::to_string(identical) + "/" + std::to_string(configs.size()) +
               " configs byte-identical across reruns and 1 vs 8 workers (" +
               std::to_string(bytes) + " bytes)";
  return res;
}

using Runner = CriterionResult (*)(const AcceptanceOptions&);

struct Entry {
  CriterionInfo info;
  Runner run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{1, "validity", true}, validity},
      {{2, "sandwich", true}, sandwich},
      {{3, "alteration_bound", true}, alteration_bound},
      {{4, "ratio_trend", false}, ratio_trend},
      {{5, "sparse_scaling", true}, sparse_scaling_criterion},
      {{6, "lambda_sandwich", true}, lambda_sandwich_criterion},
      {{7, "martingale", true}, martingale},
      {{8, "variance", false}, variance},
      {{9, "chernoff", true}, chernoff},
      {{10, "monotonicity", true}, monotonicity},
      {{11, "determinism", true}, determinism},
  };
  return table;
}

}  // namespace

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> infos = [] {
    std::vector<CriterionInfo> v;
    for (const Entry& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log) {
  for (const std::string& name : options.only) {
    const bool known = std::any_of(entries().begin(), entries().end(),
                                   [&](const Entry& e) { return name == e.info.name; });
    if (!known) throw std::invalid_argument("unknown acceptance criterion '" + name + "'");
  }
  std::vector<CriterionResult> results;
  for (const Entry& e : entries()) {
    const bool selected =
        options.only.empty()
            ? (!options.quick || e.info.quick)
            : std::find(options.only.begin(), options.only.end(), e.info.name) !=
                  options.only.end();
    if (!selected) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = e.run(options);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.id = e.info.id;
    r.name = e.info.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) {
      *log << (r.passed ? "PASS " : "FAIL ") << r.id << ' ' << r.name << ": " << r.detail << " ["
           << num(r.seconds) << " s]\n";
      log->flush();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace robudom
