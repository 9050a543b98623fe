#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "robudom/acceptance.hpp"
#include "robudom/constructors.hpp"
#include "robudom/exact.hpp"
#include "robudom/experiment.hpp"
#include "robudom/graph.hpp"
#include "robudom/regime.hpp"

namespace robudom::cli {
namespace {

using json = nlohmann::ordered_json;

// Thrown for bad input that CLI11 cannot catch at parse time.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string hex(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

json number(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

ConflictGraph load_conflict(const std::string& text, Vertex n) {
  if (text.rfind("file:", 0) == 0) {
    const Graph h = load_graph(text.substr(5));
    if (h.n() != n) {
      throw UsageError("conflict graph has " + std::to_string(h.n()) + " vertices, G has " +
                       std::to_string(n));
    }
    return make_conflict(h);
  }
  return build_conflict(parse_conflict_spec(text), n);
}

// Writes to --output when given, else to `out`.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& f) {
  if (path.empty()) {
    f(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  f(file);
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

struct Common {
  std::uint64_t seed = 0;
  bool json = false;
  std::string output;
};

void add_common(CLI::App* cmd, Common& c, bool with_output = true) {
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_flag("--json", c.json, "Machine-readable output");
  if (with_output) cmd->add_option("-o,--output", c.output, "Write data here instead of stdout");
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  Common common;
  Vertex n = 0;
  double p = 0.0;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (!(a.p >= 0.0 && a.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
  const Graph g = gen_bernoulli({a.n, a.p, a.common.seed});
  emit(a.common.output, out, [&](std::ostream& o) {
    if (a.common.json) {
      json j;
      j["n"] = g.n();
      j["m"] = g.edge_count();
      j["p"] = a.p;
      j["seed"] = a.common.seed;
      j["fingerprint"] = hex(fingerprint(g));
      json edges = json::array();
      for (const Edge& e : g.edges()) edges.push_back({e.first, e.second});
      j["edges"] = std::move(edges);
      o << j.dump() << '\n';
    } else {
      write_edge_list(o, g);
    }
  });
  return kExitOk;
}

// --- construct -------------------------------------------------------------

struct ConstructArgs {
  Common common;
  std::string graph_path;
  Vertex n = 0;
  std::optional<double> p;
  std::string conflict = "empty";
  std::string method = "auto";
  double epsilon = 0.1;
  double r0 = 0.1;
  bool preprocess = false;
  bool ignore_isolated = false;
};

int cmd_construct(const ConstructArgs& a, std::ostream& out) {
  const auto method = parse_method(a.method);
  if (!method) throw UsageError("unknown method '" + a.method + "'");
  Graph g;
  double p = 0.0;
  if (!a.graph_path.empty()) {
    g = load_graph(a.graph_path);
    const double pairs = 0.5 * g.n() * (g.n() - 1.0);
    p = a.p.value_or(pairs > 0 ? static_cast<double>(g.edge_count()) / pairs : 0.0);
  } else {
    if (a.n < 1 || !a.p) throw UsageError("construct needs --graph or both --n and --p");
    p = *a.p;
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
    g = gen_bernoulli({a.n, p, a.common.seed});
  }
  const ConflictGraph h = load_conflict(a.conflict, g.n());
  ConstructorParams params;
  params.epsilon = a.epsilon;
  params.r0 = a.r0;
  params.seed = a.common.seed;
  params.preprocess = a.preprocess;
  params.ignore_isolated = a.ignore_isolated;

  const ConstructionResult r = construct(*method, g, h, p, params);
  const bool valid = is_dominating(graph_minus(g, h), r.dominating_set, r.ignore_isolated);
  const double un = (p > 0.0 && p < 1.0) ? u_n(g.n(), p) : std::nan("");

  emit(a.common.output, out, [&](std::ostream& o) {
    if (a.common.json) {
      json j;
      j["n"] = g.n();
      j["p"] = p;
      j["graph_fingerprint"] = hex(fingerprint(g));
      j["conflict"] = a.conflict;
      j["method"] = std::string(to_string(r.method));
      j["size"] = r.size();
      j["valid"] = valid;
      j["u_n"] = number(un);
      j["core_size"] = r.core_size;
      j["repair_size"] = r.repair_size;
      j["preprocessed_size"] = r.preprocessed_size;
      j["samples"] = r.samples;
      j["ignore_isolated"] = r.ignore_isolated;
      j["fallback_reason"] = r.fallback_reason;
      j["set"] = r.dominating_set.members();
      o << j.dump() << '\n';
    } else {
      o << "method=" << to_string(r.method) << '\n'
        << "size=" << r.size() << '\n'
        << "valid=" << (valid ? "true" : "false") << '\n'
        << "u_n=" << g6(un) << '\n'
        << "core=" << r.core_size << " repair=" << r.repair_size
        << " preprocessed=" << r.preprocessed_size << '\n';
      if (!r.fallback_reason.empty()) o << "fallback=" << r.fallback_reason << '\n';
      o << "set=";
      for (std::size_t i = 0; i < r.dominating_set.members().size(); ++i) {
        o << (i ? " " : "") << r.dominating_set.members()[i];
      }
      o << '\n';
    }
  });
  return valid ? kExitOk : kExitCheckFailed;
}

// --- exact -----------------------------------------------------------------

struct ExactArgs {
  Common common;
  std::string graph_path;
  std::string conflict = "empty";
};

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.graph_path);
  const ConflictGraph h = load_conflict(a.conflict, g.n());
  const ExactResult r = exact_domination(graph_minus(g, h));
  emit(a.common.output, out, [&](std::ostream& o) {
    if (a.common.json) {
      json j;
      j["n"] = g.n();
      j["graph_fingerprint"] = hex(fingerprint(g));
      j["conflict"] = a.conflict;
      j["gamma"] = r.gamma;
      j["witness"] = r.witness.members();
      j["nodes_explored"] = r.nodes_explored;
      o << j.dump() << '\n';
    } else {
      o << "gamma=" << r.gamma << "\nwitness=";
      for (std::size_t i = 0; i < r.witness.members().size(); ++i) {
        o << (i ? " " : "") << r.witness.members()[i];
      }
      o << '\n';
    }
  });
  return kExitOk;
}

// --- math ------------------------------------------------------------------

struct MathArgs {
  Common common;
  std::string function;
  std::optional<double> n, p, x, y, theta, lambda, mu, eta, x_low, x_high;
  double lambda0 = kDefaultLambda0;
  std::size_t grid = 10000;
};

double need(const std::optional<double>& v, const char* flag, const std::string& fn) {
  if (!v) throw UsageError("math " + fn + " needs " + flag);
  return *v;
}

int cmd_math(const MathArgs& a, std::ostream& out) {
  const std::string& fn = a.function;
  json j;
  j["function"] = fn;
  std::string text;
  int code = kExitOk;

  if (fn == "u_n") {
    const double n = need(a.n, "--n", fn);
    const double x = a.x ? *a.x : need(a.p, "--x or --p", fn);
    const double y = a.y ? *a.y : (a.p ? *a.p : x);
    const double v = u_n_xy(n, x, y);
    j["value"] = v;
    text = g6(v);
  } else if (fn == "t_n") {
    const double v = t_n(need(a.n, "--n", fn), need(a.p, "--p", fn), need(a.theta, "--theta", fn));
    j["value"] = v;
    text = g6(v);
  } else if (fn == "lower_tail") {
    const TailBound b =
        lower_tail_bound(need(a.n, "--n", fn), need(a.p, "--p", fn), need(a.theta, "--theta", fn));
    j["threshold"] = b.threshold;
    j["prob_bound"] = b.prob_bound;
    j["log_prob_bound"] = b.log_prob_bound;
    text = "threshold=" + g6(b.threshold) + " prob_bound=" + g6(b.prob_bound) +
           " log_prob_bound=" + g6(b.log_prob_bound);
  } else if (fn == "a") {
    const double v = a_lambda(need(a.lambda, "--lambda", fn), a.lambda0);
    j["value"] = v;
    text = g6(v);
  } else if (fn == "b") {
    const double v = b_lambda(need(a.lambda, "--lambda", fn));
    j["value"] = v;
    text = g6(v);
  } else if (fn == "chernoff") {
    const double v = chernoff_bound(need(a.mu, "--mu", fn), need(a.eta, "--eta", fn));
    j["value"] = v;
    text = g6(v);
  } else if (fn == "entropy") {
    const double v = binary_entropy(need(a.x, "--x", fn));
    j["value"] = v;
    text = g6(v);
  } else if (fn == "un_certificate") {
    const bool ok = un_decreasing_certificate(need(a.n, "--n", fn), need(a.x_low, "--x-low", fn),
                                              need(a.x_high, "--x-high", fn), a.grid);
    j["value"] = ok;
    text = ok ? "true" : "false";
    code = ok ? kExitOk : kExitCheckFailed;
  } else if (fn == "regime") {
    const RegimeParams r = classify_regime(need(a.n, "--n", fn), need(a.p, "--p", fn));
    j["regime"] = to_string(r.regime);
    j["lambda_a"] = r.lambda_a;
    j["lambda_b"] = number(r.lambda_b);
    j["u_n"] = number(r.u_n);
    j["parameter"] = r.parameter;
    text = "regime=" + to_string(r.regime) + " lambda_a=" + g6(r.lambda_a) +
           " lambda_b=" + g6(r.lambda_b) + " u_n=" + g6(r.u_n) + " parameter=" + g6(r.parameter);
  }
  emit(a.common.output, out,
       [&](std::ostream& o) { o << (a.common.json ? j.dump() : text) << '\n'; });
  return code;
}

// --- experiment ------------------------------------------------------------

struct ExperimentArgs {
  Common common;
  std::string config_path;
  std::string summary_path;
  std::string format = "jsonl";
  std::optional<std::size_t> trials;
  std::optional<std::string> method;
  std::size_t threads = 0;
  bool seed_given = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.config_path);
  if (!in) throw UsageError("cannot open config '" + a.config_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = config_from_json(text.str());
  if (a.trials) {
    if (*a.trials < 1) throw UsageError("--trials must be >= 1");
    cfg.trials = *a.trials;
  }
  if (a.method) {
    const auto m = parse_method(*a.method);
    if (!m) throw UsageError("unknown method '" + *a.method + "'");
    cfg.method = *m;
  }
  if (a.seed_given) cfg.base_seed = a.common.seed;
  const ExportFormat format =
      (a.common.json || a.format == "jsonl") ? ExportFormat::kJsonLines : ExportFormat::kCsv;

  const std::vector<TrialRecord> records = run_trials(cfg, a.threads);
  emit(a.common.output, out, [&](std::ostream& o) { export_records(o, records, format); });

  const std::size_t failed = static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [](const TrialRecord& r) { return !r.error.empty(); }));
  if (failed > 0) err << failed << " of " << records.size() << " trials recorded errors\n";

  if (!a.summary_path.empty()) {
    std::map<Vertex, SummaryStats> summary;
    try {
      summary = ratio_summary(records);
    } catch (const std::invalid_argument& e) {
      err << "summary: " << e.what() << '\n';
    }
    emit(a.summary_path, out, [&](std::ostream& o) { write_summary_csv(o, summary); });
  }

  bool all_passed = true;
  for (const CheckOutcome& c : evaluate_checks(cfg, records)) {
    err << (c.passed ? "PASS " : "FAIL ") << c.kind << ": " << c.detail << '\n';
    all_passed = all_passed && c.passed;
  }
  return all_passed ? kExitOk : kExitCheckFailed;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  Common common;
  bool quick = false;
  std::vector<std::string> only;
  std::size_t threads = 0;
  bool seed_given = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  AcceptanceOptions opt;
  opt.quick = a.quick;
  opt.only = a.only;
  opt.threads = a.threads;
  if (a.seed_given) opt.seed = a.common.seed;
  std::vector<CriterionResult> results;
  emit(a.common.output, out, [&](std::ostream& o) {
    if (a.common.json) {
      results = run_acceptance(opt, nullptr);
      for (const CriterionResult& r : results) {
        json j;
        j["id"] = r.id;
        j["name"] = r.name;
        j["passed"] = r.passed;
        j["detail"] = r.detail;
        j["seconds"] = r.seconds;
        o << j.dump() << '\n';
      }
    } else {
      results = run_acceptance(opt, &o);
    }
  });
  const bool ok =
      std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust domination in random graphs: generation, construction, exact solving, "
               "formulas and experiments",
               "robudom"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample G(n, p) as an edge list");
  add_common(generate, gen.common);
  generate->add_option("--n", gen.n, "Vertices")->required();
  generate->add_option("--p", gen.p, "Edge probability")->required();

  ConstructArgs con;
  auto* construct_cmd = app.add_subcommand("construct", "Build a dominating set of G \\ H");
  add_common(construct_cmd, con.common);
  construct_cmd->add_option("--graph", con.graph_path, "Edge-list file for G");
  construct_cmd->add_option("--n", con.n, "Vertices when sampling G");
  construct_cmd->add_option("--p", con.p, "Model edge probability");
  construct_cmd->add_option("--conflict", con.conflict,
                            "empty | star:D | matching:M | regular:D[:SEED] | file:PATH");
  construct_cmd->add_option("--method", con.method,
                            "alteration | sampling | iterative | distinct | sparse | greedy | auto");
  construct_cmd->add_option("--epsilon", con.epsilon, "Slack parameter (default 0.1)");
  construct_cmd->add_option("--r0", con.r0, "Sampling method: Delta <= r0 n - 1 (default 0.1)");
  construct_cmd->add_flag("--preprocess", con.preprocess, "Force-include high H-degree vertices");
  construct_cmd->add_flag("--ignore-isolated", con.ignore_isolated,
                          "Sparse method: isolated vertices need no dominator");

  ExactArgs ex;
  auto* exact = app.add_subcommand("exact", "Exact domination number (n <= 32)");
  add_common(exact, ex.common);
  exact->add_option("--graph", ex.graph_path, "Edge-list file")->required();
  exact->add_option("--conflict", ex.conflict, "Conflict graph removed first");

  MathArgs ma;
  auto* math = app.add_subcommand("math", "Evaluate closed-form quantities");
  add_common(math, ma.common);
  math->add_option("function", ma.function)
      ->required()
      ->check(CLI::IsMember({"u_n", "t_n", "lower_tail", "a", "b", "chernoff", "entropy",
                             "un_certificate", "regime"}));
  math->add_option("--n", ma.n, "Vertices");
  math->add_option("--p", ma.p, "Edge probability (regime)");
  math->add_option("--x", ma.x, "First argument of u_n");
  math->add_option("--y", ma.y, "Second argument of u_n");
  math->add_option("--theta", ma.theta, "Tail parameter for t_n and lower_tail");
  math->add_option("--lambda", ma.lambda, "Argument of a and b");
  math->add_option("--lambda0", ma.lambda0, "Branch point of a (default 100)");
  math->add_option("--mu", ma.mu, "Binomial mean for chernoff");
  math->add_option("--eta", ma.eta, "Relative deviation for chernoff");
  math->add_option("--x-low", ma.x_low, "Certificate interval start");
  math->add_option("--x-high", ma.x_high, "Certificate interval end");
  math->add_option("--grid", ma.grid, "Certificate grid points");

  ExperimentArgs xa;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  add_common(experiment, xa.common);
  experiment->add_option("--config", xa.config_path, "JSON experiment config")->required();
  experiment->add_option("--summary", xa.summary_path, "CSV ratio summary per n");
  experiment->add_option("--format", xa.format, "Record format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  experiment->add_option("--trials", xa.trials, "Override trials");
  experiment->add_option("--method", xa.method, "Override method");
  experiment->add_option("--threads", xa.threads, "Worker threads (0: default)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  add_common(verify, va.common);
  verify->add_flag("--quick", va.quick, "Fast subset only");
  verify->add_option("--only", va.only, "Criterion names")->delimiter(',');
  verify->add_option("--threads", va.threads, "Worker threads (0: default)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (app.get_subcommands().empty()) err << "run 'robudom --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (construct_cmd->parsed()) return cmd_construct(con, out);
    if (exact->parsed()) return cmd_exact(ex, out);
    if (math->parsed()) return cmd_math(ma, out);
    if (experiment->parsed()) {
      xa.seed_given = experiment->count("--seed") > 0;
      return cmd_experiment(xa, out, err);
    }
    if (verify->parsed()) {
      va.seed_given = verify->count("--seed") > 0;
      return cmd_verify(va, out);
    }
  } catch (const HypothesisError& e) {
    err << "error: hypothesis failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace robudom::cli
