#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "robudom/experiment.hpp"

namespace robudom {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kSchemaName = "robudom.trial_record";

constexpr const char* kColumns[] = {
    "n",          "trial_index",       "p",
    "seed",       "method",            "method_used",
    "conflict",   "set_size",          "u_n",
    "ratio",      "valid",             "core_size",
    "repair_size", "preprocessed_size", "edge_count",
    "isolated_edge_count", "isolated_vertex_count", "error",
};
constexpr std::size_t kColumnCount = std::size(kColumns);

ordered_json json_double(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

double double_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

ordered_json to_json(const TrialRecord& r) {
  ordered_json j;
  j["n"] = r.n;
  j["trial_index"] = r.trial_index;
  j["p"] = json_double(r.p);
  j["seed"] = r.seed;
  j["method"] = r.method;
  j["method_used"] = r.method_used;
  j["conflict"] = r.conflict;
  j["set_size"] = r.set_size;
  j["u_n"] = json_double(r.u_n);
  j["ratio"] = json_double(r.ratio);
  j["valid"] = r.valid;
  j["core_size"] = r.core_size;
  j["repair_size"] = r.repair_size;
  j["preprocessed_size"] = r.preprocessed_size;
  j["edge_count"] = r.edge_count;
  j["isolated_edge_count"] = r.isolated_edge_count;
  j["isolated_vertex_count"] = r.isolated_vertex_count;
  j["error"] = r.error;
  return j;
}

TrialRecord record_from_json(const nlohmann::json& j) {
  TrialRecord r;
  r.n = j.at("n").get<Vertex>();
  r.trial_index = j.at("trial_index").get<std::size_t>();
  r.p = double_from_json(j.at("p"));
  r.seed = j.at("seed").get<std::uint64_t>();
  r.method = j.at("method").get<std::string>();
  r.method_used = j.at("method_used").get<std::string>();
  r.conflict = j.at("conflict").get<std::string>();
  r.set_size = j.at("set_size").get<std::size_t>();
  r.u_n = double_from_json(j.at("u_n"));
  r.ratio = double_from_json(j.at("ratio"));
  r.valid = j.at("valid").get<bool>();
  r.core_size = j.at("core_size").get<std::size_t>();
  r.repair_size = j.at("repair_size").get<std::size_t>();
  r.preprocessed_size = j.at("preprocessed_size").get<std::size_t>();
  r.edge_count = j.at("edge_count").get<std::size_t>();
  r.isolated_edge_count = j.at("isolated_edge_count").get<std::size_t>();
  r.isolated_vertex_count = j.at("isolated_vertex_count").get<std::size_t>();
  r.error = j.at("error").get<std::string>();
  return r;
}

std::string csv_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

template <class T>
T parse_unsigned(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::runtime_error("csv: bad integer '" + s + "'");
  return static_cast<T>(v);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

void write_csv_row(std::ostream& out, const TrialRecord& r) {
  out << r.n << ',' << r.trial_index << ',' << csv_double(r.p) << ',' << r.seed << ','
      << csv_quote(r.method) << ',' << csv_quote(r.method_used) << ',' << csv_quote(r.conflict)
      << ',' << r.set_size << ',' << csv_double(r.u_n) << ',' << csv_double(r.ratio) << ','
      << (r.valid ? 1 : 0) << ',' << r.core_size << ',' << r.repair_size << ','
      << r.preprocessed_size << ',' << r.edge_count << ',' << r.isolated_edge_count << ','
      << r.isolated_vertex_count << ',' << csv_quote(r.error) << '\n';
}

TrialRecord read_csv_row(const std::string& line) {
  const auto f = csv_split(line);
  if (f.size() != kColumnCount) {
    throw std::runtime_error("csv: expected " + std::to_string(kColumnCount) + " fields, got " +
                             std::to_string(f.size()));
  }
  TrialRecord r;
  r.n = parse_unsigned<Vertex>(f[0]);
  r.trial_index = parse_unsigned<std::size_t>(f[1]);
  r.p = parse_double(f[2]);
  r.seed = parse_unsigned<std::uint64_t>(f[3]);
  r.method = f[4];
  r.method_used = f[5];
  r.conflict = f[6];
  r.set_size = parse_unsigned<std::size_t>(f[7]);
  r.u_n = parse_double(f[8]);
  r.ratio = parse_double(f[9]);
  r.valid = parse_unsigned<int>(f[10]) != 0;
  r.core_size = parse_unsigned<std::size_t>(f[11]);
  r.repair_size = parse_unsigned<std::size_t>(f[12]);
  r.preprocessed_size = parse_unsigned<std::size_t>(f[13]);
  r.edge_count = parse_unsigned<std::size_t>(f[14]);
  r.isolated_edge_count = parse_unsigned<std::size_t>(f[15]);
  r.isolated_vertex_count = parse_unsigned<std::size_t>(f[16]);
  r.error = f[17];
  return r;
}

std::string column_line() {
  std::string s;
  for (std::size_t i = 0; i < kColumnCount; ++i) {
    if (i) s += ',';
    s += kColumns[i];
  }
  return s;
}

// --- config -------------------------------------------------------------

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
  }
}

PRule prule_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"kind", "value"}, "p_rule");
  PRule r;
  const std::string kind = j.at("kind").get<std::string>();
  r.value = j.at("value").get<double>();
  if (kind == "fixed") {
    r.kind = PRule::Kind::kFixed;
    if (!(r.value >= 0.0 && r.value <= 1.0)) throw std::invalid_argument("config: p outside [0, 1]");
  } else if (kind == "lambda_over_n") {
    r.kind = PRule::Kind::kLambdaOverN;
    if (!(r.value >= 0.0)) throw std::invalid_argument("config: lambda must be >= 0");
  } else if (kind == "power") {
    r.kind = PRule::Kind::kPower;
    if (!(r.value >= 0.0)) throw std::invalid_argument("config: alpha must be >= 0");
  } else {
    throw std::invalid_argument("config: unknown p_rule kind '" + kind + "'");
  }
  return r;
}

ConflictRule conflict_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"kind", "size", "power"}, "conflict");
  ConflictRule r;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "empty") {
    r.kind = ConflictRule::Kind::kEmpty;
  } else if (kind == "star") {
    r.kind = ConflictRule::Kind::kStar;
  } else if (kind == "matching") {
    r.kind = ConflictRule::Kind::kMatching;
  } else if (kind == "regular") {
    r.kind = ConflictRule::Kind::kRegular;
  } else {
    throw std::invalid_argument("config: unknown conflict kind '" + kind + "'");
  }
  if (j.contains("size") && j.contains("power")) {
    throw std::invalid_argument("config: conflict takes size or power, not both");
  }
  if (j.contains("size")) r.size = j["size"].get<double>();
  if (j.contains("power")) {
    r.power = j["power"].get<double>();
    if (r.power < 0.0) throw std::invalid_argument("config: conflict power must be >= 0");
  }
  if (r.kind != ConflictRule::Kind::kEmpty && !j.contains("size") && !j.contains("power")) {
    throw std::invalid_argument("config: conflict '" + kind + "' needs size or power");
  }
  if (r.size < 0.0) throw std::invalid_argument("config: conflict size must be >= 0");
  return r;
}

ordered_json conflict_to_json(const ConflictRule& r) {
  static constexpr const char* names[] = {"empty", "star", "matching", "regular"};
  ordered_json j;
  j["kind"] = names[static_cast<int>(r.kind)];
  if (r.kind == ConflictRule::Kind::kEmpty) return j;
  if (r.power >= 0.0) {
    j["power"] = r.power;
  } else {
    j["size"] = r.size;
  }
  return j;
}

}  // namespace

void export_records(std::ostream& out, std::span<const TrialRecord> records, ExportFormat format) {
  if (format == ExportFormat::kJsonLines) {
    ordered_json header;
    header["schema"] = kSchemaName;
    header["version"] = kRecordSchemaVersion;
    out << header.dump() << '\n';
    for (const TrialRecord& r : records) out << to_json(r).dump() << '\n';
  } else {
    out << "# " << kSchemaName << " version " << kRecordSchemaVersion << '\n';
    out << column_line() << '\n';
    for (const TrialRecord& r : records) write_csv_row(out, r);
  }
  if (!out) throw std::runtime_error("export_records: write failed");
}

void export_records(const std::string& path, std::span<const TrialRecord> records,
                    ExportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_records: cannot open '" + path + "' for writing");
  export_records(out, records, format);
  out.close();
  if (!out) throw std::runtime_error("export_records: write to '" + path + "' failed");
}

std::vector<TrialRecord> load_records(std::istream& in, ExportFormat format) {
  std::vector<TrialRecord> records;
  std::string line;
  if (format == ExportFormat::kJsonLines) {
    if (!std::getline(in, line)) throw std::runtime_error("load_records: missing header");
    const auto header = nlohmann::json::parse(line);
    if (header.value("schema", "") != kSchemaName ||
        header.value("version", -1) != kRecordSchemaVersion) {
      throw std::runtime_error("load_records: unsupported schema header " + line);
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      records.push_back(record_from_json(nlohmann::json::parse(line)));
    }
  } else {
    const std::string want = std::string("# ") + kSchemaName + " version " +
                             std::to_string(kRecordSchemaVersion);
    if (!std::getline(in, line) || line != want) {
      throw std::runtime_error("load_records: unsupported CSV header");
    }
    if (!std::getline(in, line) || line != column_line()) {
      throw std::runtime_error("load_records: unexpected CSV columns");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // A quoted field may span lines; quotes balance at the end of a row.
      std::string next;
      while (std::count(line.begin(), line.end(), '"') % 2 != 0 && std::getline(in, next)) {
        line += '\n';
        line += next;
      }
      records.push_back(read_csv_row(line));
    }
  }
  return records;
}

void write_summary_csv(std::ostream& out, const std::map<Vertex, SummaryStats>& summary) {
  out << "n,count,mean,median,q05,q95,variance\n";
  for (const auto& [n, s] : summary) {
    out << n << ',' << s.count << ',' << csv_double(s.mean) << ',' << csv_double(s.median) << ','
        << csv_double(s.q05) << ',' << csv_double(s.q95) << ',' << csv_double(s.variance)
        << '\n';
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  reject_unknown(j,
                 {"n_grid", "p_rule", "conflict", "method", "trials", "base_seed", "epsilon", "r0",
                  "ignore_isolated", "checks"},
                 "config");
  ExperimentConfig c;
  c.n_grid = j.at("n_grid").get<std::vector<Vertex>>();
  if (c.n_grid.empty()) throw std::invalid_argument("config: n_grid is empty");
  for (Vertex n : c.n_grid) {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  }
  c.p_rule = prule_from_json(j.at("p_rule"));
  if (j.contains("conflict")) c.conflict = conflict_from_json(j["conflict"]);
  if (j.contains("method")) {
    const std::string name = j["method"].get<std::string>();
    const auto m = parse_method(name);
    if (!m) throw std::invalid_argument("config: unknown method '" + name + "'");
    c.method = *m;
  }
  c.trials = j.value("trials", std::size_t{1});
  if (c.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  c.base_seed = j.value("base_seed", std::uint64_t{0});
  c.epsilon = j.value("epsilon", 0.1);
  c.r0 = j.value("r0", 0.1);
  c.ignore_isolated = j.value("ignore_isolated", false);
  if (j.contains("checks")) {
    for (const auto& cj : j["checks"]) {
      reject_unknown(cj, {"kind", "value", "lo", "hi", "n"}, "checks");
      CheckSpec s;
      s.kind = cj.at("kind").get<std::string>();
      s.value = cj.value("value", 0.0);
      s.lo = cj.value("lo", 0.0);
      s.hi = cj.value("hi", 0.0);
      s.n = cj.value("n", Vertex{0});
      c.checks.push_back(s);
    }
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  static constexpr const char* prule_names[] = {"fixed", "lambda_over_n", "power"};
  ordered_json j;
  j["n_grid"] = c.n_grid;
  j["p_rule"] = {{"kind", prule_names[static_cast<int>(c.p_rule.kind)]},
                 {"value", c.p_rule.value}};
  j["conflict"] = conflict_to_json(c.conflict);
  j["method"] = std::string(to_string(c.method));
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["epsilon"] = c.epsilon;
  j["r0"] = c.r0;
  j["ignore_isolated"] = c.ignore_isolated;
  ordered_json checks = ordered_json::array();
  for (const CheckSpec& s : c.checks) {
    ordered_json cj;
    cj["kind"] = s.kind;
    if (s.value != 0.0) cj["value"] = s.value;
    if (s.lo != 0.0) cj["lo"] = s.lo;
    if (s.hi != 0.0) cj["hi"] = s.hi;
    if (s.n != 0) cj["n"] = s.n;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j.dump(2);
}

}  // namespace robudom
