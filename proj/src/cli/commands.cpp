#include "ftlab/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include "ftlab/circuits/lowering.hpp"
#include "ftlab/circuits/suite.hpp"
#include "ftlab/cli/registry.hpp"
#include "ftlab/error.hpp"
#include "ftlab/spinbath/config_json.hpp"
#include "ftlab/spinbath/model.hpp"
#include "ftlab/statevector/simulator.hpp"
#include "ftlab/transmon/model.hpp"

namespace ftlab::cli {
namespace fs = std::filesystem;
using nlohmann::json;
using statevector::Distribution;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json dist_to_json(const Distribution& d) {
  json j = json::object();
  for (unsigned c = 0; c < d.size(); ++c) {
    if (d.probs[c] != 0.0) j[statevector::to_bitstring(c, d.width)] = d.probs[c];
  }
  return j;
}

Distribution dist_from_json(const json& j, int width) {
  if (!j.is_object() || width < 1 || width > 16) throw ConfigError("malformed distribution record");
  Distribution d(width);
  for (const auto& [bits, p] : j.items()) {
    if (static_cast<int>(bits.size()) != width || !p.is_number()) throw ConfigError("malformed distribution record");
    d.probs[statevector::from_bitstring(bits)] = p.get<double>();
  }
  return d;
}

const std::vector<circuits::LogicalCircuit>& suite() {
  static const auto s = circuits::load_suite(data_dir() / "suite.txt");
  return s;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- backends --------------------------------------------------------------

using Runner = std::function<json(const circuits::PhysicalCircuit&)>;

struct Backend {
  json config;
  Runner run;
};

struct TransmonRunConfig {
  std::string device = "reduced-q3q4r4";
  std::string pulse_set = "plain";
  double tau = transmon::kDefaultTau;
  bool retarget = true;
  int n_charge_max = 17;
  fs::path device_file;
  fs::path xpih_file;
  fs::path cnot_file;
};

TransmonRunConfig transmon_config(const json& j, const fs::path& base) {
  static const std::set<std::string> kKeys{"device",       "pulse_set",   "tau",       "retarget",
                                           "n_charge_max", "device_file", "xpih_file", "cnot_file"};
  TransmonRunConfig c;
  c.device_file = data_dir() / "transmon_device.json";
  c.xpih_file = data_dir() / "pulses_xpih.json";
  c.cnot_file = data_dir() / "pulses_cnot.json";
  if (!j.is_object()) throw ConfigError("transmon config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown transmon config key \"" + key + "\"");
  }
  auto path_of = [&](const char* key, fs::path& dst) {
    if (!j.contains(key)) return;
    fs::path p = j.at(key).get<std::string>();
    dst = p.is_absolute() ? p : base / p;
  };
  try {
    if (j.contains("device")) c.device = j.at("device").get<std::string>();
    if (j.contains("pulse_set")) c.pulse_set = j.at("pulse_set").get<std::string>();
    if (j.contains("tau")) c.tau = j.at("tau").get<double>();
    if (j.contains("retarget")) c.retarget = j.at("retarget").get<bool>();
    if (j.contains("n_charge_max")) c.n_charge_max = j.at("n_charge_max").get<int>();
    path_of("device_file", c.device_file);
    path_of("xpih_file", c.xpih_file);
    path_of("cnot_file", c.cnot_file);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("transmon config: ") + e.what());
  }
  if (!(c.tau > 0.0)) throw ConfigError("transmon config: tau must be positive");
  if (c.pulse_set != "plain" && c.pulse_set != "withf") throw ConfigError("transmon config: bad pulse_set");
  return c;
}

json file_digest(const fs::path& p) { return circuits::sha256_hex(read_text_file(p)); }

Backend make_backend(const std::string& name, const std::optional<fs::path>& config_path) {
  const json doc = config_path ? read_json_file(*config_path) : json::object();
  const fs::path base = config_path ? config_path->parent_path() : fs::path{};
  if (name == "ideal") {
    if (!doc.empty()) throw ConfigError("the ideal backend takes no configuration");
    return {json::object(), [](const circuits::PhysicalCircuit& pc) {
              return json{{"dist", dist_to_json(statevector::run_ideal(pc))}};
            }};
  }
  if (name == "spinbath") {
    const spinbath::SpinBathConfig cfg = spinbath::config_from_json(doc);
    return {spinbath::config_to_json(cfg), [cfg](const circuits::PhysicalCircuit& pc) {
              const auto r = spinbath::run_circuit(cfg, pc);
              return json{{"dist", dist_to_json(r.dist)},
                          {"duration_ns", r.duration},
                          {"max_norm_error", r.max_norm_error}};
            }};
  }
  if (name == "transmon") {
    const TransmonRunConfig c = transmon_config(doc, base);
    const transmon::Subsystem sub = transmon::Subsystem::parse(c.device);
    auto model = std::make_shared<const transmon::TransmonModel>(transmon::load_device(c.device_file), sub,
                                                                 c.n_charge_max);
    transmon::PulseLibrary lib = transmon::load_library(c.xpih_file, c.cnot_file, c.pulse_set);
    const bool full = sub.name() == "full";
    if (c.retarget && !full) lib = transmon::retarget_library(lib, *model);
    json canon{{"device", sub.name()},
               {"pulse_set", c.pulse_set},
               {"tau", c.tau},
               {"retarget", c.retarget && !full},
               {"n_charge_max", c.n_charge_max},
               {"device_sha256", file_digest(c.device_file)},
               {"xpih_sha256", file_digest(c.xpih_file)},
               {"cnot_sha256", file_digest(c.cnot_file)}};
    auto shared_lib = std::make_shared<const transmon::PulseLibrary>(std::move(lib));
    const double tau = c.tau;
    return {canon, [model, shared_lib, tau](const circuits::PhysicalCircuit& pc) {
              const auto r = transmon::run_circuit(*model, *shared_lib, pc, tau);
              return json{{"dist", dist_to_json(r.dist)}, {"leakage", r.leakage}, {"duration_ns", r.duration}};
            }};
  }
  throw ConfigError("unknown backend \"" + name + "\"");
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string backend = "ideal";
  std::optional<std::string> config;
  std::string circuits = "all";
  std::string mode = "both";
  std::optional<double> readout_p;
  std::optional<std::string> out;
  int jobs = 1;
};

std::string selection_label(const std::string& spec) {
  if (spec == "all") return "all465";
  if (spec == "selected15") return "selected15";
  return "ids";
}

int cmd_run(const RunArgs& a, const fs::path& root, std::ostream& out, std::ostream& err) {
  if (a.mode != "bare" && a.mode != "encoded" && a.mode != "both") throw ConfigError("bad mode " + a.mode);
  if (a.readout_p && !(*a.readout_p >= 0.0 && *a.readout_p <= 0.5)) {
    throw DomainError("--readout-p must lie in [0, 0.5]");
  }
  const std::vector<int> ids = parse_selection(a.circuits);
  const Backend backend = make_backend(a.backend, a.config ? std::optional<fs::path>(*a.config) : std::nullopt);

  std::vector<std::pair<int, std::string>> items;
  for (int id : ids) {
    if (a.mode != "encoded") items.emplace_back(id, "bare");
    if (a.mode != "bare") items.emplace_back(id, "encoded");
  }
  std::vector<std::string> lines(items.size());
  parallel_for(items.size(), a.jobs, [&](std::size_t i) {
    const auto& [id, mode] = items[i];
    const auto& c = suite().at(static_cast<std::size_t>(id));
    const auto pc = mode == "bare" ? circuits::lower_bare(c) : circuits::lower_encoded(c);
    json rec = backend.run(pc);
    if (a.readout_p) {
      const Distribution d = dist_from_json(rec.at("dist"), pc.width());
      rec["dist"] = dist_to_json(analysis::apply_readout_error(d, *a.readout_p));
    }
    rec["id"] = id;
    rec["mode"] = mode;
    rec["width"] = pc.width();
    lines[i] = rec.dump() + "\n";
  });
  std::string records;
  for (const auto& l : lines) records += l;

  json manifest{{"command", "run"},
                {"backend", a.backend},
                {"config", backend.config},
                {"selection", {{"name", selection_label(a.circuits)}, {"ids", ids}}},
                {"suite_sha256", circuits::kSuiteSha256},
                {"mode", a.mode},
                {"readout_p", a.readout_p ? json(*a.readout_p) : json(nullptr)},
                {"code_version", code_version()},
                {"outputs", {"records.jsonl"}}};
  const auto entry = store_entry(root, "runs", manifest, {{"records.jsonl", records}});
  err << (entry.reused ? "reused " : "stored ") << items.size() << " records\n";
  out << "run " << entry.id << " " << entry.dir.string() << "\n";
  return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct LoadedRun {
  std::string id;
  json manifest;
  std::map<std::pair<int, std::string>, Distribution> records;
};

LoadedRun load_run(const fs::path& root, const std::string& ref) {
  const fs::path dir = resolve_run(root, ref);
  LoadedRun r;
  r.manifest = read_json_file(dir / "manifest.json");
  r.id = r.manifest.value("id", ref);
  const std::string text = read_text_file(dir / "records.jsonl");
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json rec = json::parse(line);
      const int width = rec.at("width").get<int>();
      r.records[{rec.at("id").get<int>(), rec.at("mode").get<std::string>()}] = dist_from_json(rec.at("dist"), width);
    } catch (const json::exception& e) {
      throw ConfigError("run " + r.id + ": malformed record: " + e.what());
    }
  }
  return r;
}

const Distribution& record_of(const LoadedRun& run, int id, const std::string& mode) {
  const auto it = run.records.find({id, mode});
  if (it == run.records.end()) {
    throw ConfigError("run " + run.id + " has no " + mode + " record for circuit " + std::to_string(id));
  }
  return it->second;
}

struct AnalyzeArgs {
  std::string bare;
  std::string encoded;
  std::optional<double> readout_p;
  std::string decode = "xor";
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& a, const fs::path& root, std::ostream& out) {
  const LoadedRun bare = load_run(root, a.bare);
  const LoadedRun enc = load_run(root, a.encoded);
  const json& ids_b = bare.manifest.at("selection").at("ids");
  const json& ids_e = enc.manifest.at("selection").at("ids");
  if (ids_b != ids_e) throw ConfigError("run-id mismatch: runs " + bare.id + " and " + enc.id + " cover different circuits");
  if (a.decode != "xor" && a.decode != "q3q4") throw ConfigError("--decode must be xor or q3q4");
  const auto map = a.decode == "xor" ? analysis::DecodeMap::Xor : analysis::DecodeMap::LiteralQ3Q4;

  const std::string backend_b = bare.manifest.value("backend", "");
  const std::string backend_e = enc.manifest.value("backend", "");
  std::vector<analysis::FtRecord> records;
  for (const auto& v : ids_b) {
    const int id = v.get<int>();
    if (id < 0 || id >= circuits::kSuiteSize) throw ValidationError("unknown circuit id " + std::to_string(id));
    auto rec = analysis::evaluate_circuit(suite()[static_cast<std::size_t>(id)], record_of(bare, id, "bare"),
                                          record_of(enc, id, "encoded"), a.readout_p, map);
    rec.backend = backend_b == backend_e ? backend_b : backend_b + "/" + backend_e;
    rec.config_digest = bare.id == enc.id ? bare.id : bare.id + "/" + enc.id;
    records.push_back(std::move(rec));
  }
  const analysis::FtReport report = analysis::build_report(std::move(records));

  json doc{{"bare_run", bare.id},
           {"encoded_run", enc.id},
           {"readout_p", a.readout_p ? json(*a.readout_p) : json(nullptr)},
           {"decode", a.decode},
           {"percentage_p", report.percentage_p},
           {"criterion_pass", report.criterion_pass},
           {"records", json::array()}};
  std::string csv = "id,D_bare,D_enc,r\n";
  for (const auto& r : report.records) {
    doc["records"].push_back({{"id", r.circuit_id},
                              {"d_bare", r.d_bare},
                              {"d_enc", r.d_enc},
                              {"ratio", r.ratio},
                              {"backend", r.backend},
                              {"config_digest", r.config_digest}});
    csv += std::to_string(r.circuit_id) + "," + num(r.d_bare) + "," + num(r.d_enc) + "," + num(r.ratio) + "\n";
  }

  fs::path stem = a.out;
  if (stem.extension() == ".json" || stem.extension() == ".csv" || stem.extension() == ".svg") {
    stem.replace_extension();
  }
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  auto write = [&](const std::string& ext, const std::string& content) {
    fs::path p = stem;
    p += ext;
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) throw Error("cannot write " + p.string());
    return p;
  };
  const fs::path json_path = write(".json", dump_document(doc));
  write(".csv", csv);
  write(".svg", render_svg(report));
  out << "analysis " << json_path.string() << "\n";
  out << "criterion " << (report.criterion_pass ? "pass" : "fail") << " P=" << num(report.percentage_p) << "\n";
  return kExitOk;
}

// ---- t2 --------------------------------------------------------------------

struct T2Args {
  double lambda = 0.1;
  int n_env = 12;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config;
  int qubit = 0;
  int samples = 64;
  double window = 0.0;
  std::optional<std::string> out;
};

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_t2(const T2Args& a, const fs::path& root, std::ostream& out) {
  spinbath::SpinBathConfig cfg = a.config ? spinbath::load_config(*a.config) : spinbath::SpinBathConfig{};
  cfg.lambda = a.lambda;
  cfg.n_env = a.n_env;
  cfg.beta = 0.0;
  if (a.seed) cfg.seed = *a.seed;
  cfg.validate();
  const auto r = a.window > 0.0 ? spinbath::estimate_t2(cfg, a.qubit, a.window, a.samples)
                                : spinbath::estimate_t2_adaptive(cfg, a.qubit, a.samples);
  json manifest{{"command", "t2"},
                {"config", spinbath::config_to_json(cfg)},
                {"qubit", a.qubit},
                {"samples", a.samples},
                {"window", a.window > 0.0 ? json(a.window) : json("adaptive")},
                {"code_version", code_version()}};
  json result{{"decay_time_ns", finite_or_null(r.decay_time)},
              {"fit",
               {{"amplitude", r.fit.amplitude},
                {"decay_time", finite_or_null(r.fit.decay_time)},
                {"angular_frequency", r.fit.angular_frequency},
                {"phase", r.fit.phase},
                {"offset", r.fit.offset},
                {"residual", r.fit.residual}}},
              {"times", r.times},
              {"values", r.values}};
  const auto entry = store_entry(root, "t2", manifest, {{"result.json", dump_document(result)}});
  out << "t2 " << entry.id << " " << entry.dir.string() << "\n";
  out << "T2_ns " << num(r.decay_time) << "\n";
  return kExitOk;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeArgs {
  std::string device = "reduced-q0r1";
  std::string gate = "xpih";
  std::optional<int> qubit;
  std::optional<std::string> pair;
  bool withf = false;
  double tau = transmon::kDefaultTau;
  int max_iters = 150;
  std::optional<std::string> out;
};

json metrics_json(const transmon::GateMetrics& m) {
  return {{"delta", m.delta}, {"f_avg", m.f_avg}, {"unitarity", m.unitarity}};
}

json params_json(const transmon::XpihParams& p) {
  return {{"name", p.name}, {"qubit", p.qubit}, {"f", p.f}, {"T_X", p.t_x}, {"Omega_X", p.omega_x}, {"beta_X", p.beta_x}};
}

json params_json(const transmon::CnotParams& p) {
  return {{"name", p.name},         {"control", p.control},   {"target", p.target},  {"f_C", p.f_c},
          {"f_T", p.f_t},           {"T_CR", p.t_cr},         {"T_X", p.t_x},        {"Omega_CR", p.omega_cr},
          {"Omega_C", p.omega_c},   {"beta_C", p.beta_c},     {"Omega_T", p.omega_t}, {"beta_T", p.beta_t}};
}

int cmd_optimize(const OptimizeArgs& a, const fs::path& root, std::ostream& out) {
  if (!(a.tau > 0.0)) throw DomainError("--tau must be positive");
  if (a.max_iters < 1) throw DomainError("--max-iters must be positive");
  const fs::path device_file = data_dir() / "transmon_device.json";
  const fs::path xpih_file = data_dir() / "pulses_xpih.json";
  const fs::path cnot_file = data_dir() / "pulses_cnot.json";
  const transmon::Subsystem sub = transmon::Subsystem::parse(a.device);
  const transmon::TransmonModel model(transmon::load_device(device_file), sub);
  const bool full = sub.name() == "full";
  transmon::PulseLibrary lib = transmon::load_library(xpih_file, cnot_file, a.withf ? "withf" : "plain");
  // The plain set keeps f fixed, so it starts from the simulated qubit frequency.
  if (!a.withf && !full) lib = transmon::retarget_library(lib, model);

  auto options = transmon::pulse_optimizer_options();
  options.max_iters = a.max_iters;
  options.on_iteration = [&out](int it, double f) { out << "iter " << it << " delta " << num(f) << "\n"; };

  json manifest{{"command", "optimize"},
                {"device", sub.name()},
                {"gate", a.gate},
                {"set", lib.set},
                {"tune_freq", a.withf},
                {"tau", a.tau},
                {"max_iters", a.max_iters},
                {"device_sha256", file_digest(device_file)},
                {"xpih_sha256", file_digest(xpih_file)},
                {"cnot_sha256", file_digest(cnot_file)},
                {"code_version", code_version()}};
  json result;
  if (a.gate == "xpih") {
    const int q = a.qubit.value_or(sub.transmons.front());
    const auto it = lib.xpih.find(q);
    if (it == lib.xpih.end()) throw ConfigError("no xpih pulse for q" + std::to_string(q));
    manifest["qubit"] = q;
    const auto r = transmon::optimize_xpih(model, it->second, a.withf, a.tau, options);
    result = {{"initial", params_json(r.initial)},      {"best", params_json(r.best)},
              {"initial_metrics", metrics_json(r.initial_metrics)}, {"best_metrics", metrics_json(r.best_metrics)},
              {"history", r.history},                  {"evaluations", r.evaluations},
              {"qubit_frequency", model.qubit_frequency(q)}};
  } else if (a.gate == "cnot") {
    if (!a.pair) throw ConfigError("--gate cnot needs --pair C,T");
    int c = -1;
    int t = -1;
    if (std::sscanf(a.pair->c_str(), "%d,%d", &c, &t) != 2) throw ConfigError("--pair must look like 3,4");
    const auto it = lib.cnot.find({c, t});
    if (it == lib.cnot.end()) throw ConfigError("no CNOT pulse for " + *a.pair);
    manifest["pair"] = {c, t};
    const auto r = transmon::optimize_cnot(model, lib, it->second, a.withf, a.tau, options);
    result = {{"initial", params_json(r.initial)},      {"best", params_json(r.best)},
              {"initial_metrics", metrics_json(r.initial_metrics)}, {"best_metrics", metrics_json(r.best_metrics)},
              {"history", r.history},                  {"evaluations", r.evaluations},
              {"target_frequency", model.qubit_frequency(t)}};
  } else {
    throw ConfigError("--gate must be xpih or cnot");
  }
  const auto entry = store_entry(root, "optimize", manifest, {{"result.json", dump_document(result)}});
  out << "optimize " << entry.id << " " << entry.dir.string() << "\n";
  out << "f_avg " << num(result["best_metrics"]["f_avg"].get<double>()) << "\n";
  return kExitOk;
}

// ---- import ----------------------------------------------------------------

int cmd_import(const std::string& counts, const fs::path& root, std::ostream& out) {
  const auto docs = analysis::import_counts(counts);
  if (docs.empty()) throw ValidationError("counts file " + counts + " has no documents");
  std::map<std::pair<int, std::string>, std::string> lines;
  std::set<int> ids;
  std::set<std::string> modes;
  for (const auto& d : docs) {
    if (d.id < 0 || d.id >= circuits::kSuiteSize) throw ValidationError("unknown circuit id " + std::to_string(d.id));
    std::string mode;
    if (d.dist.width == 2) {
      mode = "bare";
    } else if (d.dist.width == 5) {
      mode = "encoded";
    } else {
      throw ValidationError("counts for circuit " + std::to_string(d.id) + " have width " +
                            std::to_string(d.dist.width) + " (expected 2 or 5)");
    }
    json rec{{"id", d.id},
             {"mode", mode},
             {"width", d.dist.width},
             {"dist", dist_to_json(d.dist)},
             {"shots", d.shots},
             {"sigma", d.sigma},
             {"meta", json::parse(d.meta)}};
    if (!lines.emplace(std::pair{d.id, mode}, rec.dump() + "\n").second) {
      throw ValidationError("duplicate " + mode + " counts for circuit " + std::to_string(d.id));
    }
    ids.insert(d.id);
    modes.insert(mode);
  }
  std::string records;
  for (const auto& [key, line] : lines) records += line;
  json manifest{{"command", "import"},
                {"backend", "import"},
                {"config", {{"source_sha256", circuits::sha256_hex(read_text_file(counts))}}},
                {"selection", {{"name", "ids"}, {"ids", std::vector<int>(ids.begin(), ids.end())}}},
                {"suite_sha256", circuits::kSuiteSha256},
                {"mode", modes.size() == 2 ? "both" : *modes.begin()},
                {"readout_p", nullptr},
                {"code_version", code_version()},
                {"outputs", {"records.jsonl"}}};
  const auto entry = store_entry(root, "runs", manifest, {{"records.jsonl", records}});
  out << "run " << entry.id << " " << entry.dir.string() << "\n";
  return kExitOk;
}

}  // namespace

fs::path data_dir() {
  if (const char* env = std::getenv("FTLAB_DATA_DIR"); env && *env) return env;
  return FTLAB_DEFAULT_DATA_DIR;
}

std::vector<int> parse_selection(std::string_view spec) {
  if (spec == "all") {
    std::vector<int> all(circuits::kSuiteSize);
    for (int i = 0; i < circuits::kSuiteSize; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  if (spec == "selected15") {
    auto ids = circuits::selected15_ids();
    std::sort(ids.begin(), ids.end());
    return ids;
  }
  std::set<int> ids;
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
      throw ValidationError("bad circuit selection \"" + std::string(spec) + "\"");
    }
    if (v < 0 || v >= circuits::kSuiteSize) throw ValidationError("unknown circuit id " + std::string(s));
    return v;
  };
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view token = spec.substr(pos, end - pos);
    const std::size_t dash = token.find('-');
    if (dash == std::string_view::npos) {
      ids.insert(parse_int(token));
    } else {
      const int lo = parse_int(token.substr(0, dash));
      const int hi = parse_int(token.substr(dash + 1));
      if (lo > hi) throw ValidationError("empty circuit range " + std::string(token));
      for (int i = lo; i <= hi; ++i) ids.insert(i);
    }
    pos = end + 1;
  }
  return {ids.begin(), ids.end()};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-tolerance test runs on the [[4,2,2]] code"};
  app.name("ftlab");
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run suite circuits on a backend");
  run->add_option("--backend", run_args.backend, "ideal | spinbath | transmon")
      ->check(CLI::IsMember({"ideal", "spinbath", "transmon"}));
  run->add_option("--config", run_args.config, "Backend configuration (JSON)");
  run->add_option("--circuits", run_args.circuits, "all | selected15 | comma list of ids and ranges");
  run->add_option("--mode", run_args.mode, "bare | encoded | both")->check(CLI::IsMember({"bare", "encoded", "both"}));
  run->add_option("--readout-p", run_args.readout_p, "Bit-flip probability applied to every outcome");
  run->add_option("--out", run_args.out, "Registry root (default $FTLAB_REGISTRY or ./ftlab-registry)");
  run->add_option("--jobs", run_args.jobs, "Worker threads")->check(CLI::PositiveNumber);

  AnalyzeArgs an_args;
  auto* analyze = app.add_subcommand("analyze", "Compare bare and encoded runs");
  analyze->add_option("--bare", an_args.bare, "Run id or directory")->required();
  analyze->add_option("--encoded", an_args.encoded, "Run id or directory")->required();
  analyze->add_option("--readout-p", an_args.readout_p, "Bit-flip probability applied before comparison");
  analyze->add_option("--decode", an_args.decode, "xor | q3q4")->check(CLI::IsMember({"xor", "q3q4"}));
  analyze->add_option("--out", an_args.out, "Output path; .json, .csv and .svg are written")->required();
  std::optional<std::string> analyze_registry;
  analyze->add_option("--registry", analyze_registry, "Registry root for run ids");

  T2Args t2_args;
  auto* t2 = app.add_subcommand("t2", "Estimate the decoherence time of a spin qubit");
  t2->add_option("--lambda", t2_args.lambda, "Qubit-environment coupling");
  t2->add_option("--ne", t2_args.n_env, "Environment spins");
  t2->add_option("--seed", t2_args.seed, "Coupling seed");
  t2->add_option("--config", t2_args.config, "Base spin-bath configuration (JSON)");
  t2->add_option("--qubit", t2_args.qubit, "Probed qubit")->check(CLI::Range(0, 4));
  t2->add_option("--samples", t2_args.samples, "Sample times")->check(CLI::Range(8, 100000));
  t2->add_option("--window", t2_args.window, "Time window in ns (0 = adaptive)");
  t2->add_option("--out", t2_args.out, "Registry root");

  OptimizeArgs opt_args;
  auto* optimize = app.add_subcommand("optimize", "Nelder-Mead pulse optimization");
  optimize->add_option("--device", opt_args.device, "Subsystem, e.g. reduced-q0r1");
  optimize->add_option("--gate", opt_args.gate, "xpih | cnot")->check(CLI::IsMember({"xpih", "cnot"}));
  optimize->add_option("--qubit", opt_args.qubit, "Qubit of the xpih pulse");
  optimize->add_option("--pair", opt_args.pair, "Control,target of the CNOT");
  optimize->add_flag("--withf", opt_args.withf, "Start from the -withf set and tune the drive frequency");
  optimize->add_option("--tau", opt_args.tau, "Time step in ns");
  optimize->add_option("--max-iters", opt_args.max_iters, "Iteration limit");
  optimize->add_option("--out", opt_args.out, "Registry root");

  std::string counts;
  std::optional<std::string> import_out;
  auto* import = app.add_subcommand("import", "Store measured counts as a run");
  import->add_option("counts", counts, "JSON-lines counts file")->required();
  import->add_option("--out", import_out, "Registry root");

  std::vector<std::string> argv_store{"ftlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  auto root_of = [](const std::optional<std::string>& o) { return o ? fs::path(*o) : default_registry_root(); };
  try {
    if (*run) return cmd_run(run_args, root_of(run_args.out), out, err);
    if (*analyze) return cmd_analyze(an_args, root_of(analyze_registry), out);
    if (*t2) return cmd_t2(t2_args, root_of(t2_args.out), out);
    if (*optimize) return cmd_optimize(opt_args, root_of(opt_args.out), out);
    if (*import) return cmd_import(counts, root_of(import_out), out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace ftlab::cli
