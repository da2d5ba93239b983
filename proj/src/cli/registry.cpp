#include "ftlab/cli/registry.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "ftlab/circuits/suite.hpp"
#include "ftlab/error.hpp"

namespace ftlab::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error("cannot write " + path.string());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

fs::path default_registry_root() {
  if (const char* env = std::getenv("FTLAB_REGISTRY"); env && *env) return env;
  return "ftlab-registry";
}

std::string code_version() { return FTLAB_VERSION; }

std::string content_id(const json& body) { return circuits::sha256_hex(body.dump()).substr(0, 16); }

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

StoredEntry store_entry(const fs::path& root, const std::string& kind, json manifest,
                        const std::map<std::string, std::string>& files) {
  StoredEntry entry;
  entry.id = content_id(manifest);
  manifest["id"] = entry.id;
  std::map<std::string, std::string> all = files;
  all["manifest.json"] = dump_document(manifest);

  const fs::path parent = root / kind;
  fs::create_directories(parent);
  entry.dir = parent / entry.id;
  if (fs::exists(entry.dir)) {
    for (const auto& [name, content] : all) {
      const fs::path p = entry.dir / name;
      if (!fs::exists(p) || read_text_file(p) != content) {
        throw NumericError("rerun of " + kind + "/" + entry.id + " produced different " + name);
      }
    }
    entry.reused = true;
  } else {
    std::mt19937_64 rng(std::random_device{}());
    const fs::path tmp = parent / (".tmp-" + entry.id + "-" + std::to_string(rng()));
    fs::create_directory(tmp);
    for (const auto& [name, content] : all) write_file(tmp / name, content);
    std::error_code ec;
    fs::rename(tmp, entry.dir, ec);
    if (ec) {
      // Lost a race against an identical writer; keep theirs.
      fs::remove_all(tmp);
      if (!fs::exists(entry.dir)) throw Error("cannot create " + entry.dir.string() + ": " + ec.message());
      entry.reused = true;
    }
  }

  json log{{"kind", kind}, {"id", entry.id}, {"reused", entry.reused}, {"time", utc_now()}};
  std::ofstream out(root / "log.jsonl", std::ios::app);
  out << log.dump() << "\n";
  return entry;
}

fs::path resolve_run(const fs::path& root, const std::string& ref) {
  if (fs::is_directory(ref) && fs::exists(fs::path(ref) / "manifest.json")) return ref;
  const fs::path p = root / "runs" / ref;
  if (fs::exists(p / "manifest.json")) return p;
  throw ConfigError("unknown run \"" + ref + "\"");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ftlab::cli
