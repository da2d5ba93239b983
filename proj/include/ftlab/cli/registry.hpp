#pragma once

#include <filesystem>
#include <json.hpp>
#include <map>
#include <string>

namespace ftlab::cli {

/// Root of the run registry: $FTLAB_REGISTRY, else ./ftlab-registry.
std::filesystem::path default_registry_root();

/// Version string folded into every manifest digest.
std::string code_version();

/// First 16 hex digits of SHA-256 over the compact dump of `body`.
std::string content_id(const nlohmann::json& body);

/// Deterministic text of a manifest or result document.
std::string dump_document(const nlohmann::json& doc);

struct StoredEntry {
  std::string id;
  std::filesystem::path dir;
  bool reused = false;  ///< an identical entry already existed
};

/// Stores `files` (name -> content) plus manifest.json under
/// root/kind/<id>, with id = content_id(manifest). Entries are never
/// overwritten: if the directory exists, every file must match byte for
/// byte (NumericError otherwise, since identical manifests must reproduce
/// identical outputs). Appends a timestamped line to root/log.jsonl; the
/// stored files themselves carry no timestamps.
StoredEntry store_entry(const std::filesystem::path& root, const std::string& kind, nlohmann::json manifest,
                        const std::map<std::string, std::string>& files);

/// Resolves a run reference: an existing directory, or an id under root/runs.
/// Throws ConfigError when neither exists.
std::filesystem::path resolve_run(const std::filesystem::path& root, const std::string& ref);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ftlab::cli
