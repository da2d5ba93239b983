#include "ftlab/circuits/suite.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ftlab/error.hpp"

namespace ftlab::circuits {
namespace {

std::string normalise_line(std::string_view line) {
  std::string out;
  bool pending_space = false;
  for (char ch : line) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += ch;
    }
  }
  return out;
}

// Non-blank, non-comment lines in normalised form, with their 1-based line numbers.
std::vector<std::pair<std::string, int>> content_lines(std::string_view text) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t start = 0;
  int number = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++number;
    std::string line = normalise_line(text.substr(start, end - start));
    if (!line.empty() && line.front() != '#') out.emplace_back(std::move(line), number);
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

SuiteEntry parse_suite_entry(std::string_view line) {
  const auto c = parse_circuit(line);
  if (!c.id) throw ParseError("suite line lacks an id range", 0);
  const auto dash = line.find('-');
  const auto space = line.find_first_of(" \t", dash);
  SuiteEntry e;
  e.first_id = *c.id;
  e.last_id = std::stoi(std::string(line.substr(dash + 1, space - dash - 1)));
  e.gates = c.gates;
  return e;
}

std::string format_suite_entry(const SuiteEntry& e) {
  std::string out = std::to_string(e.first_id) + "-" + std::to_string(e.last_id) + " ";
  for (auto it = e.gates.rbegin(); it != e.gates.rend(); ++it) {
    out += to_string(*it);
    out += ' ';
  }
  return out + "|i>";
}

std::vector<LogicalCircuit> expand(const SuiteEntry& e) {
  std::vector<LogicalCircuit> out;
  for (int id = e.first_id; id <= e.last_id; ++id) out.push_back({id, init_for_id(id), e.gates});
  return out;
}

std::string suite_digest(std::string_view text) {
  std::string joined;
  for (const auto& [line, number] : content_lines(text)) {
    if (!joined.empty()) joined += '\n';
    joined += line;
  }
  return sha256_hex(joined);
}

std::vector<LogicalCircuit> parse_suite(std::string_view text) {
  std::vector<LogicalCircuit> out;
  for (const auto& [line, number] : content_lines(text)) {
    SuiteEntry e;
    try {
      e = parse_suite_entry(line);
    } catch (const ParseError& err) {
      throw ParseError("suite line " + std::to_string(number) + ": " + err.what(), err.position());
    }
    if (e.first_id != static_cast<int>(out.size())) {
      throw DataIntegrityError("suite line " + std::to_string(number) + ": expected id " +
                               std::to_string(out.size()) + ", found " + std::to_string(e.first_id));
    }
    for (auto& c : expand(e)) out.push_back(std::move(c));
  }
  return out;
}

std::vector<LogicalCircuit> load_suite(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataIntegrityError("cannot open suite file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const std::string digest = suite_digest(text);
  if (digest != kSuiteSha256) {
    throw DataIntegrityError("suite checksum mismatch for " + path.string() + ": " + digest);
  }
  auto suite = parse_suite(text);
  if (suite.size() != static_cast<std::size_t>(kSuiteSize)) {
    throw DataIntegrityError("suite has " + std::to_string(suite.size()) + " circuits, expected 465");
  }
  return suite;
}

std::vector<int> selected15_ids() {
  std::vector<int> ids;
  for (int first : {0, 240, 216, 171, 270}) {
    for (int k = 0; k < 3; ++k) ids.push_back(first + k);
  }
  return ids;
}

}  // namespace ftlab::circuits
