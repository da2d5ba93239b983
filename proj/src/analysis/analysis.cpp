#include "ftlab/analysis/analysis.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "ftlab/error.hpp"
#include "ftlab/statevector/simulator.hpp"

namespace ftlab::analysis {

PostselectionResult postselect_decode(const Distribution& d, DecodeMap map) {
  if (d.width != 5) throw DomainError("postselect_decode expects a 5-bit distribution");
  PostselectionResult r{Distribution(2), 0.0};
  for (unsigned s = 0; s < 32; ++s) {
    const unsigned q0 = s & 1U;
    const unsigned code = s >> 1;  // bit i is q_{i+1}
    if (q0 != 0 || std::popcount(code) % 2 != 0) continue;
    const unsigned q1 = code & 1U, q2 = (code >> 1) & 1U, q3 = (code >> 2) & 1U, q4 = (code >> 3) & 1U;
    const unsigned b1 = map == DecodeMap::Xor ? (q1 ^ q2) : q3;
    const unsigned b2 = map == DecodeMap::Xor ? (q1 ^ q3) : q4;
    r.logical_dist.probs[b1 | (b2 << 1)] += d.probs[s];
    r.ratio += d.probs[s];
  }
  if (!(r.ratio > 0.0)) throw EmptyPostselectionError("postselection discarded all probability mass");
  for (double& p : r.logical_dist.probs) p /= r.ratio;
  return r;
}

double statistical_distance(const Distribution& p, const Distribution& q) {
  if (p.width != q.width) throw DomainError("statistical_distance: widths differ");
  double s = 0.0;
  for (std::size_t k = 0; k < p.probs.size(); ++k) s += std::abs(p.probs[k] - q.probs[k]);
  return 0.5 * s;
}

Distribution apply_readout_error(const Distribution& d, double p_flip) {
  if (!(p_flip >= 0.0 && p_flip <= 0.5)) throw DomainError("readout flip probability must lie in [0, 0.5]");
  Distribution out = d;
  for (int bit = 0; bit < d.width; ++bit) {
    const std::size_t mask = std::size_t{1} << bit;
    for (std::size_t k = 0; k < out.probs.size(); ++k) {
      if (k & mask) continue;
      const double a = out.probs[k];
      const double b = out.probs[k | mask];
      out.probs[k] = (1.0 - p_flip) * a + p_flip * b;
      out.probs[k | mask] = p_flip * a + (1.0 - p_flip) * b;
    }
  }
  return out;
}

FtRecord evaluate_circuit(const circuits::LogicalCircuit& c, const Distribution& bare, const Distribution& encoded,
                          std::optional<double> p_flip, DecodeMap map) {
  if (bare.width != 2) throw DomainError("bare distribution must have width 2");
  const Distribution b = p_flip ? apply_readout_error(bare, *p_flip) : bare;
  const Distribution e = p_flip ? apply_readout_error(encoded, *p_flip) : encoded;
  const auto ps = postselect_decode(e, map);
  const auto theory = statevector::theory_distribution(c);
  FtRecord r;
  r.circuit_id = c.id.value_or(-1);
  r.d_bare = statistical_distance(b, theory);
  r.d_enc = statistical_distance(ps.logical_dist, theory);
  r.ratio = ps.ratio;
  return r;
}

FtReport build_report(std::vector<FtRecord> records) {
  if (records.empty()) throw DomainError("build_report needs at least one record");
  FtReport rep;
  std::size_t better = 0;
  for (const auto& r : records) {
    if (r.d_enc < r.d_bare) ++better;
  }
  rep.percentage_p = 100.0 * static_cast<double>(better) / static_cast<double>(records.size());
  rep.criterion_pass = better == records.size();
  rep.records = std::move(records);
  return rep;
}

ImportedCounts parse_counts(std::string_view json_line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("counts document: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("id") || !doc.contains("width") || !doc.contains("counts")) {
    throw ParseError("counts document needs \"id\", \"width\" and \"counts\"", 0);
  }
  if (!doc["id"].is_number_integer() || !doc["width"].is_number_integer() || !doc["counts"].is_object()) {
    throw ParseError("counts document has fields of the wrong type", 0);
  }
  const int width = doc["width"].get<int>();
  if (width < 1 || width > 5) throw DomainError("counts width must lie in [1, 5]");

  ImportedCounts out;
  out.id = doc["id"].get<int>();
  out.dist = Distribution(width);
  std::vector<long long> counts(out.dist.size(), 0);
  for (const auto& [bits, value] : doc["counts"].items()) {
    if (static_cast<int>(bits.size()) != width) throw ParseError("bitstring '" + bits + "' has the wrong width", 0);
    if (!value.is_number_integer()) throw ParseError("count for '" + bits + "' is not an integer", 0);
    const long long n = value.get<long long>();
    if (n < 0) throw DomainError("negative count for '" + bits + "'");
    counts[statevector::from_bitstring(bits)] += n;
    out.shots += n;
  }
  if (out.shots == 0) throw DomainError("counts document has zero total counts");
  out.sigma.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double p = static_cast<double>(counts[k]) / static_cast<double>(out.shots);
    out.dist.probs[k] = p;
    out.sigma[k] = std::sqrt(p * (1.0 - p) / static_cast<double>(out.shots));
  }
  out.meta = doc.contains("meta") ? doc["meta"].dump() : "{}";
  return out;
}

std::vector<ImportedCounts> import_counts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open counts file " + path.string());
  std::vector<ImportedCounts> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_counts(line));
  }
  return out;
}

}  // namespace ftlab::analysis
