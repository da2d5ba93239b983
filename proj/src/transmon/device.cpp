#include "ftlab/transmon/device.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "ftlab/error.hpp"

namespace ftlab::transmon {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<int, int>, kResonators> kTopology = {
    std::pair{1, 2}, std::pair{0, 1}, std::pair{2, 3}, std::pair{1, 4}, std::pair{3, 4}, std::pair{0, 4}};

template <std::size_t N>
std::array<double, N> read_row(const json& table, const char* key) {
  if (!table.contains(key)) throw ConfigError(std::string("device file lacks \"") + key + "\"");
  const auto& row = table.at(key);
  if (!row.is_array() || row.size() != N) {
    throw ConfigError(std::string("device row \"") + key + "\" must have " + std::to_string(N) + " entries");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!row[i].is_number()) throw ConfigError(std::string("device row \"") + key + "\" has a non-numeric entry");
    out[i] = row[i].get<double>();
  }
  return out;
}

int qubit_from_name(const json& v) {
  const auto s = v.get<std::string>();
  if (s.size() != 2 || s[0] != 'q' || s[1] < '0' || s[1] > '4') throw ConfigError("bad qubit name \"" + s + "\"");
  return s[1] - '0';
}

}  // namespace

void TransmonDevice::validate() const {
  for (int q = 0; q < kTransmons; ++q) {
    if (!(e_c[q] > 0.0) || !(e_j[q] > 0.0)) throw ConfigError("transmon energies must be positive");
    if (!(e_j[q] / e_c[q] > 20.0)) {
      throw ConfigError("transmon q" + std::to_string(q) + " has E_J/E_C <= 20 (outside the transmon regime)");
    }
    if (!(qubit_freq[q] > 0.0) || !(drive_freq[q] > 0.0)) throw ConfigError("qubit frequencies must be positive");
  }
  for (int r = 0; r < kResonators; ++r) {
    if (!(omega[r] > 0.0)) throw ConfigError("resonator frequencies must be positive");
    auto [a, b] = coupled[r];
    if (a > b) std::swap(a, b);
    if (std::pair{a, b} != kTopology[r]) {
      throw ConfigError("resonator r" + std::to_string(r) + " couples the wrong transmons");
    }
  }
}

TransmonDevice device_from_json(const json& doc) {
  try {
    const auto& tr = doc.at("transmons");
    const auto& rs = doc.at("resonators");
    TransmonDevice d;
    d.e_c = read_row<kTransmons>(tr, "E_C/2π");
    d.e_j = read_row<kTransmons>(tr, "E_J/2π");
    d.qubit_freq = read_row<kTransmons>(tr, "ω/2π");
    d.drive_freq = read_row<kTransmons>(tr, "ω^dr/2π");
    d.omega = read_row<kResonators>(rs, "Ω/2π");
    d.g = read_row<kResonators>(rs, "G/2π");
    const auto& links = rs.at("Coupled to");
    if (!links.is_array() || links.size() != kResonators) throw ConfigError("\"Coupled to\" must have 6 entries");
    for (int r = 0; r < kResonators; ++r) {
      if (links[r].size() != 2) throw ConfigError("each resonator couples exactly two transmons");
      d.coupled[r] = {qubit_from_name(links[r][0]), qubit_from_name(links[r][1])};
    }
    d.validate();
    return d;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed device file: ") + e.what());
  }
}

json device_to_json(const TransmonDevice& d) {
  json links = json::array();
  for (const auto& [a, b] : d.coupled) links.push_back({"q" + std::to_string(a), "q" + std::to_string(b)});
  return {{"units", "GHz"},
          {"transmons",
           {{"names", {"q0", "q1", "q2", "q3", "q4"}},
            {"E_C/2π", d.e_c},
            {"E_J/2π", d.e_j},
            {"ω/2π", d.qubit_freq},
            {"ω^dr/2π", d.drive_freq}}},
          {"resonators",
           {{"names", {"r0", "r1", "r2", "r3", "r4", "r5"}},
            {"Ω/2π", d.omega},
            {"G/2π", d.g},
            {"Coupled to", links}}}};
}

TransmonDevice load_device(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open device file " + path.string());
  try {
    return device_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("device file " + path.string() + ": " + e.what());
  }
}

TransmonLevels transmon_eigensystem(double e_c, double e_j, int n_charge_max, int n_levels) {
  if (n_charge_max < 10) throw DomainError("n_charge_max must be at least 10");
  const int size = 2 * n_charge_max + 1;
  if (n_levels < 1 || n_levels > size) throw DomainError("n_levels must lie in [1, 2 n_charge_max + 1]");
  if (!std::isfinite(e_c) || !std::isfinite(e_j)) throw DomainError("non-finite transmon energies");

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd charge(size);
  for (int k = 0; k < size; ++k) {
    charge[k] = k - n_charge_max;
    h(k, k) = 4.0 * e_c * charge[k] * charge[k];
    if (k + 1 < size) h(k, k + 1) = h(k + 1, k) = -0.5 * e_j;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericError("charge-basis diagonalisation did not converge");

  Eigen::MatrixXd vecs = es.eigenvectors().leftCols(n_levels);
  Eigen::MatrixXd n = vecs.transpose() * charge.asDiagonal() * vecs;
  for (int m = 1; m < n_levels; ++m) {
    if (n(m - 1, m) < 0.0) {
      vecs.col(m) *= -1.0;
      n.row(m) *= -1.0;
      n.col(m) *= -1.0;
    }
  }
  TransmonLevels out;
  out.energies = es.eigenvalues().head(n_levels).array() - es.eigenvalues()[0];
  out.n_matrix = n;
  return out;
}

Subsystem Subsystem::full() {
  return {{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4, 5}};
}

Subsystem Subsystem::parse(std::string_view name) {
  if (name == "full") return full();
  if (name.starts_with("reduced-")) name.remove_prefix(8);
  Subsystem s;
  std::size_t i = 0;
  while (i < name.size()) {
    const char kind = name[i];
    if ((kind != 'q' && kind != 'r') || i + 1 >= name.size() || !std::isdigit(static_cast<unsigned char>(name[i + 1]))) {
      throw ConfigError("bad subsystem name \"" + std::string(name) + "\"");
    }
    const int index = name[i + 1] - '0';
    if (kind == 'q') {
      if (index >= kTransmons) throw ConfigError("no transmon q" + std::to_string(index));
      s.transmons.push_back(index);
    } else {
      if (index >= kResonators) throw ConfigError("no resonator r" + std::to_string(index));
      s.resonators.push_back(index);
    }
    i += 2;
  }
  if (s.transmons.empty()) throw ConfigError("subsystem \"" + std::string(name) + "\" has no transmon");
  for (const auto* list : {&s.transmons, &s.resonators}) {
    for (std::size_t a = 0; a < list->size(); ++a) {
      for (std::size_t b = a + 1; b < list->size(); ++b) {
        if ((*list)[a] == (*list)[b]) throw ConfigError("subsystem lists a site twice");
      }
    }
  }
  return s;
}

std::string Subsystem::name() const {
  if (transmons.size() == kTransmons && resonators.size() == kResonators) return "full";
  std::string out = "reduced-";
  for (int q : transmons) out += "q" + std::to_string(q);
  for (int r : resonators) out += "r" + std::to_string(r);
  return out;
}

}  // namespace ftlab::transmon
