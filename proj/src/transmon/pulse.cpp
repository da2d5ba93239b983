#include "ftlab/transmon/pulse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <json.hpp>

#include "ftlab/error.hpp"

namespace ftlab::transmon {
namespace {

using nlohmann::json;

double gaussian_bump(double t, double centre, double sigma) {
  const double x = (t - centre) / sigma;
  return std::exp(-0.5 * x * x);
}

// Rise of the flat top, 0 at t = 0 and 1 at t = kFlatTopRise.
double rise(double t) {
  const double base = gaussian_bump(0.0, kFlatTopRise, kFlatTopSigma);
  return (gaussian_bump(t, kFlatTopRise, kFlatTopSigma) - base) / (1.0 - base);
}

double rise_derivative(double t) {
  const double base = gaussian_bump(0.0, kFlatTopRise, kFlatTopSigma);
  return -(t - kFlatTopRise) / (kFlatTopSigma * kFlatTopSigma) * gaussian_bump(t, kFlatTopRise, kFlatTopSigma) /
         (1.0 - base);
}

double number(const json& row, const char* key) {
  if (!row.contains(key) || !row.at(key).is_number()) {
    throw ConfigError(std::string("pulse row lacks numeric \"") + key + "\"");
  }
  return row.at(key).get<double>();
}

bool in_set(const std::string& name, const std::string& set) {
  const bool withf = name.ends_with("-withf");
  return set == "withf" ? withf : !withf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pulse file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("pulse file " + path.string() + ": " + e.what());
  }
}

}  // namespace

Pulse Pulse::gaussian(double amplitude, double duration, double freq, double drag, double phase) {
  Pulse p;
  p.shape = PulseShape::Gaussian;
  p.amplitude = amplitude;
  p.duration = duration;
  p.sigma = duration / 4.0;
  p.freq = freq;
  p.drag = drag;
  p.phase = phase;
  return p;
}

Pulse Pulse::flat_top(double amplitude, double flat, double freq, double phase) {
  Pulse p;
  p.shape = PulseShape::FlatTop;
  p.amplitude = amplitude;
  p.flat = flat;
  p.duration = 2.0 * kFlatTopRise + flat;
  p.sigma = kFlatTopSigma;
  p.freq = freq;
  p.phase = phase;
  return p;
}

void Pulse::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw DomainError("pulse duration must be positive");
  if (!(sigma > 0.0)) throw DomainError("pulse width must be positive");
  if (shape == PulseShape::FlatTop && !(flat >= 0.0)) throw DomainError("flat-top length must be non-negative");
  if (!std::isfinite(amplitude) || !std::isfinite(freq) || !std::isfinite(phase) || !std::isfinite(drag)) {
    throw DomainError("non-finite pulse parameter");
  }
}

double pulse_envelope(const Pulse& p, double t) {
  if (p.shape == PulseShape::Gaussian) {
    const double half = 0.5 * p.duration;
    const double base = gaussian_bump(0.0, half, p.sigma);
    return p.amplitude * (gaussian_bump(t, half, p.sigma) - base) / (1.0 - base);
  }
  if (t <= kFlatTopRise) return p.amplitude * rise(t);
  if (t < kFlatTopRise + p.flat) return p.amplitude;
  return p.amplitude * rise(p.duration - t);
}

double pulse_envelope_derivative(const Pulse& p, double t) {
  if (p.shape == PulseShape::Gaussian) {
    const double half = 0.5 * p.duration;
    const double base = gaussian_bump(0.0, half, p.sigma);
    return -p.amplitude * (t - half) / (p.sigma * p.sigma) * gaussian_bump(t, half, p.sigma) / (1.0 - base);
  }
  if (t <= kFlatTopRise) return p.amplitude * rise_derivative(t);
  if (t < kFlatTopRise + p.flat) return 0.0;
  return -p.amplitude * rise_derivative(p.duration - t);
}

double pulse_waveform(const Pulse& p, double t, double carrier_offset) {
  if (!(t >= 0.0 && t <= p.duration)) throw DomainError("time outside the pulse window");
  const double arg = 2.0 * std::numbers::pi * p.freq * (t + carrier_offset) - p.phase;
  double v = pulse_envelope(p, t) * std::cos(arg);
  if (p.shape == PulseShape::Gaussian && p.drag != 0.0) {
    v += p.drag * pulse_envelope_derivative(p, t) * std::sin(arg);  // cos(arg - pi/2)
  }
  return v;
}

PulseLibrary load_library(const std::filesystem::path& xpih_file, const std::filesystem::path& cnot_file,
                          const std::string& set) {
  if (set != "plain" && set != "withf") throw ConfigError("pulse set must be \"plain\" or \"withf\"");
  PulseLibrary lib;
  lib.set = set;
  const json xpih_doc = read_json(xpih_file);
  const json cnot_doc = read_json(cnot_file);
  try {
    for (const auto& row : xpih_doc.at("pulses")) {
      const auto name = row.at("Pulse name").get<std::string>();
      if (!in_set(name, set)) continue;
      XpihParams x;
      x.name = name;
      if (std::sscanf(name.c_str(), "xpih-%d", &x.qubit) != 1) throw ConfigError("bad pulse name " + name);
      x.f = number(row, "f");
      x.t_x = number(row, "T_X");
      x.omega_x = number(row, "Ω_X");
      x.beta_x = number(row, "β_X");
      if (!lib.xpih.emplace(x.qubit, x).second) throw ConfigError("duplicate pulse " + name);
    }
    for (const auto& row : cnot_doc.at("pulses")) {
      const auto name = row.at("Pulse name").get<std::string>();
      if (!in_set(name, set)) continue;
      CnotParams c;
      c.name = name;
      if (std::sscanf(name.c_str(), "cnot-%d-%d", &c.control, &c.target) != 2) {
        throw ConfigError("bad pulse name " + name);
      }
      c.f_c = number(row, "f_C");
      c.f_t = number(row, "f_T");
      c.t_cr = number(row, "T_CR");
      c.t_x = number(row, "T_X");
      c.omega_cr = number(row, "Ω_CR");
      c.omega_c = number(row, "Ω_C");
      c.beta_c = number(row, "β_C");
      c.omega_t = number(row, "Ω_T");
      c.beta_t = number(row, "β_T");
      if (!lib.cnot.emplace(std::pair{c.control, c.target}, c).second) throw ConfigError("duplicate pulse " + name);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed pulse file: ") + e.what());
  }
  return lib;
}

Pulse xpih_pulse(const XpihParams& p, double phase) {
  return Pulse::gaussian(p.omega_x, p.t_x, p.f, p.beta_x, phase);
}

}  // namespace ftlab::transmon
