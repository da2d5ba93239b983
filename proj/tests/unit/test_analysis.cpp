#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ftlab/analysis/analysis.hpp"
#include "ftlab/circuits/lowering.hpp"
#include "ftlab/circuits/suite.hpp"
#include "ftlab/error.hpp"
#include "ftlab/statevector/simulator.hpp"

using namespace ftlab::analysis;
using namespace ftlab::circuits;
using ftlab::statevector::from_bitstring;
using ftlab::statevector::run_ideal;

namespace {

const auto kSuite = load_suite(std::filesystem::path(FTLAB_DATA_DIR) / "suite.txt");

Distribution point(const char* bits) {
  Distribution d(static_cast<int>(std::strlen(bits)));
  d.probs[from_bitstring(bits)] = 1.0;
  return d;
}

Distribution random_distribution(int width, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Distribution d(width);
  for (double& p : d.probs) p = e(rng);
  const double t = d.total();
  for (double& p : d.probs) p /= t;
  return d;
}

}  // namespace

TEST_CASE("postselect_decode examples") {
  Distribution d(5);
  d.probs[from_bitstring("00000")] = 0.5;
  d.probs[from_bitstring("01111")] = 0.5;
  const auto r = postselect_decode(d);
  CHECK(r.ratio == 1.0);
  CHECK(r.logical_dist.probs[0] == 1.0);

  CHECK_THROWS_AS(postselect_decode(point("10000")), ftlab::EmptyPostselectionError);
  CHECK_THROWS_AS(postselect_decode(point("00")), ftlab::DomainError);
}

TEST_CASE("postselect_decode on the uniform distribution") {
  Distribution u(5);
  for (double& p : u.probs) p = 1.0 / 32.0;
  // Brute force: count strings "q0q1q2q3q4" with q0 = 0 and even weight.
  int kept = 0;
  for (int s = 0; s < 32; ++s) {
    const std::string bits = ftlab::statevector::to_bitstring(static_cast<unsigned>(s), 5);
    const int ones = static_cast<int>(std::count(bits.begin() + 1, bits.end(), '1'));
    if (bits[0] == '0' && ones % 2 == 0) ++kept;
  }
  CHECK(kept == 8);
  const auto r = postselect_decode(u);
  CHECK(std::abs(r.ratio - kept / 32.0) < 1e-15);
  for (double p : r.logical_dist.probs) CHECK(std::abs(p - 0.25) < 1e-15);
}

TEST_CASE("postselect_decode maps each codeword half to its logical value") {
  struct Case {
    const char* q0q1q2q3q4;
    const char* logical;
  };
  // Codeword strings q1q2q3q4 of |00>,|01>,|10>,|11> with logical bits b1b2.
  for (const auto& c : {Case{"00000", "00"}, Case{"01111", "00"}, Case{"01100", "01"}, Case{"00011", "01"},
                        Case{"01010", "10"}, Case{"00101", "10"}, Case{"00110", "11"}, Case{"01001", "11"}}) {
    const auto r = postselect_decode(point(c.q0q1q2q3q4));
    INFO(c.q0q1q2q3q4);
    CHECK(r.logical_dist.probs[from_bitstring(c.logical)] == 1.0);
  }
  // Literal decode reads q3q4.
  CHECK(postselect_decode(point("01111"), DecodeMap::LiteralQ3Q4).logical_dist.probs[from_bitstring("11")] == 1.0);
}

TEST_CASE("postselection conserves mass") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_distribution(5, rng);
    double discarded = 0.0;
    for (unsigned s = 0; s < 32; ++s) {
      if ((s & 1U) || std::popcount(s >> 1) % 2) discarded += d.probs[s];
    }
    const auto r = postselect_decode(d);
    CHECK(std::abs(r.ratio + discarded - 1.0) < 1e-12);
    CHECK(std::abs(r.logical_dist.total() - 1.0) < 1e-12);
  }
}

TEST_CASE("statistical_distance examples") {
  CHECK(statistical_distance(point("00"), point("00")) == 0.0);
  CHECK(statistical_distance(point("00"), point("11")) == 1.0);
  Distribution half(2);
  half.probs[from_bitstring("00")] = 0.5;
  half.probs[from_bitstring("01")] = 0.5;
  CHECK(statistical_distance(half, point("00")) == 0.5);
  CHECK_THROWS_AS(statistical_distance(point("00"), point("000")), ftlab::DomainError);
}

TEST_CASE("statistical_distance is a metric") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = trial % 2 ? 2 : 5;
    const auto p = random_distribution(w, rng), q = random_distribution(w, rng), r = random_distribution(w, rng);
    CHECK(std::abs(statistical_distance(p, q) - statistical_distance(q, p)) < 1e-15);
    CHECK(statistical_distance(p, r) <= statistical_distance(p, q) + statistical_distance(q, r) + 1e-15);
    CHECK(statistical_distance(p, p) < 1e-12);
    CHECK(statistical_distance(p, q) > 0.0);
    CHECK(statistical_distance(p, q) <= 1.0);
  }
}

TEST_CASE("apply_readout_error examples") {
  std::mt19937_64 rng(3);
  const auto d = random_distribution(5, rng);
  CHECK(apply_readout_error(d, 0.0) == d);
  const auto one = apply_readout_error(point("0"), 0.08);
  CHECK(std::abs(one.probs[0] - 0.92) < 1e-15);
  CHECK(std::abs(one.probs[1] - 0.08) < 1e-15);
  CHECK_THROWS_AS(apply_readout_error(d, 0.6), ftlab::DomainError);
  CHECK_THROWS_AS(apply_readout_error(d, -0.1), ftlab::DomainError);
}

TEST_CASE("apply_readout_error matches the Hamming-distance formula") {
  std::mt19937_64 rng(5);
  const auto d = random_distribution(5, rng);
  const double p = 0.13;
  const auto out = apply_readout_error(d, p);
  for (unsigned s = 0; s < 32; ++s) {
    double expected = 0.0;
    for (unsigned t = 0; t < 32; ++t) {
      const int h = std::popcount(s ^ t);
      expected += d.probs[t] * std::pow(p, h) * std::pow(1.0 - p, 5 - h);
    }
    CHECK(std::abs(out.probs[s] - expected) < 1e-15);
  }
  CHECK(std::abs(out.total() - 1.0) < 1e-14);
}

TEST_CASE("apply_readout_error matches flip sampling") {
  std::mt19937_64 rng(17);
  const auto d = random_distribution(5, rng);
  const double p = 0.08;
  const int shots = 1000000;
  std::discrete_distribution<unsigned> draw(d.probs.begin(), d.probs.end());
  std::bernoulli_distribution flip(p);
  std::vector<int> hist(32, 0);
  for (int n = 0; n < shots; ++n) {
    unsigned s = draw(rng);
    for (int b = 0; b < 5; ++b) {
      if (flip(rng)) s ^= 1U << b;
    }
    ++hist[s];
  }
  const auto exact = apply_readout_error(d, p);
  for (unsigned s = 0; s < 32; ++s) {
    const double f = static_cast<double>(hist[s]) / shots;
    const double sigma = std::sqrt(exact.probs[s] * (1.0 - exact.probs[s]) / shots);
    CHECK(std::abs(f - exact.probs[s]) < 3.0 * sigma + 1e-12);
  }
}

TEST_CASE("readout channels compose") {
  for (double p : {0.0, 0.05, 0.2, 0.5}) {
    for (double q : {0.01, 0.08, 0.3}) {
      const auto twice = apply_readout_error(apply_readout_error(point("0"), p), q);
      const auto once = apply_readout_error(point("0"), p * (1 - q) + q * (1 - p));
      CHECK(std::abs(twice.probs[0] - once.probs[0]) < 1e-15);
      CHECK(std::abs(twice.probs[1] - once.probs[1]) < 1e-15);
    }
  }
}

TEST_CASE("evaluate_circuit on ideal distributions") {
  for (const auto& c : kSuite) {
    const auto r = evaluate_circuit(c, run_ideal(lower_bare(c)), run_ideal(lower_encoded(c)));
    CHECK(r.circuit_id == *c.id);
    CHECK(r.d_bare < 1e-10);
    CHECK(r.d_enc < 1e-10);
    CHECK(std::abs(r.ratio - 1.0) < 1e-10);
  }
}

TEST_CASE("readout-only errors favour the encoded circuits") {
  const auto r0 = evaluate_circuit(kSuite[0], run_ideal(lower_bare(kSuite[0])), run_ideal(lower_encoded(kSuite[0])),
                                   0.08);
  CHECK(std::abs(r0.d_bare - (1.0 - 0.92 * 0.92)) < 1e-12);
  CHECK(r0.d_enc < r0.d_bare);
  std::vector<FtRecord> records;
  for (const auto& c : kSuite) {
    records.push_back(evaluate_circuit(c, run_ideal(lower_bare(c)), run_ideal(lower_encoded(c)), 0.08));
  }
  const auto rep = build_report(records);
  CHECK(rep.criterion_pass);
  CHECK(rep.percentage_p == 100.0);
}

TEST_CASE("build_report examples") {
  std::vector<FtRecord> all_better(3, FtRecord{0, 0.2, 0.1, 0.9, "", ""});
  const auto pass = build_report(all_better);
  CHECK(pass.criterion_pass);
  CHECK(pass.percentage_p == 100.0);

  auto with_tie = all_better;
  with_tie[1].d_enc = with_tie[1].d_bare;
  CHECK_FALSE(build_report(with_tie).criterion_pass);

  std::vector<FtRecord> fifteen(15, FtRecord{0, 0.1, 0.2, 0.9, "", ""});
  for (int k = 0; k < 8; ++k) fifteen[static_cast<std::size_t>(k)].d_enc = 0.05;
  const auto rep = build_report(fifteen);
  CHECK(std::round(rep.percentage_p) == 53.0);
  CHECK_FALSE(rep.criterion_pass);
  CHECK_THROWS_AS(build_report({}), ftlab::DomainError);
}

TEST_CASE("parse_counts") {
  const auto a = parse_counts(R"({"id": 0, "width": 2, "counts": {"00": 1024}})");
  CHECK(a.id == 0);
  CHECK(a.shots == 1024);
  CHECK(a.dist.probs[0] == 1.0);
  CHECK(a.meta == "{}");
  const auto b = parse_counts(R"({"id": 4, "width": 2, "counts": {"00": 512, "11": 512}, "meta": {"device": "x"}})");
  CHECK(b.dist.probs[from_bitstring("00")] == 0.5);
  CHECK(b.dist.probs[from_bitstring("11")] == 0.5);
  CHECK(std::abs(b.sigma[0] - std::sqrt(0.25 / 1024)) < 1e-15);
  CHECK(b.meta == R"({"device":"x"})");
  CHECK_THROWS_AS(parse_counts(R"({"id": 0, "width": 2, "counts": {"00": -1}})"), ftlab::DomainError);
  CHECK_THROWS_AS(parse_counts(R"({"id": 0, "width": 2, "counts": {"00": 0}})"), ftlab::DomainError);
  CHECK_THROWS_AS(parse_counts(R"({"id": 0, "width": 2, "counts": {"000": 3}})"), ftlab::ParseError);
  CHECK_THROWS_AS(parse_counts(R"({"id": 0, "counts": {}})"), ftlab::ParseError);
  CHECK_THROWS_AS(parse_counts("{not json"), ftlab::ParseError);
}

TEST_CASE("import_counts reads JSON lines") {
  const auto path = std::filesystem::temp_directory_path() / "ftlab_counts_test.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id": 0, "width": 2, "counts": {"00": 10}})" << "\n\n"
        << R"({"id": 0, "width": 5, "counts": {"00000": 5, "01111": 5}})" << "\n";
  }
  const auto all = import_counts(path);
  std::filesystem::remove(path);
  REQUIRE(all.size() == 2);
  CHECK(all[1].dist.width == 5);
  CHECK(postselect_decode(all[1].dist).ratio == 1.0);
}
