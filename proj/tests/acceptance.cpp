// The acceptance gate: one printed [PASS]/[FAIL] line per criterion.
// Everything here goes through the public library surface; the experiment
// suites are reused where a criterion is exactly what they measure.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <iostream>
#include <map>
#include <random>

#include "cpw/avoidsucc.hpp"
#include "cpw/cohesive.hpp"
#include "cpw/harness.hpp"
#include "cpw/structures.hpp"

using namespace cpw;

namespace {

using Clock = std::chrono::steady_clock;

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void gate(int num, const std::string& title, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << num << ": " << title
            << (detail.empty() ? "" : " (" + detail + ")") << std::endl;
  CHECK_MESSAGE(ok, "criterion ", num, " ", title, " ", detail);
}

const harness::CheckRecord* find_check(const harness::Report& r, const std::string& name) {
  for (const harness::CheckRecord& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool records_true(const harness::Report& r, const std::vector<std::string>& names,
                  std::string& detail) {
  for (const std::string& name : names) {
    const harness::CheckRecord* c = find_check(r, name);
    if (!c) {
      detail = "missing record " + name;
      return false;
    }
    if (c->verdict != Truth::True || !c->error.empty()) {
      detail = name + " -> " + to_string(c->verdict) +
               (c->error.empty() ? "" : " error: " + c->error) +
               (c->witness.empty() ? "" : " [" + c->witness + "]");
      return false;
    }
  }
  detail = std::to_string(r.passed()) + " checks passed";
  return true;
}

}  // namespace

TEST_CASE("1: pairing and numbering") {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (Nat k = 0; k <= 100000 && ok; ++k) {
    auto [m, n] = pcf::unpair(k);
    if (pcf::pair(m, n) != k) {
      ok = false;
      detail = "unpair/pair breaks at " + std::to_string(k);
    }
  }
  for (Nat m = 0; m <= 300 && ok; ++m)
    for (Nat n = 0; n <= 300; ++n) {
      Nat k = pcf::pair(m, n);
      if (pcf::unpair(k) != std::pair<Nat, Nat>{m, n}) {
        ok = false;
        detail = "pair/unpair breaks at (" + std::to_string(m) + "," + std::to_string(n) + ")";
        break;
      }
    }
  pcf::Machine machine;
  Nat total_instructions = 0;
  for (Nat e = 0; e < 10000 && ok; ++e) {
    try {
      total_instructions += machine.decode(e).code.size();
    } catch (const std::exception& ex) {
      ok = false;
      detail = "decode(" + std::to_string(e) + ") threw: " + ex.what();
    }
  }
  double dt = secs(t0);
  if (ok && dt >= 5.0) {
    ok = false;
    detail = "too slow: " + std::to_string(dt) + "s";
  }
  if (ok)
    detail = std::to_string(total_instructions) + " instructions decoded, " +
             std::to_string(dt).substr(0, 4) + "s";
  gate(1, "pairing and numbering", ok, detail);
}

TEST_CASE("2: maximal-set construction") {
  harness::ExperimentConfig cfg;  // defaults
  auto t0 = Clock::now();
  pcf::Machine machine = harness::probe_machine();
  cohesive::MaximalSetApprox a = cohesive::build_maximal(2000, machine);
  double dt = secs(t0);

  bool ok = true;
  std::string detail;
  if (dt >= 60.0) {
    ok = false;
    detail = "construction took " + std::to_string(dt) + "s";
  }
  // monotone enumeration, no duplicates, counts consistent
  if (ok) {
    std::set<Nat> seen;
    for (Nat m : a.enumeration) {
      if (!seen.insert(m).second) {
        ok = false;
        detail = "duplicate enumeration of " + std::to_string(m);
        break;
      }
    }
    for (std::size_t s = 1; ok && s < a.members_count_at_stage.size(); ++s)
      if (a.members_count_at_stage[s] < a.members_count_at_stage[s - 1]) {
        ok = false;
        detail = "member count dropped at stage " + std::to_string(s + 1);
      }
    if (ok && (a.members.size() != a.enumeration.size() ||
               (!a.members_count_at_stage.empty() &&
                a.members_count_at_stage.back() != a.enumeration.size()))) {
      ok = false;
      detail = "enumeration / member-set mismatch";
    }
  }
  // markers 0..5 motionless over the final quarter
  if (ok) {
    for (const cohesive::MarkerMove& mv : a.moved_log)
      if (mv.marker_index <= 5 && mv.stage > 1500) {
        ok = false;
        detail = "marker " + std::to_string(mv.marker_index) + " moved at stage " +
                 std::to_string(mv.stage);
        break;
      }
  }
  // no W_e may split the complement approximation both ways
  if (ok) {
    auto entries = cohesive::cohesiveness_report(a, machine, 16, cfg.horizon());
    for (const cohesive::CohesivenessEntry& e : entries)
      if (e.inclusion.value == Truth::False && e.complement.value == Truth::False) {
        ok = false;
        detail = "W_" + std::to_string(e.e) + " is infinite on both sides";
        break;
      }
  }
  if (ok)
    detail = std::to_string(a.enumeration.size()) + " enumerated, " +
             std::to_string(a.moved_log.size()) + " marker moves, " +
             std::to_string(dt).substr(0, 4) + "s";
  gate(2, "maximal-set construction", ok, detail);
}

TEST_CASE("3: order axioms") {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(1);
  for (const std::string& name :
       {"nat", "int", "rat", "nqz", "thm4:toy", "lemma5"}) {
    orders::CompOrder L = harness::order_by_name(name, 400);
    std::vector<Nat> sample;
    for (Nat x = 0; x <= 100; ++x)
      if (L.in_domain(x)) sample.push_back(x);
    orders::AxiomsReport r = orders::axioms_check(L, sample);
    if (!r.ok) {
      ok = false;
      detail = name + ": " + r.violation;
      break;
    }
    std::vector<Nat> pool;
    for (Nat x = 0; x <= 3000 && pool.size() < 600; ++x)
      if (L.in_domain(x)) pool.push_back(x);
    for (Nat t = 0; t < 10000; ++t) {
      Nat x = pool[rng() % pool.size()], y = pool[rng() % pool.size()],
          z = pool[rng() % pool.size()];
      bool xy = L.less(x, y), yx = L.less(y, x);
      std::string bad;
      if (L.less(x, x)) bad = "irreflexivity";
      else if (xy && yx) bad = "asymmetry";
      else if (x != y && !xy && !yx) bad = "totality";
      else if (xy && L.less(y, z) && !L.less(x, z)) bad = "transitivity";
      if (!bad.empty()) {
        ok = false;
        detail = name + ": " + bad + " fails on (" + std::to_string(x) + "," +
                 std::to_string(y) + "," + std::to_string(z) + ")";
        break;
      }
    }
    if (!ok) break;
  }
  double dt = secs(t0);
  if (ok && dt >= 30.0) {
    ok = false;
    detail = "too slow: " + std::to_string(dt) + "s";
  }
  if (ok) detail = "6 orders, exhaustive [0..100] + 10^4 random triples each";
  gate(3, "order axioms", ok, detail);
}

TEST_CASE("4: thm4 exact suite") {
  harness::ExperimentConfig cfg;
  harness::Report r = harness::exp_thm4(cfg);
  std::string detail;
  bool ok = records_true(r,
                         {"even-even-natural-order", "successor-evidence-matrix", "axioms-sample",
                          "succ-pointwise-no-gap", "pred-mirror-roundtrip", "theta-midpoint",
                          "blocks-far-apart"},
                         detail);
  gate(4, "parameterized-order exact suite", ok, detail);
}

TEST_CASE("5: canonical embedding exactness") {
  bool ok = true;
  std::string detail;
  Nat comparisons = 0;
  std::mt19937_64 rng(5);
  for (const std::string& name : harness::order_names()) {
    orders::CompOrder L = harness::order_by_name(name, 400);
    std::vector<Nat> pool;
    for (Nat x = 0; pool.size() < 200 && x <= 50000; ++x)
      if (L.in_domain(x)) pool.push_back(x);
    if (pool.size() < 200) {
      ok = false;
      detail = name + ": only " + std::to_string(pool.size()) + " sample elements";
      break;
    }
    cohesive::CohesiveView view;
    view.window_bound = 120;
    for (Nat n = 0; n <= view.window_bound; ++n) view.included.push_back(n);
    Horizon h{view.window_bound, 100000, 8, 16};
    power::PowerContext ctx =
        power::make_context(L, view, h, std::make_shared<pcf::Machine>());

    std::map<Nat, power::PowerElement> embedded;
    auto embed = [&](Nat a) -> power::PowerElement& {
      auto it = embedded.find(a);
      if (it == embedded.end()) it = embedded.emplace(a, power::canonical_embed(ctx, a)).first;
      return it->second;
    };
    auto check_pair = [&](Nat x, Nat y) {
      Verdict v = power::less_c(ctx, embed(x), embed(y));
      ++comparisons;
      Truth want = L.less(x, y) ? Truth::True : Truth::False;
      if (v.value != want) {
        ok = false;
        detail = name + ": embed(" + std::to_string(x) + ") < embed(" + std::to_string(y) +
                 ") gave " + to_string(v.value) + ", base says " + to_string(want);
      }
    };
    for (std::size_t i = 0; ok && i + 1 < pool.size(); ++i) check_pair(pool[i], pool[i + 1]);
    for (Nat t = 0; ok && t < 150; ++t)
      check_pair(pool[rng() % pool.size()], pool[rng() % pool.size()]);
    if (ok) {
      Nat a = pool[17];
      if (power::eq_c(ctx, embed(a), embed(a)).value != Truth::True) {
        ok = false;
        detail = name + ": embed is not reflexively equal";
      }
    }
    if (!ok) break;
  }
  if (ok)
    detail = std::to_string(comparisons) + " comparisons over " +
             std::to_string(harness::order_names().size()) + " base orders, none Unknown";
  gate(5, "canonical embedding exactness", ok, detail);
}

TEST_CASE("6: one-relation structure suite") {
  harness::ExperimentConfig cfg;
  harness::Report r = harness::exp_ma(cfg);
  std::string detail;
  bool ok = records_true(r,
                         {"partition-and-bijection", "facts-1-4-d-instance",
                          "iso-transport-d-to-e", "psi-d-instance-always-something-above",
                          "psi-c-instance-none-above-id", "psi-c-instance-evidence"},
                         detail);
  gate(6, "one-relation structure suite", ok, detail);
}

TEST_CASE("7: successor-avoiding construction suite") {
  harness::ExperimentConfig cfg;
  harness::Report r = harness::exp_lemma5(cfg);
  std::string detail;
  bool ok = records_true(r,
                         {"determinism", "insertion-stability", "omega-stabilization",
                          "star-check", "between-psi-strict", "between-psi-rejects-id"},
                         detail);
  gate(7, "successor-avoiding construction suite", ok, detail);
}

TEST_CASE("8: transfer corpus") {
  harness::ExperimentConfig cfg;
  harness::Report r = harness::exp_ftcp(cfg);
  bool ok = true;
  std::string detail;
  Nat corpus_records = 0;
  for (const harness::CheckRecord& c : r.checks) {
    if (c.name.rfind("corpus:", 0) == 0) {
      ++corpus_records;
      if (c.verdict == Truth::False || !c.error.empty()) {
        ok = false;
        detail = c.name + " contradicts: " + c.witness + c.error;
        break;
      }
    }
  }
  if (ok && corpus_records != 26) {
    ok = false;
    detail = "expected 26 corpus records, saw " + std::to_string(corpus_records);
  }
  if (ok) {
    std::string sub;
    ok = records_true(r, {"corpus-shape", "pi3-succ-base-evidence", "pi3-succ-power-gap-witness"},
                      sub);
    detail = ok ? "26 sentences contradiction-free; successor sentence holds in the base "
                  "and fails with a concrete gap witness in the power"
                : sub;
  }
  gate(8, "transfer corpus", ok, detail);
}

TEST_CASE("9: end-to-end experiments") {
  harness::ExperimentConfig cfg;
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  std::map<std::string, nlohmann::json> first;
  for (const std::string& name : harness::experiment_names()) {
    harness::Report r = harness::run_experiment(name, cfg);
    nlohmann::json j = r.to_json();
    if (j["schema"] != 1 || !j.contains("config") || !j.contains("checks") ||
        !j.contains("summary")) {
      ok = false;
      detail = name + ": report is not schema-valid";
      break;
    }
    if (!r.all_passed()) {
      ok = false;
      detail = name + ": " + std::to_string(r.failed()) + " failed, " +
               std::to_string(r.errored()) + " errored";
      break;
    }
    first[name] = harness::strip_timing(j);
  }
  for (const std::string& name : harness::experiment_names()) {
    if (!ok) break;
    nlohmann::json again = harness::strip_timing(harness::run_experiment(name, cfg).to_json());
    if (again != first[name]) {
      ok = false;
      detail = name + ": rerun is not byte-stable after timing strip";
    }
  }
  double dt = secs(t0);
  if (ok && dt >= 600.0) {
    ok = false;
    detail = "combined runtime " + std::to_string(dt) + "s";
  }
  if (ok)
    detail = "5 experiments twice, all passing and rerun-stable, " +
             std::to_string(dt).substr(0, 5) + "s";
  gate(9, "end-to-end experiments", ok, detail);
}
