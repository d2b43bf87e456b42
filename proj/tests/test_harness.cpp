#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cpw/harness.hpp"

using namespace cpw;
using namespace cpw::harness;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.window_bound = 200;
  cfg.step_budget = 20000;
  cfg.tail_window = 8;
  cfg.cut = 16;
  cfg.stages = 400;
  cfg.seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("config validation and horizon projection") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  Horizon h = cfg.horizon();
  CHECK(h.window_bound == 200);
  CHECK(h.step_budget == 20000);
  cfg.tail_window = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("config file: key=value with comments, flags win afterwards") {
  std::string path = "/tmp/cpw_harness_cfg.txt";
  {
    std::ofstream out(path);
    out << "# sample config\n";
    out << "window=123\n";
    out << "steps=456   # inline comment\n";
    out << "stages=78\n";
    out << "out=/tmp/report.json\n";
  }
  ExperimentConfig cfg = apply_config_file(small_config(), path);
  CHECK(cfg.window_bound == 123);
  CHECK(cfg.step_budget == 456);
  CHECK(cfg.stages == 78);
  CHECK(cfg.out_path == "/tmp/report.json");
  CHECK(cfg.seed == 1);  // untouched

  {
    std::ofstream out(path);
    out << "bogus=1\n";
  }
  CHECK_THROWS(apply_config_file(small_config(), path));
  std::remove(path.c_str());
}

TEST_CASE("order registry resolves every advertised name") {
  for (const std::string& name : order_names()) {
    CAPTURE(name);
    orders::CompOrder L = order_by_name(name, 200);
    std::vector<Nat> sample;
    for (Nat x = 0; x <= 40; ++x)
      if (L.in_domain(x)) sample.push_back(x);
    REQUIRE(sample.size() >= 10);
    CHECK(orders::axioms_check(L, sample).ok);
  }
  CHECK_THROWS_AS(order_by_name("zeta"), std::invalid_argument);
}

TEST_CASE("element constructors") {
  auto machine = std::make_shared<pcf::Machine>();
  ExperimentConfig cfg = small_config();
  cohesive::CohesiveView view;
  view.window_bound = cfg.window_bound;
  for (Nat n = 0; n <= cfg.window_bound; ++n) view.included.push_back(n);
  power::PowerContext ctx =
      power::make_context(orders::std_nat(), view, cfg.horizon(), machine);

  CHECK(*power::value_at(ctx, parse_element(ctx, "const:5"), 30) == 5);
  CHECK(*power::value_at(ctx, parse_element(ctx, "id"), 30) == 30);
  CHECK(*power::value_at(ctx, parse_element(ctx, "2id"), 30) == 60);
  Nat succ = machine->encode(pcf::successor_program());
  CHECK(*power::value_at(ctx, parse_element(ctx, "prog:" + std::to_string(succ)), 30) == 31);
  std::string comp = "compose:" + std::to_string(succ) + ":" + std::to_string(succ);
  CHECK(*power::value_at(ctx, parse_element(ctx, comp), 30) == 32);

  CHECK_THROWS_AS(parse_element(ctx, "nope"), std::invalid_argument);
  CHECK_THROWS_AS(parse_element(ctx, "const:xyz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_element(ctx, "compose:1"), std::invalid_argument);
}

TEST_CASE("transfer corpus: 20 low sentences, 6 level-two, all closed") {
  std::vector<CorpusEntry> corpus = transfer_corpus();
  REQUIRE(corpus.size() == 26);
  Nat low = 0, two = 0;
  for (const CorpusEntry& e : corpus) {
    CAPTURE(e.name);
    CHECK(formulas::free_vars(e.f).empty());
    CHECK(formulas::equal(formulas::parse(formulas::print(e.f)), e.f));
    formulas::Classification c = formulas::classify(e.f);
    bool is_low = c.level == formulas::Level::QuantifierFree ||
                  c.level == formulas::Level::BC1 ||
                  ((c.level == formulas::Level::Sigma || c.level == formulas::Level::Pi) &&
                   c.n <= 1);
    if (is_low) ++low;
    if (!is_low && c.n == 2) ++two;
  }
  CHECK(low == 20);
  CHECK(two == 6);
}

TEST_CASE("properties_lo: passes and reruns byte-identically modulo timing") {
  ExperimentConfig cfg = small_config();
  Report a = exp_properties_lo(cfg);
  Report b = exp_properties_lo(cfg);
  CHECK(a.all_passed());
  CHECK(a.unknown() == 0);
  CHECK(strip_timing(a.to_json()) == strip_timing(b.to_json()));

  json j = a.to_json();
  CHECK(j["schema"] == 1);
  CHECK(j["config"]["window_bound"] == 200);
  CHECK(j["summary"]["failed"] == 0);
}

TEST_CASE("ftcp: no base/power contradictions on the corpus") {
  Report r = exp_ftcp(small_config());
  CHECK(r.failed() == 0);
  CHECK(r.errored() == 0);
  Nat corpus_records = 0;
  for (const CheckRecord& c : r.checks)
    if (c.name.rfind("corpus:", 0) == 0) ++corpus_records;
  CHECK(corpus_records == 26);
  // every Unknown in the serialized report carries its horizon
  for (const auto& rec : r.to_json()["checks"]) {
    if (rec["verdict"] == "unknown") CHECK(rec.contains("horizon"));
  }
}

TEST_CASE("lemma5 experiment: evidence suite passes at small scale") {
  Report r = exp_lemma5(small_config());
  CHECK(r.failed() == 0);
  CHECK(r.errored() == 0);
  bool saw_star = false;
  for (const CheckRecord& c : r.checks)
    if (c.name == "star-check") {
      saw_star = true;
      CHECK(c.verdict == Truth::True);
    }
  CHECK(saw_star);
}

TEST_CASE("run_experiment dispatch") {
  CHECK(experiment_names().size() == 5);
  Report r = run_experiment("properties_lo", small_config());
  CHECK(r.experiment == "properties_lo");
  CHECK(r.config.experiment == "properties_lo");
  CHECK_THROWS_AS(run_experiment("nonsense", small_config()), std::invalid_argument);
}
