#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cpw/avoidsucc.hpp"

using namespace cpw;
using namespace cpw::avoidsucc;

namespace {

struct Rig {
  std::shared_ptr<pcf::Machine> machine;
  ConstructionState state;
};

// slot 0 tracks the natural successor, slot 1 is the canonical diverger
Rig tracker_rig(Nat stages) {
  auto m = std::make_shared<pcf::Machine>();
  m->plant(0, pcf::successor_program());
  m->plant(1, pcf::diverging_program());
  ConstructionState st = run_construction(stages, toy_R, *m);
  return {m, std::move(st)};
}

cohesive::CohesiveView toy_view(Nat bound) {
  cohesive::CohesiveView v;
  v.window_bound = bound;
  for (Nat n = 0; n <= bound; ++n)
    (toy_R(n) ? v.excluded : v.included).push_back(n);
  return v;
}

cohesive::CohesiveView all_view(Nat bound) {
  cohesive::CohesiveView v;
  v.window_bound = bound;
  for (Nat n = 0; n <= bound; ++n) v.included.push_back(n);
  return v;
}

}  // namespace

TEST_CASE("three stages with nothing converging: the natural order") {
  pcf::Machine m;
  m.plant(0, pcf::diverging_program());
  m.plant(1, pcf::diverging_program());
  ConstructionState st = run_construction(3, toy_R, m);
  CHECK(!st.aborted);
  CHECK(st.action_log.empty());
  REQUIRE(st.chain == std::vector<Nat>{0, 1, 2, 3});
  orders::CompOrder L = as_order(st);
  CHECK(L.less(0, 1));
  CHECK(L.less(2, 3));
  CHECK(!L.less(3, 0));
  CHECK(!L.in_domain(4));
  CHECK_THROWS_AS(L.less(0, 4), orders::DomainError);
}

TEST_CASE("planted tracker: R-elements land strictly between n and n+1") {
  Rig rig = tracker_rig(400);
  const ConstructionState& st = rig.state;
  REQUIRE(!st.aborted);
  REQUIRE(!st.action_log.empty());

  std::set<Nat> seen_codes;
  for (const Action& a : st.action_log) {
    REQUIRE(seen_codes.insert(pcf::pair(a.e, a.n)).second);  // acts at most once
    REQUIRE(toy_R(a.m));
    REQUIRE(st.less(a.n, a.m));
    if (a.e == 0) REQUIRE(st.less(a.m, a.n + 1));
  }
  // concrete early insertions (deterministic replay)
  for (Nat n : {1u, 3u, 6u}) {
    CAPTURE(n);
    bool found = false;
    for (const Action& a : st.action_log)
      if (a.e == 0 && a.n == n) {
        found = true;
        CHECK(st.less(n, a.m));
        CHECK(st.less(a.m, n + 1));
      }
    CHECK(found);
  }
  // the settled property: once the pair <0,n> has been considered, n+1 is
  // never left as the immediate successor of a non-R n
  for (Nat n = 0; n <= 25; ++n) {
    if (toy_R(n)) continue;
    CAPTURE(n);
    bool adjacent = st.less(n, n + 1) && st.position(n + 1) == st.position(n) + 1;
    CHECK(!adjacent);
  }
}

TEST_CASE("as_order passes the axiom check on 0..150") {
  Rig rig = tracker_rig(200);
  orders::CompOrder L = as_order(rig.state);
  std::vector<Nat> sample;
  for (Nat x = 0; x <= 150; ++x)
    if (L.in_domain(x)) sample.push_back(x);
  REQUIRE(sample.size() >= 151);
  CHECK(orders::axioms_check(L, sample).ok);
}

TEST_CASE("insertion-only stability across replay lengths") {
  Rig shorter = tracker_rig(150);
  Rig longer = tracker_rig(300);
  std::vector<Nat> placed(shorter.state.placed.begin(), shorter.state.placed.end());
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, placed.size() - 1);
  for (int t = 0; t < 50; ++t) {
    Nat x = placed[pick(rng)], y = placed[pick(rng)];
    if (x == y) continue;
    CAPTURE(x);
    CAPTURE(y);
    REQUIRE(shorter.state.less(x, y) == longer.state.less(x, y));
  }
}

TEST_CASE("omega-type evidence: predecessor counts stabilize") {
  Rig early = tracker_rig(1500);
  Rig late = tracker_rig(2000);
  for (Nat k = 0; k <= 50; ++k) {
    CAPTURE(k);
    REQUIRE(early.state.position(k) == late.state.position(k));
  }
}

TEST_CASE("determinism: identical inputs give identical logs") {
  Rig a = tracker_rig(300);
  Rig b = tracker_rig(300);
  CHECK(a.state.chain == b.state.chain);
  REQUIRE(a.state.action_log.size() == b.state.action_log.size());
  for (std::size_t i = 0; i < a.state.action_log.size(); ++i)
    REQUIRE(a.state.action_log[i] == b.state.action_log[i]);
}

TEST_CASE("star_check: tracker clean via insertions, diverger vacuous, R skipped") {
  Rig rig = tracker_rig(2000);
  StarReport r = star_check(rig.state, all_view(60), 2, 60, 2000, *rig.machine);
  CHECK(r.ok());
  CHECK(r.clean > 0);     // tracker points answered by inserted witnesses
  CHECK(r.diverged > 0);  // slot 1 never converges
  Nat r_skips = 0;
  for (const StarEntry& e : r.entries)
    if (e.outcome == StarOutcome::Skipped && toy_R(e.n)) ++r_skips;
  CHECK(r_skips > 0);
}

TEST_CASE("star_check: default numbering, e < 8, included n <= 500") {
  pcf::Machine machine;
  ConstructionState st = run_construction(2000, toy_R, machine);
  REQUIRE(!st.aborted);
  StarReport r = star_check(st, toy_view(500), 8, 500, 2000, machine);
  CHECK(r.violations == 0);
  CHECK(!r.entries.empty());
}

TEST_CASE("between_psi sits strictly between [id] and a two-step phi") {
  Rig rig = tracker_rig(2000);
  auto st = std::make_shared<ConstructionState>(rig.state);
  Nat up2 = rig.machine->register_native("up2", [st](Nat n, Nat budget) -> pcf::NativeResult {
    if (budget < 2 || !st->in_X(n)) return {std::nullopt, budget};
    Nat p = st->position(n);
    if (p + 2 >= st->chain.size()) return {std::nullopt, budget};
    return {st->chain[p + 2], 2};
  });

  Horizon h;
  h.window_bound = 60;
  h.step_budget = 4000;
  h.tail_window = 8;
  h.cut = 16;
  power::PowerContext ctx =
      power::make_context(as_order(rig.state), toy_view(60), h, rig.machine);

  power::PowerElement phi = power::make_element(ctx, up2, "up2");
  REQUIRE(power::less_c(ctx, power::id_element(ctx), phi).value == Truth::True);

  power::PowerElement psi = between_psi(ctx, rig.state, phi);
  CHECK(power::less_c(ctx, power::id_element(ctx), psi).value == Truth::True);
  CHECK(power::less_c(ctx, psi, phi).value == Truth::True);
  for (Nat n : {20u, 30u, 42u}) {
    CAPTURE(n);
    auto v = power::value_at(ctx, psi, n);
    REQUIRE(v);
    REQUIRE(*v == rig.state.chain[rig.state.position(n) + 1]);
  }
}

TEST_CASE("between_psi over the tracker phi uses the construction's insertions") {
  // R placed far above the appended range so natural successors stay adjacent
  // until the pair itself acts
  auto far_R = [](Nat n) { return n >= 10000 && n % 3 == 2; };
  auto machine = std::make_shared<pcf::Machine>();
  machine->plant(0, pcf::successor_program());
  machine->plant(1, pcf::diverging_program());
  ConstructionState st = run_construction(2000, far_R, *machine);
  REQUIRE(!st.aborted);
  Rig rig{machine, std::move(st)};
  Horizon h;
  h.window_bound = 60;
  h.step_budget = 4000;
  h.tail_window = 8;
  h.cut = 16;
  power::PowerContext ctx =
      power::make_context(as_order(rig.state), all_view(60), h, rig.machine);

  power::PowerElement phi = power::make_element(ctx, 0, "succ");  // the planted slot
  power::PowerElement psi = between_psi(ctx, rig.state, phi);
  CHECK(power::less_c(ctx, power::id_element(ctx), psi).value == Truth::True);
  CHECK(power::less_c(ctx, psi, phi).value == Truth::True);
  // each decided point is an R-element wedged below the natural successor
  for (Nat n : {18u, 21u, 24u}) {
    CAPTURE(n);
    auto v = power::value_at(ctx, psi, n);
    REQUIRE(v);
    CHECK(*v >= 10000);
    CHECK(rig.state.less(n, *v));
    CHECK(rig.state.less(*v, n + 1));
  }
}

TEST_CASE("between_psi rejects phi = [id]") {
  Rig rig = tracker_rig(300);
  Horizon h;
  h.window_bound = 60;
  h.step_budget = 4000;
  h.tail_window = 8;
  h.cut = 16;
  power::PowerContext ctx =
      power::make_context(as_order(rig.state), toy_view(60), h, rig.machine);
  CHECK_THROWS_AS(between_psi(ctx, rig.state, power::id_element(ctx)),
                  std::invalid_argument);
}
