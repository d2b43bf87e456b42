#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cpw/pcf.hpp"

using namespace cpw;
using namespace cpw::pcf;

TEST_CASE("cantor pairing basics") {
  CHECK(pair(0, 0) == 0);
  CHECK(pair(1, 2) == 7);  // (1+2)(1+2+1)/2 + 1
  CHECK(unpair(7) == std::pair<Nat, Nat>{1, 2});
}

TEST_CASE("pairing round trips exhaustively on [0,1e5]") {
  for (Nat k = 0; k <= 100000; ++k) {
    auto [m, n] = unpair(k);
    REQUIRE(pair(m, n) == k);
  }
  for (Nat m = 0; m <= 300; ++m)
    for (Nat n = 0; n <= 300; ++n) {
      auto [m2, n2] = unpair(pair(m, n));
      REQUIRE(m2 == m);
      REQUIRE(n2 == n);
    }
}

TEST_CASE("unpair(7) agrees with brute scan oracle") {
  // independent route: scan all (m,n) with m+n <= 7
  bool found = false;
  for (Nat m = 0; m <= 7 && !found; ++m)
    for (Nat n = 0; n <= 7 && !found; ++n)
      if (pair(m, n) == 7) {
        CHECK(m == 1);
        CHECK(n == 2);
        found = true;
      }
  CHECK(found);
}

TEST_CASE("eval of templates") {
  Machine m;
  Nat id = m.encode(identity_program());
  Nat div = m.encode(diverging_program());
  Nat c5 = m.encode(constant_program(5));

  CHECK(m.eval(id, 17, 1000).value == 17);
  CHECK(!m.eval(div, 3, 1000000).converged());
  // hand-trace of the constant template: zero r0, then 5 increments, HALT
  CHECK(m.eval(c5, 0, 1000).value == 5);
  CHECK(m.eval(c5, 123, 1000).value == 5);
}

TEST_CASE("decode(encode(p)) reproduces p instruction-for-instruction") {
  Machine m;
  for (const Program& p :
       {identity_program(), successor_program(), constant_program(7), doubling_program(),
        halt_iff_even_program(), diverging_program(),
        compose_programs(successor_program(), doubling_program())}) {
    CHECK(m.decode(m.encode(p)) == p);
  }
}

TEST_CASE("numbering totality: every e < 1e4 decodes to a well-formed program") {
  for (Nat e = 0; e < 10000; ++e) {
    Program p = decode_bits(e);
    for (const Instr& ins : p.code) {
      bool known = ins.op == Op::Inc || ins.op == Op::Djz || ins.op == Op::Cpy ||
                   ins.op == Op::Halt;
      REQUIRE(known);
    }
  }
}

TEST_CASE("evaluation monotonicity on random (e,n) pairs") {
  Machine m;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Nat> de(0, 199), dn(0, 50);
  for (int i = 0; i < 500; ++i) {
    Nat e = de(rng), n = dn(rng);
    Nat s = 1 + rng() % 5000;
    Nat s2 = s + 1 + rng() % (10000 - s);
    EvalOutcome a = m.eval(e, n, s);
    if (a.converged()) {
      EvalOutcome b = m.eval(e, n, s2);
      REQUIRE(b.converged());
      REQUIRE(*b.value == *a.value);
    }
  }
}

TEST_CASE("enumerate_ce") {
  Machine m;
  Nat id = m.encode(identity_program());
  Nat div = m.encode(diverging_program());
  Nat evens = m.encode(halt_iff_even_program());

  CHECK(m.enumerate_ce(id, 5) == std::vector<Nat>{0, 1, 2, 3, 4, 5});
  CHECK(m.enumerate_ce(div, 100).empty());
  // hand trace of the parity template: input n halts after 2 + 3n/2 steps,
  // so at budget 10 only 0, 2, 4 make it; at 17 the whole window does
  CHECK(m.enumerate_ce(evens, 10) == std::vector<Nat>{0, 2, 4});
  CHECK(m.enumerate_ce(evens, 17) == std::vector<Nat>{0, 2, 4, 6, 8, 10});
}

TEST_CASE("W_{e,s} monotone nondecreasing in s") {
  Machine m;
  Nat evens = m.encode(halt_iff_even_program());
  auto a = m.enumerate_ce(evens, 20);
  auto b = m.enumerate_ce(evens, 60);
  for (Nat n : a) CHECK(std::find(b.begin(), b.end(), n) != b.end());
}

TEST_CASE("builders") {
  Machine m;
  CHECK(m.eval(m.build_constant(3), 99, 10000).value == 3);
  CHECK(m.eval(m.build_compose(m.build_constant(3), m.build_identity()), 5, 10000).value == 3);
  Nat succ = m.encode(successor_program());
  CHECK(m.eval(m.build_compose(succ, succ), 4, 10000).value == 6);
}

TEST_CASE("composition law on random template triples") {
  Machine m;
  std::vector<Nat> pool = {
      m.encode(identity_program()),   m.encode(successor_program()),
      m.encode(constant_program(4)),  m.encode(doubling_program()),
      m.encode(halt_iff_even_program()), m.encode(diverging_program()),
  };
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Nat e1 = pool[rng() % pool.size()];
    Nat e2 = pool[rng() % pool.size()];
    Nat n = rng() % 30;
    Nat budget = 100000;
    EvalOutcome inner = m.eval(e2, n, budget);
    EvalOutcome whole = m.eval(m.build_compose(e1, e2), n, budget);
    if (inner.converged()) {
      EvalOutcome outer = m.eval(e1, *inner.value, budget);
      if (outer.converged() && whole.converged()) REQUIRE(*whole.value == *outer.value);
      if (!outer.converged()) REQUIRE(!whole.converged());
    } else {
      REQUIRE(!whole.converged());
    }
  }
}

TEST_CASE("program text format round trip") {
  Program p = constant_program(2);
  CHECK(parse_program(print_program(p)) == p);
  Program q = parse_program("INC 0\nHALT\n");
  CHECK(q == successor_program());
}

TEST_CASE("natives compose with programs") {
  Machine m;
  Nat triple = m.register_native("triple", [](Nat n, Nat) -> NativeResult { return {3 * n, 1}; });
  Nat succ = m.encode(successor_program());
  Nat both = m.build_compose(triple, succ);
  CHECK(m.eval(both, 4, 1000).value == 15);
}
