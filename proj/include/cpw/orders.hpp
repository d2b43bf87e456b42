#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpw/common.hpp"
#include "cpw/pcf.hpp"

namespace cpw::orders {

using cpw::Nat;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a total-by-contract parameter function fails to converge
/// within its budget on a queried point.
struct ContractBreach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computable linear order presentation: decidable domain membership over
/// the naturals plus decidable strict comparison on domain elements.
struct CompOrder {
  std::string name;
  std::function<bool(Nat)> in_domain;
  std::function<bool(Nat, Nat)> less;  // pre: both arguments in domain
  bool stage_sensitive = false;
};

// --- standard presentations ------------------------------------------------

CompOrder std_nat();

/// Integers via the fold encoding: even code 2k is +k, odd code 2k+1 is -(k+1).
CompOrder std_int();
long long int_value(Nat code);
Nat int_code(long long v);

/// Rationals via the canonical reduced-fraction enumeration: code 0 is 0/1;
/// odd codes walk the positive fractions ordered by (p+q, p), even codes the
/// negative ones.
CompOrder std_rat();
std::pair<long long, long long> rat_value(Nat code);  // (num, den), den >= 1
std::optional<Nat> rat_code(long long num, long long den, Nat search_limit = 1u << 20);

/// N + Q x Z, assembled from the combinators below.
CompOrder nat_plus_rat_times_int();

// --- combinators -----------------------------------------------------------

// Elements of a sum are pair(i, l) with i in {0,1}; of a product, pair(k, m).
CompOrder sum(CompOrder l0, CompOrder l1);
CompOrder lex(CompOrder l0, CompOrder l1);
CompOrder reverse(CompOrder l0);

// --- the theorem-4 order ---------------------------------------------------

/// Total injective parameter enumerating the c.e. set A; nullopt from f is a
/// contract breach at the queried point.
using Injection = std::function<std::optional<Nat>(Nat)>;

/// Orders evens by magnitude and hangs 2k+1 between 2f(k) and 2f(k)+2:
///   2c < 2d      iff c < d
///   2c < 2k+1    iff c <= f(k)
///   2k+1 < 2c    iff f(k) < c
///   2k+1 < 2l+1  iff f(k) < f(l)
CompOrder thm4_order(Injection f, std::string name = "thm4");

/// Toy injection with a hand-fixed finite range prefix:
/// 3, 0, 5, then 101, 103, 105, ...  Range membership is decidable.
Injection toy_injection();
bool toy_range_contains(Nat a);

/// Honest noncomputable-flavor injection: enumerates the diagonal halting
/// set of the machine's numbering in discovery order (dovetailed), capped by
/// a work bound; queries beyond the cap return nullopt.
Injection diagonal_halting_injection(const pcf::Machine& machine, Nat work_bound);

// --- checks and stage-relative probes --------------------------------------

struct AxiomsReport {
  bool ok = true;
  std::string violation;  // first violation, empty when ok
};

/// Irreflexivity on all elements, asymmetry and totality on all pairs,
/// transitivity on all triples of the sample.
AxiomsReport axioms_check(const CompOrder& L, const std::vector<Nat>& sample);

/// |{x <= scan_bound : a < x < b}| — a lower bound of the true interval size.
Nat interval_card_bounded(const CompOrder& L, Nat a, Nat b, Nat scan_bound);

/// Stage-relative successor: the <_L-least element above x among codes
/// <= scan_bound.  Presence is relative to the scan; a later scan may reveal
/// a smaller-in-order witness.
std::optional<Nat> succ_at_stage(const CompOrder& L, Nat x, Nat scan_bound);

Nat pred_count_at_stage(const CompOrder& L, Nat x, Nat scan_bound);

}  // namespace cpw::orders
