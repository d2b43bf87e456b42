#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpw/cohesive.hpp"
#include "cpw/common.hpp"
#include "cpw/pcf.hpp"

namespace cpw::structures {

using cpw::Nat;

// the three-way split of the domain: stems, forward and backward witnesses
inline bool in_S(Nat n) { return n % 2 == 0; }
inline bool in_F(Nat n) { return n % 4 == 1; }
inline bool in_B(Nat n) { return n % 4 == 3; }

/// Canonical rank bijection {(i,j) : i,j even, i<j} -> {4k+1}: pairs are
/// ranked by the Cantor code of (i/2, j/2).  Total and stage-independent.
Nat f_value(Nat i, Nat j);
std::optional<std::pair<Nat, Nat>> f_inverse(Nat w);

struct BEntry {
  Nat from = 0, to = 0;  // arrow from -> to with from > to
  Nat stage = 0;         // stage at which the arrow appeared
};

/// The structure with one ternary relation: stems S carry forward arrows
/// i -> j (i < j) witnessed in F; enumerating k into A1 adds backward
/// arrows k -> i (i < k) and j -> k (j > k, j bounded by the window limit),
/// witnessed in B in order of (stage, Cantor code).
struct MAStructure {
  std::string name;
  std::vector<Nat> a1_enum;  // stage s (1-based) enumerates a1_enum[s-1]
  Nat window_limit = 0;      // partners above an enumerated element are capped
  Nat stage = 0;             // stages replayed so far

  std::vector<BEntry> b_by_rank;            // rank k -> arrow, witness 4k+3
  std::map<std::pair<Nat, Nat>, Nat> b_rank_of;  // (from,to) -> rank

  /// decidable for computable instances; stage-relative for c.e. ones
  std::function<std::optional<bool>(Nat)> in_A;

  std::optional<Nat> b_value(Nat from, Nat to, Nat at_stage) const;
  std::optional<std::pair<Nat, Nat>> b_inverse(Nat w, Nat at_stage) const;
};

/// A = the evens satisfying keep; A1 = the rest of S in increasing order,
/// one element per stage.
MAStructure make_computable_instance(std::function<bool(Nat)> keep_even, Nat stages,
                                     Nat window_limit, std::string name);

/// Default D = {4s}: A1 = {4s+2} enumerated in increasing order.
MAStructure make_d_instance(Nat stages, Nat window_limit);

/// C-instance from a maximal-set approximation via the doubling adapter
/// C1 = {2s : s in C}: A1 = doubled members, replayed in construction order.
MAStructure make_c_instance(const cohesive::MaximalSetApprox& approx, Nat window_limit);

/// The displayed decision rule: x,y in S and either x<y with z the forward
/// rank witness, or x>y with z a backward witness present at the stage.
bool p_holds(const MAStructure& m, Nat x, Nat z, Nat y, Nat stage);

// arrow x -> y present at the stage (forward or backward)
bool arrow_present(const MAStructure& m, Nat x, Nat y, Nat stage);

/// Exact: the witness for each direction is unique and computable, so both
/// quantifiers of the displayed formula are bounded-complete.
bool phi_base(const MAStructure& m, Nat x, Nat y, Nat stage);

/// Searched over t <= t_bound; failure within the bound is stage-relative.
bool theta_base(const MAStructure& m, Nat x, Nat stage, Nat t_bound);

// --- fact checks -----------------------------------------------------------

struct FactsReport {
  Nat triples_checked = 0;
  std::vector<std::string> fact1;  // witness shared by two pairs
  std::vector<std::string> fact2;  // missing double connection for excluded x
  std::vector<std::string> fact3;  // order mismatch on A-elements
  std::vector<std::string> fact4;  // p_holds disagrees with the arrow tables
  bool ok() const {
    return fact1.empty() && fact2.empty() && fact3.empty() && fact4.empty();
  }
};

FactsReport check_facts_1_to_4(const MAStructure& m, Nat bound, Nat stage);

// --- isomorphism transport ---------------------------------------------------

struct IsoReport {
  std::vector<std::pair<Nat, Nat>> stem_map;  // x in M_D stems -> image in M_E
  Nat triples_preserved = 0;
  std::vector<std::string> violations;
  std::vector<std::string> unclosed;  // witness transport hit the window/stage edge
  bool ok() const { return violations.empty(); }
};

/// Order isomorphism on kept stems, enumeration-order bijection on excluded
/// stems, rank transport on witnesses; P-preservation rechecked on all
/// triples over mapped stems <= bound.
IsoReport iso_MD_ME(const MAStructure& md, const MAStructure& me, Nat bound);

// --- power experiments -------------------------------------------------------

struct PsiEntry {
  std::string display;
  Truth theta_positive = Truth::Unknown;  // Theta-evidence at the horizon
  Truth greater_found = Truth::Unknown;   // some built element strictly Phi-above
  std::string greater_display;
  bool eq_constant_or_id = false;
};

struct LermanEntry {
  std::string display;
  Truth maps_into_A = Truth::Unknown;
  bool infinite_range_evidence = false;
  bool tail_identity = false;
};

struct PsiReport {
  bool d_instance = false;
  std::vector<Nat> constants;  // sampled A-elements used as constant anchors
  std::vector<PsiEntry> entries;
  std::vector<LermanEntry> lerman;
};

/// Pointwise Phi over the view lifted by almost-inclusion.
Verdict phi_power(const MAStructure& m, const cohesive::CohesiveView& view, const Horizon& h,
                  const pcf::Machine& machine, Nat rep1, Nat rep2);

/// For each test element: Theta-evidence, a Phi-greater element when the
/// instance admits one (D: g with g(d_i) = d_{i+1}, composed on top), and
/// whether the element matches a constant or [id].  C-instances also run the
/// identity-tail probe on elements mapping the view into A.
PsiReport psi_experiments(const MAStructure& m, bool d_instance,
                          const cohesive::CohesiveView& view, const Horizon& h,
                          pcf::Machine& machine,
                          const std::vector<std::pair<Nat, std::string>>& test_reps);

/// g(x) = least kept even above x (the D-successor); diverges when the scan
/// finds nothing within the window limit.
Nat register_next_in_A(MAStructure m, pcf::Machine& machine);

}  // namespace cpw::structures
