#pragma once

#include <functional>
#include <set>
#include <vector>

#include "cpw/common.hpp"
#include "cpw/pcf.hpp"

namespace cpw::cohesive {

using cpw::Nat;

/// A finite window on an approximated cohesive set C: included and excluded
/// partition [0, window_bound].
struct CohesiveView {
  Nat window_bound = 0;
  std::vector<Nat> included;  // sorted: C_s restricted to the window
  std::vector<Nat> excluded;  // sorted: members of M restricted to the window
};

/// The reduction C1 = { 2s : s in C } used when a co-maximal set inside the
/// evens is needed.
CohesiveView doubled(const CohesiveView& v);

/// Three-valued pointwise predicate; nullopt marks a point the predicate
/// could not decide within its own budget (counts as neither side).
using TriPred = std::function<std::optional<bool>(Nat)>;

/// Finite surrogate for C subseteq* {x : pred(x)}: True when pred holds on a
/// tail of at least tail_window included elements (above the cut), False when
/// the negation does, Unknown otherwise.  The witness is the first element of
/// the deciding tail.
Verdict almost_inclusion(const TriPred& pred, const CohesiveView& view, const Horizon& h);

struct MarkerMove {
  Nat stage;
  Nat marker_index;
  Nat from;
  Nat to;
};

struct MaximalSetApprox {
  Nat stages = 0;
  std::vector<Nat> enumeration;  // members of M in enumeration order
  std::set<Nat> members;
  std::vector<Nat> markers;  // strictly increasing complement representatives
  std::vector<MarkerMove> moved_log;
  std::vector<Nat> members_count_at_stage;  // index s-1: |M_s|

  bool in_members(Nat n) const { return members.count(n) != 0; }
};

struct MaximalConfig {
  Nat estate_bound = 16;  // e-states track W_0..W_{estate_bound-1}
};

/// Marker/e-state priority construction of a maximal set approximation.
/// Lower-index markers have priority; at most one marker movement per stage;
/// every number below the marker front is either a member or a marker.
/// Deterministic given (stages, machine, config).
MaximalSetApprox build_maximal(Nat stages, const pcf::Machine& machine, MaximalConfig cfg = {});

CohesiveView view_of(const MaximalSetApprox& approx, Nat window_bound);

/// Core rule behind extract_R: keep exactly the entries that exceed every
/// earlier entry of the sequence.
std::vector<Nat> ascending_fresh(const std::vector<Nat>& enumeration);

/// The computable set R subseteq complement-of-C used by the successor
/// avoiding construction: the ascending fresh subsequence of M's enumeration.
std::vector<Nat> extract_R(const MaximalSetApprox& approx);

struct CohesivenessEntry {
  Nat e;
  Verdict inclusion;   // C subseteq* W_e
  Verdict complement;  // C subseteq* complement of W_e
};

/// Per-e evidence report: cohesiveness evidence is "no e leaves both sides
/// undecided with both-infinite pressure".
std::vector<CohesivenessEntry> cohesiveness_report(const MaximalSetApprox& approx,
                                                   const pcf::Machine& machine, Nat first_k_ce,
                                                   const Horizon& h);

}  // namespace cpw::cohesive
