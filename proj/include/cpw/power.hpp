#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>

#include "cpw/cohesive.hpp"
#include "cpw/common.hpp"
#include "cpw/formulas.hpp"
#include "cpw/orders.hpp"
#include "cpw/pcf.hpp"

namespace cpw::power {

using cpw::Nat;

/// An element of the power: an index into the machine's numbering together
/// with the verdict that the view almost-lies inside its domain.
struct PowerElement {
  Nat rep = 0;
  std::string display;
  Verdict domain_status;
};

struct PowerContext {
  orders::CompOrder base;
  cohesive::CohesiveView view;
  Horizon horizon;
  std::shared_ptr<pcf::Machine> machine;
};

/// Throws std::invalid_argument unless view and horizon agree on the window.
PowerContext make_context(orders::CompOrder base, cohesive::CohesiveView view, Horizon h,
                          std::shared_ptr<pcf::Machine> machine);

// value of an element at a point, at the context's step budget
std::optional<Nat> value_at(const PowerContext& ctx, const PowerElement& a, Nat n);

PowerElement make_element(PowerContext& ctx, Nat rep, std::string display = "");
PowerElement canonical_embed(PowerContext& ctx, Nat a);
PowerElement id_element(PowerContext& ctx);
PowerElement double_id_element(PowerContext& ctx);  // n -> 2n
PowerElement term_apply(PowerContext& ctx, Nat g, const PowerElement& a);

/// Pointwise equality / base order under the view, as an almost-inclusion
/// verdict.  A point where either side exhausts the step budget is undecided;
/// a converged value outside the base domain never satisfies the predicate.
Verdict eq_c(const PowerContext& ctx, const PowerElement& a, const PowerElement& b);
Verdict less_c(const PowerContext& ctx, const PowerElement& a, const PowerElement& b);

// --- successor construction over a parameterized order ---------------------

enum class SuccCase { Odd, EvenInRange, EvenOutOfRange, Mixed };
std::string to_string(SuccCase c);

struct SuccResult {
  PowerElement elem;
  SuccCase tag = SuccCase::Mixed;
  std::map<std::string, Nat> tally;  // decided-point counts by case name
  bool postcondition_ok = true;      // scanned-successor check at the horizon
};

/// Detects by tail vote whether psi's values are eventually odd, eventually
/// even with the half in the range of f, or eventually even outside it, and
/// builds the matching pointwise successor:
///   odd 2k+1       -> 2 f(k) + 2
///   even 2a, f(k)=a -> 2k+1
///   even 2a residual-> 2a + 2
/// A mixed tail returns the dispatching element tagged Mixed with the tally.
SuccResult thm4_succ(PowerContext& ctx, const orders::Injection& f, const PowerElement& psi);

/// Mirror construction: pointwise immediate predecessor.  Undefined (the
/// element diverges) at points with value 0.
SuccResult thm4_pred(PowerContext& ctx, const orders::Injection& f, const PowerElement& psi);

/// Blocks-far-apart estimate for the limsup criterion: True when at least
/// tail_window included points n carry a scanned interval (a(n), b(n)) of
/// size above the schedule t(n) = n/4; False when the last tail_window
/// decided sizes are all equal; Unknown otherwise.
Verdict blocks_far_apart(const PowerContext& ctx, const PowerElement& a, const PowerElement& b);

struct MidpointResult {
  PowerElement elem;
  bool parity_ok = true;   // theta(n) even at every decided point
  bool between_ok = true;  // psi(n) < theta(n) < phi(n) whenever phi(n)-psi(n) >= 4
};

/// theta(n) = floor((psi(n)+phi(n))/2), bumped to the next even number.
MidpointResult midpoint_theta(PowerContext& ctx, const PowerElement& psi,
                              const PowerElement& phi);

/// [2 id] when psi is eventually constant on the view, else [2 psi].
PowerElement unbounded_witness(PowerContext& ctx, const PowerElement& psi);

// --- isomorphism maps for sum / product / reverse ---------------------------

enum class Side { Left, Right, Unknown };

struct SumIsoResult {
  Side side = Side::Unknown;
  PowerElement elem;  // second projection
  std::map<std::string, Nat> tally;
};

SumIsoResult sum_iso(PowerContext& ctx, const PowerElement& a);
std::pair<PowerElement, PowerElement> prod_iso(PowerContext& ctx, const PowerElement& a);
PowerElement rev_iso(const PowerElement& a);

// --- transfer for low formulas ----------------------------------------------

formulas::BaseModel order_model(const orders::CompOrder& L);

/// Pointwise evaluation of a BC(Sigma1,Pi1)-or-lower formula over the view.
/// Rejects higher formulas with std::invalid_argument carrying the
/// classification.  Assignment maps free variables to power elements; points
/// where some element diverges, or where the base evaluation is Unknown, are
/// undecided.
Verdict eval_bc1(const PowerContext& ctx, const formulas::BaseModel& base_model,
                 const formulas::FormulaPtr& phi,
                 const std::map<std::string, PowerElement>& assignment,
                 const formulas::EvalOptions& point_opts);

}  // namespace cpw::power
