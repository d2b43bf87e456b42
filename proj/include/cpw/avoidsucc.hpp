#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpw/cohesive.hpp"
#include "cpw/common.hpp"
#include "cpw/orders.hpp"
#include "cpw/pcf.hpp"
#include "cpw/power.hpp"

namespace cpw::avoidsucc {

using cpw::Nat;

struct Action {
  Nat stage = 0, e = 0, n = 0, m = 0;
  friend bool operator==(const Action&, const Action&) = default;
};

struct ConstructionState {
  Nat stages = 0;
  std::vector<Nat> chain;  // placed elements in ascending order-position
  std::set<Nat> placed;
  std::set<Nat> acted;  // pair codes <e,n> that have acted
  std::function<bool(Nat)> in_R;
  std::vector<Action> action_log;
  bool aborted = false;
  std::string diagnostic;

  bool in_X(Nat x) const { return placed.count(x) > 0; }
  Nat position(Nat x) const;  // order rank within the chain
  bool less(Nat x, Nat y) const { return position(x) < position(y); }

 private:
  mutable std::map<Nat, Nat> pos_cache_;
  mutable std::size_t cache_built_for_ = 0;
  friend ConstructionState run_construction(Nat, std::function<bool(Nat)>,
                                            const pcf::Machine&);
};

/// The fallback computable R for toy runs where the co-c.e. side is mocked:
/// R = {3s+2}, so the mocked C can be taken as the other two residues.
bool toy_R(Nat n);

/// Stage replay: place s at the top, then scan pair codes <e,n> < s in
/// increasing order; when phi_{e,s}(n) converges into X_s onto the current
/// immediate successor of an unprotected n outside R, insert the least fresh
/// element of R strictly between them.  Each pair acts at most once.
ConstructionState run_construction(Nat stages, std::function<bool(Nat)> in_R,
                                   const pcf::Machine& machine);

/// The finished replay as an order presentation.  The domain is the placed
/// set; every n <= stages is placed, inserted R-elements may exceed it.
orders::CompOrder as_order(const ConstructionState& state);

enum class StarOutcome { Clean, Violation, Skipped, Diverged };

struct StarEntry {
  Nat e = 0, n = 0;
  StarOutcome outcome = StarOutcome::Skipped;
  std::string note;
};

struct StarReport {
  std::vector<StarEntry> entries;
  Nat clean = 0, violations = 0, skipped = 0, diverged = 0;
  bool ok() const { return violations == 0; }
};

/// For each e < e_max and included n <= n_max strictly order-above the
/// order-greatest of {0..e}: if phi_e(n) converges within the budget, it must
/// not be the immediate successor of n in the finished order.  Points with
/// n in R or under the restraint are reported as skipped, per the
/// construction's own exemptions.
StarReport star_check(const ConstructionState& state, const cohesive::CohesiveView& view,
                      Nat e_max, Nat n_max, Nat budget, const pcf::Machine& machine);

/// psi(n) = the least m with n <_L m <_L phi(n), diverging when no such m is
/// placed.  Requires less_c([id], phi) = True at the context horizon.
power::PowerElement between_psi(power::PowerContext& ctx, const ConstructionState& state,
                                const power::PowerElement& phi);

}  // namespace cpw::avoidsucc
