#include "cpw/avoidsucc.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace cpw::avoidsucc {

Nat ConstructionState::position(Nat x) const {
  if (cache_built_for_ != chain.size()) {
    pos_cache_.clear();
    for (std::size_t i = 0; i < chain.size(); ++i) pos_cache_[chain[i]] = i;
    cache_built_for_ = chain.size();
  }
  auto it = pos_cache_.find(x);
  if (it == pos_cache_.end())
    throw std::out_of_range("avoidsucc: element " + std::to_string(x) + " not placed");
  return it->second;
}

bool toy_R(Nat n) { return n % 3 == 2; }

ConstructionState run_construction(Nat stages, std::function<bool(Nat)> in_R,
                                   const pcf::Machine& machine) {
  ConstructionState st;
  st.stages = stages;
  st.in_R = std::move(in_R);
  st.chain.push_back(0);
  st.placed.insert(0);

  // Convergence is monotone in the budget, so one full-budget run per pair
  // code tells us the exact stage phi_{e,s}(n) first comes down.
  const Nat full_budget = std::max<Nat>(stages, 1);
  std::map<Nat, pcf::EvalOutcome> eval_cache;
  auto lookup = [&](Nat e, Nat n) -> const pcf::EvalOutcome& {
    Nat code = pcf::pair(e, n);
    auto it = eval_cache.find(code);
    if (it == eval_cache.end())
      it = eval_cache.emplace(code, machine.eval(e, n, full_budget)).first;
    return it->second;
  };

  for (Nat s = 1; s <= stages && !st.aborted; ++s) {
    if (!st.in_X(s)) {
      st.chain.push_back(s);  // s enters as the current greatest
      st.placed.insert(s);
    }
    for (Nat code = 0; code < s; ++code) {
      if (st.acted.count(code)) continue;
      auto [e, n] = pcf::unpair(code);
      const pcf::EvalOutcome& out = lookup(e, n);
      if (!out.converged() || out.steps_used > s) continue;  // (a) fails at s
      Nat v = *out.value;
      if (!st.in_X(v) || !st.in_X(n)) continue;
      if (st.position(v) != st.position(n) + 1) continue;  // (b): not adjacent
      if (st.in_R(n)) continue;                            // (c)
      bool restrained = false;                             // (d)
      for (Nat i = 0; i <= e && !restrained; ++i)
        if (st.in_X(i) && st.less(n, i)) restrained = true;
      if (restrained) continue;

      // least fresh element of R, inserted strictly between n and v
      std::optional<Nat> m;
      const Nat scan_cap = std::max<Nat>(3 * stages + 100, Nat{1} << 20);
      for (Nat c = 0; c <= scan_cap; ++c)
        if (st.in_R(c) && !st.in_X(c)) {
          m = c;
          break;
        }
      if (!m) {
        st.aborted = true;
        st.diagnostic = "R exhausted at stage " + std::to_string(s) + " for pair <" +
                        std::to_string(e) + "," + std::to_string(n) + ">";
        break;
      }
      st.chain.insert(st.chain.begin() + static_cast<std::ptrdiff_t>(st.position(n)) + 1, *m);
      st.placed.insert(*m);
      st.acted.insert(code);
      st.action_log.push_back({s, e, n, *m});
    }
  }
  return st;
}

orders::CompOrder as_order(const ConstructionState& state) {
  auto st = std::make_shared<ConstructionState>(state);
  orders::CompOrder L;
  L.name = "avoid-succ(" + std::to_string(state.stages) + ")";
  L.stage_sensitive = true;  // the domain grows with the replay length
  L.in_domain = [st](Nat x) { return st->in_X(x); };
  L.less = [st, name = L.name](Nat x, Nat y) {
    if (!st->in_X(x) || !st->in_X(y))
      throw orders::DomainError(name + ": element outside the replayed domain");
    return st->less(x, y);
  };
  return L;
}

StarReport star_check(const ConstructionState& state, const cohesive::CohesiveView& view,
                      Nat e_max, Nat n_max, Nat budget, const pcf::Machine& machine) {
  StarReport rep;
  auto push = [&](Nat e, Nat n, StarOutcome o, std::string note) {
    rep.entries.push_back({e, n, o, std::move(note)});
    switch (o) {
      case StarOutcome::Clean: ++rep.clean; break;
      case StarOutcome::Violation: ++rep.violations; break;
      case StarOutcome::Skipped: ++rep.skipped; break;
      case StarOutcome::Diverged: ++rep.diverged; break;
    }
  };
  for (Nat e = 0; e < e_max; ++e) {
    // the order-greatest of {0..e}: everything at or below it is protected
    Nat ell = 0;
    for (Nat i = 1; i <= e; ++i)
      if (state.in_X(i) && (!state.in_X(ell) || state.less(ell, i))) ell = i;
    for (Nat n : view.included) {
      if (n > n_max) break;
      if (!state.in_X(n)) {
        push(e, n, StarOutcome::Skipped, "not placed");
        continue;
      }
      if (state.in_R(n)) {
        push(e, n, StarOutcome::Skipped, "in R");
        continue;
      }
      if (n == ell || !state.less(ell, n)) {
        push(e, n, StarOutcome::Skipped, "restrained by 0.." + std::to_string(e));
        continue;
      }
      pcf::EvalOutcome out = machine.eval(e, n, budget);
      if (!out.converged()) {
        push(e, n, StarOutcome::Diverged, "");
        continue;
      }
      Nat v = *out.value;
      if (!state.in_X(v) || !state.less(n, v)) {
        push(e, n, StarOutcome::Clean, "value not order-above");
        continue;
      }
      if (state.position(v) == state.position(n) + 1)
        push(e, n, StarOutcome::Violation,
             std::to_string(v) + " is the immediate successor of " + std::to_string(n));
      else
        push(e, n, StarOutcome::Clean, "");
    }
  }
  return rep;
}

power::PowerElement between_psi(power::PowerContext& ctx, const ConstructionState& state,
                                const power::PowerElement& phi) {
  power::PowerElement id = power::id_element(ctx);
  if (power::less_c(ctx, id, phi).value != Truth::True)
    throw std::invalid_argument("between_psi: [id] < [" + phi.display +
                                "] not established at this horizon");
  auto st = std::make_shared<ConstructionState>(state);
  pcf::Machine* mp = ctx.machine.get();
  Nat phi_rep = phi.rep;
  Nat rep = ctx.machine->register_native(
      "between(" + phi.display + ")", [st, mp, phi_rep](Nat n, Nat budget) -> pcf::NativeResult {
        pcf::EvalOutcome inner = mp->eval(phi_rep, n, budget);
        if (!inner.converged()) return {std::nullopt, budget};
        Nat v = *inner.value;
        if (!st->in_X(n) || !st->in_X(v)) return {std::nullopt, budget};
        if (!st->less(n, v)) return {std::nullopt, budget};
        Nat pn = st->position(n), pv = st->position(v);
        // the order-least witness strictly between n and v sits right above n
        Nat cost = inner.steps_used + (pv - pn);  // priced as the scan it stands for
        if (cost > budget) return {std::nullopt, budget};
        if (pv == pn + 1) return {std::nullopt, budget};  // nothing between: diverge
        return {st->chain[pn + 1], cost};
      });
  return power::make_element(ctx, rep, "psi<" + phi.display + ">");
}

}  // namespace cpw::avoidsucc
