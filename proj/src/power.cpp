#include "cpw/power.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpw::power {

namespace {

std::vector<Nat> tail_points(const PowerContext& ctx) {
  std::vector<Nat> pts;
  for (Nat n : ctx.view.included)
    if (n >= ctx.horizon.cut && n <= ctx.horizon.window_bound) pts.push_back(n);
  return pts;
}

/// Trailing-run vote over the included tail.  classify returns a small label
/// or nullopt for an undecided point (which breaks the run).  Returns the
/// winning label when the trailing run reaches tail_window, else nullopt;
/// tally counts every decided point scanned.
std::optional<int> tail_vote(const PowerContext& ctx,
                             const std::function<std::optional<int>(Nat)>& classify,
                             std::map<int, Nat>& tally) {
  std::vector<Nat> pts = tail_points(ctx);
  std::optional<int> run_label;
  Nat run = 0;
  bool run_alive = true;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    std::optional<int> c = classify(*it);
    if (c) ++tally[*c];
    if (!run_alive) continue;
    if (!c) {
      run_alive = false;
      continue;
    }
    if (!run_label) run_label = *c;
    if (*c != *run_label) {
      run_alive = false;
      continue;
    }
    ++run;
  }
  if (run_label && run >= ctx.horizon.tail_window) return run_label;
  return std::nullopt;
}

}  // namespace

PowerContext make_context(orders::CompOrder base, cohesive::CohesiveView view, Horizon h,
                          std::shared_ptr<pcf::Machine> machine) {
  if (view.window_bound != h.window_bound)
    throw std::invalid_argument("power context: view and horizon disagree on window bound");
  if (!machine) throw std::invalid_argument("power context: missing machine");
  return {std::move(base), std::move(view), h, std::move(machine)};
}

std::optional<Nat> value_at(const PowerContext& ctx, const PowerElement& a, Nat n) {
  return ctx.machine->eval(a.rep, n, ctx.horizon.step_budget).value;
}

PowerElement make_element(PowerContext& ctx, Nat rep, std::string display) {
  PowerElement e;
  e.rep = rep;
  e.display = display.empty() ? "[" + std::to_string(rep) + "]" : std::move(display);
  auto converges = [&ctx, rep](Nat n) -> std::optional<bool> {
    return ctx.machine->eval(rep, n, ctx.horizon.step_budget).converged();
  };
  e.domain_status = cohesive::almost_inclusion(converges, ctx.view, ctx.horizon);
  return e;
}

PowerElement canonical_embed(PowerContext& ctx, Nat a) {
  if (!ctx.base.in_domain(a))
    throw orders::DomainError(ctx.base.name + ": cannot embed code " + std::to_string(a));
  return make_element(ctx, ctx.machine->build_constant(a), "const:" + std::to_string(a));
}

PowerElement id_element(PowerContext& ctx) {
  return make_element(ctx, ctx.machine->build_identity(), "id");
}

PowerElement double_id_element(PowerContext& ctx) {
  return make_element(ctx, ctx.machine->encode(pcf::doubling_program()), "2id");
}

PowerElement term_apply(PowerContext& ctx, Nat g, const PowerElement& a) {
  return make_element(ctx, ctx.machine->build_compose(g, a.rep),
                      "apply:" + std::to_string(g) + ":" + a.display);
}

namespace {

void require_usable(const PowerElement& a) {
  if (a.domain_status.value == Truth::False)
    throw std::invalid_argument(a.display + ": view almost-avoids the element's domain");
}

}  // namespace

Verdict eq_c(const PowerContext& ctx, const PowerElement& a, const PowerElement& b) {
  require_usable(a);
  require_usable(b);
  auto pred = [&](Nat n) -> std::optional<bool> {
    auto va = value_at(ctx, a, n), vb = value_at(ctx, b, n);
    if (!va || !vb) return std::nullopt;
    return *va == *vb;
  };
  return cohesive::almost_inclusion(pred, ctx.view, ctx.horizon);
}

Verdict less_c(const PowerContext& ctx, const PowerElement& a, const PowerElement& b) {
  require_usable(a);
  require_usable(b);
  auto pred = [&](Nat n) -> std::optional<bool> {
    auto va = value_at(ctx, a, n), vb = value_at(ctx, b, n);
    if (!va || !vb) return std::nullopt;
    if (!ctx.base.in_domain(*va) || !ctx.base.in_domain(*vb)) return false;
    return ctx.base.less(*va, *vb);
  };
  return cohesive::almost_inclusion(pred, ctx.view, ctx.horizon);
}

// --- successor construction -------------------------------------------------

std::string to_string(SuccCase c) {
  switch (c) {
    case SuccCase::Odd:
      return "odd";
    case SuccCase::EvenInRange:
      return "even-in-range";
    case SuccCase::EvenOutOfRange:
      return "even-out-of-range";
    case SuccCase::Mixed:
      return "mixed";
  }
  return "?";
}

namespace {

// search k <= cap with f(k) = a; stops early when f gives out
std::optional<Nat> range_search(const orders::Injection& f, Nat a, Nat cap) {
  for (Nat k = 0; k <= cap; ++k) {
    std::optional<Nat> v = f(k);
    if (!v) return std::nullopt;
    if (*v == a) return k;
  }
  return std::nullopt;
}

struct SuccRules {
  bool mirror;  // successor when false, predecessor when true
};

// the pointwise rule shared by all cases; diverges (nullopt) when the input
// parity does not match `odd_input`, or on 0 in the mirror construction
std::optional<Nat> step_value(const orders::Injection& f, Nat v, bool mirror, Nat cap) {
  if (v % 2 == 1) {
    Nat k = v / 2;
    std::optional<Nat> a = f(k);
    if (!a) return std::nullopt;
    return mirror ? 2 * *a : 2 * *a + 2;
  }
  Nat a = v / 2;
  if (mirror) {
    if (a == 0) return std::nullopt;  // least element has no predecessor
    if (auto k = range_search(f, a - 1, cap)) return 2 * *k + 1;
    return 2 * (a - 1);
  }
  if (auto k = range_search(f, a, cap)) return 2 * *k + 1;
  return 2 * a + 2;
}

SuccResult build_step(PowerContext& ctx, const orders::Injection& f, const PowerElement& psi,
                      bool mirror) {
  require_usable(psi);
  // range searches f(k) = a for k up to the window bound; linear in the horizon
  const Nat cap = ctx.horizon.window_bound;

  std::map<int, Nat> raw_tally;
  auto classify = [&](Nat n) -> std::optional<int> {
    auto v = value_at(ctx, psi, n);
    if (!v) return std::nullopt;
    if (*v % 2 == 1) return 0;
    Nat a = *v / 2;
    Nat probe = mirror ? (a == 0 ? a : a - 1) : a;
    if (mirror && a == 0) return 2;  // no predecessor to search for
    return range_search(f, probe, cap) ? 1 : 2;
  };
  std::optional<int> winner = tail_vote(ctx, classify, raw_tally);

  SuccResult out;
  out.tag = !winner              ? SuccCase::Mixed
            : *winner == 0       ? SuccCase::Odd
            : *winner == 1       ? SuccCase::EvenInRange
                                 : SuccCase::EvenOutOfRange;
  for (auto [label, count] : raw_tally)
    out.tally[to_string(label == 0   ? SuccCase::Odd
                        : label == 1 ? SuccCase::EvenInRange
                                     : SuccCase::EvenOutOfRange)] = count;

  // case-restricted native: outside the detected case's parity it diverges;
  // the mixed fallback dispatches on the point's own parity
  pcf::Machine* mp = ctx.machine.get();
  Nat rep = psi.rep;
  SuccCase tag = out.tag;
  Nat idx = ctx.machine->register_native(
      std::string(mirror ? "pred" : "succ") + ":" + to_string(tag) + ":" + psi.display,
      [mp, rep, f, mirror, cap, tag](Nat n, Nat budget) -> pcf::NativeResult {
        pcf::EvalOutcome in = mp->eval(rep, n, budget);
        if (!in.converged()) return {std::nullopt, budget};
        Nat v = *in.value;
        bool v_odd = v % 2 == 1;
        if (tag == SuccCase::Odd && !v_odd) return {std::nullopt, budget};
        if ((tag == SuccCase::EvenInRange || tag == SuccCase::EvenOutOfRange) && v_odd)
          return {std::nullopt, budget};
        std::optional<Nat> res = step_value(f, v, mirror, cap);
        if (!res) return {std::nullopt, budget};
        return {res, in.steps_used + 1};
      });
  out.elem = make_element(ctx, idx, (mirror ? "pred(" : "succ(") + psi.display + ")");

  // stage-relative adjacency check: no scanned code strictly between
  for (Nat n : tail_points(ctx)) {
    auto v = value_at(ctx, psi, n);
    auto s = value_at(ctx, out.elem, n);
    if (!v || !s) continue;
    Nat lo = mirror ? *s : *v, hi = mirror ? *v : *s;
    if (!ctx.base.less(lo, hi)) {
      out.postcondition_ok = false;
      break;
    }
    for (Nat y = 0; y <= ctx.horizon.window_bound; ++y)
      if (ctx.base.in_domain(y) && ctx.base.less(lo, y) && ctx.base.less(y, hi)) {
        out.postcondition_ok = false;
        break;
      }
    if (!out.postcondition_ok) break;
  }
  return out;
}

}  // namespace

SuccResult thm4_succ(PowerContext& ctx, const orders::Injection& f, const PowerElement& psi) {
  return build_step(ctx, f, psi, false);
}

SuccResult thm4_pred(PowerContext& ctx, const orders::Injection& f, const PowerElement& psi) {
  return build_step(ctx, f, psi, true);
}

// --- blocks, midpoint, witness ----------------------------------------------

Verdict blocks_far_apart(const PowerContext& ctx, const PowerElement& a,
                         const PowerElement& b) {
  require_usable(a);
  require_usable(b);
  Verdict v;
  v.horizon = ctx.horizon;

  std::vector<std::pair<Nat, Nat>> sizes;  // (point, interval size)
  for (Nat n : tail_points(ctx)) {
    auto va = value_at(ctx, a, n), vb = value_at(ctx, b, n);
    if (!va || !vb) continue;
    if (!ctx.base.in_domain(*va) || !ctx.base.in_domain(*vb)) continue;
    if (!ctx.base.less(*va, *vb)) continue;
    sizes.emplace_back(n, orders::interval_card_bounded(ctx.base, *va, *vb,
                                                        ctx.horizon.window_bound));
  }
  if (sizes.size() < ctx.horizon.tail_window) return v;  // Unknown

  Nat exceeding = 0;
  std::optional<Nat> last_exceeding;
  for (auto [n, size] : sizes)
    if (size > n / 4) {
      ++exceeding;
      last_exceeding = n;
    }
  if (exceeding >= ctx.horizon.tail_window) {
    v.value = Truth::True;
    v.witness = last_exceeding;
    return v;
  }

  bool constant_tail = true;
  for (std::size_t i = sizes.size() - ctx.horizon.tail_window; i + 1 < sizes.size(); ++i)
    if (sizes[i].second != sizes[i + 1].second) constant_tail = false;
  if (constant_tail) {
    v.value = Truth::False;
    v.witness = sizes.back().first;
  }
  return v;
}

MidpointResult midpoint_theta(PowerContext& ctx, const PowerElement& psi,
                              const PowerElement& phi) {
  require_usable(psi);
  require_usable(phi);
  pcf::Machine* mp = ctx.machine.get();
  Nat r1 = psi.rep, r2 = phi.rep;
  Nat idx = ctx.machine->register_native(
      "theta:" + psi.display + ":" + phi.display,
      [mp, r1, r2](Nat n, Nat budget) -> pcf::NativeResult {
        pcf::EvalOutcome a = mp->eval(r1, n, budget);
        if (!a.converged()) return {std::nullopt, budget};
        Nat rest = budget - std::min(a.steps_used, budget);
        pcf::EvalOutcome b = mp->eval(r2, n, rest);
        if (!b.converged()) return {std::nullopt, budget};
        Nat m = (*a.value + *b.value) / 2;
        if (m % 2 == 1) ++m;
        return {m, a.steps_used + b.steps_used + 1};
      });

  MidpointResult out;
  out.elem = make_element(ctx, idx, "theta(" + psi.display + "," + phi.display + ")");
  for (Nat n : tail_points(ctx)) {
    auto v1 = value_at(ctx, psi, n), v2 = value_at(ctx, phi, n);
    auto t = value_at(ctx, out.elem, n);
    if (!v1 || !v2 || !t) continue;
    if (*t % 2 == 1) out.parity_ok = false;
    if (*v2 >= *v1 + 4 &&
        !(ctx.base.less(*v1, *t) && ctx.base.less(*t, *v2)))
      out.between_ok = false;
  }
  return out;
}

PowerElement unbounded_witness(PowerContext& ctx, const PowerElement& psi) {
  require_usable(psi);
  // eventually constant on the view?
  std::vector<Nat> pts = tail_points(ctx);
  Nat run = 0;
  std::optional<Nat> run_value;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    auto v = value_at(ctx, psi, *it);
    if (!v) break;
    if (!run_value) run_value = *v;
    if (*v != *run_value) break;
    ++run;
  }
  if (run >= ctx.horizon.tail_window) return double_id_element(ctx);
  Nat doubling = ctx.machine->encode(pcf::doubling_program());
  PowerElement out = term_apply(ctx, doubling, psi);
  out.display = "2*" + psi.display;
  return out;
}

// --- isomorphism maps -------------------------------------------------------

SumIsoResult sum_iso(PowerContext& ctx, const PowerElement& a) {
  require_usable(a);
  std::map<int, Nat> raw_tally;
  auto classify = [&](Nat n) -> std::optional<int> {
    auto v = value_at(ctx, a, n);
    if (!v) return std::nullopt;
    return pcf::unpair(*v).first == 0 ? 0 : 1;
  };
  std::optional<int> winner = tail_vote(ctx, classify, raw_tally);

  SumIsoResult out;
  out.side = !winner ? Side::Unknown : (*winner == 0 ? Side::Left : Side::Right);
  out.tally["left"] = raw_tally.count(0) ? raw_tally[0] : 0;
  out.tally["right"] = raw_tally.count(1) ? raw_tally[1] : 0;

  pcf::Machine* mp = ctx.machine.get();
  Nat rep = a.rep;
  Nat idx = ctx.machine->register_native(
      "pi2:" + a.display, [mp, rep](Nat n, Nat budget) -> pcf::NativeResult {
        pcf::EvalOutcome r = mp->eval(rep, n, budget);
        if (!r.converged()) return {std::nullopt, budget};
        return {pcf::unpair(*r.value).second, r.steps_used + 1};
      });
  out.elem = make_element(ctx, idx, "pi2(" + a.display + ")");
  return out;
}

std::pair<PowerElement, PowerElement> prod_iso(PowerContext& ctx, const PowerElement& a) {
  require_usable(a);
  pcf::Machine* mp = ctx.machine.get();
  Nat rep = a.rep;
  Nat i1 = ctx.machine->register_native(
      "pi1:" + a.display, [mp, rep](Nat n, Nat budget) -> pcf::NativeResult {
        pcf::EvalOutcome r = mp->eval(rep, n, budget);
        if (!r.converged()) return {std::nullopt, budget};
        return {pcf::unpair(*r.value).first, r.steps_used + 1};
      });
  Nat i2 = ctx.machine->register_native(
      "pi2:" + a.display, [mp, rep](Nat n, Nat budget) -> pcf::NativeResult {
        pcf::EvalOutcome r = mp->eval(rep, n, budget);
        if (!r.converged()) return {std::nullopt, budget};
        return {pcf::unpair(*r.value).second, r.steps_used + 1};
      });
  return {make_element(ctx, i1, "pi1(" + a.display + ")"),
          make_element(ctx, i2, "pi2(" + a.display + ")")};
}

PowerElement rev_iso(const PowerElement& a) { return a; }

// --- transfer ----------------------------------------------------------------

formulas::BaseModel order_model(const orders::CompOrder& L) {
  formulas::BaseModel m;
  m.name = L.name;
  m.in_domain = L.in_domain;
  m.less = [less = L.less, dom = L.in_domain](Nat a, Nat b) -> std::optional<bool> {
    if (!dom(a) || !dom(b)) return false;
    return less(a, b);
  };
  return m;
}

Verdict eval_bc1(const PowerContext& ctx, const formulas::BaseModel& base_model,
                 const formulas::FormulaPtr& phi,
                 const std::map<std::string, PowerElement>& assignment,
                 const formulas::EvalOptions& point_opts) {
  formulas::Classification c = formulas::classify(phi);
  bool low = c.level == formulas::Level::QuantifierFree || c.level == formulas::Level::BC1 ||
             ((c.level == formulas::Level::Sigma || c.level == formulas::Level::Pi) && c.n <= 1);
  if (!low)
    throw std::invalid_argument("eval_bc1: formula classifies as " + formulas::to_string(c) +
                                ", beyond BC(Sigma1,Pi1)");
  for (const auto& [var, elem] : assignment) require_usable(elem);

  auto pred = [&](Nat n) -> std::optional<bool> {
    formulas::Assignment asg;
    for (const auto& [var, elem] : assignment) {
      auto v = value_at(ctx, elem, n);
      if (!v) return std::nullopt;
      asg[var] = *v;
    }
    Verdict point = formulas::eval_base(base_model, phi, asg, point_opts);
    if (point.value == Truth::Unknown) return std::nullopt;
    return point.value == Truth::True;
  };
  return cohesive::almost_inclusion(pred, ctx.view, ctx.horizon);
}

}  // namespace cpw::power
