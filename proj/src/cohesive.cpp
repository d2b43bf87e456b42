#include "cpw/cohesive.hpp"

#include <algorithm>
#include <map>

namespace cpw::cohesive {

CohesiveView doubled(const CohesiveView& v) {
  CohesiveView out;
  out.window_bound = 2 * v.window_bound + 1;
  for (Nat c : v.included) out.included.push_back(2 * c);
  std::set<Nat> in(out.included.begin(), out.included.end());
  for (Nat n = 0; n <= out.window_bound; ++n)
    if (!in.count(n)) out.excluded.push_back(n);
  return out;
}

Verdict almost_inclusion(const TriPred& pred, const CohesiveView& view, const Horizon& h) {
  Verdict v;
  v.horizon = h;
  std::vector<Nat> xs;
  for (Nat x : view.included)
    if (x >= h.cut && x <= h.window_bound) xs.push_back(x);
  if (xs.size() < h.tail_window) return v;  // not enough tail to decide

  // length of the trailing run on which pred is constantly true (resp. false)
  Nat run_true = 0, run_false = 0;
  std::optional<Nat> first_true, first_false;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    std::optional<bool> p = pred(*it);
    if (!p) break;
    if (*p) {
      if (run_false) break;
      ++run_true;
      first_true = *it;
    } else {
      if (run_true) break;
      ++run_false;
      first_false = *it;
    }
  }
  if (run_true >= h.tail_window) {
    v.value = Truth::True;
    v.witness = first_true;
  } else if (run_false >= h.tail_window) {
    v.value = Truth::False;
    v.witness = first_false;
  }
  return v;
}

// --- maximal set construction ---------------------------------------------

namespace {

// Memoized halting steps for the first `bits` indices; n is in W_{e,s} iff
// n <= s and phi_e(n) halts within s steps.
class HaltTable {
 public:
  HaltTable(const pcf::Machine& m, Nat budget, Nat bits)
      : machine_(m), budget_(budget), bits_(bits) {}

  // e-state word of position n at stage s, W_0 most significant
  std::uint32_t sig(Nat n, Nat s) {
    const std::vector<Nat>& steps = row(n);
    std::uint32_t w = 0;
    for (Nat e = 0; e < bits_; ++e)
      w = (w << 1) | ((n <= s && steps[e] <= s) ? 1u : 0u);
    return w;
  }

  bool in_w(Nat e, Nat n, Nat s) { return n <= s && row(n)[e] <= s; }

 private:
  const std::vector<Nat>& row(Nat n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) {
      std::vector<Nat> steps(bits_);
      for (Nat e = 0; e < bits_; ++e) {
        pcf::EvalOutcome out = machine_.eval(e, n, budget_);
        steps[e] = out.converged() ? out.steps_used : ~Nat{0};
      }
      it = cache_.emplace(n, std::move(steps)).first;
    }
    return it->second;
  }

  const pcf::Machine& machine_;
  Nat budget_;
  Nat bits_;
  std::map<Nat, std::vector<Nat>> cache_;
};

}  // namespace

MaximalSetApprox build_maximal(Nat stages, const pcf::Machine& machine, MaximalConfig cfg) {
  MaximalSetApprox a;
  a.stages = stages;
  const Nat bits = std::min<Nat>(cfg.estate_bound, 32);
  HaltTable halts(machine, stages, bits);

  auto extend = [&](Nat upto) {
    while (a.markers.size() < upto) {
      Nat next = a.markers.empty() ? 0 : a.markers.back() + 1;
      a.markers.push_back(next);
    }
  };

  for (Nat s = 1; s <= stages; ++s) {
    extend(s);

    // full e-state of each marker as a bits-wide word, W_0 most significant
    std::vector<std::uint32_t> sig(a.markers.size());
    for (std::size_t i = 0; i < a.markers.size(); ++i) sig[i] = halts.sig(a.markers[i], s);
    // suffix maxima; shifting is monotone, so a prefix e-state comparison is
    // a comparison of shifted full states
    std::vector<std::uint32_t> smax(sig.size());
    for (std::size_t i = sig.size(); i-- > 0;)
      smax[i] = std::max(sig[i], i + 1 < sig.size() ? smax[i + 1] : 0u);

    for (std::size_t i = 0; i + 1 < a.markers.size(); ++i) {
      Nat prefix = std::min<Nat>(i + 1, bits);
      unsigned shift = static_cast<unsigned>(bits - prefix);
      if ((smax[i + 1] >> shift) > (sig[i] >> shift)) {
        // move marker i to the least later position with the better prefix state
        std::size_t j = i + 1;
        while ((sig[j] >> shift) != (smax[i + 1] >> shift)) ++j;
        a.moved_log.push_back({s, static_cast<Nat>(i), a.markers[i], a.markers[j]});
        for (std::size_t t = i; t < j; ++t) {
          a.enumeration.push_back(a.markers[t]);
          a.members.insert(a.markers[t]);
        }
        a.markers.erase(a.markers.begin() + static_cast<std::ptrdiff_t>(i),
                        a.markers.begin() + static_cast<std::ptrdiff_t>(j));
        break;  // one movement per stage
      }
    }

    extend(s);
    a.members_count_at_stage.push_back(a.members.size());
  }
  return a;
}

CohesiveView view_of(const MaximalSetApprox& approx, Nat window_bound) {
  CohesiveView v;
  v.window_bound = window_bound;
  for (Nat n = 0; n <= window_bound; ++n)
    (approx.in_members(n) ? v.excluded : v.included).push_back(n);
  return v;
}

std::vector<Nat> ascending_fresh(const std::vector<Nat>& enumeration) {
  std::vector<Nat> out;
  Nat best = 0;
  bool any = false;
  for (Nat x : enumeration) {
    if (!any || x > best) {
      out.push_back(x);
      best = x;
      any = true;
    }
  }
  return out;
}

std::vector<Nat> extract_R(const MaximalSetApprox& approx) {
  return ascending_fresh(approx.enumeration);
}

std::vector<CohesivenessEntry> cohesiveness_report(const MaximalSetApprox& approx,
                                                   const pcf::Machine& machine, Nat first_k_ce,
                                                   const Horizon& h) {
  CohesiveView view = view_of(approx, h.window_bound);
  std::vector<CohesivenessEntry> out;
  for (Nat e = 0; e < first_k_ce; ++e) {
    // membership in W_e at the horizon's budget is decidable per point
    auto member = [&machine, e, &h](Nat n) -> std::optional<bool> {
      return machine.eval(e, n, h.step_budget).converged();
    };
    auto non_member = [member](Nat n) -> std::optional<bool> {
      auto r = member(n);
      return r ? std::optional<bool>(!*r) : std::nullopt;
    };
    out.push_back({e, almost_inclusion(member, view, h), almost_inclusion(non_member, view, h)});
  }
  return out;
}

}  // namespace cpw::cohesive
