#include "cpw/structures.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace cpw::structures {

// --- forward-witness rank table ---------------------------------------------

namespace {

class FTable {
 public:
  Nat rank(Nat i, Nat j) {
    std::lock_guard<std::mutex> lock(mu_);
    Nat code = pcf::pair(i / 2, j / 2);
    while (next_code_ <= code) grow();
    return rank_of_.at(code);
  }

  std::optional<std::pair<Nat, Nat>> pair_of(Nat rank) {
    std::lock_guard<std::mutex> lock(mu_);
    while (by_rank_.size() <= rank) grow();
    return by_rank_[rank];
  }

 private:
  void grow() {
    auto [a, b] = pcf::unpair(next_code_);
    if (a < b) {
      rank_of_[next_code_] = by_rank_.size();
      by_rank_.emplace_back(2 * a, 2 * b);
    }
    ++next_code_;
  }

  std::mutex mu_;
  Nat next_code_ = 0;
  std::map<Nat, Nat> rank_of_;
  std::vector<std::pair<Nat, Nat>> by_rank_;
};

FTable& f_table() {
  static FTable t;
  return t;
}

}  // namespace

Nat f_value(Nat i, Nat j) {
  if (!in_S(i) || !in_S(j) || i >= j)
    throw std::invalid_argument("f_value: needs even i < j");
  return 4 * f_table().rank(i, j) + 1;
}

std::optional<std::pair<Nat, Nat>> f_inverse(Nat w) {
  if (!in_F(w)) return std::nullopt;
  return f_table().pair_of((w - 1) / 4);
}

// --- structure construction --------------------------------------------------

std::optional<Nat> MAStructure::b_value(Nat from, Nat to, Nat at_stage) const {
  auto it = b_rank_of.find({from, to});
  if (it == b_rank_of.end()) return std::nullopt;
  if (b_by_rank[it->second].stage > at_stage) return std::nullopt;
  return 4 * it->second + 3;
}

std::optional<std::pair<Nat, Nat>> MAStructure::b_inverse(Nat w, Nat at_stage) const {
  if (!in_B(w)) return std::nullopt;
  Nat rank = (w - 3) / 4;
  if (rank >= b_by_rank.size()) return std::nullopt;
  const BEntry& e = b_by_rank[rank];
  if (e.stage > at_stage) return std::nullopt;
  return std::make_pair(e.from, e.to);
}

namespace {

void replay_enumeration(MAStructure& m) {
  for (Nat s = 1; s <= m.a1_enum.size(); ++s) {
    Nat k = m.a1_enum[s - 1];
    // arrows k -> i below, j -> k above (capped), in Cantor order of codes
    std::vector<std::pair<Nat, Nat>> fresh;
    for (Nat i = 0; i < k; i += 2) fresh.emplace_back(k, i);
    for (Nat j = k + 2; j <= m.window_limit; j += 2) fresh.emplace_back(j, k);
    std::sort(fresh.begin(), fresh.end(), [](auto a, auto b) {
      return pcf::pair(a.first, a.second) < pcf::pair(b.first, b.second);
    });
    for (auto [from, to] : fresh) {
      if (m.b_rank_of.count({from, to})) continue;  // partner enumerated earlier
      m.b_rank_of[{from, to}] = m.b_by_rank.size();
      m.b_by_rank.push_back({from, to, s});
    }
  }
  m.stage = m.a1_enum.size();
}

}  // namespace

MAStructure make_computable_instance(std::function<bool(Nat)> keep_even, Nat stages,
                                     Nat window_limit, std::string name) {
  MAStructure m;
  m.name = std::move(name);
  m.window_limit = window_limit;
  for (Nat n = 0; m.a1_enum.size() < stages; n += 2)
    if (!keep_even(n)) m.a1_enum.push_back(n);
  m.in_A = [keep_even](Nat n) -> std::optional<bool> {
    return in_S(n) && keep_even(n);
  };
  replay_enumeration(m);
  return m;
}

MAStructure make_d_instance(Nat stages, Nat window_limit) {
  return make_computable_instance([](Nat n) { return n % 4 == 0; }, stages, window_limit,
                                  "M_D");
}

MAStructure make_c_instance(const cohesive::MaximalSetApprox& approx, Nat window_limit) {
  MAStructure m;
  m.name = "M_C";
  m.window_limit = window_limit;
  for (Nat x : approx.enumeration) m.a1_enum.push_back(2 * x);
  // membership decided relative to the approximation
  m.in_A = [members = approx.members](Nat n) -> std::optional<bool> {
    if (!in_S(n)) return false;
    return !members.count(n / 2);
  };
  replay_enumeration(m);
  return m;
}

// --- relation and formulas ----------------------------------------------------

bool p_holds(const MAStructure& m, Nat x, Nat z, Nat y, Nat stage) {
  if (!in_S(x) || !in_S(y) || x == y) return false;
  if (x < y) return z == f_value(x, y);
  if (!in_B(z)) return false;
  return m.b_inverse(z, stage) == std::make_pair(x, y);
}

bool arrow_present(const MAStructure& m, Nat x, Nat y, Nat stage) {
  if (!in_S(x) || !in_S(y) || x == y) return false;
  if (x < y) return true;
  return m.b_value(x, y, stage).has_value();
}

bool phi_base(const MAStructure& m, Nat x, Nat y, Nat stage) {
  return arrow_present(m, x, y, stage) && !arrow_present(m, y, x, stage);
}

bool theta_base(const MAStructure& m, Nat x, Nat stage, Nat t_bound) {
  for (Nat t = 0; t <= t_bound; t += 2)
    if (t != x && (phi_base(m, x, t, stage) || phi_base(m, t, x, stage))) return true;
  return false;
}

// --- fact checks --------------------------------------------------------------

FactsReport check_facts_1_to_4(const MAStructure& m, Nat bound, Nat stage) {
  FactsReport r;
  auto tag = [](Nat x, Nat y) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  };

  // (1) each witness belongs to at most one ordered pair
  std::map<Nat, std::pair<Nat, Nat>> owner;
  for (Nat x = 0; x <= bound; x += 2)
    for (Nat y = 0; y <= bound; y += 2) {
      if (x == y) continue;
      std::optional<Nat> w;
      if (x < y)
        w = f_value(x, y);
      else
        w = m.b_value(x, y, stage);
      if (!w) continue;
      auto [it, fresh] = owner.emplace(*w, std::make_pair(x, y));
      if (!fresh)
        r.fact1.push_back("witness " + std::to_string(*w) + " shared by " +
                          tag(it->second.first, it->second.second) + " and " + tag(x, y));
      ++r.triples_checked;
    }

  // (2) excluded elements are doubly connected to every stem in reach
  Nat reach = std::min(bound, m.window_limit);
  for (Nat s = 1; s <= std::min<Nat>(stage, m.a1_enum.size()); ++s) {
    Nat x = m.a1_enum[s - 1];
    if (x > bound) continue;
    for (Nat y = 0; y <= reach; y += 2) {
      if (y == x) continue;
      Nat hi = std::max(x, y), lo = std::min(x, y);
      if (!m.b_value(hi, lo, stage))
        r.fact2.push_back("no backward arrow " + std::to_string(hi) + "->" +
                          std::to_string(lo) + " for excluded " + std::to_string(x));
    }
  }

  // (3) on kept elements the arrow relation is the natural order
  for (Nat x = 0; x <= bound; x += 2)
    for (Nat y = 0; y <= bound; y += 2) {
      if (x == y) continue;
      if (m.in_A(x) != std::optional<bool>(true) || m.in_A(y) != std::optional<bool>(true))
        continue;
      if (arrow_present(m, x, y, stage) != (x < y))
        r.fact3.push_back("order mismatch at " + tag(x, y));
    }

  // (4) p_holds against the generative tables, plus perturbed witnesses
  for (Nat x = 0; x <= bound; x += 2)
    for (Nat y = 0; y <= bound; y += 2) {
      if (x == y) continue;
      std::optional<Nat> w = x < y ? std::optional<Nat>(f_value(x, y))
                                   : m.b_value(x, y, stage);
      if (!w) continue;
      if (!p_holds(m, x, *w, y, stage))
        r.fact4.push_back("table witness rejected at " + tag(x, y));
      if (p_holds(m, x, *w + 4, y, stage))
        r.fact4.push_back("shifted witness accepted at " + tag(x, y));
      if (p_holds(m, x, *w, y + 2, stage) && y + 2 != x)
        r.fact4.push_back("witness reused for wrong target at " + tag(x, y));
    }
  return r;
}

// --- isomorphism transport ----------------------------------------------------

IsoReport iso_MD_ME(const MAStructure& md, const MAStructure& me, Nat bound) {
  IsoReport r;
  auto kept = [](const MAStructure& m, Nat limit) {
    std::vector<Nat> out;
    for (Nat x = 0; x <= limit; x += 2)
      if (m.in_A(x) == std::optional<bool>(true)) out.push_back(x);
    return out;
  };

  std::map<Nat, Nat> sigma;
  std::vector<Nat> kept_d = kept(md, bound);
  std::vector<Nat> kept_e = kept(me, std::max(bound * 4, md.window_limit));
  if (kept_e.size() < kept_d.size()) {
    r.unclosed.push_back("image instance has too few kept stems in reach");
    kept_d.resize(kept_e.size());
  }
  for (std::size_t i = 0; i < kept_d.size(); ++i) sigma[kept_d[i]] = kept_e[i];

  // excluded parts matched in enumeration order
  std::size_t avail = me.a1_enum.size();
  for (std::size_t s = 0; s < md.a1_enum.size(); ++s) {
    if (md.a1_enum[s] > bound) continue;
    if (s >= avail) {
      r.unclosed.push_back("image enumeration shorter than source at stage " +
                           std::to_string(s + 1));
      continue;
    }
    sigma[md.a1_enum[s]] = me.a1_enum[s];
  }

  for (auto [x, u] : sigma) r.stem_map.emplace_back(x, u);

  for (auto [x, u] : sigma)
    for (auto [y, v] : sigma) {
      if (x == y) continue;
      if (std::max(u, v) > me.window_limit || std::max(x, y) > md.window_limit) {
        r.unclosed.push_back("pair (" + std::to_string(x) + "," + std::to_string(y) +
                             ") maps outside the image window");
        continue;
      }
      bool src = arrow_present(md, x, y, md.stage);
      bool dst = arrow_present(me, u, v, me.stage);
      if (src != dst) {
        r.violations.push_back("arrow " + std::to_string(x) + "->" + std::to_string(y) +
                               " not preserved");
        continue;
      }
      // transported witness must be the image arrow's own witness
      if (src && x < y && u < v && !p_holds(me, u, f_value(u, v), v, me.stage)) {
        r.violations.push_back("forward witness transport failed at " + std::to_string(x) +
                               "->" + std::to_string(y));
        continue;
      }
      ++r.triples_preserved;
    }
  return r;
}

// --- power experiments --------------------------------------------------------

namespace {

std::optional<Nat> value_of(const pcf::Machine& machine, Nat rep, Nat i, const Horizon& h) {
  return machine.eval(rep, i, h.step_budget).value;
}

Truth any_true(const std::vector<Truth>& vs) {
  bool unknown = false;
  for (Truth t : vs) {
    if (t == Truth::True) return Truth::True;
    if (t == Truth::Unknown) unknown = true;
  }
  return unknown ? Truth::Unknown : Truth::False;
}

}  // namespace

Verdict phi_power(const MAStructure& m, const cohesive::CohesiveView& view, const Horizon& h,
                  const pcf::Machine& machine, Nat rep1, Nat rep2) {
  auto pred = [&](Nat i) -> std::optional<bool> {
    auto v1 = value_of(machine, rep1, i, h);
    auto v2 = value_of(machine, rep2, i, h);
    if (!v1 || !v2) return std::nullopt;
    return phi_base(m, *v1, *v2, m.stage);
  };
  return cohesive::almost_inclusion(pred, view, h);
}

Nat register_next_in_A(MAStructure m, pcf::Machine& machine) {
  Nat cap = m.window_limit;
  return machine.register_native(
      "next-in-A:" + m.name,
      [m = std::move(m), cap](Nat x, Nat budget) -> pcf::NativeResult {
        Nat cost = 1;
        for (Nat y = x + 2 - (x % 2); y <= cap; y += 2) {
          ++cost;
          if (cost > budget) return {std::nullopt, budget};
          if (m.in_A(y) == std::optional<bool>(true)) return {y, cost};
        }
        return {std::nullopt, budget};
      });
}

PsiReport psi_experiments(const MAStructure& m, bool d_instance,
                          const cohesive::CohesiveView& view, const Horizon& h,
                          pcf::Machine& machine,
                          const std::vector<std::pair<Nat, std::string>>& test_reps) {
  PsiReport report;
  report.d_instance = d_instance;

  // constant anchors: the first few kept stems
  for (Nat x = 0; x <= m.window_limit && report.constants.size() < 6; x += 2)
    if (m.in_A(x) == std::optional<bool>(true)) report.constants.push_back(x);
  std::vector<Nat> const_reps;
  for (Nat c : report.constants) const_reps.push_back(machine.build_constant(c));
  Nat id_rep = machine.build_identity();
  Nat g_rep = d_instance ? register_next_in_A(m, machine) : 0;

  auto eq_power = [&](Nat r1, Nat r2) {
    auto pred = [&](Nat i) -> std::optional<bool> {
      auto v1 = value_of(machine, r1, i, h);
      auto v2 = value_of(machine, r2, i, h);
      if (!v1 || !v2) return std::nullopt;
      return *v1 == *v2;
    };
    return cohesive::almost_inclusion(pred, view, h);
  };

  for (auto [rep, display] : test_reps) {
    PsiEntry entry;
    entry.display = display;

    std::vector<Truth> theta_bits;
    for (Nat cr : const_reps) {
      theta_bits.push_back(phi_power(m, view, h, machine, rep, cr).value);
      theta_bits.push_back(phi_power(m, view, h, machine, cr, rep).value);
    }
    entry.theta_positive = any_true(theta_bits);

    std::vector<Truth> eq_bits;
    for (Nat cr : const_reps) eq_bits.push_back(eq_power(rep, cr).value);
    eq_bits.push_back(eq_power(rep, id_rep).value);
    entry.eq_constant_or_id = any_true(eq_bits) == Truth::True;

    if (d_instance) {
      Nat gf = machine.build_compose(g_rep, rep);
      Verdict v = phi_power(m, view, h, machine, rep, gf);
      entry.greater_found = v.value;
      if (v.value == Truth::True) entry.greater_display = "g o " + display;
    } else {
      std::vector<Truth> bits;
      auto consider = [&](Nat other, const std::string& name) {
        Verdict v = phi_power(m, view, h, machine, rep, other);
        bits.push_back(v.value);
        if (v.value == Truth::True && entry.greater_display.empty())
          entry.greater_display = name;
      };
      for (std::size_t i = 0; i < const_reps.size(); ++i)
        consider(const_reps[i], "const:" + std::to_string(report.constants[i]));
      consider(id_rep, "id");
      for (auto [other, other_display] : test_reps)
        if (other != rep) consider(other, other_display);
      entry.greater_found = any_true(bits);
    }
    report.entries.push_back(std::move(entry));

    if (!d_instance) {
      LermanEntry probe;
      probe.display = display;
      auto in_a_pred = [&](Nat i) -> std::optional<bool> {
        auto v = value_of(machine, rep, i, h);
        if (!v) return std::nullopt;
        return m.in_A(*v);
      };
      probe.maps_into_A = cohesive::almost_inclusion(in_a_pred, view, h).value;

      std::set<Nat> distinct;
      Nat id_run = 0;
      bool id_alive = true;
      std::vector<Nat> pts;
      for (Nat i : view.included)
        if (i >= h.cut) pts.push_back(i);
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        auto v = value_of(machine, rep, *it, h);
        if (!v) {
          id_alive = false;
          continue;
        }
        distinct.insert(*v);
        if (id_alive && *v == *it)
          ++id_run;
        else
          id_alive = false;
      }
      probe.infinite_range_evidence = distinct.size() >= h.tail_window;
      probe.tail_identity = id_run >= h.tail_window;
      report.lerman.push_back(std::move(probe));
    }
  }
  return report;
}

}  // namespace cpw::structures
