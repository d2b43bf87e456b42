#include "cpw/orders.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

namespace cpw::orders {

namespace {

void require_domain(const CompOrder& L, Nat x) {
  if (!L.in_domain(x)) throw DomainError(L.name + ": code " + std::to_string(x) + " not in domain");
}

}  // namespace

CompOrder std_nat() {
  return {"nat", [](Nat) { return true; }, [](Nat a, Nat b) { return a < b; }};
}

long long int_value(Nat code) {
  if (code % 2 == 0) return static_cast<long long>(code / 2);
  return -static_cast<long long>(code / 2) - 1;
}

Nat int_code(long long v) {
  if (v >= 0) return 2 * static_cast<Nat>(v);
  return 2 * static_cast<Nat>(-v - 1) + 1;
}

CompOrder std_int() {
  return {"int", [](Nat) { return true; },
          [](Nat a, Nat b) { return int_value(a) < int_value(b); }};
}

// --- rationals -------------------------------------------------------------

namespace {

// positive reduced fractions ordered by (p+q, p)
class RatTable {
 public:
  std::pair<long long, long long> positive(Nat idx) {
    std::lock_guard<std::mutex> lock(mu_);
    while (fracs_.size() <= idx) grow();
    return fracs_[idx];
  }

  std::optional<Nat> find_positive(long long p, long long q, Nat limit) {
    std::lock_guard<std::mutex> lock(mu_);
    while (true) {
      auto it = index_.find({p, q});
      if (it != index_.end()) return it->second;
      if (fracs_.size() >= limit) return std::nullopt;
      grow();
    }
  }

 private:
  void grow() {
    while (true) {
      ++next_p_;
      if (next_p_ >= next_w_) {
        ++next_w_;
        next_p_ = 1;
      }
      long long p = next_p_, q = next_w_ - next_p_;
      if (q >= 1 && std::gcd(p, q) == 1) {
        index_[{p, q}] = fracs_.size();
        fracs_.emplace_back(p, q);
        return;
      }
    }
  }

  std::mutex mu_;
  std::vector<std::pair<long long, long long>> fracs_;
  std::map<std::pair<long long, long long>, Nat> index_;
  long long next_w_ = 2;  // weight p+q currently being emitted
  long long next_p_ = 0;
};

RatTable& rat_table() {
  static RatTable t;
  return t;
}

}  // namespace

std::pair<long long, long long> rat_value(Nat code) {
  if (code == 0) return {0, 1};
  auto [p, q] = rat_table().positive((code - 1) / 2);
  if (code % 2 == 1) return {p, q};
  return {-p, q};
}

std::optional<Nat> rat_code(long long num, long long den, Nat search_limit) {
  if (den <= 0) return std::nullopt;
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) return 0;
  bool neg = num < 0;
  auto idx = rat_table().find_positive(neg ? -num : num, den, search_limit);
  if (!idx) return std::nullopt;
  return neg ? 2 * *idx + 2 : 2 * *idx + 1;
}

CompOrder std_rat() {
  return {"rat", [](Nat) { return true; }, [](Nat a, Nat b) {
            auto [pa, qa] = rat_value(a);
            auto [pb, qb] = rat_value(b);
            return pa * qb < pb * qa;  // cross-multiplication, q >= 1
          }};
}

// --- combinators -----------------------------------------------------------

CompOrder sum(CompOrder l0, CompOrder l1) {
  auto a = std::make_shared<CompOrder>(std::move(l0));
  auto b = std::make_shared<CompOrder>(std::move(l1));
  CompOrder out;
  out.name = "sum(" + a->name + "," + b->name + ")";
  out.in_domain = [a, b](Nat code) {
    auto [i, l] = pcf::unpair(code);
    if (i > 1) return false;
    return i == 0 ? a->in_domain(l) : b->in_domain(l);
  };
  out.less = [a, b, name = out.name](Nat x, Nat y) {
    auto [i, l] = pcf::unpair(x);
    auto [j, m] = pcf::unpair(y);
    if (i > 1 || j > 1) throw DomainError(name + ": bad summand tag");
    const CompOrder& ci = i == 0 ? *a : *b;
    const CompOrder& cj = j == 0 ? *a : *b;
    require_domain(ci, l);
    require_domain(cj, m);
    return i < j || (i == j && ci.less(l, m));
  };
  return out;
}

CompOrder lex(CompOrder l0, CompOrder l1) {
  auto a = std::make_shared<CompOrder>(std::move(l0));
  auto b = std::make_shared<CompOrder>(std::move(l1));
  CompOrder out;
  out.name = "lex(" + a->name + "," + b->name + ")";
  out.in_domain = [a, b](Nat code) {
    auto [k, m] = pcf::unpair(code);
    return a->in_domain(k) && b->in_domain(m);
  };
  out.less = [a, b](Nat x, Nat y) {
    auto [k, m] = pcf::unpair(x);
    auto [l, n] = pcf::unpair(y);
    require_domain(*a, k);
    require_domain(*a, l);
    require_domain(*b, m);
    require_domain(*b, n);
    if (a->less(k, l)) return true;
    if (a->less(l, k)) return false;
    return b->less(m, n);
  };
  return out;
}

CompOrder reverse(CompOrder l0) {
  auto a = std::make_shared<CompOrder>(std::move(l0));
  CompOrder out;
  out.name = "rev(" + a->name + ")";
  out.in_domain = [a](Nat code) { return a->in_domain(code); };
  out.less = [a](Nat x, Nat y) {
    require_domain(*a, x);
    require_domain(*a, y);
    return a->less(y, x);
  };
  return out;
}

CompOrder nat_plus_rat_times_int() {
  CompOrder out = sum(std_nat(), lex(std_rat(), std_int()));
  out.name = "nqz";
  return out;
}

// --- theorem-4 order -------------------------------------------------------

CompOrder thm4_order(Injection f, std::string name) {
  auto cache = std::make_shared<std::map<Nat, Nat>>();
  auto fv = [f = std::move(f), cache, name](Nat k) -> Nat {
    if (auto it = cache->find(k); it != cache->end()) return it->second;
    std::optional<Nat> v = f(k);
    if (!v) throw ContractBreach(name + ": parameter injection diverged at k=" + std::to_string(k));
    cache->emplace(k, *v);
    return *v;
  };
  CompOrder out;
  out.name = std::move(name);
  out.in_domain = [](Nat) { return true; };
  out.less = [fv](Nat x, Nat y) {
    if (x == y) return false;
    bool xo = x % 2, yo = y % 2;
    if (!xo && !yo) return x < y;
    if (!xo && yo) return x / 2 <= fv(y / 2);  // 2c < 2k+1 iff c <= f(k)
    if (xo && !yo) return fv(x / 2) < y / 2;   // 2k+1 < 2c iff f(k) < c
    return fv(x / 2) < fv(y / 2);
  };
  return out;
}

Injection toy_injection() {
  return [](Nat k) -> std::optional<Nat> {
    switch (k) {
      case 0: return 3;
      case 1: return 0;
      case 2: return 5;
      default: return 101 + 2 * (k - 3);
    }
  };
}

bool toy_range_contains(Nat a) {
  return a == 3 || a == 0 || a == 5 || (a >= 101 && (a - 101) % 2 == 0);
}

Injection diagonal_halting_injection(const pcf::Machine& machine, Nat work_bound) {
  struct State {
    std::vector<Nat> found;
    std::set<Nat> seen;
    Nat next_code = 0;  // cantor code over (e, s)
  };
  auto st = std::make_shared<State>();
  return [&machine, work_bound, st](Nat k) -> std::optional<Nat> {
    while (st->found.size() <= k && st->next_code < work_bound) {
      auto [e, s] = pcf::unpair(st->next_code++);
      if (!st->seen.count(e) && machine.eval(e, e, s).converged()) {
        st->seen.insert(e);
        st->found.push_back(e);
      }
    }
    if (k < st->found.size()) return st->found[k];
    return std::nullopt;
  };
}

// --- checks ----------------------------------------------------------------

AxiomsReport axioms_check(const CompOrder& L, const std::vector<Nat>& sample) {
  AxiomsReport r;
  auto fail = [&r](std::string msg) {
    r.ok = false;
    r.violation = std::move(msg);
  };
  for (Nat x : sample)
    if (L.less(x, x)) {
      fail("irreflexivity at " + std::to_string(x));
      return r;
    }
  for (Nat x : sample)
    for (Nat y : sample) {
      if (x == y) continue;
      bool xy = L.less(x, y), yx = L.less(y, x);
      if (xy && yx) {
        fail("asymmetry at (" + std::to_string(x) + "," + std::to_string(y) + ")");
        return r;
      }
      if (!xy && !yx) {
        fail("totality at (" + std::to_string(x) + "," + std::to_string(y) + ")");
        return r;
      }
    }
  for (Nat x : sample)
    for (Nat y : sample)
      for (Nat z : sample)
        if (L.less(x, y) && L.less(y, z) && !L.less(x, z)) {
          fail("transitivity at (" + std::to_string(x) + "," + std::to_string(y) + "," +
               std::to_string(z) + ")");
          return r;
        }
  return r;
}

Nat interval_card_bounded(const CompOrder& L, Nat a, Nat b, Nat scan_bound) {
  require_domain(L, a);
  require_domain(L, b);
  Nat count = 0;
  for (Nat x = 0; x <= scan_bound; ++x)
    if (L.in_domain(x) && L.less(a, x) && L.less(x, b)) ++count;
  return count;
}

std::optional<Nat> succ_at_stage(const CompOrder& L, Nat x, Nat scan_bound) {
  require_domain(L, x);
  std::optional<Nat> best;
  for (Nat y = 0; y <= scan_bound; ++y) {
    if (!L.in_domain(y) || !L.less(x, y)) continue;
    if (!best || L.less(y, *best)) best = y;
  }
  return best;
}

Nat pred_count_at_stage(const CompOrder& L, Nat x, Nat scan_bound) {
  require_domain(L, x);
  Nat count = 0;
  for (Nat y = 0; y <= scan_bound; ++y)
    if (L.in_domain(y) && L.less(y, x)) ++count;
  return count;
}

}  // namespace cpw::orders
