#include "cpw/formulas.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace cpw::formulas {

// --- AST helpers -----------------------------------------------------------

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->terms != b->terms || a->bound != b->bound ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {

void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                   std::vector<std::string>& out, std::set<std::string>& seen) {
  for (const Term& t : f->terms)
    if (t.is_var && !bound.count(t.var) && seen.insert(t.var).second) out.push_back(t.var);
  if (f->kind == Kind::Exists || f->kind == Kind::Forall) {
    bool fresh = bound.insert(f->bound).second;
    free_vars_rec(f->kids[0], bound, out, seen);
    if (fresh) bound.erase(f->bound);
    return;
  }
  for (const FormulaPtr& k : f->kids) free_vars_rec(k, bound, out, seen);
}

FormulaPtr node(Kind k, std::vector<Term> terms, std::vector<FormulaPtr> kids,
                std::string bound = {}) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->terms = std::move(terms);
  f->kids = std::move(kids);
  f->bound = std::move(bound);
  return f;
}

}  // namespace

std::vector<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, seen;
  std::vector<std::string> out;
  free_vars_rec(f, bound, out, seen);
  return out;
}

FormulaPtr atom_less(Term a, Term b) { return node(Kind::Less, {a, b}, {}); }
FormulaPtr atom_eq(Term a, Term b) { return node(Kind::Eq, {a, b}, {}); }
FormulaPtr atom_p(Term a, Term b, Term c) { return node(Kind::Rel3, {a, b, c}, {}); }
FormulaPtr mk_not(FormulaPtr a) { return node(Kind::Not, {}, {std::move(a)}); }
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  return node(Kind::And, {}, {std::move(a), std::move(b)});
}
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  return node(Kind::Or, {}, {std::move(a), std::move(b)});
}
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
  return node(Kind::Implies, {}, {std::move(a), std::move(b)});
}
FormulaPtr mk_exists(std::string v, FormulaPtr a) {
  return node(Kind::Exists, {}, {std::move(a)}, std::move(v));
}
FormulaPtr mk_forall(std::string v, FormulaPtr a) {
  return node(Kind::Forall, {}, {std::move(a)}, std::move(v));
}

// --- parser ----------------------------------------------------------------

namespace {

struct Lexer {
  const std::string& s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool eat(const std::string& tok) {
    skip();
    if (s.compare(i, tok.size(), tok) == 0) {
      // keywords must not run into a longer word
      if (std::isupper(static_cast<unsigned char>(tok[0])) && i + tok.size() < s.size() &&
          std::isupper(static_cast<unsigned char>(s[i + tok.size()])))
        return false;
      i += tok.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, i); }

  Term term() {
    skip();
    if (i >= s.size()) fail("expected term");
    char c = s[i];
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && (std::islower(static_cast<unsigned char>(s[j])) ||
                              std::isdigit(static_cast<unsigned char>(s[j]))))
        ++j;
      Term t = Term::variable(s.substr(i, j - i));
      i = j;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Nat v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        v = v * 10 + static_cast<Nat>(s[i++] - '0');
      return Term::constant(v);
    }
    fail("expected term");
  }

  std::string variable() {
    skip();
    if (i >= s.size() || !std::islower(static_cast<unsigned char>(s[i])))
      fail("expected variable");
    std::size_t j = i;
    while (j < s.size() && (std::islower(static_cast<unsigned char>(s[j])) ||
                            std::isdigit(static_cast<unsigned char>(s[j]))))
      ++j;
    std::string v = s.substr(i, j - i);
    i = j;
    return v;
  }

  FormulaPtr formula() {
    FormulaPtr lhs = disj();
    if (eat("->")) return mk_implies(std::move(lhs), formula());
    return lhs;
  }

  FormulaPtr disj() {
    FormulaPtr lhs = conj();
    while (true) {
      skip();
      // don't confuse `|` with a later `->`s leading dash; `|` is single-char
      if (i < s.size() && s[i] == '|') {
        ++i;
        lhs = mk_or(std::move(lhs), conj());
      } else
        return lhs;
    }
  }

  FormulaPtr conj() {
    FormulaPtr lhs = unary();
    while (eat("&")) lhs = mk_and(std::move(lhs), unary());
    return lhs;
  }

  FormulaPtr unary() {
    if (eat("!")) return mk_not(unary());
    if (eat("EXISTS")) {
      std::string v = variable();
      if (!eat(".")) fail("expected '.' after quantified variable");
      return mk_exists(std::move(v), unary());
    }
    if (eat("FORALL")) {
      std::string v = variable();
      if (!eat(".")) fail("expected '.' after quantified variable");
      return mk_forall(std::move(v), unary());
    }
    if (eat("(")) {
      FormulaPtr f = formula();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    if (eat("P")) {
      if (!eat("(")) fail("expected '(' after P");
      Term a = term();
      if (!eat(",")) fail("expected ','");
      Term b = term();
      if (!eat(",")) fail("expected ','");
      Term c = term();
      if (!eat(")")) fail("expected ')'");
      return atom_p(a, b, c);
    }
    Term a = term();
    if (eat("<")) return atom_less(a, term());
    if (eat("=")) return atom_eq(a, term());
    fail("expected '<' or '=' after term");
  }
};

std::string print_term(const Term& t) {
  return t.is_var ? t.var : std::to_string(t.value);
}

void print_impl(const FormulaPtr& f, std::ostream& os);

void print_unary(const FormulaPtr& f, std::ostream& os) {
  switch (f->kind) {
    case Kind::Less:
      os << print_term(f->terms[0]) << " < " << print_term(f->terms[1]);
      return;
    case Kind::Eq:
      os << print_term(f->terms[0]) << " = " << print_term(f->terms[1]);
      return;
    case Kind::Rel3:
      os << "P(" << print_term(f->terms[0]) << "," << print_term(f->terms[1]) << ","
         << print_term(f->terms[2]) << ")";
      return;
    case Kind::Not:
      os << "!";
      print_unary(f->kids[0], os);
      return;
    case Kind::Exists:
    case Kind::Forall:
      os << (f->kind == Kind::Exists ? "EXISTS " : "FORALL ") << f->bound << " . ";
      print_unary(f->kids[0], os);
      return;
    default:
      os << "(";
      print_impl(f, os);
      os << ")";
  }
}

void print_and(const FormulaPtr& f, std::ostream& os) {
  if (f->kind == Kind::And) {
    print_and(f->kids[0], os);
    os << " & ";
    print_unary(f->kids[1], os);
  } else
    print_unary(f, os);
}

void print_or(const FormulaPtr& f, std::ostream& os) {
  if (f->kind == Kind::Or) {
    print_or(f->kids[0], os);
    os << " | ";
    print_and(f->kids[1], os);
  } else
    print_and(f, os);
}

void print_impl(const FormulaPtr& f, std::ostream& os) {
  if (f->kind == Kind::Implies) {
    print_or(f->kids[0], os);
    os << " -> ";
    print_impl(f->kids[1], os);
  } else
    print_or(f, os);
}

}  // namespace

FormulaPtr parse(const std::string& text) {
  Lexer lx{text};
  FormulaPtr f = lx.formula();
  lx.skip();
  if (lx.i != text.size()) lx.fail("trailing input");
  return f;
}

std::string print(const FormulaPtr& f) {
  std::ostringstream os;
  print_impl(f, os);
  return os.str();
}

// --- classification --------------------------------------------------------

namespace {

struct Ranks {
  int s = 0, p = 0;  // minimal n with the formula Sigma_n resp. Pi_n
};

Ranks ranks(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Less:
    case Kind::Eq:
    case Kind::Rel3:
      return {0, 0};
    case Kind::Not: {
      Ranks r = ranks(f->kids[0]);
      return {r.p, r.s};
    }
    case Kind::And:
    case Kind::Or: {
      Ranks a = ranks(f->kids[0]), b = ranks(f->kids[1]);
      return {std::max(a.s, b.s), std::max(a.p, b.p)};
    }
    case Kind::Implies: {
      Ranks a = ranks(f->kids[0]), b = ranks(f->kids[1]);
      return {std::max(a.p, b.s), std::max(a.s, b.p)};
    }
    case Kind::Exists: {
      Ranks r = ranks(f->kids[0]);
      int s = std::max(r.s, 1);
      return {s, s + 1};
    }
    case Kind::Forall: {
      Ranks r = ranks(f->kids[0]);
      int p = std::max(r.p, 1);
      return {p + 1, p};
    }
  }
  return {0, 0};
}

}  // namespace

bool is_bc1(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Less:
    case Kind::Eq:
    case Kind::Rel3:
      return true;
    case Kind::Not:
      return is_bc1(f->kids[0]);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return is_bc1(f->kids[0]) && is_bc1(f->kids[1]);
    case Kind::Exists:
    case Kind::Forall: {
      Ranks r = ranks(f);
      return r.s <= 1 || r.p <= 1;
    }
  }
  return false;
}

Classification classify(const FormulaPtr& f) {
  Ranks r = ranks(f);
  Classification c;
  c.sigma_rank = r.s;
  c.pi_rank = r.p;
  if (r.s == 0 && r.p == 0) {
    c.level = Level::QuantifierFree;
  } else if (r.s <= 1 || r.p <= 1) {
    c.level = r.s < r.p ? Level::Sigma : Level::Pi;
    c.n = std::min(r.s, r.p);
  } else if (is_bc1(f)) {
    c.level = Level::BC1;
  } else if (r.s <= r.p) {
    c.level = Level::Sigma;
    c.n = r.s;
  } else {
    c.level = Level::Pi;
    c.n = r.p;
  }
  return c;
}

std::string to_string(const Classification& c) {
  switch (c.level) {
    case Level::QuantifierFree:
      return "quantifier-free";
    case Level::BC1:
      return "BC(Sigma1,Pi1)";
    case Level::Sigma:
      return "Sigma" + std::to_string(c.n);
    case Level::Pi:
      return "Pi" + std::to_string(c.n);
  }
  return "?";
}

// --- shipped formulas ------------------------------------------------------

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& sub) {
  if (sub.empty()) return f;
  switch (f->kind) {
    case Kind::Less:
    case Kind::Eq:
    case Kind::Rel3: {
      std::vector<Term> ts = f->terms;
      for (Term& t : ts)
        if (t.is_var) {
          auto it = sub.find(t.var);
          if (it != sub.end()) t = it->second;
        }
      return node(f->kind, std::move(ts), {});
    }
    case Kind::Exists:
    case Kind::Forall: {
      std::map<std::string, Term> inner = sub;
      inner.erase(f->bound);  // bound occurrences shadow
      return node(f->kind, {}, {substitute(f->kids[0], inner)}, f->bound);
    }
    default: {
      std::vector<FormulaPtr> kids;
      for (const FormulaPtr& k : f->kids) kids.push_back(substitute(k, sub));
      return node(f->kind, {}, std::move(kids));
    }
  }
}

FormulaPtr phi_xy() {
  return parse("EXISTS w . P(x,w,y) & !EXISTS u . P(y,u,x)");
}

FormulaPtr theta_x() {
  FormulaPtr phi = phi_xy();
  FormulaPtr xt = substitute(phi, {{"y", Term::variable("t")}});
  FormulaPtr tx = substitute(phi, {{"x", Term::variable("t")}, {"y", Term::variable("x")}});
  return mk_or(std::move(xt), std::move(tx));
}

FormulaPtr psi_sentence() {
  FormulaPtr theta = theta_x();
  FormulaPtr theta_y = substitute(theta, {{"x", Term::variable("y")}});
  FormulaPtr phi_yx =
      substitute(phi_xy(), {{"x", Term::variable("y")}, {"y", Term::variable("x")}});
  FormulaPtr body =
      mk_and(theta, mk_forall("y", mk_implies(std::move(theta_y), std::move(phi_yx))));
  return mk_exists("x", std::move(body));
}

FormulaPtr unbounded_sentence() { return parse("FORALL x . EXISTS y . x < y"); }

FormulaPtr succ_sentence() {
  return parse("FORALL x . EXISTS y . (x < y & !EXISTS z . (x < z & z < y))");
}

// --- evaluation ------------------------------------------------------------

namespace {

struct EvalResult {
  Truth v = Truth::Unknown;
  std::optional<Nat> wit;
};

Truth t_not(Truth a) {
  if (a == Truth::True) return Truth::False;
  if (a == Truth::False) return Truth::True;
  return Truth::Unknown;
}

Nat resolve(const Term& t, const Assignment& asg) {
  if (!t.is_var) return t.value;
  auto it = asg.find(t.var);
  if (it == asg.end()) throw std::invalid_argument("unassigned free variable " + t.var);
  return it->second;
}

Truth lift(std::optional<bool> b) {
  if (!b) return Truth::Unknown;
  return *b ? Truth::True : Truth::False;
}

EvalResult eval_rec(const BaseModel& m, const FormulaPtr& f, Assignment& asg,
                    const EvalOptions& opts) {
  switch (f->kind) {
    case Kind::Less:
      return {lift(m.less(resolve(f->terms[0], asg), resolve(f->terms[1], asg))), {}};
    case Kind::Eq: {
      Nat a = resolve(f->terms[0], asg), b = resolve(f->terms[1], asg);
      return {m.eq ? lift(m.eq(a, b)) : (a == b ? Truth::True : Truth::False), {}};
    }
    case Kind::Rel3: {
      if (!m.rel3) return {Truth::Unknown, {}};
      return {lift(m.rel3(resolve(f->terms[0], asg), resolve(f->terms[1], asg),
                          resolve(f->terms[2], asg))),
              {}};
    }
    case Kind::Not: {
      EvalResult r = eval_rec(m, f->kids[0], asg, opts);
      return {t_not(r.v), r.wit};
    }
    case Kind::And: {
      EvalResult a = eval_rec(m, f->kids[0], asg, opts);
      if (a.v == Truth::False) return a;
      EvalResult b = eval_rec(m, f->kids[1], asg, opts);
      if (b.v == Truth::False) return b;
      if (a.v == Truth::Unknown || b.v == Truth::Unknown) return {Truth::Unknown, {}};
      return {Truth::True, a.wit ? a.wit : b.wit};
    }
    case Kind::Or: {
      EvalResult a = eval_rec(m, f->kids[0], asg, opts);
      if (a.v == Truth::True) return a;
      EvalResult b = eval_rec(m, f->kids[1], asg, opts);
      if (b.v == Truth::True) return b;
      if (a.v == Truth::Unknown || b.v == Truth::Unknown) return {Truth::Unknown, {}};
      return {Truth::False, {}};
    }
    case Kind::Implies: {
      EvalResult a = eval_rec(m, f->kids[0], asg, opts);
      if (a.v == Truth::False) return {Truth::True, {}};
      EvalResult b = eval_rec(m, f->kids[1], asg, opts);
      if (b.v == Truth::True) return b;
      if (a.v == Truth::Unknown || b.v == Truth::Unknown) return {Truth::Unknown, {}};
      return {Truth::False, a.wit};
    }
    case Kind::Exists: {
      bool saw_unknown = false;
      for (Nat n = 0; n <= opts.search_bound; ++n) {
        if (!m.in_domain(n)) continue;
        Nat saved = 0;
        auto it = asg.find(f->bound);
        bool had = it != asg.end();
        if (had) saved = it->second;
        asg[f->bound] = n;
        EvalResult r = eval_rec(m, f->kids[0], asg, opts);
        if (had)
          asg[f->bound] = saved;
        else
          asg.erase(f->bound);
        if (r.v == Truth::True) return {Truth::True, n};
        if (r.v == Truth::Unknown) saw_unknown = true;
      }
      if (!saw_unknown && opts.bounded_complete) return {Truth::False, {}};
      return {Truth::Unknown, {}};
    }
    case Kind::Forall: {
      bool saw_unknown = false;
      for (Nat n = 0; n <= opts.search_bound; ++n) {
        if (!m.in_domain(n)) continue;
        Nat saved = 0;
        auto it = asg.find(f->bound);
        bool had = it != asg.end();
        if (had) saved = it->second;
        asg[f->bound] = n;
        EvalResult r = eval_rec(m, f->kids[0], asg, opts);
        if (had)
          asg[f->bound] = saved;
        else
          asg.erase(f->bound);
        if (r.v == Truth::False) return {Truth::False, n};
        if (r.v == Truth::Unknown) saw_unknown = true;
      }
      if (!saw_unknown && opts.bounded_complete) return {Truth::True, {}};
      return {Truth::Unknown, {}};
    }
  }
  return {Truth::Unknown, {}};
}

}  // namespace

Verdict eval_base(const BaseModel& model, const FormulaPtr& f, const Assignment& assignment,
                  const EvalOptions& opts) {
  Assignment asg = assignment;
  EvalResult r = eval_rec(model, f, asg, opts);
  Verdict v;
  v.value = r.v;
  v.witness = r.wit;
  v.horizon.window_bound = opts.search_bound;
  return v;
}

std::vector<std::pair<std::string, FormulaPtr>> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  std::vector<std::pair<std::string, FormulaPtr>> out;
  std::string line, pending;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      pending = line.substr(first + 1);
      std::size_t s = pending.find_first_not_of(" \t");
      pending = s == std::string::npos ? "" : pending.substr(s);
      continue;
    }
    try {
      out.emplace_back(pending.empty() ? "line " + std::to_string(lineno) : pending,
                       parse(line));
    } catch (const ParseError& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    pending.clear();
  }
  return out;
}

}  // namespace cpw::formulas
