#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpw/common.hpp"

namespace cpw::formulas {

using cpw::Nat;

struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// --- AST -------------------------------------------------------------------

struct Term {
  bool is_var = false;
  std::string var;  // when is_var
  Nat value = 0;    // constant otherwise

  static Term variable(std::string v) { return {true, std::move(v), 0}; }
  static Term constant(Nat c) { return {false, {}, c}; }
  bool operator==(const Term&) const = default;
};

enum class Kind { Less, Eq, Rel3, Not, And, Or, Implies, Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::vector<Term> terms;       // atoms only
  std::vector<FormulaPtr> kids;  // connectives: 1 or 2 children; quantifiers: 1
  std::string bound;             // quantifiers only
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::vector<std::string> free_vars(const FormulaPtr& f);

// builders
FormulaPtr atom_less(Term a, Term b);
FormulaPtr atom_eq(Term a, Term b);
FormulaPtr atom_p(Term a, Term b, Term c);
FormulaPtr mk_not(FormulaPtr a);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_exists(std::string v, FormulaPtr a);
FormulaPtr mk_forall(std::string v, FormulaPtr a);

// --- surface syntax --------------------------------------------------------
//
//   formula  := or ( "->" formula )?
//   or       := and ( "|" and )*
//   and      := unary ( "&" unary )*
//   unary    := "!" unary | "EXISTS" var "." unary | "FORALL" var "." unary
//             | atom | "(" formula ")"
//   atom     := term "<" term | term "=" term | "P" "(" term "," term "," term ")"
//   term     := [a-z][a-z0-9]* | natural
//
// A quantifier's scope is the next unary formula, so
// "EXISTS w . P(x,w,y) & Q" parses as (EXISTS w . P(x,w,y)) & Q.
FormulaPtr parse(const std::string& text);
std::string print(const FormulaPtr& f);

// --- classification --------------------------------------------------------

enum class Level { QuantifierFree, BC1, Sigma, Pi };

struct Classification {
  Level level;
  int n = 0;  // meaningful for Sigma/Pi
  int sigma_rank = 0, pi_rank = 0;
  bool operator==(const Classification&) const = default;
};

std::string to_string(const Classification& c);

/// Minimal prenex ranks via the usual rules (negation swaps, binary
/// connectives take maxima, a quantifier bumps the opposite rank), with
/// Boolean combinations of one-quantifier formulas recognized structurally
/// before ranks are consulted.
Classification classify(const FormulaPtr& f);

// whether f is a boolean combination of subformulas of quantifier rank <= 1
bool is_bc1(const FormulaPtr& f);

// --- shipped formulas ------------------------------------------------------

FormulaPtr phi_xy();           // EXISTS w . P(x,w,y) & !EXISTS u . P(y,u,x)
FormulaPtr theta_x();          // phi(x,t) | phi(t,x)
FormulaPtr psi_sentence();     // EXISTS x . (theta(x) & FORALL y . (theta(y) -> phi(y,x)))
FormulaPtr unbounded_sentence();  // FORALL x . EXISTS y . x < y
FormulaPtr succ_sentence();    // every element has an immediate successor

// substitute terms for free variables (capture is the caller's problem;
// shipped formulas only ever take fresh constants/variables)
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& sub);

// --- bounded evaluation ----------------------------------------------------

/// Relational view of a base structure.  Relations answer three-valued:
/// nullopt means undecided at the structure's working precision.
struct BaseModel {
  std::string name;
  std::function<bool(Nat)> in_domain;
  std::function<std::optional<bool>(Nat, Nat)> less;
  std::function<std::optional<bool>(Nat, Nat)> eq;          // defaults to code equality
  std::function<std::optional<bool>(Nat, Nat, Nat)> rel3;   // P; may be null
};

using Assignment = std::map<std::string, Nat>;

struct EvalOptions {
  Nat search_bound = 100;
  /// When set, an exhausted EXISTS decides False and a verified FORALL
  /// decides True.  Off by default: a finite scan of an infinite structure
  /// only ever refutes a FORALL or witnesses an EXISTS.
  bool bounded_complete = false;
};

/// Three-valued bounded evaluation.  Quantifiers range over domain codes
/// <= search_bound.  The verdict's witness carries an EXISTS witness or a
/// FORALL counterexample when one decided the top value.
Verdict eval_base(const BaseModel& model, const FormulaPtr& f, const Assignment& assignment,
                  const EvalOptions& opts);

// corpus file: `# name` lines name the next formula; blank lines skipped
std::vector<std::pair<std::string, FormulaPtr>> load_corpus(const std::string& path);

}  // namespace cpw::formulas
