#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "cpw/common.hpp"

namespace cpw::pcf {

using cpw::Nat;

// Cantor pairing <m,n> = (m+n)(m+n+1)/2 + m and its inverse.
Nat pair(Nat m, Nat n);
std::pair<Nat, Nat> unpair(Nat k);

// ---------------------------------------------------------------------------
// Register machine.  Input in r0, output read from r0 on HALT.  Running off
// the end of the program (or jumping past it) never halts.
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t {
  Inc,   // INC r      : r += 1
  Djz,   // DJZ r t    : if r == 0 jump to t, else r -= 1
  Cpy,   // CPY a b    : b := a
  Halt,  // HALT
};

struct Instr {
  Op op;
  Nat a = 0;
  Nat b = 0;
  friend bool operator==(const Instr&, const Instr&) = default;
};

struct Program {
  std::vector<Instr> code;
  friend bool operator==(const Program&, const Program&) = default;
};

struct EvalOutcome {
  std::optional<Nat> value;  // engaged iff the machine halted within budget
  Nat steps_used = 0;
  bool converged() const { return value.has_value(); }
};

/// Simulate for at most `budget` instruction steps (one instruction = one
/// step).  Divergence within budget is StillRunning, never an error.
EvalOutcome run(const Program& p, Nat input, Nat budget);

// ---------------------------------------------------------------------------
// Numbering.  A code is read as a self-delimiting bit stream (the bits below
// the most significant 1).  Unparseable tails are dropped, so every natural
// decodes to a well-formed program; the empty program (code 0) is the
// canonical diverging program.
// ---------------------------------------------------------------------------

Program decode_bits(Nat e);
std::optional<Nat> encode_bits(const Program& p);  // nullopt if it needs > 61 bits

// Text format, one instruction per line: INC r | DJZ r label | CPY r1 r2 | HALT.
Program parse_program(const std::string& text);
std::string print_program(const Program& p);

// Program templates.
Program diverging_program();  // the empty program
Program identity_program();
Program successor_program();
Program constant_program(Nat c);
Program doubling_program();
Program halt_iff_even_program();

/// outer after inner: runs `inner` on the input, clears every register the
/// outer program touches (except r0), then runs `outer` on the result.
/// Divergence of either side propagates.
Program compose_programs(const Program& outer, const Program& inner);

// ---------------------------------------------------------------------------
// Machine: the numbering plus three extensions that keep indices uniform:
//   * planted slots    — override small indices with chosen programs,
//   * interned codes   — programs whose bit code does not fit in 64 bits,
//   * native functions — host-backed partial functions for elements that are
//                        built from other indices (searching, projecting).
// Unknown indices in the interned/native bands decode to the canonical
// diverging program, so the numbering stays total.
// ---------------------------------------------------------------------------

struct NativeResult {
  std::optional<Nat> value;
  Nat steps = 1;
};

/// A native receives the remaining step budget and must return a StillRunning
/// result (nullopt value) whenever its cost exceeds it; convergence must be
/// monotone in the budget.
using NativeFn = std::function<NativeResult(Nat input, Nat budget)>;

class Machine {
 public:
  static constexpr Nat kInternBase = Nat{1} << 62;
  static constexpr Nat kNativeBase = Nat{3} << 62;

  EvalOutcome eval(Nat e, Nat n, Nat budget) const;

  /// Total: planted slot, interned entry, native stub, or bit decoding.
  Program decode(Nat e) const;

  /// Bit code when it fits, otherwise a fresh interned index.
  Nat encode(const Program& p);

  void plant(Nat e, Program p);
  Nat register_native(std::string name, NativeFn f);
  bool is_native(Nat e) const { return e >= kNativeBase; }
  const std::string& native_name(Nat e) const;

  Nat build_identity();
  Nat build_constant(Nat c);
  Nat build_compose(Nat e1, Nat e2);  // phi(n) = phi_e1(phi_e2(n))

  /// W_{e,s} = { n <= s : eval(e,n,s) converges }, sorted.
  std::vector<Nat> enumerate_ce(Nat e, Nat s) const;

 private:
  std::map<Nat, Program> planted_;
  std::vector<Program> interned_;
  std::vector<std::pair<std::string, NativeFn>> natives_;
};

}  // namespace cpw::pcf
