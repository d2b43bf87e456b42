#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cpw {

using Nat = std::uint64_t;

enum class Truth { True, False, Unknown };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    default: return "unknown";
  }
}

/// Finite evaluation frame for limit-level questions: quantifiers and tails
/// are inspected only inside this window.  Every three-valued verdict is
/// stamped with the horizon it was computed at; verdicts from different
/// horizons must never be merged.
struct Horizon {
  Nat window_bound = 2000;   // elements considered are <= window_bound
  Nat step_budget = 100000;  // per-point evaluation budget
  Nat tail_window = 8;       // minimum run length for a tail verdict
  Nat cut = 16;              // ignore C-elements below this
};

struct Verdict {
  Truth value = Truth::Unknown;
  Horizon horizon;
  std::optional<Nat> witness;  // first counterexample or stabilization point
};

inline bool is_true(const Verdict& v) { return v.value == Truth::True; }
inline bool is_false(const Verdict& v) { return v.value == Truth::False; }
inline bool is_unknown(const Verdict& v) { return v.value == Truth::Unknown; }

}  // namespace cpw
