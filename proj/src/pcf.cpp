#include "cpw/pcf.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cpw::pcf {

Nat pair(Nat m, Nat n) {
  Nat s = m + n;
  return s * (s + 1) / 2 + m;
}

std::pair<Nat, Nat> unpair(Nat k) {
  // largest s with s(s+1)/2 <= k
  Nat s = static_cast<Nat>((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0);
  while (s * (s + 1) / 2 > k) --s;
  while ((s + 1) * (s + 2) / 2 <= k) ++s;
  Nat m = k - s * (s + 1) / 2;
  return {m, s - m};
}

EvalOutcome run(const Program& p, Nat input, Nat budget) {
  std::vector<Nat> regs(16, 0);
  std::unordered_map<Nat, Nat> high;  // rarely used: junk decodes with huge indices
  auto reg = [&](Nat i) -> Nat& {
    if (i < regs.size()) return regs[i];
    return high[i];
  };
  reg(0) = input;
  Nat pc = 0;
  const Nat len = p.code.size();
  for (Nat steps = 1; steps <= budget; ++steps) {
    if (pc >= len) return {std::nullopt, budget};  // stuck: diverges
    const Instr& ins = p.code[pc];
    switch (ins.op) {
      case Op::Inc:
        ++reg(ins.a);
        ++pc;
        break;
      case Op::Djz:
        if (reg(ins.a) == 0) {
          pc = ins.b;
        } else {
          --reg(ins.a);
          ++pc;
        }
        break;
      case Op::Cpy:
        reg(ins.b) = reg(ins.a);
        ++pc;
        break;
      case Op::Halt:
        return {reg(0), steps};
    }
  }
  return {std::nullopt, budget};
}

// --- bit codec -------------------------------------------------------------

namespace {

struct BitWriter {
  std::vector<bool> bits;
  void push(bool b) { bits.push_back(b); }
  // Elias-gamma of x+1: (L-1) zeros, then the L bits of x+1 from the MSB.
  void push_gamma(Nat x) {
    Nat n = x + 1;
    int L = std::bit_width(n);
    for (int i = 0; i < L - 1; ++i) push(false);
    for (int i = L - 1; i >= 0; --i) push((n >> i) & 1);
  }
};

struct BitReader {
  Nat word;
  int len;   // number of payload bits
  int pos = 0;
  bool eof() const { return pos >= len; }
  bool next() { return (word >> pos++) & 1; }
  std::optional<Nat> read_gamma() {
    int zeros = 0;
    while (true) {
      if (eof()) return std::nullopt;
      if (next()) break;
      ++zeros;
    }
    Nat n = 1;
    for (int i = 0; i < zeros; ++i) {
      if (eof()) return std::nullopt;
      n = (n << 1) | (next() ? 1 : 0);
    }
    return n - 1;
  }
};

}  // namespace

Program decode_bits(Nat e) {
  Program p;
  if (e == 0) return p;
  BitReader r{e, std::bit_width(e) - 1};
  while (!r.eof()) {
    if (r.pos + 2 > r.len) break;
    int op = (r.next() ? 1 : 0) | (r.next() ? 2 : 0);
    Instr ins{};
    switch (op) {
      case 0: {  // INC
        auto a = r.read_gamma();
        if (!a) return p;
        ins = {Op::Inc, *a, 0};
        break;
      }
      case 1: {  // DJZ
        auto a = r.read_gamma();
        if (!a) return p;
        auto b = r.read_gamma();
        if (!b) return p;
        ins = {Op::Djz, *a, *b};
        break;
      }
      case 2: {  // CPY
        auto a = r.read_gamma();
        if (!a) return p;
        auto b = r.read_gamma();
        if (!b) return p;
        ins = {Op::Cpy, *a, *b};
        break;
      }
      default:
        ins = {Op::Halt, 0, 0};
        break;
    }
    p.code.push_back(ins);
  }
  return p;
}

std::optional<Nat> encode_bits(const Program& p) {
  BitWriter w;
  for (const Instr& ins : p.code) {
    switch (ins.op) {
      case Op::Inc:
        w.push(false);
        w.push(false);
        w.push_gamma(ins.a);
        break;
      case Op::Djz:
        w.push(true);
        w.push(false);
        w.push_gamma(ins.a);
        w.push_gamma(ins.b);
        break;
      case Op::Cpy:
        w.push(false);
        w.push(true);
        w.push_gamma(ins.a);
        w.push_gamma(ins.b);
        break;
      case Op::Halt:
        w.push(true);
        w.push(true);
        break;
    }
  }
  if (w.bits.size() > 61) return std::nullopt;
  Nat e = Nat{1} << w.bits.size();
  for (std::size_t i = 0; i < w.bits.size(); ++i)
    if (w.bits[i]) e |= Nat{1} << i;
  return e;
}

// --- text format -----------------------------------------------------------

Program parse_program(const std::string& text) {
  Program p;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string mnem;
    if (!(ls >> mnem) || mnem[0] == '#') continue;
    auto arg = [&]() {
      Nat v;
      if (!(ls >> v))
        throw std::runtime_error("line " + std::to_string(lineno) + ": missing operand");
      return v;
    };
    if (mnem == "INC") {
      Nat a = arg();
      p.code.push_back({Op::Inc, a, 0});
    } else if (mnem == "DJZ") {
      Nat a = arg();
      Nat b = arg();
      p.code.push_back({Op::Djz, a, b});
    } else if (mnem == "CPY") {
      Nat a = arg();
      Nat b = arg();
      p.code.push_back({Op::Cpy, a, b});
    } else if (mnem == "HALT") {
      p.code.push_back({Op::Halt, 0, 0});
    } else {
      throw std::runtime_error("line " + std::to_string(lineno) + ": unknown mnemonic " + mnem);
    }
  }
  return p;
}

std::string print_program(const Program& p) {
  std::ostringstream out;
  for (const Instr& ins : p.code) {
    switch (ins.op) {
      case Op::Inc: out << "INC " << ins.a << "\n"; break;
      case Op::Djz: out << "DJZ " << ins.a << " " << ins.b << "\n"; break;
      case Op::Cpy: out << "CPY " << ins.a << " " << ins.b << "\n"; break;
      case Op::Halt: out << "HALT\n"; break;
    }
  }
  return out.str();
}

// --- templates -------------------------------------------------------------

Program diverging_program() { return {}; }

Program identity_program() { return {{{Op::Halt, 0, 0}}}; }

Program successor_program() { return {{{Op::Inc, 0, 0}, {Op::Halt, 0, 0}}}; }

Program constant_program(Nat c) {
  // zero r0 (r1 is never touched, so DJZ 1 . is an unconditional jump),
  // then count up to c.
  Program p;
  p.code.push_back({Op::Djz, 0, 2});
  p.code.push_back({Op::Djz, 1, 0});
  for (Nat i = 0; i < c; ++i) p.code.push_back({Op::Inc, 0, 0});
  p.code.push_back({Op::Halt, 0, 0});
  return p;
}

Program doubling_program() {
  Program p;
  p.code.push_back({Op::Djz, 0, 4});
  p.code.push_back({Op::Inc, 1, 0});
  p.code.push_back({Op::Inc, 1, 0});
  p.code.push_back({Op::Djz, 2, 0});
  p.code.push_back({Op::Cpy, 1, 0});
  p.code.push_back({Op::Halt, 0, 0});
  return p;
}

Program halt_iff_even_program() {
  Program p;
  p.code.push_back({Op::Djz, 0, 3});  // r0 == 0: even
  p.code.push_back({Op::Djz, 0, 4});  // r0 == 0 after one decrement: odd
  p.code.push_back({Op::Djz, 1, 0});  // loop
  p.code.push_back({Op::Halt, 0, 0});
  p.code.push_back({Op::Djz, 1, 4});  // spin forever
  return p;
}

namespace {

Nat max_register(const Program& p) {
  Nat m = 0;
  for (const Instr& ins : p.code) {
    switch (ins.op) {
      case Op::Inc: m = std::max(m, ins.a); break;
      case Op::Djz: m = std::max(m, ins.a); break;
      case Op::Cpy: m = std::max(m, std::max(ins.a, ins.b)); break;
      case Op::Halt: break;
    }
  }
  return m;
}

std::set<Nat> touched_registers(const Program& p) {
  std::set<Nat> rs;
  for (const Instr& ins : p.code) {
    switch (ins.op) {
      case Op::Inc: rs.insert(ins.a); break;
      case Op::Djz: rs.insert(ins.a); break;
      case Op::Cpy: rs.insert(ins.a); rs.insert(ins.b); break;
      case Op::Halt: break;
    }
  }
  return rs;
}

}  // namespace

Program compose_programs(const Program& outer, const Program& inner) {
  const Nat zr = std::max(max_register(outer), max_register(inner)) + 1;  // always zero
  std::set<Nat> clear = touched_registers(outer);
  clear.erase(0);

  const Nat la = inner.code.size();
  const Nat zero_off = la + 1;
  const Nat lb_off = zero_off + 2 * clear.size();
  const Nat lb = outer.code.size();
  const Nat div = lb_off + lb + 1;

  Program p;
  // inner, with HALT redirected to the zeroing block and out-of-range
  // targets (divergence in the original) sent to the spin loop
  for (const Instr& ins : inner.code) {
    if (ins.op == Op::Halt) {
      p.code.push_back({Op::Djz, zr, zero_off});
    } else if (ins.op == Op::Djz) {
      p.code.push_back({Op::Djz, ins.a, ins.b < la ? ins.b : div});
    } else {
      p.code.push_back(ins);
    }
  }
  p.code.push_back({Op::Djz, zr, div});  // inner fell off the end: diverge
  // clear outer's working registers
  Nat at = zero_off;
  for (Nat r : clear) {
    p.code.push_back({Op::Djz, r, at + 2});
    p.code.push_back({Op::Djz, zr, at});
    at += 2;
  }
  // outer, shifted
  for (const Instr& ins : outer.code) {
    if (ins.op == Op::Djz) {
      p.code.push_back({Op::Djz, ins.a, ins.b < lb ? ins.b + lb_off : div});
    } else {
      p.code.push_back(ins);
    }
  }
  p.code.push_back({Op::Djz, zr, div});  // outer fell off the end
  p.code.push_back({Op::Djz, zr, div});  // spin loop
  return p;
}

// --- Machine ---------------------------------------------------------------

EvalOutcome Machine::eval(Nat e, Nat n, Nat budget) const {
  if (e >= kNativeBase) {
    Nat idx = e - kNativeBase;
    if (idx >= natives_.size()) return {std::nullopt, budget};
    NativeResult r = natives_[idx].second(n, budget);
    if (!r.value) return {std::nullopt, budget};
    return {r.value, std::min(r.steps, budget)};
  }
  if (e >= kInternBase) {
    Nat idx = e - kInternBase;
    if (idx >= interned_.size()) return {std::nullopt, budget};
    return run(interned_[idx], n, budget);
  }
  if (auto it = planted_.find(e); it != planted_.end()) return run(it->second, n, budget);
  return run(decode_bits(e), n, budget);
}

Program Machine::decode(Nat e) const {
  if (e >= kNativeBase) return diverging_program();
  if (e >= kInternBase) {
    Nat idx = e - kInternBase;
    return idx < interned_.size() ? interned_[idx] : diverging_program();
  }
  if (auto it = planted_.find(e); it != planted_.end()) return it->second;
  return decode_bits(e);
}

Nat Machine::encode(const Program& p) {
  if (auto e = encode_bits(p); e && !planted_.count(*e)) return *e;
  interned_.push_back(p);
  return kInternBase + interned_.size() - 1;
}

void Machine::plant(Nat e, Program p) {
  if (e >= kInternBase) throw std::invalid_argument("plant: index outside program band");
  planted_[e] = std::move(p);
}

Nat Machine::register_native(std::string name, NativeFn f) {
  natives_.emplace_back(std::move(name), std::move(f));
  return kNativeBase + natives_.size() - 1;
}

const std::string& Machine::native_name(Nat e) const {
  static const std::string unknown = "?";
  if (e < kNativeBase) return unknown;
  Nat idx = e - kNativeBase;
  return idx < natives_.size() ? natives_[idx].first : unknown;
}

Nat Machine::build_identity() { return encode(identity_program()); }

Nat Machine::build_constant(Nat c) { return encode(constant_program(c)); }

Nat Machine::build_compose(Nat e1, Nat e2) {
  if (!is_native(e1) && !is_native(e2))
    return encode(compose_programs(decode(e1), decode(e2)));
  return register_native(
      "compose:" + std::to_string(e1) + ":" + std::to_string(e2),
      [this, e1, e2](Nat n, Nat budget) -> NativeResult {
        EvalOutcome inner = eval(e2, n, budget);
        if (!inner.converged()) return {std::nullopt, budget};
        Nat rest = budget - std::min(inner.steps_used, budget);
        EvalOutcome outer = eval(e1, *inner.value, rest);
        if (!outer.converged()) return {std::nullopt, budget};
        return {outer.value, inner.steps_used + outer.steps_used};
      });
}

std::vector<Nat> Machine::enumerate_ce(Nat e, Nat s) const {
  std::vector<Nat> out;
  for (Nat n = 0; n <= s; ++n)
    if (eval(e, n, s).converged()) out.push_back(n);
  return out;
}

}  // namespace cpw::pcf
