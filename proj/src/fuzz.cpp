#include "pi4/fuzz.hpp"

#include <algorithm>
#include <set>

#include "pi4/sugar.hpp"

namespace pi4 {

size_t Fuzzer::pick(size_t n) { return n == 0 ? 0 : gen_() % n; }

namespace {

Bits random_bits(Fuzzer& fz, size_t width) {
  Bits b;
  for (size_t i = 0; i < width; ++i) b.push_back(fz.pick(2) ? 1 : 0);
  return b;
}

std::string pick_binder(Fuzzer& fz, const std::string& avoid) {
  static const char* pool[] = {"a", "b", "c", "d", "e"};
  for (;;) {
    std::string cand = pool[fz.pick(5)];
    if (cand != avoid) return cand;
  }
}

const std::string& pick_inst(Fuzzer& fz, const HeaderTable& t) {
  return t.instance_order[fz.pick(t.instance_order.size())];
}

// One defined-or-total atom about the heap named b.
FormulaPtr random_atom(Fuzzer& fz, const HeaderTable& t, const std::string& b,
                       size_t max_len) {
  switch (fz.pick(6)) {
    case 0:
      return fm::eq(ex::len(b, Pkt::In), ex::num(fz.pick(max_len + 1)));
    case 1:
      return fm::gt(ex::len(b, Pkt::In), ex::num(fz.pick(max_len + 1)));
    case 2: {
      size_t hi = 1 + fz.pick(std::max<size_t>(max_len, 1));
      size_t lo = fz.pick(hi);
      return fm::eq(ex::slice_pkt(b, Pkt::In, lo, hi),
                    ex::bv(random_bits(fz, hi - lo)));
    }
    case 3: {
      FormulaPtr v = fm::valid(b, pick_inst(fz, t));
      return fz.flip() ? fm::neg(std::move(v)) : v;
    }
    case 4: {
      const std::string& inst = pick_inst(fz, t);
      size_t sz = t.sizeof_inst(inst);
      size_t hi = 1 + fz.pick(sz);
      size_t lo = fz.pick(hi);
      return fm::eq(ex::slice_inst(b, inst, lo, hi),
                    ex::bv(random_bits(fz, hi - lo)));
    }
    default:
      return fm::eq(ex::len(b, Pkt::Out), ex::num(fz.pick(3)));
  }
}

FormulaPtr random_phi(Fuzzer& fz, const HeaderTable& t, const std::string& b,
                      size_t max_len) {
  FormulaPtr phi = random_atom(fz, t, b, max_len);
  if (fz.flip()) phi = fm::land(std::move(phi), random_atom(fz, t, b, max_len));
  return phi;
}

TypePtr random_leaf(Fuzzer& fz, const HeaderTable& t, const std::string& avoid,
                    size_t max_len) {
  if (fz.pick(3) == 0) return ty::top();
  std::string b = pick_binder(fz, avoid);
  return ty::refine(b, ty::top(), random_phi(fz, t, b, max_len));
}

// Atom relating heap d to the in-scope heap c.
FormulaPtr dep_atom(Fuzzer& fz, const HeaderTable& t, const std::string& d,
                    const std::string& c) {
  switch (fz.pick(3)) {
    case 0:
      return fm::eq(ex::packet(d, Pkt::In), ex::packet(c, Pkt::In));
    case 1:
      return fm::eq(ex::len(d, Pkt::In), ex::len(c, Pkt::In));
    default:
      return valid_iff(d, c, pick_inst(fz, t));
  }
}

} // namespace

HeaderTable Fuzzer::random_table() {
  HeaderTable t;
  static const char* insts[] = {"A", "B"};
  static const char* types[] = {"A_t", "B_t"};
  static const char* fields[] = {"f", "g"};
  size_t n = 1 + pick(2);
  for (size_t i = 0; i < n; ++i) {
    size_t width = 1 + pick(2);
    std::vector<HeaderTable::Field> fs;
    if (width == 2 && flip()) {
      fs.push_back({std::string(fields[i]), 1});
      fs.push_back({std::string(fields[i]) + "2", 1});
    } else {
      fs.push_back({std::string(fields[i]), width});
    }
    t.types[types[i]] = std::move(fs);
    t.instances[insts[i]] = types[i];
    t.instance_order.push_back(insts[i]);
  }
  return t;
}

TypePtr Fuzzer::random_chomp_type(const HeaderTable& table,
                                  const std::string& var,
                                  size_t max_pktin_ref) {
  switch (pick(5)) {
    case 0:
    case 1:
      return random_leaf(*this, table, var, max_pktin_ref);
    case 2: {
      std::string c = pick_binder(*this, var);
      TypePtr left = random_leaf(*this, table, var, max_pktin_ref);
      TypePtr right = random_leaf(*this, table, var, max_pktin_ref);
      if (flip()) {
        // make the right component depend on the Sigma binder
        std::string d = pick_binder(*this, c == var ? var : c);
        right = ty::refine(
            d, std::move(right),
            fm::eq(ex::packet(d, Pkt::In), ex::packet(c, Pkt::In)));
      }
      return ty::sigma(c, std::move(left), std::move(right));
    }
    case 3:
      return ty::choice(random_leaf(*this, table, var, max_pktin_ref),
                        random_leaf(*this, table, var, max_pktin_ref));
    default: {
      std::string b = pick_binder(*this, var);
      return ty::refine(b,
                        random_chomp_type(table, var, max_pktin_ref),
                        random_phi(*this, table, b, max_pktin_ref));
    }
  }
}

Query Fuzzer::random_query(const HeaderTable& table, const Bound& bound) {
  Query q;
  q.bound = bound;
  size_t max_len = bound.max_total_bits;
  std::string gvar;
  if (flip()) {
    gvar = "g";
    q.ctx = q.ctx.extend(gvar, random_leaf(*this, table, "", max_len));
  }
  auto qtype = [&]() -> TypePtr {
    TypePtr base = random_chomp_type(table, "", max_len);
    if (pick(4) == 0) {
      // wrap in a substitution
      std::string v = "s";
      std::string b = pick_binder(*this, v);
      TypePtr target = ty::refine(
          b, std::move(base),
          fm::eq(ex::len(b, Pkt::In), ex::len(v, Pkt::In)));
      return ty::subst(std::move(target), v,
                       random_leaf(*this, table, v, max_len));
    }
    if (!gvar.empty() && pick(3) == 0) {
      std::string b = pick_binder(*this, gvar);
      return ty::refine(
          b, std::move(base),
          fm::eq(ex::packet(b, Pkt::In), ex::packet(gvar, Pkt::In)));
    }
    return base;
  };
  q.lhs = qtype();
  q.rhs = qtype();
  return q;
}

TypePtr Fuzzer::random_sigma_type(const HeaderTable& table,
                                  const Bound& bound) {
  size_t max_len = bound.max_total_bits;
  std::string c = pick_binder(*this, "");
  TypePtr left = random_leaf(*this, table, c, max_len);
  TypePtr right = random_leaf(*this, table, c, max_len);
  if (flip()) {
    std::string d = pick_binder(*this, c);
    right = ty::refine(d, std::move(right), dep_atom(*this, table, d, c));
  }
  return ty::sigma(c, std::move(left), std::move(right));
}

namespace {

// Static facts that hold in every heap reachable at a program point,
// regardless of branch outcomes.
struct GenState {
  size_t min_in = 0;              // guaranteed remaining pkt_in bits
  size_t min_out = 0, max_out = 0; // pkt_out bits added so far (range)
  std::set<std::string> valid;    // definitely valid
  std::set<std::string> invalid;  // definitely invalid
};

GenState merge(const GenState& a, const GenState& b) {
  GenState m;
  m.min_in = std::min(a.min_in, b.min_in);
  m.min_out = std::min(a.min_out, b.min_out);
  m.max_out = std::max(a.max_out, b.max_out);
  std::set_intersection(a.valid.begin(), a.valid.end(), b.valid.begin(),
                        b.valid.end(), std::inserter(m.valid, m.valid.end()));
  std::set_intersection(a.invalid.begin(), a.invalid.end(), b.invalid.begin(),
                        b.invalid.end(),
                        std::inserter(m.invalid, m.invalid.end()));
  return m;
}

const std::string* pick_from(Fuzzer& fz, const std::set<std::string>& s) {
  if (s.empty()) return nullptr;
  size_t k = fz.pick(s.size());
  auto it = s.begin();
  std::advance(it, k);
  return &*it;
}

// Condition that evaluates (strictly) on every heap reachable here.
FormulaPtr defined_condition(Fuzzer& fz, const HeaderTable& t,
                             const GenState& st) {
  switch (fz.pick(4)) {
    case 0:
      return fm::gt(ex::len("heap", Pkt::In), ex::num(fz.pick(st.min_in + 2)));
    case 1: {
      FormulaPtr v = fm::valid("heap", pick_inst(fz, t));
      return fz.flip() ? fm::neg(std::move(v)) : v;
    }
    case 2: {
      if (st.min_in == 0) {
        return fm::eq(ex::len("heap", Pkt::In), ex::num(fz.pick(3)));
      }
      size_t hi = 1 + fz.pick(st.min_in);
      size_t lo = fz.pick(hi);
      return fm::eq(ex::slice_pkt("heap", Pkt::In, lo, hi),
                    ex::bv(random_bits(fz, hi - lo)));
    }
    default: {
      if (const std::string* inst = pick_from(fz, st.valid)) {
        size_t sz = t.sizeof_inst(*inst);
        size_t hi = 1 + fz.pick(sz);
        size_t lo = fz.pick(hi);
        return fm::eq(ex::slice_inst("heap", *inst, lo, hi),
                      ex::bv(random_bits(fz, hi - lo)));
      }
      return fm::eq(ex::len("heap", Pkt::Out), ex::num(fz.pick(3)));
    }
  }
}

ExprPtr assignable_value(Fuzzer& fz, const HeaderTable& t, const GenState& st,
                         size_t width) {
  if (fz.flip()) return ex::bv(random_bits(fz, width));
  // a slice of some definitely-valid instance that is wide enough
  std::vector<std::string> wide;
  for (const std::string& inst : st.valid) {
    if (t.sizeof_inst(inst) >= width) wide.push_back(inst);
  }
  if (wide.empty()) return ex::bv(random_bits(fz, width));
  const std::string& inst = wide[fz.pick(wide.size())];
  size_t lo = fz.pick(t.sizeof_inst(inst) - width + 1);
  return ex::slice_inst("heap", inst, lo, lo + width);
}

const size_t kEmitBudget = 2;

CmdPtr gen_cmd(Fuzzer& fz, const HeaderTable& t, GenState& st, size_t depth) {
  // collect feasible moves, then pick one
  std::vector<int> moves = {0}; // skip is always possible
  for (const std::string& inst : t.instance_order) {
    if (st.min_in >= t.sizeof_inst(inst)) {
      moves.push_back(1);
      break;
    }
  }
  if (!st.invalid.empty()) moves.push_back(2);
  for (const std::string& inst : st.valid) {
    if (st.max_out + t.sizeof_inst(inst) <= kEmitBudget) {
      moves.push_back(3);
      break;
    }
  }
  if (!st.valid.empty()) moves.push_back(4);
  if (depth > 0) moves.push_back(5);
  moves.push_back(6); // reset

  switch (moves[fz.pick(moves.size())]) {
    case 1: {
      std::vector<std::string> fits;
      for (const std::string& inst : t.instance_order) {
        if (st.min_in >= t.sizeof_inst(inst)) fits.push_back(inst);
      }
      const std::string& inst = fits[fz.pick(fits.size())];
      st.min_in -= t.sizeof_inst(inst);
      st.valid.insert(inst);
      st.invalid.erase(inst);
      return cm::extract(inst);
    }
    case 2: {
      const std::string* inst = pick_from(fz, st.invalid);
      st.valid.insert(*inst);
      st.invalid.erase(*inst);
      return cm::add(*inst);
    }
    case 3: {
      std::vector<std::string> fits;
      for (const std::string& inst : st.valid) {
        if (st.max_out + t.sizeof_inst(inst) <= kEmitBudget) {
          fits.push_back(inst);
        }
      }
      const std::string& inst = fits[fz.pick(fits.size())];
      st.min_out += t.sizeof_inst(inst);
      st.max_out += t.sizeof_inst(inst);
      return cm::remit(inst);
    }
    case 4: {
      const std::string* inst = pick_from(fz, st.valid);
      const auto& fields = t.fields_of(*inst);
      const auto& field = fields[fz.pick(fields.size())];
      return cm::assign(*inst, field.name,
                        assignable_value(fz, t, st, field.width));
    }
    case 5: {
      FormulaPtr cond = defined_condition(fz, t, st);
      GenState then_st = st, else_st = st;
      CmdPtr then_c = gen_cmd(fz, t, then_st, depth - 1);
      CmdPtr else_c =
          fz.flip() ? cm::skip() : gen_cmd(fz, t, else_st, depth - 1);
      st = merge(then_st, else_st);
      return cm::ifte(std::move(cond), std::move(then_c), std::move(else_c));
    }
    case 6: {
      st.min_in += st.min_out;
      st.min_out = 0;
      st.max_out = 0;
      st.valid.clear();
      st.invalid.clear();
      for (const std::string& inst : t.instance_order) st.invalid.insert(inst);
      return cm::reset();
    }
    default:
      return cm::skip();
  }
}

} // namespace

FuzzedProgram Fuzzer::random_program() {
  FuzzedProgram p;
  // keep the enumeration universe small: total header bits <= 3
  for (;;) {
    p.table = random_table();
    size_t total = 0;
    for (const std::string& inst : p.table.instance_order) {
      total += p.table.sizeof_inst(inst);
    }
    if (total <= 3) break;
  }
  p.binder = "x";
  size_t lo = 1 + pick(2); // lengths in (lo, hi], i.e. exactly lo+1
  size_t hi = lo + 1;
  p.mtu = hi;

  // Pinning every instance invalid makes the static validity tracking
  // below sound: add targets must be provably invalid on entry.
  std::string b = "w";
  p.input = ty::refine(
      b, ty::top(),
      fm::land(fm::gt(ex::len(b, Pkt::In), ex::num(lo)),
               fm::land(fm::neg(fm::gt(ex::len(b, Pkt::In), ex::num(hi))),
                        fm::land(fm::eq(ex::len(b, Pkt::Out), ex::num(0)),
                                 all_invalid(p.table, b)))));

  GenState st;
  st.min_in = lo + 1;
  for (const std::string& inst : p.table.instance_order) {
    st.invalid.insert(inst);
  }
  CmdPtr body = gen_cmd(*this, p.table, st, 2);
  size_t extra = pick(4);
  for (size_t i = 0; i < extra; ++i) {
    body = cm::seq(std::move(body), gen_cmd(*this, p.table, st, 1));
  }
  p.cmd = std::move(body);
  return p;
}

} // namespace pi4
