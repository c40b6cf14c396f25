#include "pi4/semantics.hpp"

#include <algorithm>
#include <cstdint>

#include "pi4/error.hpp"

namespace pi4 {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

Bits prefix(const Bits& b, size_t n) {
  return n == 0 ? Bits{} : b.slice(0, n);
}

const Bits* packet_of(const Heap& h, Pkt p) {
  return p == Pkt::In ? &h.in : &h.out;
}

} // namespace

Value eval_expr(const Expr& e, const Env& env, const HeaderTable& table) {
  (void)table; // widths are carried by the heap values themselves
  return std::visit(
      overloaded{
          [](const Expr::Num& n) { return Value::of_nat(n.value); },
          [](const Expr::Bv& b) {
            std::optional<Bits> v = bits_of_bv(b.bits);
            return v ? Value::of_bits(std::move(*v)) : Value::bottom();
          },
          [&](const Expr::Len& l) {
            const Heap* h = env_lookup(env, l.var);
            if (!h) return Value::bottom();
            return Value::of_nat(packet_of(*h, l.pkt)->size());
          },
          [&](const Expr::Plus& p) {
            Value a = eval_expr(*p.lhs, env, table);
            Value b = eval_expr(*p.rhs, env, table);
            if (a.kind != Value::Kind::Nat || b.kind != Value::Kind::Nat)
              return Value::bottom();
            return Value::of_nat(a.nat + b.nat);
          },
          [&](const Expr::Concat& c) {
            Value a = eval_expr(*c.lhs, env, table);
            Value b = eval_expr(*c.rhs, env, table);
            if (a.kind != Value::Kind::Bv || b.kind != Value::Kind::Bv)
              return Value::bottom();
            return Value::of_bits(a.bits.concat(b.bits));
          },
          [&](const Expr::Packet& p) {
            const Heap* h = env_lookup(env, p.var);
            if (!h) return Value::bottom();
            return Value::of_bits(*packet_of(*h, p.pkt));
          },
          [&](const Expr::SliceP& s) {
            const Heap* h = env_lookup(env, s.var);
            if (!h) return Value::bottom();
            const Bits* pkt = packet_of(*h, s.pkt);
            if (s.lo >= s.hi || s.hi > pkt->size()) return Value::bottom();
            return Value::of_bits(pkt->slice(s.lo, s.hi));
          },
          [&](const Expr::SliceI& s) {
            const Heap* h = env_lookup(env, s.var);
            if (!h) return Value::bottom();
            auto it = h->insts.find(s.inst);
            if (it == h->insts.end()) return Value::bottom();
            if (s.lo >= s.hi || s.hi > it->second.size())
              return Value::bottom();
            return Value::of_bits(it->second.slice(s.lo, s.hi));
          },
      },
      e.node);
}

bool eval_formula(const Formula& f, const Env& env, const HeaderTable& table) {
  return std::visit(
      overloaded{
          [](const Formula::True&) { return true; },
          [](const Formula::False&) { return false; },
          [&](const Formula::Eq& q) {
            Value a = eval_expr(*q.lhs, env, table);
            Value b = eval_expr(*q.rhs, env, table);
            if (a.is_bottom() || b.is_bottom()) return false;
            return a == b;
          },
          [&](const Formula::Gt& g) {
            Value a = eval_expr(*g.lhs, env, table);
            Value b = eval_expr(*g.rhs, env, table);
            if (a.kind != Value::Kind::Nat || b.kind != Value::Kind::Nat)
              return false;
            return a.nat > b.nat;
          },
          [&](const Formula::Neg& n) {
            return !eval_formula(*n.arg, env, table);
          },
          [&](const Formula::And& a) {
            return eval_formula(*a.lhs, env, table) &&
                   eval_formula(*a.rhs, env, table);
          },
          [&](const Formula::Valid& v) {
            const Heap* h = env_lookup(env, v.var);
            return h && h->valid(v.inst);
          },
      },
      f.node);
}

std::optional<bool> eval_formula_strict(const Formula& f, const Env& env,
                                        const HeaderTable& table) {
  using R = std::optional<bool>;
  return std::visit(
      overloaded{
          [](const Formula::True&) -> R { return true; },
          [](const Formula::False&) -> R { return false; },
          [&](const Formula::Eq& q) -> R {
            Value a = eval_expr(*q.lhs, env, table);
            Value b = eval_expr(*q.rhs, env, table);
            if (a.is_bottom() || b.is_bottom()) return std::nullopt;
            if (a.kind != b.kind) return std::nullopt;
            return a == b;
          },
          [&](const Formula::Gt& g) -> R {
            Value a = eval_expr(*g.lhs, env, table);
            Value b = eval_expr(*g.rhs, env, table);
            if (a.kind != Value::Kind::Nat || b.kind != Value::Kind::Nat)
              return std::nullopt;
            return a.nat > b.nat;
          },
          [&](const Formula::Neg& n) -> R {
            R v = eval_formula_strict(*n.arg, env, table);
            if (!v) return std::nullopt;
            return !*v;
          },
          [&](const Formula::And& a) -> R {
            R l = eval_formula_strict(*a.lhs, env, table);
            R r = eval_formula_strict(*a.rhs, env, table);
            if (!l || !r) return std::nullopt;
            return *l && *r;
          },
          [&](const Formula::Valid& v) -> R {
            const Heap* h = env_lookup(env, v.var);
            if (!h) return std::nullopt;
            return h->valid(v.inst);
          },
      },
      f.node);
}

namespace {

// Cardinality with the feasibility checks. The packet component counts every
// split (a, b) with a + b <= N, each carrying 2^(a+b) bit patterns; each
// instance is either absent or any of its 2^sizeof values.
uint64_t checked_universe_size(const HeaderTable& table, const Bound& bound) {
  if (bound.max_enum_bits >= 48)
    fail(ErrorKind::EnumerationSpaceExceeded,
         "enumeration cap 2^" + std::to_string(bound.max_enum_bits) +
             "*128 is not representable");
  const unsigned __int128 cap =
      (static_cast<unsigned __int128>(1) << bound.max_enum_bits) * 128;

  if (bound.max_total_bits > bound.max_enum_bits)
    fail(ErrorKind::EnumerationSpaceExceeded,
         "packet bound " + std::to_string(bound.max_total_bits) +
             " exceeds the enumeration cap " +
             std::to_string(bound.max_enum_bits));
  for (const std::string& inst : table.instance_order) {
    size_t w = table.sizeof_inst(inst);
    if (w > bound.max_enum_bits)
      fail(ErrorKind::EnumerationSpaceExceeded,
           "instance " + inst + " has " + std::to_string(w) +
               " bits, above the enumeration cap " +
               std::to_string(bound.max_enum_bits));
  }

  unsigned __int128 packets = 0;
  for (size_t s = 0; s <= bound.max_total_bits; ++s)
    packets += static_cast<unsigned __int128>(s + 1)
               << s; // (s+1) splits, 2^s patterns
  unsigned __int128 total = packets;
  for (const std::string& inst : table.instance_order) {
    total *= (static_cast<unsigned __int128>(1)
              << table.sizeof_inst(inst)) +
             1;
    if (total > cap) break;
  }
  if (total > cap)
    fail(ErrorKind::EnumerationSpaceExceeded,
         "heap universe has more than " +
             std::to_string(static_cast<uint64_t>(cap)) +
             " members; tighten the bound or use the solver backend");
  return static_cast<uint64_t>(total);
}

} // namespace

uint64_t universe_size(const HeaderTable& table, const Bound& bound) {
  return checked_universe_size(table, bound);
}

std::vector<Heap> enumerate_heaps(const HeaderTable& table,
                                  const Bound& bound) {
  uint64_t total = checked_universe_size(table, bound);
  std::vector<Heap> out;
  out.reserve(total);

  const std::vector<std::string>& order = table.instance_order;
  const size_t k = order.size();
  std::vector<size_t> widths(k);
  for (size_t i = 0; i < k; ++i) widths[i] = table.sizeof_inst(order[i]);

  const size_t n = bound.max_total_bits;
  for (size_t a = 0; a <= n; ++a) {
    for (size_t b = 0; a + b <= n; ++b) {
      for (uint64_t iv = 0; iv < (uint64_t{1} << a); ++iv) {
        Bits in = Bits::from_uint(iv, a);
        for (uint64_t ov = 0; ov < (uint64_t{1} << b); ++ov) {
          Bits outp = Bits::from_uint(ov, b);
          for (uint64_t subset = 0; subset < (uint64_t{1} << k); ++subset) {
            std::vector<size_t> valid;
            for (size_t i = 0; i < k; ++i)
              if (subset & (uint64_t{1} << i)) valid.push_back(i);
            // odometer over instance values, first declared changes slowest
            std::vector<uint64_t> vals(valid.size(), 0);
            bool done = false;
            while (!done) {
              Heap h{in, outp, {}};
              for (size_t i = 0; i < valid.size(); ++i)
                h.insts.emplace(order[valid[i]],
                                Bits::from_uint(vals[i], widths[valid[i]]));
              out.push_back(std::move(h));
              done = true;
              for (size_t i = valid.size(); i-- > 0;) {
                if (++vals[i] < (uint64_t{1} << widths[valid[i]])) {
                  done = false;
                  break;
                }
                vals[i] = 0;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Universe build_universe(const HeaderTable& table, const Bound& bound) {
  Universe u;
  u.table = &table;
  u.bound = bound;
  u.heaps = enumerate_heaps(table, bound);
  u.index.reserve(u.heaps.size());
  for (size_t i = 0; i < u.heaps.size(); ++i)
    u.index.emplace(u.heaps[i], static_cast<uint32_t>(i));
  return u;
}

bool Denoter::Key::operator==(const Key& o) const {
  return node == o.node && scope == o.scope;
}

size_t Denoter::KeyHash::operator()(const Key& k) const {
  size_t h = std::hash<const void*>{}(k.node.get());
  for (const auto& [name, heap] : k.scope) {
    h ^= std::hash<std::string>{}(name) + 0x9e3779b97f4a7c15ull + (h << 6) +
         (h >> 2);
    h ^= heap.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

const Mask& Denoter::mask(const TypePtr& t, const Env& env) {
  Key key{t, {}};
  std::set<std::string> fv = free_vars(*t);
  for (const std::string& name : fv) { // std::set iterates sorted
    if (const Heap* h = env_lookup(env, name)) key.scope.emplace_back(name, *h);
  }
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Mask m = compute(t, env);
  return cache_.emplace(std::move(key), std::move(m)).first->second;
}

std::vector<Heap> Denoter::heaps(const TypePtr& t, const Env& env) {
  const Mask& m = mask(t, env);
  std::vector<Heap> out;
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i]) out.push_back(u_->heaps[i]);
  return out;
}

bool Denoter::member(const Heap& h, const TypePtr& t, const Env& env) {
  std::optional<uint32_t> i = u_->find(h);
  if (!i) return false;
  return mask(t, env)[*i] != 0;
}

Mask Denoter::compute(const TypePtr& t, const Env& env) {
  const size_t n = u_->heaps.size();
  return std::visit(
      overloaded{
          [&](const HeapType::Nothing&) { return Mask(n, 0); },
          [&](const HeapType::Top&) { return Mask(n, 1); },
          [&](const HeapType::Choice& c) {
            Mask m = mask(c.lhs, env);
            const Mask& r = mask(c.rhs, env);
            for (size_t i = 0; i < n; ++i) m[i] |= r[i];
            return m;
          },
          [&](const HeapType::Refine& r) {
            const Mask& inner = mask(r.inner, env);
            Mask m(n, 0);
            Env ext = env;
            ext.emplace_back(r.binder, Heap{});
            for (size_t i = 0; i < n; ++i) {
              if (!inner[i]) continue;
              ext.back().second = u_->heaps[i];
              if (eval_formula(*r.phi, ext, *u_->table)) m[i] = 1;
            }
            return m;
          },
          [&](const HeapType::Sigma& s) {
            const Mask left = mask(s.left, env); // copy: cache may grow
            Mask m(n, 0);
            Env ext = env;
            ext.emplace_back(s.binder, Heap{});
            const size_t cap = u_->bound.max_total_bits;
            for (size_t i = 0; i < n; ++i) {
              if (!left[i]) continue;
              const Heap& h1 = u_->heaps[i];
              ext.back().second = h1;
              const Mask& right = mask(s.right, ext);
              for (size_t j = 0; j < n; ++j) {
                if (!right[j]) continue;
                const Heap& h2 = u_->heaps[j];
                if (h1.packet_bits() + h2.packet_bits() > cap) continue;
                bool overlap = false;
                for (const auto& [name, _] : h2.insts)
                  if (h1.insts.count(name)) {
                    overlap = true;
                    break;
                  }
                if (overlap) continue;
                std::optional<uint32_t> idx = u_->find(concat_heaps(h1, h2));
                if (idx) m[*idx] = 1;
              }
            }
            return m;
          },
          [&](const HeapType::Subst& s) {
            const Mask repl = mask(s.replacement, env); // copy: cache may grow
            Mask m(n, 0);
            Env ext = env;
            ext.emplace_back(s.binder, Heap{});
            for (size_t j = 0; j < n; ++j) {
              if (!repl[j]) continue;
              ext.back().second = u_->heaps[j];
              const Mask& inner = mask(s.target, ext);
              for (size_t i = 0; i < n; ++i) m[i] |= inner[i];
            }
            return m;
          },
      },
      t->node);
}

std::vector<Heap> denote_type(const TypePtr& t, const Env& env,
                              const Universe& u) {
  Denoter den(u);
  return den.heaps(t, env);
}

namespace {

// All ways to split h into h1 ++ h2: a cut point in each packet and a
// partition of the valid instances.
bool entails_sigma(const Heap& h, const HeapType::Sigma& s, const Env& env,
                   const Universe& u) {
  std::vector<std::string> names;
  names.reserve(h.insts.size());
  for (const auto& [name, _] : h.insts) names.push_back(name);
  const size_t k = names.size();

  for (size_t ci = 0; ci <= h.in.size(); ++ci) {
    for (size_t co = 0; co <= h.out.size(); ++co) {
      for (uint64_t part = 0; part < (uint64_t{1} << k); ++part) {
        Heap h1{prefix(h.in, ci), prefix(h.out, co), {}};
        Heap h2{h.in.drop(ci), h.out.drop(co), {}};
        for (size_t i = 0; i < k; ++i) {
          const Bits& v = h.insts.at(names[i]);
          if (part & (uint64_t{1} << i))
            h1.insts.emplace(names[i], v);
          else
            h2.insts.emplace(names[i], v);
        }
        if (!entails(h1, s.left, env, u)) continue;
        Env ext = env;
        ext.emplace_back(s.binder, std::move(h1));
        if (entails(h2, s.right, ext, u)) return true;
      }
    }
  }
  return false;
}

} // namespace

bool entails(const Heap& h, const TypePtr& t, const Env& env,
             const Universe& u) {
  return std::visit(
      overloaded{
          [](const HeapType::Nothing&) { return false; },
          [](const HeapType::Top&) { return true; },
          [&](const HeapType::Choice& c) {
            return entails(h, c.lhs, env, u) || entails(h, c.rhs, env, u);
          },
          [&](const HeapType::Refine& r) {
            if (!entails(h, r.inner, env, u)) return false;
            Env ext = env;
            ext.emplace_back(r.binder, h);
            return eval_formula(*r.phi, ext, *u.table);
          },
          [&](const HeapType::Sigma& s) { return entails_sigma(h, s, env, u); },
          [&](const HeapType::Subst& s) {
            Env ext = env;
            ext.emplace_back(s.binder, Heap{});
            for (const Heap& cand : u.heaps) {
              if (!entails(cand, s.replacement, env, u)) continue;
              ext.back().second = cand;
              if (entails(h, s.target, ext, u)) return true;
            }
            return false;
          },
      },
      t->node);
}

} // namespace pi4
