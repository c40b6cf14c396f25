#include "pi4/chomp.hpp"

#include <string>

#include "pi4/error.hpp"

namespace pi4 {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr placeholder_lit(int b) {
  return ex::bv(BvBits{BvBit::placeholder(b)});
}

FormulaPtr chomp_formula1(const FormulaPtr& f, const std::string& y, int b);

// Rewrites references to the already-chomped variable x inside a type that
// is *not* itself being chomped (the right side of a dependent pair).
TypePtr chomp_ref1(const TypePtr& t, const std::string& x, int b) {
  return std::visit(
      overloaded{
          [&](const HeapType::Nothing&) { return t; },
          [&](const HeapType::Top&) { return t; },
          [&](const HeapType::Sigma& s) {
            return ty::sigma(s.binder, chomp_ref1(s.left, x, b),
                             s.binder == x ? s.right
                                           : chomp_ref1(s.right, x, b));
          },
          [&](const HeapType::Choice& c) {
            return ty::choice(chomp_ref1(c.lhs, x, b),
                              chomp_ref1(c.rhs, x, b));
          },
          [&](const HeapType::Refine& r) {
            return ty::refine(r.binder, chomp_ref1(r.inner, x, b),
                              r.binder == x ? r.phi
                                            : chomp_formula1(r.phi, x, b));
          },
          [&](const HeapType::Subst& s) {
            return ty::subst(s.binder == x ? s.target
                                           : chomp_ref1(s.target, x, b),
                             s.binder, chomp_ref1(s.replacement, x, b));
          },
      },
      t->node);
}

FormulaPtr chomp_formula1(const FormulaPtr& f, const std::string& y, int b) {
  return std::visit(
      overloaded{
          [&](const Formula::True&) { return f; },
          [&](const Formula::False&) { return f; },
          [&](const Formula::Eq& q) {
            return fm::eq(chomp_expr1(q.lhs, y, b), chomp_expr1(q.rhs, y, b));
          },
          [&](const Formula::Gt& g) {
            return fm::gt(chomp_expr1(g.lhs, y, b), chomp_expr1(g.rhs, y, b));
          },
          [&](const Formula::Neg& n) {
            return fm::neg(chomp_formula1(n.arg, y, b));
          },
          [&](const Formula::And& a) {
            return fm::land(chomp_formula1(a.lhs, y, b),
                            chomp_formula1(a.rhs, y, b));
          },
          [&](const Formula::Valid&) { return f; },
      },
      f->node);
}

std::string fresh_for(const TypePtr& t, const std::string& hint) {
  std::set<std::string> fv = free_vars(*t);
  if (!fv.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string name = hint + std::to_string(i);
    if (!fv.count(name)) return name;
  }
}

} // namespace

ExprPtr chomp_expr1(const ExprPtr& e, const std::string& y, int b) {
  return std::visit(
      overloaded{
          [&](const Expr::Num&) { return e; },
          [&](const Expr::Bv&) { return e; },
          [&](const Expr::Len& l) {
            if (l.var != y || l.pkt != Pkt::In) return e;
            return ex::plus(ex::len(l.var, l.pkt), ex::num(1));
          },
          [&](const Expr::Plus& p) {
            return ex::plus(chomp_expr1(p.lhs, y, b),
                            chomp_expr1(p.rhs, y, b));
          },
          [&](const Expr::Concat& c) {
            return ex::concat(chomp_expr1(c.lhs, y, b),
                              chomp_expr1(c.rhs, y, b));
          },
          [&](const Expr::Packet& p) {
            if (p.var != y || p.pkt != Pkt::In) return e;
            return ex::concat(placeholder_lit(b), ex::packet(p.var, p.pkt));
          },
          [&](const Expr::SliceP& s) {
            if (s.var != y || s.pkt != Pkt::In) return e;
            if (s.hi <= 1) return placeholder_lit(b);
            if (s.lo == 0)
              return ex::concat(placeholder_lit(b),
                                ex::slice_pkt(s.var, s.pkt, 0, s.hi - 1));
            return ex::slice_pkt(s.var, s.pkt, s.lo - 1, s.hi - 1);
          },
          [&](const Expr::SliceI&) { return e; },
      },
      e->node);
}

TypePtr chomp1(const TypePtr& t, int b) {
  return std::visit(
      overloaded{
          [&](const HeapType::Nothing&) { return t; },
          [&](const HeapType::Top&) { return t; },
          [&](const HeapType::Sigma& s) {
            // either the left component still holds bits, or it is already
            // drained and the bit comes from the right component
            TypePtr bit_from_left = ty::sigma(s.binder, chomp1(s.left, b),
                                              chomp_ref1(s.right, s.binder, b));
            std::string drained = fresh_for(s.left, "y");
            TypePtr bit_from_right = ty::sigma(
                s.binder,
                ty::refine(drained, s.left,
                           fm::eq(ex::len(drained, Pkt::In), ex::num(0))),
                chomp1(s.right, b));
            return ty::choice(bit_from_left, bit_from_right);
          },
          [&](const HeapType::Choice& c) {
            return ty::choice(chomp1(c.lhs, b), chomp1(c.rhs, b));
          },
          [&](const HeapType::Refine& r) {
            return ty::refine(r.binder, chomp1(r.inner, b),
                              chomp_formula1(r.phi, r.binder, b));
          },
          [&](const HeapType::Subst& s) {
            return ty::subst(chomp1(s.target, b), s.binder, s.replacement);
          },
      },
      t->node);
}

namespace {

bool bv_has(const BvBits& bits, int b) {
  for (const BvBit& bit : bits)
    if (bit.kind == BvBit::Kind::Placeholder && bit.id == b) return true;
  return false;
}

ExprPtr heap_ref_expr(const ExprPtr& e, int b, const std::string& x,
                      const std::string& inst, size_t n,
                      const HeaderTable& table) {
  return std::visit(
      overloaded{
          [&](const Expr::Bv& lit) {
            if (!bv_has(lit.bits, b)) return e;
            size_t w = table.sizeof_inst(inst);
            // right fold so the replacement keeps the listing order
            ExprPtr acc = ex::bv(BvBits{});
            for (size_t i = lit.bits.size(); i-- > 0;) {
              const BvBit& bit = lit.bits[i];
              ExprPtr cur =
                  (bit.kind == BvBit::Kind::Placeholder && bit.id == b)
                      ? ex::slice_inst(x, inst, w - n, w - n + 1)
                      : ex::bv(BvBits{bit});
              acc = ex::concat(cur, acc);
            }
            return acc;
          },
          [&](const Expr::Plus& p) {
            return ex::plus(heap_ref_expr(p.lhs, b, x, inst, n, table),
                            heap_ref_expr(p.rhs, b, x, inst, n, table));
          },
          [&](const Expr::Concat& c) {
            return ex::concat(heap_ref_expr(c.lhs, b, x, inst, n, table),
                              heap_ref_expr(c.rhs, b, x, inst, n, table));
          },
          [&](const auto&) { return e; },
      },
      e->node);
}

FormulaPtr heap_ref_formula(const FormulaPtr& f, int b, const std::string& x,
                            const std::string& inst, size_t n,
                            const HeaderTable& table) {
  return std::visit(
      overloaded{
          [&](const Formula::Eq& q) {
            return fm::eq(heap_ref_expr(q.lhs, b, x, inst, n, table),
                          heap_ref_expr(q.rhs, b, x, inst, n, table));
          },
          [&](const Formula::Gt& g) {
            return fm::gt(heap_ref_expr(g.lhs, b, x, inst, n, table),
                          heap_ref_expr(g.rhs, b, x, inst, n, table));
          },
          [&](const Formula::Neg& ng) {
            return fm::neg(heap_ref_formula(ng.arg, b, x, inst, n, table));
          },
          [&](const Formula::And& a) {
            return fm::land(heap_ref_formula(a.lhs, b, x, inst, n, table),
                            heap_ref_formula(a.rhs, b, x, inst, n, table));
          },
          [&](const auto&) { return f; },
      },
      f->node);
}

} // namespace

TypePtr heap_ref1(const TypePtr& t, int b, const std::string& x,
                  const std::string& inst, size_t n,
                  const HeaderTable& table) {
  if (!has_placeholder(*t)) return t;
  return std::visit(
      overloaded{
          [&](const HeapType::Sigma& s) {
            return ty::sigma(s.binder, heap_ref1(s.left, b, x, inst, n, table),
                             heap_ref1(s.right, b, x, inst, n, table));
          },
          [&](const HeapType::Choice& c) {
            return ty::choice(heap_ref1(c.lhs, b, x, inst, n, table),
                              heap_ref1(c.rhs, b, x, inst, n, table));
          },
          [&](const HeapType::Refine& r) {
            return ty::refine(r.binder, heap_ref1(r.inner, b, x, inst, n, table),
                              heap_ref_formula(r.phi, b, x, inst, n, table));
          },
          [&](const HeapType::Subst& s) {
            return ty::subst(heap_ref1(s.target, b, x, inst, n, table),
                             s.binder,
                             heap_ref1(s.replacement, b, x, inst, n, table));
          },
          [&](const auto&) { return t; },
      },
      t->node);
}

TypePtr chomp_rec(const TypePtr& t, size_t n, const std::string& x,
                  const std::string& inst, const HeaderTable& table) {
  TypePtr cur = t;
  for (size_t i = n; i >= 1; --i)
    cur = heap_ref1(chomp1(cur, 0), 0, x, inst, i, table);
  return cur;
}

TypePtr chomp(const TypePtr& t, const std::string& inst, const std::string& x,
              const HeaderTable& table) {
  if (free_vars(*t).count(x))
    fail(ErrorKind::FreeVariableCapture,
         "chomp binder " + x + " already occurs free in the type");
  return chomp_rec(t, table.sizeof_inst(inst), x, inst, table);
}

} // namespace pi4
