#include "pi4/ast.hpp"

#include "pi4/error.hpp"

namespace pi4 {

BvBits bv_of_bits(const Bits& b) {
  BvBits r;
  r.reserve(b.size());
  for (size_t i = 0; i < b.size(); ++i) {
    r.push_back(b.at(i) ? BvBit::one() : BvBit::zero());
  }
  return r;
}

std::optional<Bits> bits_of_bv(const BvBits& b) {
  Bits r;
  for (const BvBit& bit : b) {
    if (bit.kind == BvBit::Kind::Placeholder) return std::nullopt;
    r.push_back(bit.kind == BvBit::Kind::One ? 1 : 0);
  }
  return r;
}

namespace ex {
ExprPtr num(uint64_t v) {
  return std::make_shared<Expr>(Expr{Expr::Num{v}});
}
ExprPtr bv(BvBits bits) {
  return std::make_shared<Expr>(Expr{Expr::Bv{std::move(bits)}});
}
ExprPtr bv(const Bits& bits) { return bv(bv_of_bits(bits)); }
ExprPtr len(std::string var, Pkt pkt) {
  return std::make_shared<Expr>(Expr{Expr::Len{std::move(var), pkt}});
}
ExprPtr plus(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Expr{Expr::Plus{std::move(lhs), std::move(rhs)}});
}
ExprPtr concat(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(
      Expr{Expr::Concat{std::move(lhs), std::move(rhs)}});
}
ExprPtr packet(std::string var, Pkt pkt) {
  return std::make_shared<Expr>(Expr{Expr::Packet{std::move(var), pkt}});
}
ExprPtr slice_pkt(std::string var, Pkt pkt, size_t lo, size_t hi) {
  return std::make_shared<Expr>(Expr{Expr::SliceP{std::move(var), pkt, lo, hi}});
}
ExprPtr slice_inst(std::string var, std::string inst, size_t lo, size_t hi) {
  return std::make_shared<Expr>(
      Expr{Expr::SliceI{std::move(var), std::move(inst), lo, hi}});
}
} // namespace ex

namespace fm {
FormulaPtr tru() { return std::make_shared<Formula>(Formula{Formula::True{}}); }
FormulaPtr fls() { return std::make_shared<Formula>(Formula{Formula::False{}}); }
FormulaPtr eq(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Formula>(
      Formula{Formula::Eq{std::move(lhs), std::move(rhs)}});
}
FormulaPtr gt(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Formula>(
      Formula{Formula::Gt{std::move(lhs), std::move(rhs)}});
}
FormulaPtr neg(FormulaPtr f) {
  return std::make_shared<Formula>(Formula{Formula::Neg{std::move(f)}});
}
FormulaPtr land(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(
      Formula{Formula::And{std::move(lhs), std::move(rhs)}});
}
FormulaPtr valid(std::string var, std::string inst) {
  return std::make_shared<Formula>(
      Formula{Formula::Valid{std::move(var), std::move(inst)}});
}
FormulaPtr lor(FormulaPtr lhs, FormulaPtr rhs) {
  return neg(land(neg(std::move(lhs)), neg(std::move(rhs))));
}
FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs) {
  return lor(neg(std::move(lhs)), std::move(rhs));
}
FormulaPtr iff(FormulaPtr lhs, FormulaPtr rhs) {
  return land(implies(lhs, rhs), implies(rhs, lhs));
}
} // namespace fm

namespace ty {
TypePtr nothing() {
  return std::make_shared<HeapType>(HeapType{HeapType::Nothing{}});
}
TypePtr top() { return std::make_shared<HeapType>(HeapType{HeapType::Top{}}); }
TypePtr sigma(std::string binder, TypePtr left, TypePtr right) {
  return std::make_shared<HeapType>(HeapType{
      HeapType::Sigma{std::move(binder), std::move(left), std::move(right)}});
}
TypePtr choice(TypePtr lhs, TypePtr rhs) {
  return std::make_shared<HeapType>(
      HeapType{HeapType::Choice{std::move(lhs), std::move(rhs)}});
}
TypePtr refine(std::string binder, TypePtr inner, FormulaPtr phi) {
  return std::make_shared<HeapType>(HeapType{
      HeapType::Refine{std::move(binder), std::move(inner), std::move(phi)}});
}
TypePtr subst(TypePtr target, std::string binder, TypePtr replacement) {
  return std::make_shared<HeapType>(HeapType{HeapType::Subst{
      std::move(target), std::move(binder), std::move(replacement)}});
}
} // namespace ty

namespace cm {
CmdPtr extract(std::string inst) {
  return std::make_shared<Command>(Command{Command::Extract{std::move(inst)}});
}
CmdPtr remit(std::string inst) {
  return std::make_shared<Command>(Command{Command::Remit{std::move(inst)}});
}
CmdPtr add(std::string inst) {
  return std::make_shared<Command>(Command{Command::Add{std::move(inst)}});
}
CmdPtr reset() { return std::make_shared<Command>(Command{Command::Reset{}}); }
CmdPtr skip() { return std::make_shared<Command>(Command{Command::Skip{}}); }
CmdPtr assign(std::string inst, std::string field, ExprPtr value) {
  return std::make_shared<Command>(Command{
      Command::Assign{std::move(inst), std::move(field), std::move(value)}});
}
CmdPtr ifte(FormulaPtr cond, CmdPtr then_cmd, CmdPtr else_cmd) {
  return std::make_shared<Command>(Command{Command::If{
      std::move(cond), std::move(then_cmd), std::move(else_cmd)}});
}
CmdPtr seq(CmdPtr first, CmdPtr second) {
  return std::make_shared<Command>(
      Command{Command::Seq{std::move(first), std::move(second)}});
}
CmdPtr ascribe(CmdPtr body, std::string binder, TypePtr input, TypePtr output) {
  return std::make_shared<Command>(Command{Command::Ascribe{
      std::move(body), std::move(binder), std::move(input), std::move(output)}});
}
} // namespace cm

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Expr::Num& x) {
            return x.value == std::get<Expr::Num>(b.node).value;
          },
          [&](const Expr::Bv& x) {
            return x.bits == std::get<Expr::Bv>(b.node).bits;
          },
          [&](const Expr::Len& x) {
            const auto& y = std::get<Expr::Len>(b.node);
            return x.var == y.var && x.pkt == y.pkt;
          },
          [&](const Expr::Plus& x) {
            const auto& y = std::get<Expr::Plus>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Expr::Concat& x) {
            const auto& y = std::get<Expr::Concat>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Expr::Packet& x) {
            const auto& y = std::get<Expr::Packet>(b.node);
            return x.var == y.var && x.pkt == y.pkt;
          },
          [&](const Expr::SliceP& x) {
            const auto& y = std::get<Expr::SliceP>(b.node);
            return x.var == y.var && x.pkt == y.pkt && x.lo == y.lo &&
                   x.hi == y.hi;
          },
          [&](const Expr::SliceI& x) {
            const auto& y = std::get<Expr::SliceI>(b.node);
            return x.var == y.var && x.inst == y.inst && x.lo == y.lo &&
                   x.hi == y.hi;
          },
      },
      a.node);
}

bool equal(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Formula::True&) { return true; },
          [&](const Formula::False&) { return true; },
          [&](const Formula::Eq& x) {
            const auto& y = std::get<Formula::Eq>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Formula::Gt& x) {
            const auto& y = std::get<Formula::Gt>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Formula::Neg& x) {
            return equal(*x.arg, *std::get<Formula::Neg>(b.node).arg);
          },
          [&](const Formula::And& x) {
            const auto& y = std::get<Formula::And>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Formula::Valid& x) {
            const auto& y = std::get<Formula::Valid>(b.node);
            return x.var == y.var && x.inst == y.inst;
          },
      },
      a.node);
}

bool equal(const HeapType& a, const HeapType& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const HeapType::Nothing&) { return true; },
          [&](const HeapType::Top&) { return true; },
          [&](const HeapType::Sigma& x) {
            const auto& y = std::get<HeapType::Sigma>(b.node);
            return x.binder == y.binder && equal(*x.left, *y.left) &&
                   equal(*x.right, *y.right);
          },
          [&](const HeapType::Choice& x) {
            const auto& y = std::get<HeapType::Choice>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const HeapType::Refine& x) {
            const auto& y = std::get<HeapType::Refine>(b.node);
            return x.binder == y.binder && equal(*x.inner, *y.inner) &&
                   equal(*x.phi, *y.phi);
          },
          [&](const HeapType::Subst& x) {
            const auto& y = std::get<HeapType::Subst>(b.node);
            return x.binder == y.binder && equal(*x.target, *y.target) &&
                   equal(*x.replacement, *y.replacement);
          },
      },
      a.node);
}

bool equal(const Command& a, const Command& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Command::Extract& x) {
            return x.inst == std::get<Command::Extract>(b.node).inst;
          },
          [&](const Command::Remit& x) {
            return x.inst == std::get<Command::Remit>(b.node).inst;
          },
          [&](const Command::Add& x) {
            return x.inst == std::get<Command::Add>(b.node).inst;
          },
          [&](const Command::Reset&) { return true; },
          [&](const Command::Skip&) { return true; },
          [&](const Command::Assign& x) {
            const auto& y = std::get<Command::Assign>(b.node);
            return x.inst == y.inst && x.field == y.field &&
                   equal(*x.value, *y.value);
          },
          [&](const Command::If& x) {
            const auto& y = std::get<Command::If>(b.node);
            return equal(*x.cond, *y.cond) && equal(*x.then_cmd, *y.then_cmd) &&
                   equal(*x.else_cmd, *y.else_cmd);
          },
          [&](const Command::Seq& x) {
            const auto& y = std::get<Command::Seq>(b.node);
            return equal(*x.first, *y.first) && equal(*x.second, *y.second);
          },
          [&](const Command::Ascribe& x) {
            const auto& y = std::get<Command::Ascribe>(b.node);
            return x.binder == y.binder && equal(*x.body, *y.body) &&
                   equal(*x.input, *y.input) && equal(*x.output, *y.output);
          },
      },
      a.node);
}

namespace {

void collect(const Expr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Expr::Num&) {},
                 [&](const Expr::Bv&) {},
                 [&](const Expr::Len& x) { out.insert(x.var); },
                 [&](const Expr::Plus& x) {
                   collect(*x.lhs, out);
                   collect(*x.rhs, out);
                 },
                 [&](const Expr::Concat& x) {
                   collect(*x.lhs, out);
                   collect(*x.rhs, out);
                 },
                 [&](const Expr::Packet& x) { out.insert(x.var); },
                 [&](const Expr::SliceP& x) { out.insert(x.var); },
                 [&](const Expr::SliceI& x) { out.insert(x.var); },
             },
             e.node);
}

void collect(const Formula& f, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Formula::True&) {},
                 [&](const Formula::False&) {},
                 [&](const Formula::Eq& x) {
                   collect(*x.lhs, out);
                   collect(*x.rhs, out);
                 },
                 [&](const Formula::Gt& x) {
                   collect(*x.lhs, out);
                   collect(*x.rhs, out);
                 },
                 [&](const Formula::Neg& x) { collect(*x.arg, out); },
                 [&](const Formula::And& x) {
                   collect(*x.lhs, out);
                   collect(*x.rhs, out);
                 },
                 [&](const Formula::Valid& x) { out.insert(x.var); },
             },
             f.node);
}

void collect(const HeapType& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const HeapType::Nothing&) {},
                 [&](const HeapType::Top&) {},
                 [&](const HeapType::Sigma& x) {
                   collect(*x.left, out);
                   std::set<std::string> inner;
                   collect(*x.right, inner);
                   inner.erase(x.binder);
                   out.insert(inner.begin(), inner.end());
                 },
                 [&](const HeapType::Choice& x) {
                   collect(*x.lhs, out);
                   collect(*x.rhs, out);
                 },
                 [&](const HeapType::Refine& x) {
                   collect(*x.inner, out);
                   std::set<std::string> inner;
                   collect(*x.phi, inner);
                   inner.erase(x.binder);
                   out.insert(inner.begin(), inner.end());
                 },
                 [&](const HeapType::Subst& x) {
                   std::set<std::string> inner;
                   collect(*x.target, inner);
                   inner.erase(x.binder);
                   out.insert(inner.begin(), inner.end());
                   collect(*x.replacement, out);
                 },
             },
             t.node);
}

} // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}
std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect(f, out);
  return out;
}
std::set<std::string> free_vars(const HeapType& t) {
  std::set<std::string> out;
  collect(t, out);
  return out;
}

ExprPtr rename_free_var(const ExprPtr& e, const std::string& from,
                        const std::string& to) {
  auto var = [&](const std::string& v) { return v == from ? to : v; };
  return std::visit(
      overloaded{
          [&](const Expr::Num&) { return e; },
          [&](const Expr::Bv&) { return e; },
          [&](const Expr::Len& x) {
            return x.var == from ? ex::len(to, x.pkt) : e;
          },
          [&](const Expr::Plus& x) {
            return ex::plus(rename_free_var(x.lhs, from, to),
                            rename_free_var(x.rhs, from, to));
          },
          [&](const Expr::Concat& x) {
            return ex::concat(rename_free_var(x.lhs, from, to),
                              rename_free_var(x.rhs, from, to));
          },
          [&](const Expr::Packet& x) {
            return x.var == from ? ex::packet(to, x.pkt) : e;
          },
          [&](const Expr::SliceP& x) {
            return ex::slice_pkt(var(x.var), x.pkt, x.lo, x.hi);
          },
          [&](const Expr::SliceI& x) {
            return ex::slice_inst(var(x.var), x.inst, x.lo, x.hi);
          },
      },
      e->node);
}

FormulaPtr rename_free_var(const FormulaPtr& f, const std::string& from,
                           const std::string& to) {
  return std::visit(
      overloaded{
          [&](const Formula::True&) { return f; },
          [&](const Formula::False&) { return f; },
          [&](const Formula::Eq& x) {
            return fm::eq(rename_free_var(x.lhs, from, to),
                          rename_free_var(x.rhs, from, to));
          },
          [&](const Formula::Gt& x) {
            return fm::gt(rename_free_var(x.lhs, from, to),
                          rename_free_var(x.rhs, from, to));
          },
          [&](const Formula::Neg& x) {
            return fm::neg(rename_free_var(x.arg, from, to));
          },
          [&](const Formula::And& x) {
            return fm::land(rename_free_var(x.lhs, from, to),
                            rename_free_var(x.rhs, from, to));
          },
          [&](const Formula::Valid& x) {
            return x.var == from ? fm::valid(to, x.inst) : f;
          },
      },
      f->node);
}

TypePtr rename_free_var(const TypePtr& t, const std::string& from,
                        const std::string& to) {
  auto guard = [&](const std::string& binder, const auto& scoped) {
    // a binder equal to `to` would capture renamed occurrences below it
    if (binder == to && free_vars(*scoped).count(from)) {
      fail(ErrorKind::FreeVariableCapture,
           "renaming " + from + " to " + to + " would be captured");
    }
  };
  return std::visit(
      overloaded{
          [&](const HeapType::Nothing&) { return t; },
          [&](const HeapType::Top&) { return t; },
          [&](const HeapType::Sigma& x) {
            TypePtr left = rename_free_var(x.left, from, to);
            if (x.binder == from) return ty::sigma(x.binder, left, x.right);
            guard(x.binder, x.right);
            return ty::sigma(x.binder, left,
                             rename_free_var(x.right, from, to));
          },
          [&](const HeapType::Choice& x) {
            return ty::choice(rename_free_var(x.lhs, from, to),
                              rename_free_var(x.rhs, from, to));
          },
          [&](const HeapType::Refine& x) {
            TypePtr inner = rename_free_var(x.inner, from, to);
            if (x.binder == from) return ty::refine(x.binder, inner, x.phi);
            guard(x.binder, x.phi);
            return ty::refine(x.binder, inner,
                              rename_free_var(x.phi, from, to));
          },
          [&](const HeapType::Subst& x) {
            TypePtr repl = rename_free_var(x.replacement, from, to);
            if (x.binder == from) return ty::subst(x.target, x.binder, repl);
            guard(x.binder, x.target);
            return ty::subst(rename_free_var(x.target, from, to), x.binder,
                             repl);
          },
      },
      t->node);
}

bool has_placeholder(const Expr& e) {
  return std::visit(
      overloaded{
          [&](const Expr::Num&) { return false; },
          [&](const Expr::Bv& x) {
            for (const BvBit& b : x.bits) {
              if (b.kind == BvBit::Kind::Placeholder) return true;
            }
            return false;
          },
          [&](const Expr::Len&) { return false; },
          [&](const Expr::Plus& x) {
            return has_placeholder(*x.lhs) || has_placeholder(*x.rhs);
          },
          [&](const Expr::Concat& x) {
            return has_placeholder(*x.lhs) || has_placeholder(*x.rhs);
          },
          [&](const Expr::Packet&) { return false; },
          [&](const Expr::SliceP&) { return false; },
          [&](const Expr::SliceI&) { return false; },
      },
      e.node);
}

bool has_placeholder(const Formula& f) {
  return std::visit(
      overloaded{
          [&](const Formula::True&) { return false; },
          [&](const Formula::False&) { return false; },
          [&](const Formula::Eq& x) {
            return has_placeholder(*x.lhs) || has_placeholder(*x.rhs);
          },
          [&](const Formula::Gt& x) {
            return has_placeholder(*x.lhs) || has_placeholder(*x.rhs);
          },
          [&](const Formula::Neg& x) { return has_placeholder(*x.arg); },
          [&](const Formula::And& x) {
            return has_placeholder(*x.lhs) || has_placeholder(*x.rhs);
          },
          [&](const Formula::Valid&) { return false; },
      },
      f.node);
}

bool has_placeholder(const HeapType& t) {
  return std::visit(
      overloaded{
          [&](const HeapType::Nothing&) { return false; },
          [&](const HeapType::Top&) { return false; },
          [&](const HeapType::Sigma& x) {
            return has_placeholder(*x.left) || has_placeholder(*x.right);
          },
          [&](const HeapType::Choice& x) {
            return has_placeholder(*x.lhs) || has_placeholder(*x.rhs);
          },
          [&](const HeapType::Refine& x) {
            return has_placeholder(*x.inner) || has_placeholder(*x.phi);
          },
          [&](const HeapType::Subst& x) {
            return has_placeholder(*x.target) || has_placeholder(*x.replacement);
          },
      },
      t.node);
}

size_t node_count(const Command& c) {
  return std::visit(
      overloaded{
          [&](const Command::Extract&) { return size_t{1}; },
          [&](const Command::Remit&) { return size_t{1}; },
          [&](const Command::Add&) { return size_t{1}; },
          [&](const Command::Reset&) { return size_t{1}; },
          [&](const Command::Skip&) { return size_t{1}; },
          [&](const Command::Assign&) { return size_t{1}; },
          [&](const Command::If& x) {
            return 1 + node_count(*x.then_cmd) + node_count(*x.else_cmd);
          },
          [&](const Command::Seq& x) {
            return 1 + node_count(*x.first) + node_count(*x.second);
          },
          [&](const Command::Ascribe& x) { return 1 + node_count(*x.body); },
      },
      c.node);
}

} // namespace pi4
