#include "pi4/typechecker.hpp"

#include <variant>

#include "pi4/chomp.hpp"
#include "pi4/sugar.hpp"

namespace pi4 {

const char* type_error_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::ValidityViolation: return "validity violation";
    case TypeErrorKind::PacketTooShort: return "packet too short";
    case TypeErrorKind::AscriptionInputMismatch:
      return "ascription input mismatch";
    case TypeErrorKind::AscriptionOutputMismatch:
      return "ascription output mismatch";
    case TypeErrorKind::IllFormedFormula: return "ill-formed formula";
  }
  return "unknown";
}

namespace {

// Static well-formedness of command-embedded expressions: the implicit heap
// is the only variable, slices must fit, and sorts must line up. Anything the
// total eval semantics would send to bottom on every heap is rejected here.
enum class Sort { Nat, Bv, Bad };

Sort wf_expr(const ExprPtr& e, const HeaderTable& table) {
  if (std::get_if<Expr::Num>(&e->node)) return Sort::Nat;
  if (const auto* bv = std::get_if<Expr::Bv>(&e->node)) {
    return bits_of_bv(bv->bits) ? Sort::Bv : Sort::Bad;
  }
  if (const auto* ln = std::get_if<Expr::Len>(&e->node)) {
    return ln->var == "heap" ? Sort::Nat : Sort::Bad;
  }
  if (const auto* p = std::get_if<Expr::Plus>(&e->node)) {
    return wf_expr(p->lhs, table) == Sort::Nat &&
                   wf_expr(p->rhs, table) == Sort::Nat
               ? Sort::Nat
               : Sort::Bad;
  }
  if (const auto* c = std::get_if<Expr::Concat>(&e->node)) {
    return wf_expr(c->lhs, table) == Sort::Bv &&
                   wf_expr(c->rhs, table) == Sort::Bv
               ? Sort::Bv
               : Sort::Bad;
  }
  if (const auto* pk = std::get_if<Expr::Packet>(&e->node)) {
    return pk->var == "heap" ? Sort::Bv : Sort::Bad;
  }
  if (const auto* sp = std::get_if<Expr::SliceP>(&e->node)) {
    return sp->var == "heap" && sp->lo < sp->hi ? Sort::Bv : Sort::Bad;
  }
  const auto& si = std::get<Expr::SliceI>(e->node);
  if (si.var != "heap" || !table.has_instance(si.inst)) return Sort::Bad;
  return si.lo < si.hi && si.hi <= table.sizeof_inst(si.inst) ? Sort::Bv
                                                              : Sort::Bad;
}

bool wf_formula(const FormulaPtr& f, const HeaderTable& table) {
  if (std::get_if<Formula::True>(&f->node) ||
      std::get_if<Formula::False>(&f->node)) {
    return true;
  }
  if (const auto* eq = std::get_if<Formula::Eq>(&f->node)) {
    Sort a = wf_expr(eq->lhs, table), b = wf_expr(eq->rhs, table);
    return a != Sort::Bad && a == b;
  }
  if (const auto* gt = std::get_if<Formula::Gt>(&f->node)) {
    return wf_expr(gt->lhs, table) == Sort::Nat &&
           wf_expr(gt->rhs, table) == Sort::Nat;
  }
  if (const auto* n = std::get_if<Formula::Neg>(&f->node)) {
    return wf_formula(n->arg, table);
  }
  if (const auto* a = std::get_if<Formula::And>(&f->node)) {
    return wf_formula(a->lhs, table) && wf_formula(a->rhs, table);
  }
  const auto& v = std::get<Formula::Valid>(f->node);
  return v.var == "heap" && table.has_instance(v.inst);
}

FormulaPtr len_is(const std::string& var, Pkt pkt, uint64_t n) {
  return fm::eq(ex::len(var, pkt), ex::num(n));
}

} // namespace

struct Checker::Frame {
  TypingResult result;
  bool failed = false;

  void set_error(TypeErrorKind kind, std::string message) {
    failed = true;
    result.error = kind;
    result.message = std::move(message);
  }
};

Checker::Checker(const HeaderTable& table, Decider& decider,
                 CheckerOptions opts)
    : table_(&table), decider_(&decider), opts_(opts) {}

std::string Checker::fresh(const std::string& hint) {
  // '$' cannot appear in parsed identifiers, so these never capture.
  return "$" + hint + std::to_string(counter_++);
}

bool Checker::oblige(Frame& fr, const Ctx& ctx, std::string description,
                     const TypePtr& lhs, const TypePtr& rhs) {
  SubtypeResult r = decider_->subtype(ctx, lhs, rhs);
  fr.result.obligations.push_back(
      Obligation{std::move(description), lhs, rhs, ctx, r.ok, r.cex});
  return r.ok;
}

TypePtr Checker::infer_node(Frame& fr, const Ctx& ctx, const CmdPtr& c,
                            const std::string& x, const TypePtr& t1) {
  const HeaderTable& tbl = *table_;

  if (std::get_if<Command::Skip>(&c->node)) {
    fr.result.trace.push_back("skip");
    std::string y = fresh("y");
    return ty::refine(y, t1, equals_strict(tbl, y, x));
  }

  if (const auto* ext = std::get_if<Command::Extract>(&c->node)) {
    fr.result.trace.push_back("extract");
    size_t sz = tbl.sizeof_inst(ext->inst);
    std::string v = fresh("v");
    TypePtr long_enough = ty::refine(
        v, ty::top(), fm::gt(ex::len(v, Pkt::In), ex::num(sz - 1)));
    std::string desc = "extract(" + ext->inst + "): input long enough";
    if (!oblige(fr, ctx, desc, t1, long_enough)) {
      fr.set_error(TypeErrorKind::PacketTooShort, desc + " does not hold");
      return nullptr;
    }
    if (opts_.optimized_extract) {
      std::string y = fresh("y");
      FormulaPtr phi = fm::land(
          fm::valid(y, ext->inst),
          fm::land(
              fm::eq(ex::packet(x, Pkt::In),
                     ex::concat(inst_expr(tbl, y, ext->inst),
                                ex::packet(y, Pkt::In))),
              fm::land(fm::eq(ex::packet(x, Pkt::Out), ex::packet(y, Pkt::Out)),
                       equals_except(tbl, y, x, ext->inst))));
      return ty::refine(y, ty::top(), phi);
    }
    // literal rule: peel sizeof bits off t1 and pin them to the new header
    std::string y = fresh("y");
    std::string z = fresh("z");
    TypePtr left = ty::refine(
        z, exact_instance_type(tbl, ext->inst, fresh("i")),
        fm::land(len_is(z, Pkt::In, 0), len_is(z, Pkt::Out, 0)));
    TypePtr chomped = chomp(t1, ext->inst, y, tbl);
    std::string w = fresh("z");
    FormulaPtr phi = fm::land(
        fm::eq(ex::concat(inst_expr(tbl, y, ext->inst), ex::packet(w, Pkt::In)),
               ex::packet(x, Pkt::In)),
        fm::land(fm::eq(ex::packet(w, Pkt::Out), ex::packet(x, Pkt::Out)),
                 equals_except(tbl, w, x, ext->inst)));
    return ty::sigma(y, left, ty::refine(w, chomped, phi));
  }

  if (const auto* rem = std::get_if<Command::Remit>(&c->node)) {
    fr.result.trace.push_back("remit");
    std::string desc = "remit(" + rem->inst + "): instance valid";
    std::string v = fresh("v");
    if (!oblige(fr, ctx, desc, t1,
                ty::refine(v, ty::top(), fm::valid(v, rem->inst)))) {
      fr.set_error(TypeErrorKind::ValidityViolation, desc + " does not hold");
      return nullptr;
    }
    std::string y = fresh("y"), z1 = fresh("z"), z2 = fresh("z");
    TypePtr left = ty::refine(z1, t1, equals_strict(tbl, z1, x));
    TypePtr right = ty::refine(
        z2, empty_type(tbl, fresh("e")),
        fm::land(len_is(z2, Pkt::In, 0),
                 fm::eq(ex::packet(z2, Pkt::Out), inst_expr(tbl, x, rem->inst))));
    return ty::sigma(y, left, right);
  }

  if (const auto* add = std::get_if<Command::Add>(&c->node)) {
    fr.result.trace.push_back("add");
    std::string desc = "add(" + add->inst + "): instance absent";
    std::string v = fresh("v");
    if (!oblige(fr, ctx, desc, t1,
                ty::refine(v, ty::top(), fm::neg(fm::valid(v, add->inst))))) {
      fr.set_error(TypeErrorKind::ValidityViolation, desc + " does not hold");
      return nullptr;
    }
    size_t sz = tbl.sizeof_inst(add->inst);
    std::string y = fresh("y"), z1 = fresh("z"), z2 = fresh("z");
    TypePtr left = ty::refine(z1, t1, equals_strict(tbl, z1, x));
    TypePtr right = ty::refine(
        z2, exact_instance_type(tbl, add->inst, fresh("i")),
        fm::land(len_is(z2, Pkt::In, 0),
                 fm::land(len_is(z2, Pkt::Out, 0),
                          fm::eq(inst_expr(tbl, z2, add->inst),
                                 ex::bv(Bits::from_uint(0, sz))))));
    return ty::sigma(y, left, right);
  }

  if (std::get_if<Command::Reset>(&c->node)) {
    fr.result.trace.push_back("reset");
    std::string y = fresh("y"), z1 = fresh("z"), z2 = fresh("z");
    TypePtr left = ty::refine(
        z1, empty_type(tbl, fresh("e")),
        fm::land(len_is(z1, Pkt::Out, 0),
                 fm::eq(ex::packet(z1, Pkt::In), ex::packet(x, Pkt::Out))));
    TypePtr right = ty::refine(
        z2, empty_type(tbl, fresh("e")),
        fm::land(len_is(z2, Pkt::Out, 0),
                 fm::eq(ex::packet(z2, Pkt::In), ex::packet(x, Pkt::In))));
    return ty::sigma(y, left, right);
  }

  if (const auto* as = std::get_if<Command::Assign>(&c->node)) {
    fr.result.trace.push_back("assign");
    auto range = tbl.field_range(as->inst, as->field);
    if (!range || wf_expr(as->value, tbl) != Sort::Bv) {
      fr.set_error(TypeErrorKind::IllFormedFormula,
                   "assignment to " + as->inst + "." + as->field +
                       " is not a well-formed bit-vector update");
      return nullptr;
    }
    std::string desc = "assign(" + as->inst + "." + as->field +
                       "): instance valid";
    std::string v = fresh("v");
    if (!oblige(fr, ctx, desc, t1,
                ty::refine(v, ty::top(), fm::valid(v, as->inst)))) {
      fr.set_error(TypeErrorKind::ValidityViolation, desc + " does not hold");
      return nullptr;
    }
    std::string y = fresh("y");
    FormulaPtr phi = fm::land(
        fm::eq(ex::packet(y, Pkt::In), ex::packet(x, Pkt::In)),
        fm::land(fm::eq(ex::packet(y, Pkt::Out), ex::packet(x, Pkt::Out)),
                 fm::land(equals_except(tbl, y, x, as->inst),
                          fm::valid(y, as->inst))));
    for (const auto& field : tbl.fields_of(as->inst)) {
      auto [lo, hi] = *tbl.field_range(as->inst, field.name);
      ExprPtr target = ex::slice_inst(y, as->inst, lo, hi);
      ExprPtr source = field.name == as->field
                           ? rename_free_var(as->value, "heap", x)
                           : ex::slice_inst(x, as->inst, lo, hi);
      phi = fm::land(std::move(phi), fm::eq(std::move(target),
                                            std::move(source)));
    }
    return ty::refine(y, ty::top(), phi);
  }

  if (const auto* ite = std::get_if<Command::If>(&c->node)) {
    fr.result.trace.push_back("if");
    if (!wf_formula(ite->cond, tbl)) {
      fr.set_error(TypeErrorKind::IllFormedFormula,
                   "branch condition is not well formed");
      return nullptr;
    }
    FormulaPtr phi = rename_free_var(ite->cond, "heap", x);
    TypePtr then_out =
        infer_node(fr, ctx, ite->then_cmd, x, ty::refine(x, t1, phi));
    if (fr.failed) return nullptr;
    TypePtr else_out = infer_node(fr, ctx, ite->else_cmd, x,
                                  ty::refine(x, t1, fm::neg(phi)));
    if (fr.failed) return nullptr;
    std::string z1 = fresh("z"), z2 = fresh("z");
    return ty::choice(ty::refine(z1, then_out, phi),
                      ty::refine(z2, else_out, fm::neg(phi)));
  }

  if (const auto* sq = std::get_if<Command::Seq>(&c->node)) {
    fr.result.trace.push_back("seq");
    TypePtr mid = infer_node(fr, ctx, sq->first, x, t1);
    if (fr.failed) return nullptr;
    std::string y = fresh("y");
    TypePtr out = infer_node(fr, ctx.extend(x, t1), sq->second, y, mid);
    if (fr.failed) return nullptr;
    return ty::subst(out, y, mid);
  }

  const auto& asc = std::get<Command::Ascribe>(c->node);
  fr.result.trace.push_back("ascribe");
  if (!oblige(fr, ctx, "ascription input", t1, asc.input)) {
    fr.set_error(TypeErrorKind::AscriptionInputMismatch,
                 "incoming type is not a subtype of the ascribed input");
    return nullptr;
  }
  TypePtr derived = infer_node(fr, ctx, asc.body, asc.binder, asc.input);
  if (fr.failed) return nullptr;
  if (!oblige(fr, ctx.extend(asc.binder, asc.input), "ascription output",
              derived, asc.output)) {
    fr.set_error(TypeErrorKind::AscriptionOutputMismatch,
                 "derived type is not a subtype of the ascribed output");
    return nullptr;
  }
  return rename_free_var(asc.output, asc.binder, x);
}

TypingResult Checker::infer(const Ctx& ctx, const CmdPtr& c,
                            const std::string& x, const TypePtr& t1) {
  Frame fr;
  TypePtr out = infer_node(fr, ctx, c, x, t1);
  if (!fr.failed && out) {
    fr.result.ok = true;
    fr.result.output = out;
  }
  return fr.result;
}

TypingResult Checker::check_ascription(const Ctx& ctx, const CmdPtr& body,
                                       const std::string& x, const TypePtr& t1,
                                       const std::string& asc_binder,
                                       const TypePtr& asc_in,
                                       const TypePtr& asc_out) {
  (void)x;
  Frame fr;
  if (!oblige(fr, ctx, "ascription input", t1, asc_in)) {
    fr.set_error(TypeErrorKind::AscriptionInputMismatch,
                 "input type is not a subtype of the signature input");
    return fr.result;
  }
  TypePtr derived = infer_node(fr, ctx, body, asc_binder, asc_in);
  if (fr.failed) return fr.result;
  if (!oblige(fr, ctx.extend(asc_binder, asc_in), "ascription output", derived,
              asc_out)) {
    fr.set_error(TypeErrorKind::AscriptionOutputMismatch,
                 "derived type is not a subtype of the signature output");
    return fr.result;
  }
  fr.result.ok = true;
  fr.result.output = asc_out;
  return fr.result;
}

namespace {

bool definitely_nonempty(const TypePtr& t) {
  if (std::get_if<HeapType::Top>(&t->node)) return true;
  if (const auto* c = std::get_if<HeapType::Choice>(&t->node)) {
    return definitely_nonempty(c->lhs) || definitely_nonempty(c->rhs);
  }
  return false;
}

std::string fresh_against(const std::set<std::string>& taken,
                          const std::string& hint) {
  if (!taken.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string cand = hint + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

} // namespace

TypePtr simplify(const TypePtr& t, const HeaderTable& table) {
  if (std::get_if<HeapType::Nothing>(&t->node) ||
      std::get_if<HeapType::Top>(&t->node)) {
    return t;
  }
  if (const auto* c = std::get_if<HeapType::Choice>(&t->node)) {
    TypePtr a = simplify(c->lhs, table), b = simplify(c->rhs, table);
    if (std::get_if<HeapType::Nothing>(&a->node)) return b;
    if (std::get_if<HeapType::Nothing>(&b->node)) return a;
    return ty::choice(std::move(a), std::move(b));
  }
  if (const auto* r = std::get_if<HeapType::Refine>(&t->node)) {
    TypePtr inner = simplify(r->inner, table);
    if (std::get_if<Formula::True>(&r->phi->node)) return inner;
    if (std::get_if<HeapType::Nothing>(&inner->node)) return inner;
    return ty::refine(r->binder, std::move(inner), r->phi);
  }
  if (const auto* s = std::get_if<HeapType::Subst>(&t->node)) {
    TypePtr target = simplify(s->target, table);
    TypePtr repl = simplify(s->replacement, table);
    if (!free_vars(*target).count(s->binder) && definitely_nonempty(repl)) {
      return target;
    }
    return ty::subst(std::move(target), s->binder, std::move(repl));
  }

  // Sigma elimination: concatenation becomes an explicit refinement over the
  // two substituted components. Denotation preserving over any universe.
  const auto& sg = std::get<HeapType::Sigma>(t->node);
  TypePtr left = simplify(sg.left, table);
  TypePtr right = simplify(sg.right, table);
  const std::string& x = sg.binder;
  std::set<std::string> taken = free_vars(*left);
  std::set<std::string> fvr = free_vars(*right);
  taken.insert(fvr.begin(), fvr.end());
  taken.insert(x);
  std::string r = fresh_against(taken, "r");
  taken.insert(r);
  std::string y = fresh_against(taken, "c");

  FormulaPtr phi = fm::land(
      fm::eq(ex::packet(y, Pkt::In),
             ex::concat(ex::packet(x, Pkt::In), ex::packet(r, Pkt::In))),
      fm::eq(ex::packet(y, Pkt::Out),
             ex::concat(ex::packet(x, Pkt::Out), ex::packet(r, Pkt::Out))));
  for (const std::string& inst : table.instance_order) {
    FormulaPtr disjoint =
        fm::neg(fm::land(fm::valid(x, inst), fm::valid(r, inst)));
    FormulaPtr merged = fm::iff(
        fm::valid(y, inst), fm::lor(fm::valid(x, inst), fm::valid(r, inst)));
    FormulaPtr from_left =
        fm::implies(fm::valid(x, inst),
                    fm::eq(inst_expr(table, y, inst), inst_expr(table, x, inst)));
    FormulaPtr from_right =
        fm::implies(fm::valid(r, inst),
                    fm::eq(inst_expr(table, y, inst), inst_expr(table, r, inst)));
    phi = fm::land(std::move(phi),
                   fm::land(std::move(disjoint),
                            fm::land(std::move(merged),
                                     fm::land(std::move(from_left),
                                              std::move(from_right)))));
  }
  TypePtr shape = ty::refine(y, ty::top(), std::move(phi));
  return ty::subst(ty::subst(std::move(shape), r, std::move(right)), x,
                   std::move(left));
}

size_t max_emit(const CmdPtr& c, const HeaderTable& table) {
  if (const auto* rem = std::get_if<Command::Remit>(&c->node)) {
    return table.sizeof_inst(rem->inst);
  }
  if (const auto* ite = std::get_if<Command::If>(&c->node)) {
    return std::max(max_emit(ite->then_cmd, table),
                    max_emit(ite->else_cmd, table));
  }
  if (const auto* sq = std::get_if<Command::Seq>(&c->node)) {
    return max_emit(sq->first, table) + max_emit(sq->second, table);
  }
  if (const auto* asc = std::get_if<Command::Ascribe>(&c->node)) {
    return max_emit(asc->body, table);
  }
  return 0;
}

bool check_bound(const Ctx& ctx, const TypePtr& t, size_t n, Denoter& den) {
  bool ok = true;
  const Universe& u = den.universe();
  for_each_env(ctx, den, [&](const Env& env) {
    const Mask& m = den.mask(t, env);
    for (size_t i = 0; i < u.heaps.size(); ++i) {
      if (m[i] && u.heaps[i].packet_bits() > n) {
        ok = false;
        return false;
      }
    }
    return true;
  });
  return ok;
}

} // namespace pi4
