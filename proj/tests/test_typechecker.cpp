#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "pi4/parser.hpp"
#include "pi4/pretty.hpp"
#include "pi4/sugar.hpp"
#include "pi4/typechecker.hpp"

using namespace pi4;

namespace {

const char* kDecls =
    "header_type A_t {f:2} header_type B_t {g:1} "
    "header A:A_t header B:B_t ";

Bits bits(const std::string& s) { return *Bits::from_string(s); }

HeaderTable table_ab() {
  return parse_program(std::string(kDecls) + "skip").table;
}

CmdPtr cmd(const std::string& body) {
  return parse_program(std::string(kDecls) + body).command;
}

struct Rig {
  HeaderTable table = table_ab();
  Decider decider{table, Backend::Enum, Bound{4, 16}};
  Checker checker{table, decider};

  TypePtr type(const std::string& s) { return parse_type(s, table); }
  std::vector<Heap> denoted(const TypePtr& t, const Env& env) {
    return decider.denoter().heaps(t, env);
  }
};

bool same_heaps(std::vector<Heap> a, std::vector<Heap> b) {
  if (a.size() != b.size()) return false;
  for (const Heap& h : a) {
    auto it = std::find(b.begin(), b.end(), h);
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

bool contains_sigma(const TypePtr& t) {
  if (std::get_if<HeapType::Sigma>(&t->node)) return true;
  if (const auto* c = std::get_if<HeapType::Choice>(&t->node)) {
    return contains_sigma(c->lhs) || contains_sigma(c->rhs);
  }
  if (const auto* r = std::get_if<HeapType::Refine>(&t->node)) {
    return contains_sigma(r->inner);
  }
  if (const auto* s = std::get_if<HeapType::Subst>(&t->node)) {
    return contains_sigma(s->target) || contains_sigma(s->replacement);
  }
  return false;
}

} // namespace

TEST_CASE("skip pins the heap to its input") {
  Rig rig;
  TypingResult r = rig.checker.infer(Ctx{}, cm::skip(), "x", ty::top());
  REQUIRE(r.ok);
  CHECK(r.trace == std::vector<std::string>{"skip"});
  CHECK(r.obligations.empty());
  Heap h{bits("10"), bits("1"), {{"A", bits("01")}}};
  CHECK(same_heaps(rig.denoted(r.output, {{"x", h}}), {h}));
}

TEST_CASE("extract consumes header bits from the input packet") {
  Rig rig;
  TypePtr t1 = rig.type("{z:top | z.pkt_in.length > 1}");
  TypingResult r = rig.checker.infer(Ctx{}, cm::extract("A"), "x", t1);
  REQUIRE(r.ok);
  REQUIRE(r.obligations.size() == 1);
  CHECK(r.obligations[0].verdict);

  CHECK(same_heaps(rig.denoted(r.output, {{"x", Heap{bits("10"), {}, {}}}}),
                   {Heap{{}, {}, {{"A", bits("10")}}}}));
  CHECK(same_heaps(
      rig.denoted(r.output,
                  {{"x", Heap{bits("101"), bits("0"), {{"B", bits("1")}}}}}),
      {Heap{bits("1"), bits("0"), {{"A", bits("10")}, {"B", bits("1")}}}}));

  TypingResult bad = rig.checker.infer(Ctx{}, cm::extract("A"), "x", ty::top());
  CHECK(!bad.ok);
  CHECK(bad.error == TypeErrorKind::PacketTooShort);
  REQUIRE(!bad.obligations.empty());
  CHECK(!bad.obligations.back().verdict);
  CHECK(bad.obligations.back().cex.has_value());
}

TEST_CASE("chomp-based extract agrees with the synthesized refinement") {
  Rig rig;
  Checker literal{rig.table, rig.decider, CheckerOptions{false}};
  TypePtr t1 = rig.type("{z:top | z.pkt_in.length > 1}");

  TypingResult fast = rig.checker.infer(Ctx{}, cm::extract("A"), "x", t1);
  TypingResult slow = literal.infer(Ctx{}, cm::extract("A"), "x", t1);
  REQUIRE(fast.ok);
  REQUIRE(slow.ok);
  CHECK(contains_sigma(slow.output));

  std::vector<Heap> probes = {
      Heap{bits("10"), {}, {}},
      Heap{bits("101"), bits("0"), {{"B", bits("1")}}},
      Heap{bits("11"), bits("1"), {}},
  };
  for (const Heap& h : probes) {
    CAPTURE(h.in.to_string());
    CHECK(same_heaps(rig.denoted(fast.output, {{"x", h}}),
                     rig.denoted(slow.output, {{"x", h}})));
  }
}

TEST_CASE("remit appends the instance to the output packet") {
  Rig rig;
  TypingResult r =
      rig.checker.infer(Ctx{}, cm::remit("A"), "x", rig.type("A"));
  REQUIRE(r.ok);
  CHECK(same_heaps(
      rig.denoted(r.output, {{"x", Heap{{}, {}, {{"A", bits("01")}}}}}),
      {Heap{{}, bits("01"), {{"A", bits("01")}}}}));
  CHECK(same_heaps(
      rig.denoted(r.output,
                  {{"x", Heap{bits("1"), bits("0"), {{"A", bits("11")}}}}}),
      {Heap{bits("1"), bits("011"), {{"A", bits("11")}}}}));

  TypingResult bad = rig.checker.infer(Ctx{}, cm::remit("A"), "x", ty::top());
  CHECK(!bad.ok);
  CHECK(bad.error == TypeErrorKind::ValidityViolation);
}

TEST_CASE("add initializes an absent instance to zeros") {
  Rig rig;
  TypingResult r =
      rig.checker.infer(Ctx{}, cm::add("A"), "x", rig.type("empty"));
  REQUIRE(r.ok);
  CHECK(same_heaps(
      rig.denoted(r.output, {{"x", Heap{bits("1"), bits("0"), {}}}}),
      {Heap{bits("1"), bits("0"), {{"A", bits("00")}}}}));

  TypingResult bad = rig.checker.infer(Ctx{}, cm::add("A"), "x", rig.type("~A"));
  CHECK(!bad.ok);
  CHECK(bad.error == TypeErrorKind::ValidityViolation);
}

TEST_CASE("reset folds the output packet back into the input") {
  Rig rig;
  TypePtr t1 =
      rig.type("{z:top | z.pkt_in.length == 1 && z.pkt_out.length == 1}");
  TypingResult r = rig.checker.infer(Ctx{}, cm::reset(), "x", t1);
  REQUIRE(r.ok);
  CHECK(same_heaps(
      rig.denoted(r.output,
                  {{"x", Heap{bits("1"), bits("0"), {{"B", bits("1")}}}}}),
      {Heap{bits("01"), {}, {}}}));
}

TEST_CASE("assignment rewrites exactly one field") {
  Rig rig;
  TypingResult r =
      rig.checker.infer(Ctx{}, cmd("A.f := 0b11"), "x", rig.type("A"));
  REQUIRE(r.ok);
  CHECK(same_heaps(
      rig.denoted(r.output, {{"x", Heap{{}, {}, {{"A", bits("00")}}}}}),
      {Heap{{}, {}, {{"A", bits("11")}}}}));

  // self-reference on the right-hand side reads the pre-state
  TypingResult id =
      rig.checker.infer(Ctx{}, cmd("A.f := A[0:2]"), "x", rig.type("A"));
  REQUIRE(id.ok);
  CHECK(same_heaps(
      rig.denoted(id.output, {{"x", Heap{{}, {}, {{"A", bits("01")}}}}}),
      {Heap{{}, {}, {{"A", bits("01")}}}}));

  TypingResult cross = rig.checker.infer(
      Ctx{}, cmd("A.f := B.g@B.g"), "x",
      rig.type("{z:top | z.A.valid && z.B.valid}"));
  REQUIRE(cross.ok);
  CHECK(same_heaps(
      rig.denoted(cross.output,
                  {{"x", Heap{{}, {}, {{"A", bits("00")}, {"B", bits("1")}}}}}),
      {Heap{{}, {}, {{"A", bits("11")}, {"B", bits("1")}}}}));

  TypingResult bad =
      rig.checker.infer(Ctx{}, cmd("A.f := 0b11"), "x", ty::top());
  CHECK(!bad.ok);
  CHECK(bad.error == TypeErrorKind::ValidityViolation);
}

TEST_CASE("sequencing threads the intermediate type") {
  Rig rig;
  TypePtr t1 = rig.type("{z:top | z.pkt_in.length > 1}");
  TypingResult r =
      rig.checker.infer(Ctx{}, cmd("extract(A); A.f := 0b11"), "x", t1);
  REQUIRE(r.ok);
  CHECK(r.trace == std::vector<std::string>{"seq", "extract", "assign"});
  CHECK(std::get_if<HeapType::Subst>(&r.output->node) != nullptr);
  CHECK(same_heaps(rig.denoted(r.output, {{"x", Heap{bits("10"), {}, {}}}}),
                   {Heap{{}, {}, {{"A", bits("11")}}}}));
  CHECK(same_heaps(
      rig.denoted(r.output, {{"x", Heap{bits("100"), bits("1"), {}}}}),
      {Heap{bits("0"), bits("1"), {{"A", bits("11")}}}}));
}

TEST_CASE("branching splits and rejoins on the condition") {
  Rig rig;
  TypePtr t1 = rig.type("{z:top | z.pkt_in.length > 1}");
  TypingResult r = rig.checker.infer(
      Ctx{}, cmd("if(pkt_in.length > 2) { extract(A) }"), "x", t1);
  REQUIRE(r.ok);
  CHECK(r.trace == std::vector<std::string>{"if", "extract", "skip"});
  CHECK(same_heaps(rig.denoted(r.output, {{"x", Heap{bits("101"), {}, {}}}}),
                   {Heap{bits("1"), {}, {{"A", bits("10")}}}}));
  CHECK(same_heaps(rig.denoted(r.output, {{"x", Heap{bits("10"), {}, {}}}}),
                   {Heap{bits("10"), {}, {}}}));
}

TEST_CASE("branch conditions must be well formed") {
  Rig rig;
  auto expect_ill_formed = [&](FormulaPtr cond) {
    CmdPtr c = cm::ifte(std::move(cond), cm::skip(), cm::skip());
    TypingResult r = rig.checker.infer(Ctx{}, c, "x", rig.type("A"));
    CHECK(!r.ok);
    CHECK(r.error == TypeErrorKind::IllFormedFormula);
  };
  // comparisons are nat-only
  expect_ill_formed(fm::gt(ex::packet("heap", Pkt::In), ex::num(1)));
  // sorts must agree
  expect_ill_formed(fm::eq(ex::len("heap", Pkt::In), ex::bv(bits("1"))));
  // only the implicit heap is in scope
  expect_ill_formed(fm::valid("q", "A"));
  // slices must fit the instance
  expect_ill_formed(
      fm::eq(ex::slice_inst("heap", "A", 0, 5), ex::bv(bits("10101"))));

  TypingResult ok = rig.checker.infer(
      Ctx{}, cm::ifte(fm::valid("heap", "A"), cm::skip(), cm::skip()), "x",
      rig.type("A"));
  CHECK(ok.ok);
}

TEST_CASE("ascriptions are checked on both sides") {
  Rig rig;
  TypePtr asc_out = rig.type("{u:top | u === w}");
  CmdPtr asc = cm::ascribe(cm::skip(), "w", ty::top(), asc_out);

  TypingResult r = rig.checker.infer(
      Ctx{}, asc, "x", rig.type("{z:top | z.pkt_in.length == 1}"));
  REQUIRE(r.ok);
  CHECK(r.trace[0] == "ascribe");
  CHECK(equal(r.output, rig.type("{u:top | u === x}")));

  TypingResult in_bad = rig.checker.infer(
      Ctx{}, cm::ascribe(cm::skip(), "w", rig.type("{z:top | z.pkt_in.length > 0}"),
                         ty::top()),
      "x", ty::top());
  CHECK(!in_bad.ok);
  CHECK(in_bad.error == TypeErrorKind::AscriptionInputMismatch);

  TypingResult out_bad = rig.checker.infer(
      Ctx{}, cm::ascribe(cm::skip(), "w", ty::top(), rig.type("~A")), "x",
      ty::top());
  CHECK(!out_bad.ok);
  CHECK(out_bad.error == TypeErrorKind::AscriptionOutputMismatch);
  REQUIRE(!out_bad.obligations.empty());
  CHECK(out_bad.obligations.back().cex.has_value());
}

TEST_CASE("check_ascription drives a whole program") {
  Rig rig;
  TypingResult r = rig.checker.check_ascription(
      Ctx{}, cm::skip(), "x", ty::top(), "w", ty::top(),
      rig.type("{u:top | u === w}"));
  REQUIRE(r.ok);
  CHECK(equal(r.output, rig.type("{u:top | u === w}")));

  TypingResult bad = rig.checker.check_ascription(
      Ctx{}, cm::skip(), "x", ty::top(), "w",
      rig.type("{z:top | z.pkt_in.length > 0}"), ty::top());
  CHECK(!bad.ok);
  CHECK(bad.error == TypeErrorKind::AscriptionInputMismatch);
}

TEST_CASE("max_emit bounds appended output bits") {
  Rig rig;
  CHECK(max_emit(cm::skip(), rig.table) == 0);
  CHECK(max_emit(cm::extract("A"), rig.table) == 0);
  CHECK(max_emit(cm::remit("A"), rig.table) == 2);
  CHECK(max_emit(cmd("emit(A)"), rig.table) == 2);
  CHECK(max_emit(cmd("emit(A); emit(A)"), rig.table) == 4);
  CHECK(max_emit(cmd("if(A.valid) { emit(A) } else { emit(B) }"), rig.table) ==
        2);
  CHECK(max_emit(cmd("reset; add(A)"), rig.table) == 0);
  CHECK(max_emit(cm::ascribe(cm::remit("B"), "w", ty::top(), ty::top()),
                 rig.table) == 1);
}

TEST_CASE("check_bound verifies the packet-bit budget") {
  Rig rig;
  Denoter& den = rig.decider.denoter();
  TypePtr t =
      rig.type("{z:top | z.pkt_in.length == 2 && z.pkt_out.length == 1}");
  CHECK(check_bound(Ctx{}, t, 3, den));
  CHECK(!check_bound(Ctx{}, t, 2, den));
  CHECK(check_bound(Ctx{}, ty::nothing(), 0, den));

  Ctx ctx = Ctx{}.extend("x", rig.type("{z:top | z.pkt_in.length == 2}"));
  TypePtr pinned = rig.type("{w:top | w.pkt_out == x.pkt_in}");
  CHECK(check_bound(ctx, pinned, 4, den));
  CHECK(!check_bound(ctx, pinned, 1, den));
}

TEST_CASE("simplify preserves denotations while removing sigmas") {
  Rig rig;
  Denoter& den = rig.decider.denoter();

  TypePtr s1 = rig.type("sigma s:A. {c:top | c.pkt_in == s.pkt_in}");
  TypePtr s1s = simplify(s1, rig.table);
  CHECK(!contains_sigma(s1s));
  CHECK(same_heaps(den.heaps(s1, {}), den.heaps(s1s, {})));

  TypePtr s2 = rig.type(
      "sigma s:{a:top | a.pkt_out.length == 1}. {c:B | c.pkt_in.length == 1}");
  TypePtr s2s = simplify(s2, rig.table);
  CHECK(!contains_sigma(s2s));
  CHECK(same_heaps(den.heaps(s2, {}), den.heaps(s2s, {})));

  // extract outputs, both rule flavors
  Checker literal{rig.table, rig.decider, CheckerOptions{false}};
  TypePtr t1 = rig.type("{z:top | z.pkt_in.length > 1}");
  for (Checker* chk : {&rig.checker, &literal}) {
    TypingResult r = chk->infer(Ctx{}, cm::extract("A"), "x", t1);
    REQUIRE(r.ok);
    TypePtr simp = simplify(r.output, rig.table);
    CHECK(!contains_sigma(simp));
    for (const Heap& h :
         {Heap{bits("10"), {}, {}}, Heap{bits("110"), bits("1"), {}}}) {
      Env env{{"x", h}};
      CHECK(same_heaps(den.heaps(r.output, env), den.heaps(simp, env)));
    }
  }

  CHECK(equal(simplify(rig.type("{y:top | true}"), rig.table), ty::top()));
  CHECK(equal(simplify(ty::choice(ty::nothing(), ty::top()), rig.table),
              ty::top()));
  CHECK(equal(simplify(ty::subst(rig.type("~A"), "q", ty::top()), rig.table),
              rig.type("~A")));
}
