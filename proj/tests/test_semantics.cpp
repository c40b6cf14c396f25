#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pi4/error.hpp"
#include "pi4/parser.hpp"
#include "pi4/pretty.hpp"
#include "pi4/semantics.hpp"
#include "pi4/sugar.hpp"

using namespace pi4;

namespace {

Bits bits(const std::string& s) { return *Bits::from_string(s); }

HeaderTable table_a2() {
  return parse_program("header_type A_t {f:2} header A:A_t skip").table;
}

HeaderTable table_none() { return HeaderTable{}; }

Env env1(const std::string& var, Heap h) {
  Env e;
  e.emplace_back(var, std::move(h));
  return e;
}

} // namespace

TEST_CASE("expression evaluation follows the selected cases") {
  HeaderTable t = table_a2();
  Heap h{bits("110"), bits("01"), {{"A", bits("10")}}};
  Env env = env1("x", h);

  CHECK(eval_expr(*ex::len("x", Pkt::In), env, t) == Value::of_nat(3));
  CHECK(eval_expr(*ex::len("x", Pkt::Out), env, t) == Value::of_nat(2));

  Heap h2{bits("1010"), {}, {}};
  Env env2 = env1("x", h2);
  CHECK(eval_expr(*ex::slice_pkt("x", Pkt::In, 1, 4), env2, t) ==
        Value::of_bits(bits("010")));

  // unbound variable, invalid instance, out-of-range slice: all undefined
  CHECK(eval_expr(*ex::slice_inst("y", "A", 0, 2), env, t).is_bottom());
  Heap no_a{bits("1"), {}, {}};
  CHECK(eval_expr(*ex::slice_inst("x", "A", 0, 2), env1("x", no_a), t)
            .is_bottom());
  CHECK(eval_expr(*ex::slice_pkt("x", Pkt::In, 1, 9), env, t).is_bottom());

  CHECK(eval_expr(*ex::slice_inst("x", "A", 0, 2), env, t) ==
        Value::of_bits(bits("10")));
  CHECK(eval_expr(*ex::packet("x", Pkt::Out), env, t) ==
        Value::of_bits(bits("01")));
  CHECK(eval_expr(*ex::plus(ex::num(2), ex::len("x", Pkt::In)), env, t) ==
        Value::of_nat(5));
  CHECK(eval_expr(*ex::concat(ex::packet("x", Pkt::Out), ex::bv(bits("1"))),
                  env, t) == Value::of_bits(bits("011")));
  // sort mismatches are undefined
  CHECK(eval_expr(*ex::plus(ex::num(2), ex::packet("x", Pkt::In)), env, t)
            .is_bottom());
  CHECK(eval_expr(*ex::concat(ex::num(2), ex::packet("x", Pkt::In)), env, t)
            .is_bottom());
  // placeholder bits have no binding outside chomp
  CHECK(eval_expr(*ex::bv(BvBits{BvBit::placeholder(0)}), env, t).is_bottom());
}

TEST_CASE("formula evaluation is total; undefined sides compare false") {
  HeaderTable t = table_a2();
  Heap h{bits("110"), {}, {{"A", bits("10")}}};
  Env env = env1("x", h);

  ExprPtr undef = ex::slice_inst("y", "A", 0, 2);
  CHECK(!eval_formula(*fm::eq(ex::packet("x", Pkt::In), undef), env, t));
  CHECK(!eval_formula(*fm::eq(undef, undef), env, t));
  CHECK(eval_formula(*fm::valid("x", "A"), env, t));
  CHECK(!eval_formula(*fm::valid("y", "A"), env, t));
  CHECK(eval_formula(*fm::neg(fm::fls()), env, t));
  CHECK(!eval_formula(*fm::gt(ex::num(1), ex::num(1)), env, t));
  CHECK(eval_formula(*fm::gt(ex::num(2), ex::num(1)), env, t));
  // Gt over bit vectors is not defined: false
  CHECK(!eval_formula(
      *fm::gt(ex::packet("x", Pkt::In), ex::packet("x", Pkt::In)), env, t));
  // width-mismatched equality is simply false
  CHECK(!eval_formula(*fm::eq(ex::bv(bits("01")), ex::bv(bits("010"))), env, t));

  // strict evaluation refuses undefined subterms instead
  CHECK(eval_formula_strict(*fm::eq(ex::packet("x", Pkt::In), undef), env, t) ==
        std::nullopt);
  CHECK(eval_formula_strict(*fm::valid("x", "A"), env, t) == true);
  CHECK(eval_formula_strict(*fm::neg(fm::fls()), env, t) == true);
}

TEST_CASE("heap enumeration: one 2-bit instance at bound 0") {
  HeaderTable t = table_a2();
  std::vector<Heap> got = enumerate_heaps(t, Bound{0, 16});
  REQUIRE(got.size() == 5);
  CHECK(got[0] == Heap{{}, {}, {}});
  CHECK(got[1] == Heap{{}, {}, {{"A", bits("00")}}});
  CHECK(got[2] == Heap{{}, {}, {{"A", bits("01")}}});
  CHECK(got[3] == Heap{{}, {}, {{"A", bits("10")}}});
  CHECK(got[4] == Heap{{}, {}, {{"A", bits("11")}}});
  CHECK(universe_size(t, Bound{0, 16}) == 5);
}

TEST_CASE("heap enumeration: no instances at bound 1") {
  HeaderTable t = table_none();
  std::vector<Heap> got = enumerate_heaps(t, Bound{1, 16});
  REQUIRE(got.size() == 5);
  // pkt_in length outer, pkt_out length inner, bits lexicographic
  CHECK(got[0] == Heap{{}, {}, {}});
  CHECK(got[1] == Heap{{}, bits("0"), {}});
  CHECK(got[2] == Heap{{}, bits("1"), {}});
  CHECK(got[3] == Heap{bits("0"), {}, {}});
  CHECK(got[4] == Heap{bits("1"), {}, {}});
  CHECK(universe_size(t, Bound{1, 16}) == 5);
}

TEST_CASE("enumeration policy rejects oversized spaces") {
  HeaderTable t;
  t.types["big_t"] = {{"f", 20}};
  t.instances["big"] = "big_t";
  t.instance_order.push_back("big");
  CHECK_THROWS_AS((void)enumerate_heaps(t, Bound{4, 16}), Pi4Error);
  try {
    (void)enumerate_heaps(t, Bound{4, 16});
  } catch (const Pi4Error& e) {
    CHECK(e.kind() == ErrorKind::EnumerationSpaceExceeded);
  }
  // bound above the cap is rejected as well
  CHECK_THROWS_AS((void)enumerate_heaps(table_none(), Bound{20, 16}),
                  Pi4Error);
}

TEST_CASE("universe size matches the enumerated count") {
  HeaderTable t = table_a2();
  for (size_t n = 0; n <= 4; ++n) {
    Bound b{n, 16};
    CHECK(universe_size(t, b) == enumerate_heaps(t, b).size());
  }
}

TEST_CASE("denotations of the base types") {
  HeaderTable t = table_none();
  Universe u = build_universe(t, Bound{1, 16});
  Env env;

  CHECK(denote_type(ty::nothing(), env, u).empty());
  CHECK(denote_type(ty::top(), env, u).size() == 5);

  TypePtr pos = ty::refine("x", ty::top(),
                           fm::gt(ex::len("x", Pkt::In), ex::num(0)));
  std::vector<Heap> got = denote_type(pos, env, u);
  REQUIRE(got.size() == 2);
  CHECK(got[0] == Heap{bits("0"), {}, {}});
  CHECK(got[1] == Heap{bits("1"), {}, {}});
}

TEST_CASE("sigma of two unconstrained packet types covers the universe") {
  HeaderTable t = table_none();
  Universe u = build_universe(t, Bound{2, 16});
  Env env;
  TypePtr eps = empty_type(t, "e1");
  TypePtr eps2 = empty_type(t, "e2");
  TypePtr sig = ty::sigma("x", eps, eps2);
  // every packet-only heap splits as (h, (eps,eps)), so the sigma denotes
  // the whole packet universe
  CHECK(denote_type(sig, env, u).size() == u.heaps.size());
}

TEST_CASE("refinements with constant formulas") {
  HeaderTable t = table_a2();
  Universe u = build_universe(t, Bound{2, 16});
  Env env;
  TypePtr top = ty::top();
  CHECK(denote_type(ty::refine("x", top, fm::tru()), env, u).size() ==
        u.heaps.size());
  CHECK(denote_type(ty::refine("x", top, fm::fls()), env, u).empty());
}

TEST_CASE("choice denotes the union") {
  HeaderTable t = table_a2();
  Universe u = build_universe(t, Bound{1, 16});
  Env env;
  TypePtr in1 = ty::refine("x", ty::top(),
                           fm::gt(ex::len("x", Pkt::In), ex::num(0)));
  TypePtr out1 = ty::refine("x", ty::top(),
                            fm::gt(ex::len("x", Pkt::Out), ex::num(0)));
  size_t n1 = denote_type(in1, env, u).size();
  size_t n2 = denote_type(out1, env, u).size();
  size_t nu = denote_type(ty::choice(in1, out1), env, u).size();
  CHECK(n1 + n2 == nu); // disjoint here
}

TEST_CASE("substitution evaluates the replacement first") {
  HeaderTable t = table_none();
  Universe u = build_universe(t, Bound{1, 16});
  Env env;
  TypePtr ref = ty::refine(
      "y", ty::top(),
      fm::eq(ex::packet("y", Pkt::In), ex::packet("x", Pkt::In)));
  TypePtr one = ty::refine("z", ty::top(),
                           fm::eq(ex::len("z", Pkt::In), ex::num(1)));
  std::vector<Heap> got = denote_type(ty::subst(ref, "x", one), env, u);
  REQUIRE(got.size() == 2);
  CHECK(got[0] == Heap{bits("0"), {}, {}});
  CHECK(got[1] == Heap{bits("1"), {}, {}});

  // empty replacement denotes nothing
  CHECK(denote_type(ty::subst(ref, "x", ty::nothing()), env, u).empty());
}

TEST_CASE("entailment agrees with the basic rules") {
  HeaderTable t = table_a2();
  Universe u = build_universe(t, Bound{1, 16});
  Env env;
  Heap h{bits("1"), {}, {{"A", bits("01")}}};

  CHECK(entails(h, ty::top(), env, u));
  CHECK(!entails(h, ty::nothing(), env, u));

  TypePtr in1 = ty::refine("x", ty::top(),
                           fm::gt(ex::len("x", Pkt::In), ex::num(0)));
  TypePtr out1 = ty::refine("x", ty::top(),
                            fm::gt(ex::len("x", Pkt::Out), ex::num(0)));
  CHECK(entails(h, ty::choice(in1, out1), env, u));
  CHECK(!entails(h, out1, env, u));

  // exactly-A instance type accepts a heap with only A valid
  Heap just_a{{}, {}, {{"A", bits("01")}}};
  CHECK(entails(just_a, exact_instance_type(t, "A", "x"), env, u));
  // packets stay free in an instance type, so h qualifies too
  CHECK(entails(h, exact_instance_type(t, "A", "x"), env, u));
  Heap nothing_valid{{}, {}, {}};
  CHECK(!entails(nothing_valid, exact_instance_type(t, "A", "x"), env, u));
}

TEST_CASE("entailment of sigma searches splits") {
  HeaderTable t = table_a2();
  Universe u = build_universe(t, Bound{2, 16});
  Env env;
  // sigma x:{a: top | a.pkt_in.length == 1}. {b: top | b.pkt_in == x.pkt_in}
  TypePtr left = ty::refine("a", ty::top(),
                            fm::eq(ex::len("a", Pkt::In), ex::num(1)));
  TypePtr right = ty::refine(
      "b", ty::top(),
      fm::eq(ex::packet("b", Pkt::In), ex::packet("x", Pkt::In)));
  TypePtr sig = ty::sigma("x", left, right);
  // 11 splits as 1 ++ 1 with equal halves; 10 cannot
  CHECK(entails(Heap{bits("11"), {}, {}}, sig, env, u));
  CHECK(!entails(Heap{bits("10"), {}, {}}, sig, env, u));
  CHECK(!entails(Heap{bits("1"), {}, {}}, sig, env, u));
}

TEST_CASE("entailment coincides with denotation membership") {
  HeaderTable t = table_a2();
  Universe u = build_universe(t, Bound{2, 16});
  Env env;

  std::vector<TypePtr> family = {
      ty::top(),
      ty::nothing(),
      exact_instance_type(t, "A", "i"),
      empty_type(t, "e"),
      parse_type("{y:top | y.pkt_in.length > 1}", t),
      parse_type("{y:top | y.A.valid && y.A[0:1] == 0b1}", t),
      parse_type("sigma x:{a:top | a.pkt_in.length == 1}. "
                 "{b:top | b.pkt_in == x.pkt_in}",
                 t),
      parse_type("{y:top | y.pkt_out.length > 0} + A", t),
      parse_type("{y:top | y.pkt_in == x.pkt_in}[x -> {z:top | "
                 "z.pkt_in.length == 2}]",
                 t),
      parse_type("{y:A | y.pkt_in.length + 1 > y.pkt_out.length}", t),
  };
  Denoter den(u);
  for (const TypePtr& ty : family) {
    Mask m = den.mask(ty, env);
    for (size_t i = 0; i < u.heaps.size(); ++i) {
      bool ent = entails(u.heaps[i], ty, env, u);
      CAPTURE(pretty(ty));
      CAPTURE(pretty(u.heaps[i]));
      CHECK(ent == static_cast<bool>(m[i]));
    }
  }
}

TEST_CASE("denotations respect the bound") {
  HeaderTable t = table_a2();
  Bound b{2, 16};
  Universe u = build_universe(t, b);
  Env env;
  for (const Heap& h : denote_type(ty::top(), env, u)) {
    CHECK(h.packet_bits() <= b.max_total_bits);
  }
}
