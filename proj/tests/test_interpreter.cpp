#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pi4/interpreter.hpp"
#include "pi4/parser.hpp"

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

} // namespace

TEST_CASE("skip is terminal") {
  HeaderTable t = table_ab();
  StepResult r = step({Heap{bits("1"), {}, {}}, cm::skip()}, t);
  CHECK(r.status == StepResult::Status::Done);
}

TEST_CASE("extract deserializes the front of the input") {
  HeaderTable t = table_ab();
  StepResult r = step({Heap{bits("110011"), {}, {}}, cm::extract("A")}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(r.next.heap == Heap{bits("0011"), {}, {{"A", bits("11")}}});
  CHECK(std::get_if<Command::Skip>(&r.next.cmd->node) != nullptr);

  // re-extraction overwrites
  StepResult again = step({r.next.heap, cm::extract("A")}, t);
  REQUIRE(again.status == StepResult::Status::Stepped);
  CHECK(again.next.heap == Heap{bits("11"), {}, {{"A", bits("00")}}});

  StepResult shallow = step({Heap{bits("1"), {}, {}}, cm::extract("A")}, t);
  CHECK(shallow.status == StepResult::Status::Stuck);
  CHECK(shallow.reason == StuckReason::PacketTooShort);
}

TEST_CASE("remit serializes onto the output") {
  HeaderTable t = table_ab();
  StepResult r =
      step({Heap{{}, bits("0"), {{"A", bits("11")}}}, cm::remit("A")}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(r.next.heap == Heap{{}, bits("011"), {{"A", bits("11")}}});

  StepResult bad = step({Heap{{}, {}, {}}, cm::remit("A")}, t);
  CHECK(bad.status == StepResult::Status::Stuck);
  CHECK(bad.reason == StuckReason::InvalidInstance);
}

TEST_CASE("add initializes to zero and refuses a live instance") {
  HeaderTable t = table_ab();
  StepResult r = step({Heap{bits("1"), {}, {}}, cm::add("A")}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(r.next.heap == Heap{bits("1"), {}, {{"A", bits("00")}}});

  StepResult bad = step({r.next.heap, cm::add("A")}, t);
  CHECK(bad.status == StepResult::Status::Stuck);
  CHECK(bad.reason == StuckReason::AlreadyValid);
}

TEST_CASE("reset folds output before input and clears instances") {
  HeaderTable t = table_ab();
  StepResult r =
      step({Heap{bits("1"), bits("0"), {{"A", bits("11")}}}, cm::reset()}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(r.next.heap == Heap{bits("01"), {}, {}});
}

TEST_CASE("assignment splices one field") {
  HeaderTable t = table_ab();
  Heap h{{}, {}, {{"A", bits("00")}, {"B", bits("1")}}};

  StepResult r = step({h, cmd("A.f := 0b11")}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(r.next.heap == Heap{{}, {}, {{"A", bits("11")}, {"B", bits("1")}}});

  StepResult self = step({h, cmd("A.f := B.g@B.g")}, t);
  REQUIRE(self.status == StepResult::Status::Stepped);
  CHECK(self.next.heap == Heap{{}, {}, {{"A", bits("11")}, {"B", bits("1")}}});

  StepResult invalid = step({Heap{{}, {}, {}}, cmd("A.f := 0b11")}, t);
  CHECK(invalid.status == StepResult::Status::Stuck);
  CHECK(invalid.reason == StuckReason::InvalidInstance);

  StepResult nat = step({h, cm::assign("A", "f", ex::num(3))}, t);
  CHECK(nat.status == StepResult::Status::Stuck);
  CHECK(nat.reason == StuckReason::UndefinedExpr);

  StepResult narrow = step({h, cm::assign("A", "f", ex::bv(bits("1")))}, t);
  CHECK(narrow.status == StepResult::Status::Stuck);
  CHECK(narrow.reason == StuckReason::WidthMismatch);

  StepResult undef = step(
      {h, cm::assign("A", "f", ex::slice_pkt("heap", Pkt::In, 0, 2))}, t);
  CHECK(undef.status == StepResult::Status::Stuck);
  CHECK(undef.reason == StuckReason::UndefinedExpr);
}

TEST_CASE("branches select on the strict condition") {
  HeaderTable t = table_ab();
  CmdPtr then_c = cm::add("A"), else_c = cm::add("B");
  CmdPtr ite = cm::ifte(fm::valid("heap", "A"), then_c, else_c);

  StepResult taken = step({Heap{{}, {}, {{"A", bits("01")}}}, ite}, t);
  REQUIRE(taken.status == StepResult::Status::Stepped);
  CHECK(equal(taken.next.cmd, then_c));

  StepResult fallen = step({Heap{{}, {}, {}}, ite}, t);
  REQUIRE(fallen.status == StepResult::Status::Stepped);
  CHECK(equal(fallen.next.cmd, else_c));

  CmdPtr bad = cm::ifte(
      fm::eq(ex::slice_pkt("heap", Pkt::In, 0, 2), ex::bv(bits("11"))),
      then_c, else_c);
  StepResult undef = step({Heap{bits("1"), {}, {}}, bad}, t);
  CHECK(undef.status == StepResult::Status::Stuck);
  CHECK(undef.reason == StuckReason::UndefinedExpr);
}

TEST_CASE("sequences step the head and drop finished skips") {
  HeaderTable t = table_ab();
  CmdPtr c = cm::seq(cm::skip(), cm::add("A"));
  StepResult r = step({Heap{{}, {}, {}}, c}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(equal(r.next.cmd, cm::add("A")));

  CmdPtr c2 = cm::seq(cm::add("A"), cm::add("B"));
  StepResult r2 = step({Heap{{}, {}, {}}, c2}, t);
  REQUIRE(r2.status == StepResult::Status::Stepped);
  CHECK(r2.next.heap.valid("A"));
  CHECK(equal(r2.next.cmd, cm::seq(cm::skip(), cm::add("B"))));

  StepResult stuck = step({Heap{{}, {}, {{"A", bits("00")}}}, c2}, t);
  CHECK(stuck.status == StepResult::Status::Stuck);
  CHECK(stuck.reason == StuckReason::AlreadyValid);
}

TEST_CASE("ascriptions are transparent at runtime") {
  HeaderTable t = table_ab();
  CmdPtr asc = cm::ascribe(cm::add("A"), "w", ty::top(), ty::top());
  StepResult r = step({Heap{{}, {}, {}}, asc}, t);
  REQUIRE(r.status == StepResult::Status::Stepped);
  CHECK(equal(r.next.cmd, cm::add("A")));
}

TEST_CASE("run drives a parser round trip to completion") {
  HeaderTable t = table_ab();
  CmdPtr prog = cmd(
      "extract(A); if(A[0:1] == 0b1) { A.f := 0b00 }; emit(A)");
  Config cfg{Heap{bits("10"), {}, {}}, prog};
  RunResult r = run(cfg, t, 64);
  CHECK(r.status == RunResult::Status::Done);
  CHECK(r.final.heap == Heap{{}, bits("00"), {{"A", bits("00")}}});
  CHECK(r.steps <= node_count(*prog));

  // determinism: same input, same trajectory
  RunResult r2 = run(cfg, t, 64);
  CHECK(r2.final.heap == r.final.heap);
  CHECK(r2.steps == r.steps);

  // the untaken branch leaves the field alone
  RunResult other = run({Heap{bits("01"), {}, {}}, prog}, t, 64);
  CHECK(other.status == RunResult::Status::Done);
  CHECK(other.final.heap == Heap{{}, bits("01"), {{"A", bits("01")}}});
}

TEST_CASE("run reports stuck configurations and fuel limits") {
  HeaderTable t = table_ab();
  RunResult stuck = run({Heap{{}, {}, {}}, cmd("emit(A); add(A)")}, t, 64);
  CHECK(stuck.status == RunResult::Status::Done);
  // emit of an invalid instance is a typed no-op, not a fault
  CHECK(stuck.final.heap == Heap{{}, {}, {{"A", bits("00")}}});

  RunResult fault = run({Heap{{}, {}, {}}, cmd("A.f := 0b11")}, t, 64);
  CHECK(fault.status == RunResult::Status::Stuck);
  CHECK(fault.reason == StuckReason::InvalidInstance);

  RunResult tired = run({Heap{bits("10"), {}, {}}, cmd("extract(A); skip")},
                        t, 1);
  CHECK(tired.status == RunResult::Status::FuelExhausted);
}
