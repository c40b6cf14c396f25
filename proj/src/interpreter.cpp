#include "pi4/interpreter.hpp"

#include <variant>

#include "pi4/semantics.hpp"

namespace pi4 {

const char* stuck_reason_name(StuckReason r) {
  switch (r) {
    case StuckReason::InvalidInstance: return "invalid instance";
    case StuckReason::AlreadyValid: return "already valid";
    case StuckReason::PacketTooShort: return "packet too short";
    case StuckReason::UndefinedExpr: return "undefined expression";
    case StuckReason::WidthMismatch: return "width mismatch";
  }
  return "unknown";
}

namespace {

StepResult stepped(Heap heap, CmdPtr cmd) {
  return {StepResult::Status::Stepped, {std::move(heap), std::move(cmd)},
          StuckReason::UndefinedExpr, ""};
}

StepResult stuck(StuckReason reason, std::string detail) {
  return {StepResult::Status::Stuck, {}, reason, std::move(detail)};
}

} // namespace

StepResult step(const Config& cfg, const HeaderTable& table) {
  const Heap& h = cfg.heap;
  const Command& c = *cfg.cmd;

  if (std::get_if<Command::Skip>(&c.node)) {
    return {StepResult::Status::Done, {}, StuckReason::UndefinedExpr, ""};
  }

  if (const auto* ext = std::get_if<Command::Extract>(&c.node)) {
    size_t need = table.sizeof_inst(ext->inst);
    if (h.in.size() < need) {
      return stuck(StuckReason::PacketTooShort,
                   "extract(" + ext->inst + ") needs " + std::to_string(need) +
                       " bits, input has " + std::to_string(h.in.size()));
    }
    auto [value, rest] = deserialize(table, ext->inst, h.in);
    Heap next = h;
    next.in = rest;
    next.insts[ext->inst] = value; // re-extraction overwrites
    return stepped(std::move(next), cm::skip());
  }

  if (const auto* rem = std::get_if<Command::Remit>(&c.node)) {
    auto it = h.insts.find(rem->inst);
    if (it == h.insts.end()) {
      return stuck(StuckReason::InvalidInstance,
                   "remit(" + rem->inst + ") on an invalid instance");
    }
    Heap next = h;
    next.out = next.out.concat(it->second);
    return stepped(std::move(next), cm::skip());
  }

  if (const auto* add = std::get_if<Command::Add>(&c.node)) {
    if (h.valid(add->inst)) {
      return stuck(StuckReason::AlreadyValid,
                   "add(" + add->inst + ") on a valid instance");
    }
    Heap next = h;
    next.insts[add->inst] = Bits::from_uint(0, table.sizeof_inst(add->inst));
    return stepped(std::move(next), cm::skip());
  }

  if (std::get_if<Command::Reset>(&c.node)) {
    Heap next;
    next.in = h.out.concat(h.in);
    return stepped(std::move(next), cm::skip());
  }

  if (const auto* as = std::get_if<Command::Assign>(&c.node)) {
    auto it = h.insts.find(as->inst);
    if (it == h.insts.end()) {
      return stuck(StuckReason::InvalidInstance,
                   as->inst + "." + as->field + " := ... on an invalid instance");
    }
    auto range = table.field_range(as->inst, as->field);
    if (!range) {
      return stuck(StuckReason::UndefinedExpr,
                   as->inst + " has no field " + as->field);
    }
    Env env{{"heap", h}};
    Value v = eval_expr(*as->value, env, table);
    if (v.kind != Value::Kind::Bv) {
      return stuck(StuckReason::UndefinedExpr,
                   "assigned value is not a defined bit vector");
    }
    auto [lo, hi] = *range;
    if (v.bits.size() != hi - lo) {
      return stuck(StuckReason::WidthMismatch,
                   "field " + as->field + " holds " + std::to_string(hi - lo) +
                       " bits, value has " + std::to_string(v.bits.size()));
    }
    const Bits& old = it->second;
    Bits spliced;
    if (lo > 0) spliced = old.slice(0, lo);
    spliced = spliced.concat(v.bits);
    if (hi < old.size()) spliced = spliced.concat(old.slice(hi, old.size()));
    Heap next = h;
    next.insts[as->inst] = spliced;
    return stepped(std::move(next), cm::skip());
  }

  if (const auto* ite = std::get_if<Command::If>(&c.node)) {
    Env env{{"heap", h}};
    std::optional<bool> cond = eval_formula_strict(*ite->cond, env, table);
    if (!cond) {
      return stuck(StuckReason::UndefinedExpr,
                   "branch condition is undefined in this heap");
    }
    return stepped(h, *cond ? ite->then_cmd : ite->else_cmd);
  }

  if (const auto* sq = std::get_if<Command::Seq>(&c.node)) {
    if (std::get_if<Command::Skip>(&sq->first->node)) {
      return stepped(h, sq->second);
    }
    StepResult head = step({h, sq->first}, table);
    if (head.status != StepResult::Status::Stepped) return head;
    return stepped(std::move(head.next.heap),
                   cm::seq(std::move(head.next.cmd), sq->second));
  }

  const auto& asc = std::get<Command::Ascribe>(c.node);
  return stepped(h, asc.body);
}

RunResult run(Config cfg, const HeaderTable& table, size_t fuel) {
  RunResult r;
  r.reason = StuckReason::UndefinedExpr;
  for (size_t i = 0; i < fuel; ++i) {
    StepResult s = step(cfg, table);
    if (s.status == StepResult::Status::Done) {
      r.status = RunResult::Status::Done;
      r.final = std::move(cfg);
      r.steps = i;
      return r;
    }
    if (s.status == StepResult::Status::Stuck) {
      r.status = RunResult::Status::Stuck;
      r.final = std::move(cfg);
      r.reason = s.reason;
      r.detail = std::move(s.detail);
      r.steps = i;
      return r;
    }
    cfg = std::move(s.next);
  }
  StepResult s = step(cfg, table);
  if (s.status == StepResult::Status::Done) {
    r.status = RunResult::Status::Done;
    r.steps = fuel;
  } else {
    r.status = RunResult::Status::FuelExhausted;
    r.detail = "no normal form after " + std::to_string(fuel) + " steps";
    r.steps = fuel;
  }
  r.final = std::move(cfg);
  return r;
}

} // namespace pi4
