#pragma once
#include <string>

#include "pi4/ast.hpp"
#include "pi4/heap.hpp"

namespace pi4 {

// <I, O, H, c>: the heap carries I/O/H.
struct Config {
  Heap heap;
  CmdPtr cmd;
};

enum class StuckReason {
  InvalidInstance, // remit/assign on an instance that is not valid
  AlreadyValid,    // add on a valid instance
  PacketTooShort,  // extract with too little input
  UndefinedExpr,   // condition or assigned value evaluates to undefined
  WidthMismatch,   // assigned value has the wrong width
};

const char* stuck_reason_name(StuckReason r);

struct StepResult {
  enum class Status { Stepped, Done, Stuck };
  Status status;
  Config next;        // Stepped only
  StuckReason reason; // Stuck only
  std::string detail;
};

// Exactly one rule applies, or the config is stuck; Done iff cmd is skip.
StepResult step(const Config& cfg, const HeaderTable& table);

struct RunResult {
  enum class Status { Done, Stuck, FuelExhausted };
  Status status;
  Config final;
  StuckReason reason; // Stuck only
  std::string detail;
  size_t steps = 0;
};

// Iterates step. Commands are loop-free, so fuel >= node_count(cmd) cannot
// exhaust.
RunResult run(Config cfg, const HeaderTable& table, size_t fuel);

} // namespace pi4
