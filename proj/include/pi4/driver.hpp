#pragma once
#include <optional>
#include <string>

#include "pi4/decision.hpp"
#include "pi4/interpreter.hpp"
#include "pi4/parser.hpp"
#include "pi4/typechecker.hpp"

namespace pi4 {

struct CheckOptions {
  Backend backend = Backend::Enum;
  size_t mtu = 10;
  size_t max_enum_bits = 16;
  std::string solver_cmd;       // empty: probe PI4_SOLVER, z3, node wrapper
  bool optimized_extract = true;
  bool dump_obligations = false; // collect verdict-free obligations
  std::string dump_dir;          // write SMT scripts here when set
};

struct CheckOutcome {
  bool accepted = false;
  TypingResult result;
  size_t mtu = 0;
  size_t emit = 0;
};

// Types `cmd as (x : sig.input) -> sig.output` from sig.input under the
// MTU assumption: the universe is bounded at mtu + max_emit(cmd), which is
// what makes every denotation finite.
CheckOutcome check_program(const Program& prog, const TypeSig& sig,
                           const CheckOptions& opts);

// Reads the program and its signature ("<file>.sig" next to the program
// unless given). Throws on I/O and parse errors.
CheckOutcome check_files(const std::string& program_path,
                         const std::string& sig_path,
                         const CheckOptions& opts);

std::string report_text(const CheckOutcome& o);
std::string report_json(const CheckOutcome& o);

std::string read_file(const std::string& path);

} // namespace pi4
