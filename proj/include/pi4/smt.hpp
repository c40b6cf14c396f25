#pragma once
#include <string>
#include <vector>

#include "pi4/decision.hpp"

namespace pi4 {

// SMT-LIB 2 script asserting the negation of q: exists env |= Gamma and
// h in lhs with h not in rhs. unsat therefore means lhs <: rhs.
//
// Encoding: every packet and instance value is a left-aligned bit vector of
// static width W = max_total_bits (bit 0 at the MSB, so slices are constant
// extracts) paired with a length bit vector; bits past the length are zero.
// Expressions compile to (definedness, value) pairs so that equality over an
// undefined side is false, exactly like eval_formula.
std::string smt_script(const Query& q, const HeaderTable& table);

// Batch of scripts through one solver configuration; one verdict per script.
enum class SmtVerdict { Sat, Unsat, Unknown };
std::vector<SmtVerdict> run_solver(const std::vector<std::string>& scripts,
                                   const SolverConfig& solver);

// unsat => ok. Throws SolverUnavailable/SolverError.
SubtypeResult subtype_smt(const Query& q, const HeaderTable& table,
                          const SolverConfig& solver);

} // namespace pi4
