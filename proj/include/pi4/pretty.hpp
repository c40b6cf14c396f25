#pragma once
#include <string>

#include "pi4/ast.hpp"
#include "pi4/heap.hpp"

namespace pi4 {

// Surface syntax; parse(pretty(t)) == t for placeholder-free trees.
std::string pretty(const Expr& e);
std::string pretty(const Formula& f);
std::string pretty(const HeapType& t);
std::string pretty(const Command& c);
inline std::string pretty(const ExprPtr& e) { return pretty(*e); }
inline std::string pretty(const FormulaPtr& f) { return pretty(*f); }
inline std::string pretty(const TypePtr& t) { return pretty(*t); }
inline std::string pretty(const CmdPtr& c) { return pretty(*c); }

// (pkt_in=…, pkt_out=…, {inst=bits, …})
std::string pretty(const Heap& h);

} // namespace pi4
