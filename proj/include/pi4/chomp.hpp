#pragma once
#include "pi4/ast.hpp"
#include "pi4/table.hpp"

namespace pi4 {

// Syntactic residuation: the type of heaps that remain after one bit (or a
// whole instance) has been peeled off pkt_in. Placeholder bits stand for the
// peeled bit until heap_ref1 ties them to a slice of the binder's instance.

// One-bit derivative. b names the removed bit inside the result.
TypePtr chomp1(const TypePtr& t, int b);

// Expression derivative w.r.t. variable y's pkt_in.
ExprPtr chomp_expr1(const ExprPtr& e, const std::string& y, int b);

// Replaces placeholder b with x.inst[sizeof(inst)-n : sizeof(inst)-n+1].
TypePtr heap_ref1(const TypePtr& t, int b, const std::string& x,
                  const std::string& inst, size_t n, const HeaderTable& table);

// n-fold heap_ref1 . chomp1; exposed for the unroll property.
TypePtr chomp_rec(const TypePtr& t, size_t n, const std::string& x,
                  const std::string& inst, const HeaderTable& table);

// chomp_rec at sizeof(inst). Requires x not free in t
// (FreeVariableCapture otherwise). The result has no placeholders.
TypePtr chomp(const TypePtr& t, const std::string& inst, const std::string& x,
              const HeaderTable& table);

} // namespace pi4
