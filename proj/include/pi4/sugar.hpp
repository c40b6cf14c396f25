#pragma once
#include <string>

#include "pi4/ast.hpp"
#include "pi4/table.hpp"

namespace pi4 {

// Shared expansions of the derived forms. Equality over instances is always
// validity-aware: values compare only when both sides are valid, and two
// invalid sides are equal.

// var.inst as a value: the full instance slice.
ExprPtr inst_expr(const HeaderTable& table, const std::string& var,
                  const std::string& inst);

// /\_i !var.i.valid
FormulaPtr all_invalid(const HeaderTable& table, const std::string& var);

// empty: {binder: top | all_invalid}
TypePtr empty_type(const HeaderTable& table, const std::string& binder);

// bare instance type: {binder: top | binder.inst.valid /\ others invalid}
TypePtr exact_instance_type(const HeaderTable& table, const std::string& inst,
                            const std::string& binder);

// ~inst: {binder: top | binder.inst.valid}
TypePtr at_least_instance_type(const std::string& inst,
                               const std::string& binder);

// x.inst.valid <=> y.inst.valid
FormulaPtr valid_iff(const std::string& x, const std::string& y,
                     const std::string& inst);

// (x.i.valid /\ y.i.valid /\ x.i == y.i) \/ (!x.i.valid /\ !y.i.valid)
FormulaPtr inst_equal(const HeaderTable& table, const std::string& x,
                      const std::string& y, const std::string& inst);

// x === y: packets equal and every instance inst_equal.
FormulaPtr equals_strict(const HeaderTable& table, const std::string& x,
                         const std::string& y);

// instance equality on everything but `except` (packets not included).
FormulaPtr equals_except(const HeaderTable& table, const std::string& x,
                         const std::string& y, const std::string& except);

} // namespace pi4
