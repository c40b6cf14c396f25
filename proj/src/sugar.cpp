#include "pi4/sugar.hpp"

namespace pi4 {

ExprPtr inst_expr(const HeaderTable& table, const std::string& var,
                  const std::string& inst) {
  return ex::slice_inst(var, inst, 0, table.sizeof_inst(inst));
}

FormulaPtr all_invalid(const HeaderTable& table, const std::string& var) {
  FormulaPtr acc = fm::tru();
  bool first = true;
  for (const std::string& inst : table.instance_order) {
    FormulaPtr part = fm::neg(fm::valid(var, inst));
    acc = first ? part : fm::land(std::move(acc), std::move(part));
    first = false;
  }
  return acc;
}

TypePtr empty_type(const HeaderTable& table, const std::string& binder) {
  return ty::refine(binder, ty::top(), all_invalid(table, binder));
}

TypePtr exact_instance_type(const HeaderTable& table, const std::string& inst,
                            const std::string& binder) {
  FormulaPtr acc = fm::valid(binder, inst);
  for (const std::string& other : table.instance_order) {
    if (other == inst) continue;
    acc = fm::land(std::move(acc), fm::neg(fm::valid(binder, other)));
  }
  return ty::refine(binder, ty::top(), std::move(acc));
}

TypePtr at_least_instance_type(const std::string& inst,
                               const std::string& binder) {
  return ty::refine(binder, ty::top(), fm::valid(binder, inst));
}

FormulaPtr valid_iff(const std::string& x, const std::string& y,
                     const std::string& inst) {
  return fm::lor(fm::land(fm::valid(x, inst), fm::valid(y, inst)),
                 fm::land(fm::neg(fm::valid(x, inst)),
                          fm::neg(fm::valid(y, inst))));
}

FormulaPtr inst_equal(const HeaderTable& table, const std::string& x,
                      const std::string& y, const std::string& inst) {
  return fm::lor(
      fm::land(fm::land(fm::valid(x, inst), fm::valid(y, inst)),
               fm::eq(inst_expr(table, x, inst), inst_expr(table, y, inst))),
      fm::land(fm::neg(fm::valid(x, inst)), fm::neg(fm::valid(y, inst))));
}

FormulaPtr equals_strict(const HeaderTable& table, const std::string& x,
                         const std::string& y) {
  FormulaPtr acc = fm::land(
      fm::eq(ex::packet(x, Pkt::In), ex::packet(y, Pkt::In)),
      fm::eq(ex::packet(x, Pkt::Out), ex::packet(y, Pkt::Out)));
  for (const std::string& inst : table.instance_order) {
    acc = fm::land(std::move(acc), inst_equal(table, x, y, inst));
  }
  return acc;
}

FormulaPtr equals_except(const HeaderTable& table, const std::string& x,
                         const std::string& y, const std::string& except) {
  FormulaPtr acc = fm::tru();
  bool first = true;
  for (const std::string& inst : table.instance_order) {
    if (inst == except) continue;
    FormulaPtr part = inst_equal(table, x, y, inst);
    acc = first ? part : fm::land(std::move(acc), std::move(part));
    first = false;
  }
  return acc;
}

} // namespace pi4
