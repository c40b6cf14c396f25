#include "pi4/pretty.hpp"

#include <variant>

namespace pi4 {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// Command-level formulas are rooted at the implicit variable `heap`, which is
// not written in the surface syntax.
std::string prefix(const std::string& var) {
  return var == "heap" ? "" : var + ".";
}

std::string range(size_t lo, size_t hi) {
  return "[" + std::to_string(lo) + ":" + std::to_string(hi) + "]";
}

} // namespace

std::string pretty(const Expr& e) {
  return std::visit(
      overloaded{
          [](const Expr::Num& x) { return std::to_string(x.value); },
          [](const Expr::Bv& x) -> std::string {
            if (x.bits.empty()) return "<>";
            std::string s = "0b";
            for (const BvBit& b : x.bits) {
              switch (b.kind) {
              case BvBit::Kind::Zero: s += '0'; break;
              case BvBit::Kind::One: s += '1'; break;
              case BvBit::Kind::Placeholder:
                s += "(b" + std::to_string(b.id) + ")";
                break;
              }
            }
            return s;
          },
          [](const Expr::Len& x) {
            return prefix(x.var) + pkt_name(x.pkt) + ".length";
          },
          [](const Expr::Plus& x) {
            return "(" + pretty(*x.lhs) + " + " + pretty(*x.rhs) + ")";
          },
          [](const Expr::Concat& x) {
            return "(" + pretty(*x.lhs) + " @ " + pretty(*x.rhs) + ")";
          },
          [](const Expr::Packet& x) {
            return prefix(x.var) + pkt_name(x.pkt);
          },
          [](const Expr::SliceP& x) {
            return prefix(x.var) + pkt_name(x.pkt) + range(x.lo, x.hi);
          },
          [](const Expr::SliceI& x) {
            return prefix(x.var) + x.inst + range(x.lo, x.hi);
          },
      },
      e.node);
}

std::string pretty(const Formula& f) {
  return std::visit(
      overloaded{
          [](const Formula::True&) -> std::string { return "true"; },
          [](const Formula::False&) -> std::string { return "false"; },
          [](const Formula::Eq& x) {
            return pretty(*x.lhs) + " == " + pretty(*x.rhs);
          },
          [](const Formula::Gt& x) {
            return pretty(*x.lhs) + " > " + pretty(*x.rhs);
          },
          [](const Formula::Neg& x) { return "!(" + pretty(*x.arg) + ")"; },
          [](const Formula::And& x) {
            return "(" + pretty(*x.lhs) + " && " + pretty(*x.rhs) + ")";
          },
          [](const Formula::Valid& x) {
            return prefix(x.var) + x.inst + ".valid";
          },
      },
      f.node);
}

std::string pretty(const HeapType& t) {
  return std::visit(
      overloaded{
          [](const HeapType::Nothing&) -> std::string { return "nothing"; },
          [](const HeapType::Top&) -> std::string { return "top"; },
          [](const HeapType::Sigma& x) {
            return "(sigma " + x.binder + ":" + pretty(*x.left) + ". " +
                   pretty(*x.right) + ")";
          },
          [](const HeapType::Choice& x) {
            return "(" + pretty(*x.lhs) + " + " + pretty(*x.rhs) + ")";
          },
          [](const HeapType::Refine& x) {
            return "{" + x.binder + ":" + pretty(*x.inner) + " | " +
                   pretty(*x.phi) + "}";
          },
          [](const HeapType::Subst& x) {
            return pretty(*x.target) + "[" + x.binder + " -> " +
                   pretty(*x.replacement) + "]";
          },
      },
      t.node);
}

std::string pretty(const Command& c) {
  return std::visit(
      overloaded{
          [](const Command::Extract& x) { return "extract(" + x.inst + ")"; },
          [](const Command::Remit& x) { return "remit(" + x.inst + ")"; },
          [](const Command::Add& x) { return "add(" + x.inst + ")"; },
          [](const Command::Reset&) -> std::string { return "reset"; },
          [](const Command::Skip&) -> std::string { return "skip"; },
          [](const Command::Assign& x) {
            return x.inst + "." + x.field + " := " + pretty(*x.value);
          },
          [](const Command::If& x) {
            return "if(" + pretty(*x.cond) + ") { " + pretty(*x.then_cmd) +
                   " } else { " + pretty(*x.else_cmd) + " }";
          },
          [](const Command::Seq& x) {
            std::string rhs = pretty(*x.second);
            if (std::holds_alternative<Command::Seq>(x.second->node)) {
              rhs = "(" + rhs + ")";
            }
            return pretty(*x.first) + "; " + rhs;
          },
          [](const Command::Ascribe& x) {
            return "(" + pretty(*x.body) + ") as (" + x.binder + ":" +
                   pretty(*x.input) + ") -> " + pretty(*x.output);
          },
      },
      c.node);
}

std::string pretty(const Heap& h) {
  std::string s = "(pkt_in=" + h.in.to_string() + ", pkt_out=" +
                  h.out.to_string() + ", {";
  bool first = true;
  for (const auto& [name, bits] : h.insts) {
    if (!first) s += ", ";
    first = false;
    s += name + "=" + bits.to_string();
  }
  return s + "})";
}

} // namespace pi4
