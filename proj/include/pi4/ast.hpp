#pragma once
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pi4/bits.hpp"

namespace pi4 {

enum class Pkt : uint8_t { In, Out };

inline const char* pkt_name(Pkt p) { return p == Pkt::In ? "pkt_in" : "pkt_out"; }

// One bit of a bit-vector literal. Placeholders are produced by chomp while
// it peels bits off a type; they never appear in parsed input and are gone
// again once a chomp call completes.
struct BvBit {
  enum class Kind : uint8_t { Zero, One, Placeholder };
  Kind kind = Kind::Zero;
  int id = 0; // Placeholder only

  static BvBit zero() { return {Kind::Zero, 0}; }
  static BvBit one() { return {Kind::One, 0}; }
  static BvBit placeholder(int id) { return {Kind::Placeholder, id}; }
  bool operator==(const BvBit&) const = default;
};

using BvBits = std::vector<BvBit>;

BvBits bv_of_bits(const Bits& b);
// Concrete value of a literal; nullopt if any placeholder remains.
std::optional<Bits> bits_of_bv(const BvBits& b);

struct Expr;
struct Formula;
struct HeapType;
struct Command;
using ExprPtr = std::shared_ptr<const Expr>;
using FormulaPtr = std::shared_ptr<const Formula>;
using TypePtr = std::shared_ptr<const HeapType>;
using CmdPtr = std::shared_ptr<const Command>;

struct Expr {
  struct Num {
    uint64_t value;
  };
  struct Bv {
    BvBits bits;
  };
  struct Len {
    std::string var;
    Pkt pkt;
  };
  struct Plus {
    ExprPtr lhs, rhs;
  };
  struct Concat {
    ExprPtr lhs, rhs;
  };
  struct Packet {
    std::string var;
    Pkt pkt;
  };
  // x.pkt[lo:hi], half-open
  struct SliceP {
    std::string var;
    Pkt pkt;
    size_t lo, hi;
  };
  // x.inst[lo:hi], half-open
  struct SliceI {
    std::string var;
    std::string inst;
    size_t lo, hi;
  };
  using Node =
      std::variant<Num, Bv, Len, Plus, Concat, Packet, SliceP, SliceI>;
  Node node;
};

struct Formula {
  struct True {};
  struct False {};
  struct Eq {
    ExprPtr lhs, rhs;
  };
  struct Gt {
    ExprPtr lhs, rhs;
  };
  struct Neg {
    FormulaPtr arg;
  };
  struct And {
    FormulaPtr lhs, rhs;
  };
  struct Valid {
    std::string var;
    std::string inst;
  };
  using Node = std::variant<True, False, Eq, Gt, Neg, And, Valid>;
  Node node;
};

// Binding structure:
//   Sigma(x, l, r)    x scopes over r
//   Refine(x, t, phi) x scopes over phi
//   Subst(t1, x, t2)  x scopes over t1        (t1 with x ranging over t2)
struct HeapType {
  struct Nothing {};
  struct Top {};
  struct Sigma {
    std::string binder;
    TypePtr left, right;
  };
  struct Choice {
    TypePtr lhs, rhs;
  };
  struct Refine {
    std::string binder;
    TypePtr inner;
    FormulaPtr phi;
  };
  struct Subst {
    TypePtr target;
    std::string binder;
    TypePtr replacement;
  };
  using Node = std::variant<Nothing, Top, Sigma, Choice, Refine, Subst>;
  Node node;
};

struct Command {
  struct Extract {
    std::string inst;
  };
  struct Remit {
    std::string inst;
  };
  struct Add {
    std::string inst;
  };
  struct Reset {};
  struct Skip {};
  struct Assign {
    std::string inst, field;
    ExprPtr value;
  };
  struct If {
    FormulaPtr cond;
    CmdPtr then_cmd, else_cmd;
  };
  struct Seq {
    CmdPtr first, second;
  };
  // c as (x: input) -> output; x scopes over output
  struct Ascribe {
    CmdPtr body;
    std::string binder;
    TypePtr input, output;
  };
  using Node = std::variant<Extract, Remit, Add, Reset, Skip, Assign, If, Seq,
                            Ascribe>;
  Node node;
};

// Constructors. All nodes are immutable and shared.
namespace ex {
ExprPtr num(uint64_t v);
ExprPtr bv(BvBits bits);
ExprPtr bv(const Bits& bits);
ExprPtr len(std::string var, Pkt pkt);
ExprPtr plus(ExprPtr lhs, ExprPtr rhs);
ExprPtr concat(ExprPtr lhs, ExprPtr rhs);
ExprPtr packet(std::string var, Pkt pkt);
ExprPtr slice_pkt(std::string var, Pkt pkt, size_t lo, size_t hi);
ExprPtr slice_inst(std::string var, std::string inst, size_t lo, size_t hi);
} // namespace ex

namespace fm {
FormulaPtr tru();
FormulaPtr fls();
FormulaPtr eq(ExprPtr lhs, ExprPtr rhs);
FormulaPtr gt(ExprPtr lhs, ExprPtr rhs);
FormulaPtr neg(FormulaPtr f);
FormulaPtr land(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr valid(std::string var, std::string inst);
// derived connectives
FormulaPtr lor(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr iff(FormulaPtr lhs, FormulaPtr rhs);
} // namespace fm

namespace ty {
TypePtr nothing();
TypePtr top();
TypePtr sigma(std::string binder, TypePtr left, TypePtr right);
TypePtr choice(TypePtr lhs, TypePtr rhs);
TypePtr refine(std::string binder, TypePtr inner, FormulaPtr phi);
TypePtr subst(TypePtr target, std::string binder, TypePtr replacement);
} // namespace ty

namespace cm {
CmdPtr extract(std::string inst);
CmdPtr remit(std::string inst);
CmdPtr add(std::string inst);
CmdPtr reset();
CmdPtr skip();
CmdPtr assign(std::string inst, std::string field, ExprPtr value);
CmdPtr ifte(FormulaPtr cond, CmdPtr then_cmd, CmdPtr else_cmd);
CmdPtr seq(CmdPtr first, CmdPtr second);
CmdPtr ascribe(CmdPtr body, std::string binder, TypePtr input, TypePtr output);
} // namespace cm

// Deep structural equality (placeholder ids compare literally).
bool equal(const Expr& a, const Expr& b);
bool equal(const Formula& a, const Formula& b);
bool equal(const HeapType& a, const HeapType& b);
bool equal(const Command& a, const Command& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  return equal(*a, *b);
}
inline bool equal(const TypePtr& a, const TypePtr& b) { return equal(*a, *b); }
inline bool equal(const CmdPtr& a, const CmdPtr& b) { return equal(*a, *b); }

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const HeapType& t);

// Renames free occurrences of `from` to `to`. Binders are untouched; a
// shadowing binder stops the walk. Throws FreeVariableCapture if `to` would
// be captured by a binder it passes under.
ExprPtr rename_free_var(const ExprPtr& e, const std::string& from,
                        const std::string& to);
FormulaPtr rename_free_var(const FormulaPtr& f, const std::string& from,
                           const std::string& to);
TypePtr rename_free_var(const TypePtr& t, const std::string& from,
                        const std::string& to);

// True iff a placeholder bit occurs anywhere in the tree.
bool has_placeholder(const Expr& e);
bool has_placeholder(const Formula& f);
bool has_placeholder(const HeapType& t);

// Syntactic size; an upper bound on interpreter steps.
size_t node_count(const Command& c);

} // namespace pi4
