#pragma once
#include <optional>
#include <string>
#include <vector>

#include "pi4/ast.hpp"
#include "pi4/decision.hpp"

namespace pi4 {

// One discharged (or deferred) subtyping side condition.
struct Obligation {
  std::string description; // e.g. "extract(A): input long enough"
  TypePtr lhs, rhs;
  Ctx ctx;
  bool verdict = false;
  std::optional<Counterexample> cex;
};

enum class TypeErrorKind {
  ValidityViolation,       // includes/excludes side condition failed
  PacketTooShort,          // extract length side condition failed
  AscriptionInputMismatch, // incoming type not a subtype of ascribed input
  AscriptionOutputMismatch,// derived output not a subtype of ascribed output
  IllFormedFormula,        // if-condition mentions unknown slices/vars
};

const char* type_error_name(TypeErrorKind k);

struct TypingResult {
  bool ok = false;
  TypePtr output; // set when ok
  std::optional<TypeErrorKind> error;
  std::string message;
  std::vector<Obligation> obligations; // discharge order
  std::vector<std::string> trace;      // rule name per visited node
};

struct CheckerOptions {
  // extract() synthesizes the refinement-only output type; switching this
  // off uses the literal chomp-based rule instead (differential testing).
  bool optimized_extract = true;
};

class Checker {
public:
  Checker(const HeaderTable& table, Decider& decider, CheckerOptions opts = {});

  // Gamma |- c : (x : t1) ~> t2'. Domain failures land in TypingResult,
  // never in exceptions.
  TypingResult infer(const Ctx& ctx, const CmdPtr& c, const std::string& x,
                     const TypePtr& t1);

  // Checks t1 <: asc_in, types the body from asc_in, checks the derived
  // output against asc_out; the result type is asc_out.
  TypingResult check_ascription(const Ctx& ctx, const CmdPtr& body,
                                const std::string& x, const TypePtr& t1,
                                const std::string& asc_binder,
                                const TypePtr& asc_in, const TypePtr& asc_out);

private:
  struct Frame; // in-progress result
  TypePtr infer_node(Frame& fr, const Ctx& ctx, const CmdPtr& c,
                     const std::string& x, const TypePtr& t1);
  bool oblige(Frame& fr, const Ctx& ctx, std::string description,
              const TypePtr& lhs, const TypePtr& rhs);
  std::string fresh(const std::string& hint);

  const HeaderTable* table_;
  Decider* decider_;
  CheckerOptions opts_;
  uint64_t counter_ = 0;
};

// Sigma-elimination and substitution-free extract shapes; denotation
// preserving. Used by tests and by callers that want smaller types.
TypePtr simplify(const TypePtr& t, const HeaderTable& table);

// Upper bound on bits a command can append to pkt_out.
size_t max_emit(const CmdPtr& c, const HeaderTable& table);

// Gamma |- t <= n: every denoted heap satisfies |pkt_in|+|pkt_out| <= n.
// Checked against a universe wide enough to witness violations.
bool check_bound(const Ctx& ctx, const TypePtr& t, size_t n, Denoter& den);

} // namespace pi4
