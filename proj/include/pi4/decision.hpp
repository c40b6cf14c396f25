#pragma once
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pi4/ast.hpp"
#include "pi4/semantics.hpp"

namespace pi4 {

// Typing context Gamma: ordered; later bindings may mention earlier vars.
struct Ctx {
  std::vector<std::pair<std::string, TypePtr>> bindings;

  Ctx extend(const std::string& var, TypePtr t) const {
    Ctx r = *this;
    r.bindings.emplace_back(var, std::move(t));
    return r;
  }
};

// Gamma |- lhs <: rhs at the given bound.
struct Query {
  Ctx ctx;
  TypePtr lhs;
  TypePtr rhs;
  Bound bound;
};

struct Counterexample {
  Env env; // one heap per Gamma binding
  Heap heap;
};

struct SubtypeResult {
  bool ok = false;
  // Enumeration backend only; first failure in enumeration order.
  std::optional<Counterexample> cex;
};

// Enumerates all envs satisfying ctx, then checks set inclusion of the
// denotations. Universe must match q.bound's table/bound.
SubtypeResult subtype_enum(const Query& q, const HeaderTable& table);
// Same, against a caller-owned universe/denoter (cache reuse across queries).
SubtypeResult subtype_enum(const Query& q, Denoter& den);

// Runs fn(env) for every env |= ctx, in enumeration order, until fn returns
// false. Returns false iff some fn call did.
bool for_each_env(const Ctx& ctx, Denoter& den,
                  const std::function<bool(const Env&)>& fn);

enum class Backend { Enum, Smt };

struct SolverConfig {
  // Command invoked as: cmd file.smt2 [file.smt2 ...]; prints one
  // sat/unsat/unknown line per file. Empty means probe (PI4_SOLVER env var,
  // a z3 on PATH, then the bundled node wrapper).
  std::string command;
  bool multi_file = false; // solver accepts several scripts per invocation
};

// Resolves the effective solver; nullopt when none is available.
std::optional<SolverConfig> find_solver(const std::string& requested);

// Decision façade used by the typechecker: one backend, one bound, shared
// denotation cache, optional script capture for dump mode.
class Decider {
public:
  Decider(const HeaderTable& table, Backend backend, Bound bound,
          SolverConfig solver = {});

  SubtypeResult subtype(const Ctx& ctx, const TypePtr& lhs,
                        const TypePtr& rhs);

  // Validity of inst in every heap of t: t <: {x:T | x.inst.valid}.
  bool includes(const Ctx& ctx, const TypePtr& t, const std::string& inst);
  // Invalidity in every heap: t <: {x:T | !x.inst.valid}.
  bool excludes(const Ctx& ctx, const TypePtr& t, const std::string& inst);
  // Every heap of t has |pkt_in| >= n: t <: {x:T | |x.pkt_in| > n-1}.
  bool min_pktin(const Ctx& ctx, const TypePtr& t, size_t n);

  // When set, subtype() records scripts instead of solving and returns ok
  // (dump mode: obligations are collected, not discharged).
  void set_dump_only(bool dump) { dump_only_ = dump; }
  const std::vector<std::string>& dumped_scripts() const { return scripts_; }

  Backend backend() const { return backend_; }
  const Bound& bound() const { return bound_; }
  const HeaderTable& table() const { return *table_; }
  Denoter& denoter();

private:
  const HeaderTable* table_;
  Backend backend_;
  Bound bound_;
  SolverConfig solver_;
  bool dump_only_ = false;
  std::vector<std::string> scripts_;
  std::unique_ptr<Universe> universe_; // lazy; enum backend only
  std::unique_ptr<Denoter> denoter_;
};

} // namespace pi4
