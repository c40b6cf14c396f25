#pragma once
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pi4/ast.hpp"
#include "pi4/heap.hpp"
#include "pi4/table.hpp"

namespace pi4 {

// Expression value: nat, bit string, or undefined. Undefinedness is a value
// because formula equality over an undefined side must evaluate to false.
struct Value {
  enum class Kind : uint8_t { Bottom, Nat, Bv };
  Kind kind = Kind::Bottom;
  uint64_t nat = 0;
  Bits bits;

  static Value bottom() { return {}; }
  static Value of_nat(uint64_t n) { return {Kind::Nat, n, {}}; }
  static Value of_bits(Bits b) { return {Kind::Bv, 0, std::move(b)}; }
  bool is_bottom() const { return kind == Kind::Bottom; }
  bool operator==(const Value&) const = default;
};

Value eval_expr(const Expr& e, const Env& env, const HeaderTable& table);

// Total: Eq/Gt over an undefined or sort-mismatched side are false.
bool eval_formula(const Formula& f, const Env& env, const HeaderTable& table);

// Strict variant for interpreter branch conditions: nullopt as soon as any
// subexpression is undefined.
std::optional<bool> eval_formula_strict(const Formula& f, const Env& env,
                                        const HeaderTable& table);

struct Bound {
  size_t max_total_bits = 10; // cap on |pkt_in|+|pkt_out| per heap
  size_t max_enum_bits = 16;  // feasibility cap; exceeding it is an error
};

// Number of heaps with |pkt_in|+|pkt_out| <= max_total_bits over the table's
// instances. Throws EnumerationSpaceExceeded per the policy in
// check_enumeration_policy.
uint64_t universe_size(const HeaderTable& table, const Bound& bound);

// Deterministic order: pkt_in length, then pkt_out length, then pkt_in bits
// lexicographically, then pkt_out bits, then validity subsets counting in
// declaration order, then instance values lexicographically.
std::vector<Heap> enumerate_heaps(const HeaderTable& table,
                                  const Bound& bound);

// Precomputed enumeration with a membership index; shared read-only.
struct Universe {
  const HeaderTable* table = nullptr;
  Bound bound;
  std::vector<Heap> heaps;
  std::unordered_map<Heap, uint32_t, HeapHash> index;

  std::optional<uint32_t> find(const Heap& h) const {
    auto it = index.find(h);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

Universe build_universe(const HeaderTable& table, const Bound& bound);

// Denotation of a type as a subset of the universe, one flag per heap index.
using Mask = std::vector<uint8_t>;

// Memoizing denotation engine. Cache keys are (node identity, env restricted
// to the node's free variables), so one Denoter can serve many env
// extensions of the same types.
class Denoter {
public:
  explicit Denoter(const Universe& u) : u_(&u) {}
  const Universe& universe() const { return *u_; }

  const Mask& mask(const TypePtr& t, const Env& env);
  std::vector<Heap> heaps(const TypePtr& t, const Env& env);
  bool member(const Heap& h, const TypePtr& t, const Env& env);

private:
  struct Key {
    // Owning: keeps the node alive so a freed type cannot alias a cached
    // entry through address reuse.
    TypePtr node;
    Env scope; // free-var bindings only, sorted by name
    bool operator==(const Key&) const;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };

  Mask compute(const TypePtr& t, const Env& env);

  const Universe* u_;
  std::unordered_map<Key, Mask, KeyHash> cache_;
};

// Denotation as an explicit heap set, materialized over the bound universe.
std::vector<Heap> denote_type(const TypePtr& t, const Env& env,
                              const Universe& u);

// Entailment h |= t via the Ent-* rules: independent of denote_type (the
// Sigma case searches concrete splits of h, the Subst case enumerates the
// replacement type). Kept separate so the two routes cross-check each other.
bool entails(const Heap& h, const TypePtr& t, const Env& env,
             const Universe& u);

} // namespace pi4
