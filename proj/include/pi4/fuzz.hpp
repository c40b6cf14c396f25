#pragma once
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pi4/ast.hpp"
#include "pi4/decision.hpp"
#include "pi4/table.hpp"

namespace pi4 {

// A generated program together with the input contract it was built against.
// Programs are well-typed by construction: every extract is covered by the
// input length bound, every remit/assign target is known-valid on all paths,
// every add target known-invalid, and conditions only mention defined data.
struct FuzzedProgram {
  HeaderTable table;
  CmdPtr cmd;
  std::string binder;
  TypePtr input;   // bounded: pkt_out empty, pkt_in length in (L, U]
  size_t mtu;      // max |pkt_in|+|pkt_out| any input heap can have
};

class Fuzzer {
public:
  explicit Fuzzer(uint64_t seed) : gen_(seed) {}

  // 1-2 instances, widths 1-2 bits.
  HeaderTable random_table();

  // Family for the chomp oracle: refinements over lengths/slices/validity,
  // Sigma of two refinements, choices. `var` is guaranteed not free.
  TypePtr random_chomp_type(const HeaderTable& table, const std::string& var,
                            size_t max_pktin_ref);

  // Random subtype query: empty or one-binding context, small types.
  Query random_query(const HeaderTable& table, const Bound& bound);

  // Random Sigma type for the rewriting-equivalence check.
  TypePtr random_sigma_type(const HeaderTable& table, const Bound& bound);

  FuzzedProgram random_program();

  uint64_t u64() { return gen_(); }
  size_t pick(size_t n); // uniform in [0, n)
  bool flip() { return pick(2) == 1; }

private:
  std::mt19937_64 gen_;
};

} // namespace pi4
