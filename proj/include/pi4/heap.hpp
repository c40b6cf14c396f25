#pragma once
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pi4/bits.hpp"
#include "pi4/table.hpp"

namespace pi4 {

// One machine-state fragment: input packet, output packet, valid instances.
struct Heap {
  Bits in;
  Bits out;
  std::map<std::string, Bits> insts;

  bool valid(const std::string& inst) const { return insts.count(inst) > 0; }
  size_t packet_bits() const { return in.size() + out.size(); }
  bool operator==(const Heap&) const = default;
  size_t hash() const;
};

struct HeapHash {
  size_t operator()(const Heap& h) const { return h.hash(); }
};

// Runtime environment: variable -> heap, ordered by binding time.
using Env = std::vector<std::pair<std::string, Heap>>;

const Heap* env_lookup(const Env& env, const std::string& var);
Env env_extend(Env env, const std::string& var, Heap h);

// h1 ++ h2: packets concatenate, instance maps union.
// Throws OverlappingInstances if the instance domains intersect.
Heap concat_heaps(const Heap& h1, const Heap& h2);

// Splits off the first sizeof(inst) bits: (value, rest).
// Throws Underflow if the input is too short.
std::pair<Bits, Bits> deserialize(const HeaderTable& table,
                                  const std::string& inst, const Bits& input);

// Instance bits verbatim (fields are contiguous).
// Throws WidthMismatch if the value width differs from sizeof(inst).
Bits serialize(const HeaderTable& table, const std::string& inst,
               const Bits& value);

// All-zero default value of the instance.
Bits init_value(const HeaderTable& table, const std::string& inst);

// Removes the first n bits of pkt_in; everything else unchanged.
// Throws Underflow if pkt_in has fewer than n bits.
Heap semantic_chomp(const Heap& h, size_t n);

} // namespace pi4
