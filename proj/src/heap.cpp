#include "pi4/heap.hpp"

#include "pi4/error.hpp"

namespace pi4 {

size_t Heap::hash() const {
  size_t h = in.hash();
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(out.hash());
  for (const auto& [name, bits] : insts) {
    mix(std::hash<std::string>{}(name));
    mix(bits.hash());
  }
  return h;
}

const Heap* env_lookup(const Env& env, const std::string& var) {
  // Innermost binding wins.
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == var) return &it->second;
  }
  return nullptr;
}

Env env_extend(Env env, const std::string& var, Heap h) {
  env.emplace_back(var, std::move(h));
  return env;
}

Heap concat_heaps(const Heap& h1, const Heap& h2) {
  Heap r;
  r.in = h1.in.concat(h2.in);
  r.out = h1.out.concat(h2.out);
  r.insts = h1.insts;
  for (const auto& [name, bits] : h2.insts) {
    if (!r.insts.emplace(name, bits).second) {
      fail(ErrorKind::OverlappingInstances,
           "instance " + name + " valid on both sides of ++");
    }
  }
  return r;
}

std::pair<Bits, Bits> deserialize(const HeaderTable& table,
                                  const std::string& inst, const Bits& input) {
  size_t n = table.sizeof_inst(inst);
  if (input.size() < n) {
    fail(ErrorKind::Underflow, "deserialize " + inst + " needs " +
                                   std::to_string(n) + " bits, have " +
                                   std::to_string(input.size()));
  }
  return {n > 0 ? input.slice(0, n) : Bits{}, input.drop(n)};
}

Bits serialize(const HeaderTable& table, const std::string& inst,
               const Bits& value) {
  size_t n = table.sizeof_inst(inst);
  if (value.size() != n) {
    fail(ErrorKind::WidthMismatch, "serialize " + inst + " expects " +
                                       std::to_string(n) + " bits, got " +
                                       std::to_string(value.size()));
  }
  return value;
}

Bits init_value(const HeaderTable& table, const std::string& inst) {
  return Bits::zeros(table.sizeof_inst(inst));
}

Heap semantic_chomp(const Heap& h, size_t n) {
  Heap r = h;
  r.in = h.in.drop(n);
  return r;
}

} // namespace pi4
