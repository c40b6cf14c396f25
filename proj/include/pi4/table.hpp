#pragma once
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pi4 {

// Global header table: declared header types plus instance bindings.
// Immutable after parsing.
struct HeaderTable {
  struct Field {
    std::string name;
    size_t width = 0;
  };

  // header-type name -> ordered field list
  std::map<std::string, std::vector<Field>> types;
  // instance name -> header-type name
  std::map<std::string, std::string> instances;
  // instance names in declaration order; drives enumeration order
  std::vector<std::string> instance_order;

  bool has_instance(const std::string& inst) const {
    return instances.count(inst) > 0;
  }
  const std::vector<Field>& fields_of(const std::string& inst) const;
  // Sum of field widths of the instance's header type.
  size_t sizeof_inst(const std::string& inst) const;
  // [offset, offset+width) of a field within its instance, if declared.
  std::optional<std::pair<size_t, size_t>> field_range(
      const std::string& inst, const std::string& field) const;
};

} // namespace pi4
