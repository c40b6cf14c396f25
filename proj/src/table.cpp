#include "pi4/table.hpp"

#include "pi4/error.hpp"

namespace pi4 {

const std::vector<HeaderTable::Field>& HeaderTable::fields_of(
    const std::string& inst) const {
  auto it = instances.find(inst);
  if (it == instances.end()) {
    fail(ErrorKind::UnknownInstance, "unknown instance " + inst);
  }
  return types.at(it->second);
}

size_t HeaderTable::sizeof_inst(const std::string& inst) const {
  size_t n = 0;
  for (const Field& f : fields_of(inst)) n += f.width;
  return n;
}

std::optional<std::pair<size_t, size_t>> HeaderTable::field_range(
    const std::string& inst, const std::string& field) const {
  size_t offset = 0;
  for (const Field& f : fields_of(inst)) {
    if (f.name == field) return std::pair{offset, offset + f.width};
    offset += f.width;
  }
  return std::nullopt;
}

} // namespace pi4
