#pragma once
#include <string>

#include "pi4/ast.hpp"
#include "pi4/table.hpp"

namespace pi4 {

struct Program {
  HeaderTable table;
  CmdPtr command;
};

// Header-type/instance declarations followed by one command.
// Throws Pi4Error(Syntax/UnknownInstance/UnknownField/DuplicateDeclaration/
// SliceOutOfBounds) with line:col positions.
Program parse_program(const std::string& text);

// A heap type against an existing table. Sugar (empty, bare instance, ~A,
// ===, ==inst=, field access, .length) is expanded here; binders are
// alpha-freshened only when they shadow.
TypePtr parse_type(const std::string& text, const HeaderTable& table);

// "(x : TYPE) -> TYPE" annotation files.
struct TypeSig {
  std::string binder;
  TypePtr input;
  TypePtr output;
};
TypeSig parse_type_signature(const std::string& text,
                             const HeaderTable& table);

} // namespace pi4
