#include "pi4/parser.hpp"

#include <cctype>
#include <map>
#include <set>

#include "pi4/error.hpp"
#include "pi4/sugar.hpp"

namespace pi4 {

namespace {

struct Token {
  enum class Kind { Ident, Number, BvLit, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  uint64_t num = 0;
  Bits bits;
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {
    "header_type", "header", "extract", "remit",  "add",   "reset",
    "skip",        "if",     "else",    "as",     "sigma", "top",
    "nothing",     "empty",  "true",    "false",  "valid", "pkt_in",
    "pkt_out",     "length", "emit",    "heap",
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> all() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool end = t.kind == Token::Kind::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

private:
  [[noreturn]] void err(const std::string& msg) {
    fail(ErrorKind::Syntax, "line " + std::to_string(line_) + ", col " +
                                std::to_string(col_) + ": " + msg);
  }

  char peek(size_t ahead = 0) const {
    return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0';
  }

  void advance() {
    if (i_ < s_.size()) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  void skip_space() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      }
      if (peek() == '/' && peek(1) == '/') {
        while (i_ < s_.size() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (i_ >= s_.size()) return t;
    char c = peek();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (std::isalnum(static_cast<unsigned char>(peek())) ||
             peek() == '_') {
        id += peek();
        advance();
      }
      t.kind = Token::Kind::Ident;
      t.text = std::move(id);
      return t;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (c == '0' && (peek(1) == 'b' || peek(1) == 'x')) {
        std::string lit = "0";
        advance();
        lit += peek();
        advance();
        while (std::isalnum(static_cast<unsigned char>(peek()))) {
          lit += peek();
          advance();
        }
        auto bits = Bits::parse_literal(lit);
        if (!bits) err("malformed bit-vector literal " + lit);
        t.kind = Token::Kind::BvLit;
        t.text = std::move(lit);
        t.bits = *bits;
        return t;
      }
      uint64_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + static_cast<uint64_t>(peek() - '0');
        advance();
      }
      if (std::isalpha(static_cast<unsigned char>(peek()))) {
        err("identifier may not start with a digit");
      }
      t.kind = Token::Kind::Number;
      t.num = v;
      return t;
    }

    static const char* multi[] = {"<=>", "===", ":=", "->", "==", "=>", "<=",
                                  ">=",  "<>",  "&&", "||", "!="};
    for (const char* m : multi) {
      size_t n = std::char_traits<char>::length(m);
      if (s_.compare(i_, n, m) == 0) {
        t.kind = Token::Kind::Symbol;
        t.text = m;
        for (size_t k = 0; k < n; ++k) advance();
        return t;
      }
    }
    static const std::string singles = "{}()[]:;.|+@~<>!,";
    if (singles.find(c) != std::string::npos) {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    err(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

// One side of a comparison: an expression or a validity atom.
struct Operand {
  ExprPtr expr;                  // set unless validity
  std::string valid_var, valid_inst; // set for validity atoms
  bool is_valid_atom() const { return expr == nullptr; }
};

class Parser {
public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).all()) {}

  Program parse_program() {
    parse_declarations();
    CmdPtr c = parse_command();
    expect_end();
    return {table_, std::move(c)};
  }

  TypePtr parse_type_entry(const HeaderTable& table) {
    table_ = table;
    TypePtr t = parse_type();
    expect_end();
    return t;
  }

  TypeSig parse_type_signature_entry(const HeaderTable& table) {
    table_ = table;
    expect_sym("(");
    std::string binder = expect_ident("signature binder");
    std::string unique = push_binder(binder);
    scope_.pop_back(); // input type must not see the binder
    expect_sym(":");
    TypePtr input = parse_type();
    expect_sym(")");
    expect_sym("->");
    scope_.emplace_back(binder, unique);
    TypePtr output = parse_type();
    scope_.pop_back();
    expect_end();
    check_closed(input, {}, "signature input type");
    check_closed(output, unique, "signature output type");
    return {unique, std::move(input), std::move(output)};
  }

private:
  // ---- token plumbing ----

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void err_at(const Token& t, const std::string& msg,
                           ErrorKind kind = ErrorKind::Syntax) {
    fail(kind, "line " + std::to_string(t.line) + ", col " +
                   std::to_string(t.col) + ": " + msg);
  }

  bool at_sym(const std::string& s, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Symbol && t.text == s;
  }

  bool at_ident(const std::string& s, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == s;
  }

  bool eat_sym(const std::string& s) {
    if (!at_sym(s)) return false;
    take();
    return true;
  }

  bool eat_ident(const std::string& s) {
    if (!at_ident(s)) return false;
    take();
    return true;
  }

  void expect_sym(const std::string& s) {
    const Token& t = peek();
    if (!at_sym(s)) err_at(t, "expected '" + s + "'");
    take();
  }

  std::string expect_ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) err_at(t, "expected " + what);
    if (kKeywords.count(t.text)) {
      err_at(t, "keyword '" + t.text + "' cannot be used as " + what);
    }
    return take().text;
  }

  uint64_t expect_number(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Number) err_at(t, "expected " + what);
    return take().num;
  }

  void expect_end() {
    const Token& t = peek();
    if (t.kind != Token::Kind::End) err_at(t, "trailing input");
  }

  // ---- names ----

  std::string fresh_binder(const std::string& hint) {
    std::string name = hint;
    for (int k = 1; used_binders_.count(name); ++k) {
      name = hint + "_" + std::to_string(k);
    }
    used_binders_.insert(name);
    return name;
  }

  std::string push_binder(const std::string& surface) {
    std::string unique = fresh_binder(surface);
    scope_.emplace_back(surface, unique);
    return unique;
  }

  // In-scope names resolve to their unique binder; anything else stays a
  // free variable (generated and signature types legitimately have them) and
  // is reserved so later binders cannot collide with it.
  std::string lookup_var(const Token& t) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == t.text) return it->second;
    }
    used_binders_.insert(t.text);
    return t.text;
  }

  void check_instance(const Token& t) {
    if (!table_.has_instance(t.text)) {
      err_at(t, "unknown instance " + t.text, ErrorKind::UnknownInstance);
    }
  }

  // Annotation types may reference nothing beyond the given binder.
  void check_closed(const TypePtr& t, const std::string& binder,
                    const std::string& what) {
    for (const std::string& v : free_vars(*t)) {
      if (v != binder) {
        fail(ErrorKind::UnboundVariable, what + ": unbound variable " + v);
      }
    }
  }

  // ---- declarations ----

  void parse_declarations() {
    for (;;) {
      if (eat_ident("header_type")) {
        Token name = peek();
        std::string ty_name = expect_ident("header type name");
        if (table_.types.count(ty_name) || table_.instances.count(ty_name)) {
          err_at(name, "duplicate declaration " + ty_name,
                 ErrorKind::DuplicateDeclaration);
        }
        expect_sym("{");
        std::vector<HeaderTable::Field> fields;
        std::set<std::string> field_names;
        while (!eat_sym("}")) {
          Token ft = peek();
          std::string fname = expect_ident("field name");
          if (!field_names.insert(fname).second) {
            err_at(ft, "duplicate field " + fname,
                   ErrorKind::DuplicateDeclaration);
          }
          expect_sym(":");
          uint64_t width = expect_number("field width");
          if (width == 0) err_at(ft, "field width must be positive");
          fields.push_back({fname, static_cast<size_t>(width)});
          if (!eat_sym(";")) eat_sym(",");
        }
        if (fields.empty()) err_at(name, "header type with no fields");
        table_.types[ty_name] = std::move(fields);
        continue;
      }
      if (eat_ident("header")) {
        Token name = peek();
        std::string inst = expect_ident("instance name");
        if (table_.instances.count(inst) || table_.types.count(inst)) {
          err_at(name, "duplicate declaration " + inst,
                 ErrorKind::DuplicateDeclaration);
        }
        expect_sym(":");
        Token tyt = peek();
        std::string ty_name = expect_ident("header type name");
        if (!table_.types.count(ty_name)) {
          err_at(tyt, "unknown header type " + ty_name,
                 ErrorKind::UnknownInstance);
        }
        table_.instances[inst] = ty_name;
        table_.instance_order.push_back(inst);
        continue;
      }
      return;
    }
  }

  // ---- types ----

  TypePtr parse_type() {
    TypePtr t = parse_type_no_choice();
    while (eat_sym("+")) {
      t = ty::choice(std::move(t), parse_type_no_choice());
    }
    return t;
  }

  TypePtr parse_type_no_choice() {
    if (eat_ident("sigma")) {
      std::string surface = expect_ident("sigma binder");
      std::string unique = fresh_binder(surface);
      expect_sym(":");
      TypePtr left = parse_type_atom();
      expect_sym(".");
      scope_.emplace_back(surface, unique);
      TypePtr right = parse_type_no_choice();
      scope_.pop_back();
      return ty::sigma(unique, std::move(left), std::move(right));
    }
    TypePtr t = parse_type_atom();
    return t;
  }

  TypePtr parse_type_atom() {
    TypePtr t = parse_type_primary();
    // substitution postfix
    while (at_sym("[")) {
      take();
      std::string surface = expect_ident("substitution binder");
      expect_sym("->");
      TypePtr repl = parse_type();
      expect_sym("]");
      // the binder scopes over the target, which is already parsed; re-parse
      // is impossible, so bind by renaming: the surface name inside the
      // target must already be this variable (it was in scope when the
      // target was parsed) or the substitution binds nothing.
      std::string unique = binder_for_postfix(surface, t);
      t = ty::subst(std::move(t), unique, std::move(repl));
    }
    return t;
  }

  // In `t[x -> r]` the parser has already resolved occurrences of x inside t
  // if x was in scope; otherwise x binds nothing and any name works. Scoped
  // occurrences resolved to some unique name u: reuse u as the binder.
  std::string binder_for_postfix(const std::string& surface, const TypePtr& t) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == surface) {
        if (free_vars(*t).count(it->second)) return it->second;
        break;
      }
    }
    return fresh_binder(surface);
  }

  TypePtr parse_type_primary() {
    const Token& t = peek();
    if (eat_sym("(")) {
      TypePtr inner = parse_type();
      expect_sym(")");
      return inner;
    }
    if (eat_sym("{")) {
      std::string surface = expect_ident("refinement binder");
      std::string unique;
      expect_sym(":");
      TypePtr inner = parse_type();
      expect_sym("|");
      unique = fresh_binder(surface);
      scope_.emplace_back(surface, unique);
      FormulaPtr phi = parse_formula();
      scope_.pop_back();
      expect_sym("}");
      return ty::refine(unique, std::move(inner), std::move(phi));
    }
    if (eat_sym("~")) {
      Token it = peek();
      std::string inst = expect_ident("instance name");
      check_instance(it);
      return at_least_instance_type(inst, fresh_binder("x"));
    }
    if (t.kind == Token::Kind::Ident) {
      if (eat_ident("top")) return ty::top();
      if (eat_ident("nothing")) return ty::nothing();
      if (eat_ident("empty")) return empty_type(table_, fresh_binder("x"));
      std::string inst = expect_ident("type");
      if (!table_.has_instance(inst)) {
        err_at(t, "unknown instance " + inst, ErrorKind::UnknownInstance);
      }
      return exact_instance_type(table_, inst, fresh_binder("x"));
    }
    err_at(t, "expected a heap type");
  }

  // ---- formulas ----

  FormulaPtr parse_formula() {
    FormulaPtr f = parse_implies();
    while (eat_sym("<=>")) {
      f = fm::iff(std::move(f), parse_implies());
    }
    return f;
  }

  FormulaPtr parse_implies() {
    FormulaPtr f = parse_or();
    if (eat_sym("=>")) {
      return fm::implies(std::move(f), parse_implies());
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (eat_sym("||")) {
      f = fm::lor(std::move(f), parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_formula_unary();
    while (eat_sym("&&")) {
      f = fm::land(std::move(f), parse_formula_unary());
    }
    return f;
  }

  FormulaPtr parse_formula_unary() {
    if (eat_sym("!")) {
      return fm::neg(parse_formula_unary());
    }
    if (eat_ident("true")) return fm::tru();
    if (eat_ident("false")) return fm::fls();
    if (at_sym("(")) {
      // either a parenthesized formula or a parenthesized expression opening
      // a comparison; try the formula reading first
      size_t save = pos_;
      take();
      try {
        FormulaPtr f = parse_formula();
        expect_sym(")");
        return f;
      } catch (const Pi4Error&) {
        pos_ = save;
      }
      return parse_comparison();
    }
    return parse_comparison();
  }

  FormulaPtr parse_comparison() {
    // strict equality between two heap-valued variables
    if (peek().kind == Token::Kind::Ident && at_sym("===", 1)) {
      if (command_ctx_) {
        err_at(peek(), "=== needs two heap variables; commands have only the "
                       "implicit heap");
      }
      std::string x = lookup_var(take());
      take(); // ===
      Token yt = peek();
      if (yt.kind != Token::Kind::Ident) err_at(yt, "expected a variable");
      std::string y = lookup_var(take());
      return equals_strict(table_, x, y);
    }

    Operand lhs = parse_operand();
    const Token& op = peek();
    if (lhs.is_valid_atom()) {
      if (eat_sym("==")) {
        Operand rhs = parse_operand();
        if (!rhs.is_valid_atom()) {
          err_at(op, "validity can only be compared with validity");
        }
        return fm::lor(fm::land(fm::valid(lhs.valid_var, lhs.valid_inst),
                                fm::valid(rhs.valid_var, rhs.valid_inst)),
                       fm::land(fm::neg(fm::valid(lhs.valid_var, lhs.valid_inst)),
                                fm::neg(fm::valid(rhs.valid_var, rhs.valid_inst))));
      }
      if (eat_sym("!=")) {
        Operand rhs = parse_operand();
        if (!rhs.is_valid_atom()) {
          err_at(op, "validity can only be compared with validity");
        }
        return fm::neg(
            fm::lor(fm::land(fm::valid(lhs.valid_var, lhs.valid_inst),
                             fm::valid(rhs.valid_var, rhs.valid_inst)),
                    fm::land(fm::neg(fm::valid(lhs.valid_var, lhs.valid_inst)),
                             fm::neg(fm::valid(rhs.valid_var, rhs.valid_inst)))));
      }
      return fm::valid(lhs.valid_var, lhs.valid_inst);
    }

    auto expr_rhs = [&]() {
      Operand rhs = parse_operand();
      if (rhs.is_valid_atom()) err_at(op, "cannot compare value with validity");
      return rhs.expr;
    };
    if (eat_sym("==")) return fm::eq(lhs.expr, expr_rhs());
    if (eat_sym("!=")) return fm::neg(fm::eq(lhs.expr, expr_rhs()));
    if (eat_sym(">")) return fm::gt(lhs.expr, expr_rhs());
    if (eat_sym("<")) {
      ExprPtr r = expr_rhs();
      return fm::gt(std::move(r), lhs.expr);
    }
    if (eat_sym(">=")) {
      ExprPtr r = expr_rhs();
      return fm::lor(fm::gt(lhs.expr, r), fm::eq(lhs.expr, r));
    }
    if (eat_sym("<=")) {
      ExprPtr r = expr_rhs();
      return fm::lor(fm::gt(r, lhs.expr), fm::eq(lhs.expr, r));
    }
    err_at(op, "expected a comparison operator");
  }

  // An operand is either a validity atom (x.A.valid) or an expression; the
  // distinction is only known after the path has been read.
  Operand parse_operand() {
    if (peek().kind == Token::Kind::Ident && !at_ident("true") &&
        !at_ident("false")) {
      Operand p = parse_path();
      if (p.is_valid_atom()) return p;
      return {continue_expr(std::move(p.expr)), "", ""};
    }
    return {parse_expr_sum(), "", ""};
  }

  // ---- expressions ----

  ExprPtr parse_expr_sum() { return continue_expr(parse_expr_term()); }

  // `+` inside formulas is always arithmetic; type-level choice cannot occur
  // in expression position.
  ExprPtr continue_expr(ExprPtr e) {
    for (;;) {
      if (eat_sym("@")) {
        e = ex::concat(std::move(e), parse_expr_term());
      } else if (eat_sym("+")) {
        e = ex::plus(std::move(e), parse_expr_term());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_expr_term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      return ex::num(take().num);
    }
    if (t.kind == Token::Kind::BvLit) {
      return ex::bv(take().bits);
    }
    if (eat_sym("<>")) {
      return ex::bv(BvBits{});
    }
    if (eat_sym("(")) {
      ExprPtr e = parse_expr_sum();
      expect_sym(")");
      return e;
    }
    Operand op = parse_path();
    if (op.is_valid_atom()) {
      err_at(t, "validity atom used as a value");
    }
    return op.expr;
  }

  // Path syntax. Type context: var.pkt_in[...], var.inst.field, ...
  // Command context: the variable is the implicit heap: pkt_in[...],
  // inst.field, inst.valid, ...
  Operand parse_path() {
    Token first = peek();
    if (first.kind != Token::Kind::Ident) err_at(first, "expected expression");
    std::string var;
    if (command_ctx_) {
      var = "heap";
    } else {
      if (kKeywords.count(first.text)) {
        err_at(first, "expected a variable, got keyword " + first.text);
      }
      var = lookup_var(take());
      expect_sym(".");
    }
    Token sel = peek();
    if (eat_ident("pkt_in") || eat_ident("pkt_out")) {
      Pkt pkt = sel.text == "pkt_in" ? Pkt::In : Pkt::Out;
      if (eat_sym(".")) {
        Token lt = peek();
        if (!eat_ident("length")) err_at(lt, "expected 'length'");
        return {ex::len(var, pkt), "", ""};
      }
      if (at_sym("[")) {
        auto [lo, hi] = parse_slice_range(SIZE_MAX);
        return {ex::slice_pkt(var, pkt, lo, hi), "", ""};
      }
      return {ex::packet(var, pkt), "", ""};
    }
    // instance path
    Token it = peek();
    std::string inst = expect_ident("instance name");
    check_instance(it);
    if (eat_sym(".")) {
      Token ft = peek();
      if (eat_ident("valid")) {
        return {nullptr, var, inst};
      }
      std::string field = expect_ident("field name");
      auto r = table_.field_range(inst, field);
      if (!r) {
        err_at(ft, "unknown field " + inst + "." + field,
               ErrorKind::UnknownField);
      }
      return {ex::slice_inst(var, inst, r->first, r->second), "", ""};
    }
    if (at_sym("[")) {
      auto [lo, hi] = parse_slice_range(table_.sizeof_inst(inst));
      return {ex::slice_inst(var, inst, lo, hi), "", ""};
    }
    // bare instance access: the whole value
    return {inst_expr(table_, var, inst), "", ""};
  }

  std::pair<size_t, size_t> parse_slice_range(size_t max_hi) {
    Token open = peek();
    expect_sym("[");
    uint64_t lo = expect_number("slice start");
    expect_sym(":");
    uint64_t hi = expect_number("slice end");
    expect_sym("]");
    if (lo >= hi) {
      err_at(open, "empty slice [" + std::to_string(lo) + ":" +
                       std::to_string(hi) + "]",
             ErrorKind::SliceOutOfBounds);
    }
    if (hi > max_hi) {
      err_at(open, "slice end " + std::to_string(hi) + " beyond width " +
                       std::to_string(max_hi),
             ErrorKind::SliceOutOfBounds);
    }
    return {static_cast<size_t>(lo), static_cast<size_t>(hi)};
  }

  // ---- commands ----

  CmdPtr parse_command() {
    CmdPtr c = parse_command_ascribe();
    while (eat_sym(";")) {
      c = cm::seq(std::move(c), parse_command_ascribe());
    }
    return c;
  }

  CmdPtr parse_command_ascribe() {
    CmdPtr c = parse_command_primary();
    if (eat_ident("as")) {
      expect_sym("(");
      std::string surface = expect_ident("ascription binder");
      std::string unique = fresh_binder(surface);
      expect_sym(":");
      TypePtr input = parse_type();
      expect_sym(")");
      expect_sym("->");
      scope_.emplace_back(surface, unique);
      TypePtr output = parse_type();
      scope_.pop_back();
      check_closed(input, {}, "ascription input type");
      check_closed(output, unique, "ascription output type");
      return cm::ascribe(std::move(c), unique, std::move(input),
                         std::move(output));
    }
    return c;
  }

  CmdPtr parse_command_primary() {
    const Token& t = peek();
    if (eat_sym("(")) {
      CmdPtr c = parse_command();
      expect_sym(")");
      return c;
    }
    if (eat_ident("extract") || eat_ident("remit") || eat_ident("add") ||
        eat_ident("emit")) {
      std::string op = t.text;
      expect_sym("(");
      Token it = peek();
      std::string inst = expect_ident("instance name");
      check_instance(it);
      expect_sym(")");
      if (op == "extract") return cm::extract(inst);
      if (op == "remit") return cm::remit(inst);
      if (op == "add") return cm::add(inst);
      return cm::ifte(fm::valid("heap", inst), cm::remit(inst), cm::skip());
    }
    if (eat_ident("reset")) return cm::reset();
    if (eat_ident("skip")) return cm::skip();
    if (eat_ident("if")) {
      expect_sym("(");
      command_ctx_ = true;
      FormulaPtr cond = parse_formula();
      command_ctx_ = false;
      expect_sym(")");
      expect_sym("{");
      CmdPtr then_cmd = parse_command();
      expect_sym("}");
      CmdPtr else_cmd = cm::skip();
      if (eat_ident("else")) {
        expect_sym("{");
        else_cmd = parse_command();
        expect_sym("}");
      }
      return cm::ifte(std::move(cond), std::move(then_cmd),
                      std::move(else_cmd));
    }
    if (t.kind == Token::Kind::Ident && !kKeywords.count(t.text)) {
      // assignment: inst.field := expr
      Token it = take();
      check_instance(it);
      expect_sym(".");
      Token ft = peek();
      std::string field = expect_ident("field name");
      if (!table_.field_range(it.text, field)) {
        err_at(ft, "unknown field " + it.text + "." + field,
               ErrorKind::UnknownField);
      }
      expect_sym(":=");
      command_ctx_ = true;
      ExprPtr value = parse_expr_sum();
      command_ctx_ = false;
      return cm::assign(it.text, field, std::move(value));
    }
    err_at(t, "expected a command");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  HeaderTable table_;
  std::set<std::string> used_binders_ = {"heap"};
  std::vector<std::pair<std::string, std::string>> scope_;
  bool command_ctx_ = false;
};

} // namespace

Program parse_program(const std::string& text) {
  return Parser(text).parse_program();
}

TypePtr parse_type(const std::string& text, const HeaderTable& table) {
  return Parser(text).parse_type_entry(table);
}

TypeSig parse_type_signature(const std::string& text,
                             const HeaderTable& table) {
  return Parser(text).parse_type_signature_entry(table);
}

} // namespace pi4
