#include "pi4/smt.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include "pi4/error.hpp"
#include "pi4/table.hpp"

namespace pi4 {

namespace {

size_t bits_needed(uint64_t v) {
  size_t n = 1;
  while (v >>= 1) ++n;
  return n;
}

// Static bounds drawn from the query so no bit-vector operation can ever
// truncate: wv holds the longest string any expression can denote, nw the
// largest nat any term can reach.
struct Scan {
  uint64_t max_num = 1;
  size_t max_len = 1;
  size_t plus_nodes = 0;
};

size_t scan_expr(const ExprPtr& e, Scan& s, size_t w) {
  size_t len = 0;
  if (const auto* n = std::get_if<Expr::Num>(&e->node)) {
    if (n->value > s.max_num) s.max_num = n->value;
  } else if (const auto* bv = std::get_if<Expr::Bv>(&e->node)) {
    len = bv->bits.size();
  } else if (const auto* p = std::get_if<Expr::Plus>(&e->node)) {
    ++s.plus_nodes;
    scan_expr(p->lhs, s, w);
    scan_expr(p->rhs, s, w);
  } else if (const auto* c = std::get_if<Expr::Concat>(&e->node)) {
    len = scan_expr(c->lhs, s, w) + scan_expr(c->rhs, s, w);
  } else if (std::get_if<Expr::Packet>(&e->node)) {
    len = w;
  } else if (const auto* sp = std::get_if<Expr::SliceP>(&e->node)) {
    if (sp->hi > sp->lo) len = sp->hi - sp->lo;
  } else if (const auto* si = std::get_if<Expr::SliceI>(&e->node)) {
    if (si->hi > si->lo) len = si->hi - si->lo;
  }
  if (len > s.max_len) s.max_len = len;
  return len;
}

void scan_formula(const FormulaPtr& f, Scan& s, size_t w) {
  if (const auto* eq = std::get_if<Formula::Eq>(&f->node)) {
    scan_expr(eq->lhs, s, w);
    scan_expr(eq->rhs, s, w);
  } else if (const auto* gt = std::get_if<Formula::Gt>(&f->node)) {
    scan_expr(gt->lhs, s, w);
    scan_expr(gt->rhs, s, w);
  } else if (const auto* n = std::get_if<Formula::Neg>(&f->node)) {
    scan_formula(n->arg, s, w);
  } else if (const auto* a = std::get_if<Formula::And>(&f->node)) {
    scan_formula(a->lhs, s, w);
    scan_formula(a->rhs, s, w);
  }
}

void scan_type(const TypePtr& t, Scan& s, size_t w) {
  if (const auto* sg = std::get_if<HeapType::Sigma>(&t->node)) {
    scan_type(sg->left, s, w);
    scan_type(sg->right, s, w);
  } else if (const auto* c = std::get_if<HeapType::Choice>(&t->node)) {
    scan_type(c->lhs, s, w);
    scan_type(c->rhs, s, w);
  } else if (const auto* r = std::get_if<HeapType::Refine>(&t->node)) {
    scan_type(r->inner, s, w);
    scan_formula(r->phi, s, w);
  } else if (const auto* sub = std::get_if<HeapType::Subst>(&t->node)) {
    scan_type(sub->target, s, w);
    scan_type(sub->replacement, s, w);
  }
}

// Compiled expression: definedness guard plus value. Nat values are nw-wide
// bit vectors; string values are wv-wide, left-aligned, zero past the length.
struct CE {
  enum class Sort { Nat, Bv, Undef };
  Sort sort = Sort::Undef;
  std::string def = "false";
  std::string val;
  std::string len;
};

using Scope = std::vector<std::pair<std::string, std::string>>;

const std::string* scope_lookup(const Scope& sc, const std::string& var) {
  for (auto it = sc.rbegin(); it != sc.rend(); ++it) {
    if (it->first == var) return &it->second;
  }
  return nullptr;
}

class Emitter {
public:
  Emitter(const Query& q, const HeaderTable& table) : table_(&table) {
    w_ = q.bound.max_total_bits;
    Scan s;
    for (const auto& [var, t] : q.ctx.bindings) scan_type(t, s, w_);
    scan_type(q.lhs, s, w_);
    scan_type(q.rhs, s, w_);
    size_t max_sizeof = 1;
    for (const auto& inst : table.instance_order) {
      max_sizeof = std::max(max_sizeof, table.sizeof_inst(inst));
    }
    wv_ = std::max({w_, s.max_len, max_sizeof, size_t{1}});
    nw_ = std::max(bits_needed(std::max<uint64_t>(s.max_num, 2 * wv_)),
                   bits_needed(s.max_len)) +
          bits_needed(s.plus_nodes + 1) + 1;
  }

  std::string script(const Query& q) {
    std::ostringstream out;
    out << "(set-logic ALL)\n";
    Scope scope;
    for (const auto& [var, t] : q.ctx.bindings) {
      std::string p = fresh();
      declare(out, p);
      out << "(assert " << wf(p) << ")\n";
      out << "(assert " << mem(p, t, scope) << ")\n";
      scope.emplace_back(var, p);
    }
    std::string subject = fresh();
    declare(out, subject);
    out << "(assert " << wf(subject) << ")\n";
    out << "(assert " << mem(subject, q.lhs, scope) << ")\n";
    out << "(assert (not " << mem(subject, q.rhs, scope) << "))\n";
    out << "(check-sat)\n";
    return out.str();
  }

private:
  const HeaderTable* table_;
  size_t w_ = 0, wv_ = 1, nw_ = 4;
  int next_ = 0;

  std::string fresh() { return "h" + std::to_string(next_++); }

  static std::string pkt_suffix(Pkt p) {
    return p == Pkt::In ? "_in" : "_out";
  }

  std::string bv_sort(size_t width) const {
    return "(_ BitVec " + std::to_string(width) + ")";
  }

  std::string nat_const(uint64_t v) const {
    return "(_ bv" + std::to_string(v) + " " + std::to_string(nw_) + ")";
  }

  std::string zeros(size_t n) const { return "#b" + std::string(n, '0'); }
  std::string ones() const { return "#b" + std::string(wv_, '1'); }

  // Length terms are nw-wide; shifts need the value width.
  std::string len_as_wv(const std::string& t) const {
    if (nw_ == wv_) return t;
    if (nw_ < wv_) {
      return "((_ zero_extend " + std::to_string(wv_ - nw_) + ") " + t + ")";
    }
    return "((_ extract " + std::to_string(wv_ - 1) + " 0) " + t + ")";
  }

  std::vector<std::pair<std::string, std::string>> heap_vars(
      const std::string& p) const {
    std::vector<std::pair<std::string, std::string>> vars;
    for (const char* side : {"_in", "_out"}) {
      vars.emplace_back(p + side + "_v", bv_sort(wv_));
      vars.emplace_back(p + side + "_l", bv_sort(nw_));
    }
    for (const auto& inst : table_->instance_order) {
      vars.emplace_back(p + "_V_" + inst, "Bool");
      vars.emplace_back(p + "_D_" + inst, bv_sort(table_->sizeof_inst(inst)));
    }
    return vars;
  }

  void declare(std::ostringstream& out, const std::string& p) const {
    for (const auto& [name, sort] : heap_vars(p)) {
      out << "(declare-const " << name << " " << sort << ")\n";
    }
  }

  // In the bounded universe: |in| + |out| <= W, and packet bits past the
  // length are zero so padded equality coincides with string equality.
  std::string wf(const std::string& p) const {
    std::ostringstream s;
    std::string cap = nat_const(w_);
    s << "(and (bvule " << p << "_in_l " << cap << ")"
      << " (bvule " << p << "_out_l " << cap << ")"
      << " (bvule (bvadd " << p << "_in_l " << p << "_out_l) " << cap << ")";
    for (const char* side : {"_in", "_out"}) {
      std::string v = p + side + "_v";
      std::string l = p + side + "_l";
      s << " (= " << v << " (bvand " << v << " (bvnot (bvlshr " << ones()
        << " " << len_as_wv(l) << "))))";
    }
    s << ")";
    return s.str();
  }

  // h = h1 ++ h2: packets concatenate, instances must not overlap.
  std::string concat3(const std::string& a, const std::string& b,
                      const std::string& c) const {
    std::ostringstream s;
    s << "(and";
    for (const char* side : {"_in", "_out"}) {
      s << " (= " << c << side << "_l (bvadd " << a << side << "_l " << b
        << side << "_l))";
      s << " (= " << c << side << "_v (bvor " << a << side
        << "_v (bvlshr " << b << side << "_v " << len_as_wv(a + side + "_l")
        << ")))";
    }
    for (const auto& inst : table_->instance_order) {
      std::string av = a + "_V_" + inst, bv = b + "_V_" + inst,
                  cv = c + "_V_" + inst;
      s << " (not (and " << av << " " << bv << "))"
        << " (= " << cv << " (or " << av << " " << bv << "))"
        << " (=> " << av << " (= " << c << "_D_" << inst << " " << a << "_D_"
        << inst << "))"
        << " (=> " << bv << " (= " << c << "_D_" << inst << " " << b << "_D_"
        << inst << "))";
    }
    s << ")";
    return s.str();
  }

  std::string pad_to_wv(const std::string& term, size_t width) const {
    if (width == wv_) return term;
    return "(concat " + term + " " + zeros(wv_ - width) + ")";
  }

  CE compile_expr(const ExprPtr& e, const Scope& scope) const {
    CE ce;
    if (const auto* n = std::get_if<Expr::Num>(&e->node)) {
      ce = {CE::Sort::Nat, "true", nat_const(n->value), ""};
    } else if (const auto* bv = std::get_if<Expr::Bv>(&e->node)) {
      std::optional<Bits> bits = bits_of_bv(bv->bits);
      if (!bits) return ce; // placeholder literals have no value
      std::string body = bits->to_string() +
                         std::string(wv_ - bits->size(), '0');
      ce = {CE::Sort::Bv, "true", "#b" + body, nat_const(bits->size())};
    } else if (const auto* ln = std::get_if<Expr::Len>(&e->node)) {
      const std::string* p = scope_lookup(scope, ln->var);
      if (!p) return ce;
      ce = {CE::Sort::Nat, "true", *p + pkt_suffix(ln->pkt) + "_l", ""};
    } else if (const auto* pl = std::get_if<Expr::Plus>(&e->node)) {
      CE a = compile_expr(pl->lhs, scope), b = compile_expr(pl->rhs, scope);
      if (a.sort != CE::Sort::Nat || b.sort != CE::Sort::Nat) return ce;
      ce = {CE::Sort::Nat, "(and " + a.def + " " + b.def + ")",
            "(bvadd " + a.val + " " + b.val + ")", ""};
    } else if (const auto* cc = std::get_if<Expr::Concat>(&e->node)) {
      CE a = compile_expr(cc->lhs, scope), b = compile_expr(cc->rhs, scope);
      if (a.sort != CE::Sort::Bv || b.sort != CE::Sort::Bv) return ce;
      ce = {CE::Sort::Bv, "(and " + a.def + " " + b.def + ")",
            "(bvor " + a.val + " (bvlshr " + b.val + " " + len_as_wv(a.len) +
                "))",
            "(bvadd " + a.len + " " + b.len + ")"};
    } else if (const auto* pk = std::get_if<Expr::Packet>(&e->node)) {
      const std::string* p = scope_lookup(scope, pk->var);
      if (!p) return ce;
      std::string base = *p + pkt_suffix(pk->pkt);
      ce = {CE::Sort::Bv, "true", base + "_v", base + "_l"};
    } else if (const auto* sp = std::get_if<Expr::SliceP>(&e->node)) {
      const std::string* p = scope_lookup(scope, sp->var);
      if (!p || sp->lo >= sp->hi || sp->hi > wv_) return ce;
      std::string base = *p + pkt_suffix(sp->pkt);
      std::string cut = "((_ extract " + std::to_string(wv_ - 1 - sp->lo) +
                        " " + std::to_string(wv_ - sp->hi) + ") " + base +
                        "_v)";
      ce = {CE::Sort::Bv, "(bvuge " + base + "_l " + nat_const(sp->hi) + ")",
            pad_to_wv(cut, sp->hi - sp->lo), nat_const(sp->hi - sp->lo)};
    } else if (const auto* si = std::get_if<Expr::SliceI>(&e->node)) {
      const std::string* p = scope_lookup(scope, si->var);
      if (!p || !table_->has_instance(si->inst)) return ce;
      size_t sz = table_->sizeof_inst(si->inst);
      if (si->lo >= si->hi || si->hi > sz) return ce;
      std::string cut = "((_ extract " + std::to_string(sz - 1 - si->lo) +
                        " " + std::to_string(sz - si->hi) + ") " + *p + "_D_" +
                        si->inst + ")";
      ce = {CE::Sort::Bv, *p + "_V_" + si->inst,
            pad_to_wv(cut, si->hi - si->lo), nat_const(si->hi - si->lo)};
    }
    return ce;
  }

  std::string compile_formula(const FormulaPtr& f, const Scope& scope) const {
    if (std::get_if<Formula::True>(&f->node)) return "true";
    if (std::get_if<Formula::False>(&f->node)) return "false";
    if (const auto* eq = std::get_if<Formula::Eq>(&f->node)) {
      CE a = compile_expr(eq->lhs, scope), b = compile_expr(eq->rhs, scope);
      if (a.sort == CE::Sort::Undef || a.sort != b.sort) return "false";
      if (a.sort == CE::Sort::Nat) {
        return "(and " + a.def + " " + b.def + " (= " + a.val + " " + b.val +
               "))";
      }
      return "(and " + a.def + " " + b.def + " (= " + a.len + " " + b.len +
             ") (= " + a.val + " " + b.val + "))";
    }
    if (const auto* gt = std::get_if<Formula::Gt>(&f->node)) {
      CE a = compile_expr(gt->lhs, scope), b = compile_expr(gt->rhs, scope);
      if (a.sort != CE::Sort::Nat || b.sort != CE::Sort::Nat) return "false";
      return "(and " + a.def + " " + b.def + " (bvugt " + a.val + " " + b.val +
             "))";
    }
    if (const auto* n = std::get_if<Formula::Neg>(&f->node)) {
      return "(not " + compile_formula(n->arg, scope) + ")";
    }
    if (const auto* a = std::get_if<Formula::And>(&f->node)) {
      return "(and " + compile_formula(a->lhs, scope) + " " +
             compile_formula(a->rhs, scope) + ")";
    }
    const auto& v = std::get<Formula::Valid>(f->node);
    const std::string* p = scope_lookup(scope, v.var);
    if (!p || !table_->has_instance(v.inst)) return "false";
    return *p + "_V_" + v.inst;
  }

  std::string exists(const std::string& p, const std::string& body) const {
    std::ostringstream s;
    s << "(exists (";
    for (const auto& [name, sort] : heap_vars(p)) {
      s << "(" << name << " " << sort << ")";
    }
    s << ") " << body << ")";
    return s.str();
  }

  std::string mem(const std::string& p, const TypePtr& t, const Scope& scope) {
    if (std::get_if<HeapType::Nothing>(&t->node)) return "false";
    if (std::get_if<HeapType::Top>(&t->node)) return "true";
    if (const auto* c = std::get_if<HeapType::Choice>(&t->node)) {
      return "(or " + mem(p, c->lhs, scope) + " " + mem(p, c->rhs, scope) +
             ")";
    }
    if (const auto* r = std::get_if<HeapType::Refine>(&t->node)) {
      Scope inner = scope;
      inner.emplace_back(r->binder, p);
      return "(and " + mem(p, r->inner, scope) + " " +
             compile_formula(r->phi, inner) + ")";
    }
    if (const auto* sg = std::get_if<HeapType::Sigma>(&t->node)) {
      std::string p1 = fresh(), p2 = fresh();
      Scope inner = scope;
      inner.emplace_back(sg->binder, p1);
      std::string body = "(and " + wf(p1) + " " + wf(p2) + " " +
                         mem(p1, sg->left, scope) + " " +
                         mem(p2, sg->right, inner) + " " + concat3(p1, p2, p) +
                         ")";
      return exists(p1, exists(p2, body));
    }
    const auto& sub = std::get<HeapType::Subst>(t->node);
    std::string p2 = fresh();
    Scope inner = scope;
    inner.emplace_back(sub.binder, p2);
    std::string body = "(and " + wf(p2) + " " +
                       mem(p2, sub.replacement, scope) + " " +
                       mem(p, sub.target, inner) + ")";
    return exists(p2, body);
  }
};

} // namespace

std::string smt_script(const Query& q, const HeaderTable& table) {
  Emitter em(q, table);
  return em.script(q);
}

namespace {

std::string run_command(const std::string& cmd, int* exit_code) {
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) fail(ErrorKind::SolverError, "cannot spawn: " + cmd);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  *exit_code = status;
  return out;
}

void parse_verdicts(const std::string& output,
                    std::vector<SmtVerdict>& verdicts) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line == "sat") {
      verdicts.push_back(SmtVerdict::Sat);
    } else if (line == "unsat") {
      verdicts.push_back(SmtVerdict::Unsat);
    } else if (line == "unknown") {
      verdicts.push_back(SmtVerdict::Unknown);
    }
  }
}

std::string excerpt(const std::string& s) {
  return s.size() <= 500 ? s : s.substr(0, 500) + "...";
}

} // namespace

std::vector<SmtVerdict> run_solver(const std::vector<std::string>& scripts,
                                   const SolverConfig& solver) {
  if (solver.command.empty()) {
    fail(ErrorKind::SolverUnavailable, "no solver configured");
  }
  static std::atomic<uint64_t> counter{0};
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  files.reserve(scripts.size());
  for (const std::string& script : scripts) {
    fs::path p = fs::temp_directory_path() /
                 ("pi4_q" + std::to_string(counter++) + ".smt2");
    std::ofstream(p) << script;
    files.push_back(p);
  }
  auto cleanup = [&files] {
    std::error_code ec;
    for (const auto& f : files) std::filesystem::remove(f, ec);
  };

  std::vector<SmtVerdict> verdicts;
  try {
    if (solver.multi_file) {
      std::string cmd = solver.command;
      for (const auto& f : files) cmd += " \"" + f.string() + "\"";
      int rc = 0;
      std::string out = run_command(cmd, &rc);
      parse_verdicts(out, verdicts);
      if (verdicts.size() != scripts.size()) {
        fail(ErrorKind::SolverError,
             "solver produced " + std::to_string(verdicts.size()) +
                 " verdicts for " + std::to_string(scripts.size()) +
                 " queries: " + excerpt(out));
      }
    } else {
      for (const auto& f : files) {
        int rc = 0;
        std::string out =
            run_command(solver.command + " \"" + f.string() + "\"", &rc);
        std::vector<SmtVerdict> one;
        parse_verdicts(out, one);
        if (one.size() != 1) {
          fail(ErrorKind::SolverError, "no verdict from solver: " + excerpt(out));
        }
        verdicts.push_back(one[0]);
      }
    }
  } catch (...) {
    cleanup();
    throw;
  }
  cleanup();
  return verdicts;
}

SubtypeResult subtype_smt(const Query& q, const HeaderTable& table,
                          const SolverConfig& solver) {
  std::vector<SmtVerdict> v = run_solver({smt_script(q, table)}, solver);
  if (v[0] == SmtVerdict::Unknown) {
    fail(ErrorKind::SolverError, "solver returned unknown");
  }
  return {v[0] == SmtVerdict::Unsat, std::nullopt};
}

} // namespace pi4
