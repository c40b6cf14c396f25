#include "pi4/driver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pi4/error.hpp"
#include "pi4/pretty.hpp"

namespace pi4 {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Pi4Error(ErrorKind::Internal, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

CheckOutcome check_program(const Program& prog, const TypeSig& sig,
                           const CheckOptions& opts) {
  CheckOutcome o;
  o.mtu = opts.mtu;
  o.emit = max_emit(prog.command, prog.table);
  Bound bound{opts.mtu + o.emit, opts.max_enum_bits};

  SolverConfig solver;
  if (!opts.solver_cmd.empty()) solver = SolverConfig{opts.solver_cmd, false};
  Decider decider(prog.table, opts.backend, bound, solver);
  if (opts.dump_obligations) decider.set_dump_only(true);

  Checker checker(prog.table, decider, CheckerOptions{opts.optimized_extract});
  o.result = checker.check_ascription(Ctx{}, prog.command, sig.binder,
                                      sig.input, sig.binder, sig.input,
                                      sig.output);
  o.accepted = o.result.ok;

  if (opts.dump_obligations && !opts.dump_dir.empty()) {
    std::filesystem::create_directories(opts.dump_dir);
    const auto& scripts = decider.dumped_scripts();
    for (size_t i = 0; i < scripts.size(); ++i) {
      std::ofstream out(std::filesystem::path(opts.dump_dir) /
                        ("obligation_" + std::to_string(i) + ".smt2"));
      out << scripts[i];
    }
  }
  return o;
}

CheckOutcome check_files(const std::string& program_path,
                         const std::string& sig_path,
                         const CheckOptions& opts) {
  Program prog = parse_program(read_file(program_path));
  std::string sp = sig_path;
  if (sp.empty()) {
    sp = std::filesystem::path(program_path).replace_extension(".sig")
             .string();
  }
  TypeSig sig = parse_type_signature(read_file(sp), prog.table);
  return check_program(prog, sig, opts);
}

namespace {

std::string cex_text(const Counterexample& cex) {
  std::string s;
  for (const auto& [var, heap] : cex.env) {
    s += var + " = " + pretty(heap) + ", ";
  }
  s += "heap = " + pretty(cex.heap);
  return s;
}

} // namespace

std::string report_text(const CheckOutcome& o) {
  std::ostringstream out;
  out << "verdict: " << (o.accepted ? "accepted" : "rejected") << "\n";
  out << "bounds: mtu=" << o.mtu << " max_emit=" << o.emit
      << " universe=" << (o.mtu + o.emit) << " bits\n";
  if (!o.result.ok) {
    out << "error: "
        << (o.result.error ? type_error_name(*o.result.error) : "unknown")
        << ": " << o.result.message << "\n";
  } else if (o.result.output) {
    out << "output: " << pretty(o.result.output) << "\n";
  }
  if (!o.result.obligations.empty()) {
    out << "obligations:\n";
    for (const Obligation& ob : o.result.obligations) {
      out << "  [" << (ob.verdict ? "ok" : "failed") << "] " << ob.description
          << "\n";
      if (!ob.verdict && ob.cex) {
        out << "      counterexample: " << cex_text(*ob.cex) << "\n";
      }
    }
  }
  if (!o.result.trace.empty()) {
    out << "trace:";
    for (const std::string& rule : o.result.trace) out << " " << rule;
    out << "\n";
  }
  return out.str();
}

std::string report_json(const CheckOutcome& o) {
  nlohmann::json j;
  j["verdict"] = o.accepted ? "accepted" : "rejected";
  if (o.result.ok) {
    j["error"] = nullptr;
    j["output_type"] = o.result.output ? pretty(o.result.output) : "";
  } else {
    j["error"] = {
        {"kind",
         o.result.error ? type_error_name(*o.result.error) : "unknown"},
        {"message", o.result.message},
    };
  }
  j["rule_trace"] = o.result.trace;
  nlohmann::json obs = nlohmann::json::array();
  for (const Obligation& ob : o.result.obligations) {
    nlohmann::json e;
    e["description"] = ob.description;
    e["verdict"] = ob.verdict;
    e["lhs"] = ob.lhs ? pretty(ob.lhs) : "";
    e["rhs"] = ob.rhs ? pretty(ob.rhs) : "";
    if (ob.cex) {
      nlohmann::json env = nlohmann::json::array();
      for (const auto& [var, heap] : ob.cex->env) {
        env.push_back({{"var", var}, {"heap", pretty(heap)}});
      }
      e["counterexample"] = {{"env", env}, {"heap", pretty(ob.cex->heap)}};
    } else {
      e["counterexample"] = nullptr;
    }
    obs.push_back(e);
  }
  j["obligations"] = obs;
  j["bounds"] = {{"mtu", o.mtu},
                 {"max_emit", o.emit},
                 {"max_total_bits", o.mtu + o.emit}};
  return j.dump(2);
}

} // namespace pi4
