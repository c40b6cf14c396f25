#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pi4/driver.hpp"
#include "pi4/error.hpp"
#include "pi4/fuzz.hpp"
#include "pi4/pretty.hpp"

using namespace pi4;

namespace {

// 0b1010 / 0x3f / bare binary digits
Bits parse_packet(const std::string& s) {
  std::string body = s;
  bool hex = false;
  if (s.rfind("0b", 0) == 0) {
    body = s.substr(2);
  } else if (s.rfind("0x", 0) == 0) {
    body = s.substr(2);
    hex = true;
  }
  Bits out;
  if (!hex) {
    auto b = Bits::from_string(body);
    if (!b) fail(ErrorKind::Syntax, "bad packet literal: " + s);
    return *b;
  }
  for (char c : body) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
    else fail(ErrorKind::Syntax, "bad packet literal: " + s);
    for (int i = 3; i >= 0; --i) out.push_back((v >> i) & 1);
  }
  return out;
}

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

int infra_exit(const Pi4Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  switch (e.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::UnknownInstance:
    case ErrorKind::UnknownField:
    case ErrorKind::DuplicateDeclaration:
    case ErrorKind::SliceOutOfBounds:
    case ErrorKind::UnboundVariable:
    case ErrorKind::OverlappingInstances:
      return 2; // malformed user input
    default:
      return 3; // solver / enumeration / io infrastructure
  }
}

struct CommonArgs {
  std::string file;
  std::string sig_path;
  std::string backend = "enum";
  size_t mtu = 10;
  size_t max_enum_bits = 16;
  std::string solver_cmd;
  std::string format = "text";
  bool dump_obligations = false;
  bool no_simplify = false;
};

CheckOptions to_options(const CommonArgs& a) {
  CheckOptions o;
  o.backend = a.backend == "smt" ? Backend::Smt : Backend::Enum;
  o.mtu = a.mtu;
  o.max_enum_bits = a.max_enum_bits;
  o.solver_cmd = a.solver_cmd;
  o.optimized_extract = !a.no_simplify;
  o.dump_obligations = a.dump_obligations;
  return o;
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_backend) {
  cmd->add_option("file", a.file, "program file")->required();
  cmd->add_option("--type", a.sig_path,
                  "type signature file (default: program path with .sig)");
  cmd->add_option("--mtu", a.mtu, "max input packet bits")
      ->check(CLI::PositiveNumber);
  if (with_backend) {
    cmd->add_option("--backend", a.backend, "decision backend")
        ->check(CLI::IsMember({"enum", "smt"}));
    cmd->add_option("--max-enum-bits", a.max_enum_bits,
                    "enumeration feasibility cap");
    cmd->add_option("--solver-cmd", a.solver_cmd,
                    "external SMT solver command");
    cmd->add_option("--format", a.format, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_flag("--dump-obligations", a.dump_obligations,
                  "collect obligations without discharging them");
    cmd->add_flag("--no-simplify", a.no_simplify,
                  "use the literal chomp-based extract rule");
  }
}

int do_check(const CommonArgs& a) {
  if (!std::filesystem::exists(a.file)) {
    return usage_error("no such file: " + a.file);
  }
  CheckOutcome o = check_files(a.file, a.sig_path, to_options(a));
  std::cout << (a.format == "json" ? report_json(o) : report_text(o))
            << "\n";
  return o.accepted ? 0 : 1;
}

int do_run(const CommonArgs& a, const std::string& input) {
  if (!std::filesystem::exists(a.file)) {
    return usage_error("no such file: " + a.file);
  }
  Program prog = parse_program(read_file(a.file));
  Bits in = parse_packet(input);
  if (in.size() > a.mtu) {
    return usage_error("input packet exceeds --mtu");
  }
  Config cfg{Heap{in, {}, {}}, prog.command};
  RunResult r = run(cfg, prog.table, node_count(*prog.command) + 1);
  if (r.status == RunResult::Status::Done) {
    std::cout << "done after " << r.steps << " steps\n"
              << pretty(r.final.heap) << "\n";
    return 0;
  }
  std::cout << "stuck: " << r.detail << "\n"
            << pretty(r.final.heap) << "\n";
  return 1;
}

int do_smt_dump(CommonArgs a, const std::string& out_dir) {
  if (!std::filesystem::exists(a.file)) {
    return usage_error("no such file: " + a.file);
  }
  a.dump_obligations = true;
  CheckOptions opts = to_options(a);
  opts.dump_dir = out_dir;
  CheckOutcome o = check_files(a.file, a.sig_path, opts);
  std::cout << "wrote " << o.result.obligations.size()
            << " obligation scripts to " << out_dir << "\n";
  return 0;
}

int do_fuzz(uint64_t seed, size_t count) {
  Fuzzer fz(seed);
  size_t heaps = 0;
  for (size_t i = 0; i < count; ++i) {
    FuzzedProgram p = fz.random_program();
    size_t budget = p.mtu + max_emit(p.cmd, p.table);
    Decider dec(p.table, Backend::Enum, Bound{budget, 16});
    Checker ck(p.table, dec);
    TypingResult r = ck.infer(Ctx{}, p.cmd, p.binder, p.input);
    if (!r.ok) {
      std::cout << "fuzz violation (seed " << seed << ", program " << i
                << "): generator emitted an ill-typed program\n"
                << pretty(p.cmd) << "\n"
                << r.message << "\n";
      return 1;
    }
    const Universe& u = dec.denoter().universe();
    const Mask& in_mask = dec.denoter().mask(p.input, {});
    for (size_t h = 0; h < u.heaps.size(); ++h) {
      if (!in_mask[h]) continue;
      RunResult rr = run(Config{u.heaps[h], p.cmd}, p.table,
                         node_count(*p.cmd));
      Env env{{p.binder, u.heaps[h]}};
      if (rr.status != RunResult::Status::Done ||
          !dec.denoter().member(rr.final.heap, r.output, env)) {
        std::cout << "fuzz violation (seed " << seed << ", program " << i
                  << "):\n"
                  << pretty(p.cmd) << "\nfrom heap " << pretty(u.heaps[h])
                  << "\n";
        return 1;
      }
      ++heaps;
    }
  }
  std::cout << count << " programs, " << heaps
            << " heap runs, 0 violations (seed " << seed << ")\n";
  return 0;
}

int do_emit_bound(const CommonArgs& a) {
  if (!std::filesystem::exists(a.file)) {
    return usage_error("no such file: " + a.file);
  }
  Program prog = parse_program(read_file(a.file));
  size_t e = max_emit(prog.command, prog.table);
  std::cout << "max_emit = " << e << "\n"
            << "universe bound = mtu + max_emit = " << (a.mtu + e)
            << " bits\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"heap type checker and interpreter for P4 parser programs"};
  app.require_subcommand(1);

  CommonArgs check_args, run_args, dump_args, bound_args;
  std::string run_input, dump_out = "smt-dump";
  uint64_t fuzz_seed = 0;
  size_t fuzz_count = 25;

  CLI::App* check = app.add_subcommand("check", "type-check a program");
  add_common(check, check_args, true);

  CLI::App* runc = app.add_subcommand("run", "execute a program on a packet");
  add_common(runc, run_args, false);
  runc->add_option("--input", run_input, "input packet (0b…, 0x…, or bits)")
      ->required();

  CLI::App* dump = app.add_subcommand(
      "smt-dump", "write obligation scripts without solving");
  add_common(dump, dump_args, true);
  dump->add_option("--out", dump_out, "output directory");

  CLI::App* fuzz = app.add_subcommand(
      "fuzz", "generate and validate random well-typed programs");
  fuzz->add_option("--seed", fuzz_seed, "generator seed");
  fuzz->add_option("--count", fuzz_count, "number of programs");

  CLI::App* bound = app.add_subcommand("emit-bound",
                                       "report a program's emit bound");
  add_common(bound, bound_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return do_check(check_args);
    if (runc->parsed()) return do_run(run_args, run_input);
    if (dump->parsed()) return do_smt_dump(dump_args, dump_out);
    if (fuzz->parsed()) return do_fuzz(fuzz_seed, fuzz_count);
    if (bound->parsed()) return do_emit_bound(bound_args);
  } catch (const Pi4Error& e) {
    return infra_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
