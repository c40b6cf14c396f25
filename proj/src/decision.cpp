#include "pi4/decision.hpp"

#include <cstdlib>
#include <filesystem>

#include "pi4/error.hpp"
#include "pi4/smt.hpp"
#include "pi4/sugar.hpp"

namespace pi4 {

namespace {

bool for_each_env_rec(const Ctx& ctx, size_t k, Env& env, Denoter& den,
                      const std::function<bool(const Env&)>& fn) {
  if (k == ctx.bindings.size()) return fn(env);
  const auto& [var, type] = ctx.bindings[k];
  // Copy: recursive calls may grow the denoter's cache.
  const Mask mask = den.mask(type, env);
  const Universe& u = den.universe();
  for (size_t i = 0; i < u.heaps.size(); ++i) {
    if (!mask[i]) continue;
    env.emplace_back(var, u.heaps[i]);
    bool keep = for_each_env_rec(ctx, k + 1, env, den, fn);
    env.pop_back();
    if (!keep) return false;
  }
  return true;
}

} // namespace

bool for_each_env(const Ctx& ctx, Denoter& den,
                  const std::function<bool(const Env&)>& fn) {
  Env env;
  return for_each_env_rec(ctx, 0, env, den, fn);
}

SubtypeResult subtype_enum(const Query& q, Denoter& den) {
  SubtypeResult result{true, std::nullopt};
  const Universe& u = den.universe();
  // The subset verdict depends only on the two masks, and env products
  // mostly revisit the same cached pair (types rarely mention every ctx
  // binder), so memoize by mask identity. Cache references are stable:
  // the map never evicts and rehashing moves buckets, not nodes.
  struct PairHash {
    size_t operator()(const std::pair<const void*, const void*>& p) const {
      return std::hash<const void*>{}(p.first) * 31 +
             std::hash<const void*>{}(p.second);
    }
  };
  std::unordered_map<std::pair<const void*, const void*>,
                     std::optional<uint32_t>, PairHash>
      verdicts;
  for_each_env(q.ctx, den, [&](const Env& env) {
    const Mask* lhs = &den.mask(q.lhs, env);
    const Mask* rhs = &den.mask(q.rhs, env);
    auto [it, fresh] = verdicts.try_emplace({lhs, rhs}, std::nullopt);
    if (fresh) {
      for (size_t i = 0; i < u.heaps.size(); ++i) {
        if ((*lhs)[i] && !(*rhs)[i]) {
          it->second = static_cast<uint32_t>(i);
          break;
        }
      }
    }
    if (it->second) {
      result.ok = false;
      result.cex = Counterexample{env, u.heaps[*it->second]};
      return false;
    }
    return true;
  });
  return result;
}

SubtypeResult subtype_enum(const Query& q, const HeaderTable& table) {
  Universe u = build_universe(table, q.bound);
  Denoter den(u);
  return subtype_enum(q, den);
}

namespace {

bool command_runs(const std::string& probe) {
  int rc = std::system((probe + " >/dev/null 2>&1").c_str());
  return rc == 0;
}

std::optional<std::string> node_wrapper_path() {
  std::vector<std::filesystem::path> roots;
  if (const char* root = std::getenv("PI4_ROOT")) roots.emplace_back(root);
  roots.emplace_back(std::filesystem::current_path());
  for (const auto& root : roots) {
    std::filesystem::path wrapper = root / "tools" / "solve_smt2.mjs";
    std::filesystem::path modules = root / "node_modules" / "z3-solver";
    std::error_code ec;
    if (std::filesystem::exists(wrapper, ec) &&
        std::filesystem::exists(modules, ec)) {
      return wrapper.string();
    }
  }
  return std::nullopt;
}

} // namespace

std::optional<SolverConfig> find_solver(const std::string& requested) {
  if (!requested.empty()) return SolverConfig{requested, false};
  if (const char* env = std::getenv("PI4_SOLVER"); env && *env) {
    return SolverConfig{env, false};
  }
  if (command_runs("z3 -version")) return SolverConfig{"z3", false};
  if (auto wrapper = node_wrapper_path(); wrapper && command_runs("node --version")) {
    return SolverConfig{"node " + *wrapper, true};
  }
  return std::nullopt;
}

Decider::Decider(const HeaderTable& table, Backend backend, Bound bound,
                 SolverConfig solver)
    : table_(&table), backend_(backend), bound_(bound),
      solver_(std::move(solver)) {}

Denoter& Decider::denoter() {
  if (!denoter_) {
    universe_ = std::make_unique<Universe>(build_universe(*table_, bound_));
    denoter_ = std::make_unique<Denoter>(*universe_);
  }
  return *denoter_;
}

SubtypeResult Decider::subtype(const Ctx& ctx, const TypePtr& lhs,
                               const TypePtr& rhs) {
  Query q{ctx, lhs, rhs, bound_};
  if (dump_only_) {
    scripts_.push_back(smt_script(q, *table_));
    return {true, std::nullopt};
  }
  if (backend_ == Backend::Enum) return subtype_enum(q, denoter());
  if (solver_.command.empty()) {
    auto found = find_solver("");
    if (!found) {
      fail(ErrorKind::SolverUnavailable,
           "no SMT solver found (set PI4_SOLVER, install z3, or run npm "
           "install for the bundled wrapper)");
    }
    solver_ = *found;
  }
  return subtype_smt(q, *table_, solver_);
}

bool Decider::includes(const Ctx& ctx, const TypePtr& t,
                       const std::string& inst) {
  TypePtr rhs = ty::refine("v", ty::top(), fm::valid("v", inst));
  return subtype(ctx, t, rhs).ok;
}

bool Decider::excludes(const Ctx& ctx, const TypePtr& t,
                       const std::string& inst) {
  TypePtr rhs = ty::refine("v", ty::top(), fm::neg(fm::valid("v", inst)));
  return subtype(ctx, t, rhs).ok;
}

bool Decider::min_pktin(const Ctx& ctx, const TypePtr& t, size_t n) {
  if (n == 0) return true;
  TypePtr rhs = ty::refine(
      "v", ty::top(), fm::gt(ex::len("v", Pkt::In), ex::num(n - 1)));
  return subtype(ctx, t, rhs).ok;
}

} // namespace pi4
