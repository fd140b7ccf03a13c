#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factorum/error.hpp"
#include "factorum/instance.hpp"
#include "factorum/oracles.hpp"

namespace factorum {

struct SolveStats {
  std::uint64_t dec_calls = 0;
  std::uint64_t opt_calls = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t recursion_depth = 0;
  std::chrono::nanoseconds wall_time{0};
};

enum class Branch { Leaf, OnlyOne, Improve };

struct TraceEntry {
  std::size_t level = 0;
  std::optional<VertexId> u;  // empty at a leaf
  Branch branch = Branch::Leaf;
  std::optional<VertexId> v;  // partner vertex of an improvement step
  std::optional<Rational> incumbent;
};

struct SolveResult {
  std::optional<Factor> outcome;
  SolveStats stats;
  std::vector<TraceEntry> trace;
};

struct SolveOptions {
  bool trace = false;
  bool check_bounds = true;  // throw InternalError when a call-count bound fails
};

struct CallBounds {
  std::uint64_t dec_calls;
  std::uint64_t opt_calls;
  std::uint64_t comparisons;
  std::uint64_t recursion_depth;
};

inline CallBounds counting_bounds(std::size_t n) {
  const std::uint64_t tri = static_cast<std::uint64_t>(n) * (n + 1) / 2;
  return {n, tri + 1, tri, n};
}

inline bool within_bounds(const SolveStats& s, std::size_t n) {
  auto b = counting_bounds(n);
  return s.dec_calls <= b.dec_calls && s.opt_calls <= b.opt_calls &&
         s.comparisons <= b.comparisons && s.recursion_depth <= b.recursion_depth;
}

namespace detail {

struct SolveContext {
  OracleHandle& oracles;
  SolveStats& stats;
  std::vector<TraceEntry>* trace;
};

inline std::optional<Factor> main_rec(const Instance& inst, SolveContext& ctx, std::size_t level);

inline Factor improve(const Instance& inst, VertexId u, const Factor& f, SolveContext& ctx,
                      std::size_t level) {
  // The slice base stays the fixed Ω_u^0-optimum f; only the incumbent moves.
  Factor incumbent = f;
  for (VertexId v : t_set(inst)) {
    std::vector<VertexId> w{u};
    if (v != u) w.push_back(v);
    auto cand = ctx.oracles.optimization(slice(inst, f.edges, w));
    if (!cand) continue;
    ++ctx.stats.comparisons;
    if (cand->weight > incumbent.weight) incumbent = std::move(*cand);
    if (ctx.trace)
      ctx.trace->push_back({level, u, Branch::Improve, v, incumbent.weight});
  }
  return incumbent;
}

inline std::optional<Factor> main_rec(const Instance& inst, SolveContext& ctx, std::size_t level) {
  ctx.stats.recursion_depth = std::max<std::uint64_t>(ctx.stats.recursion_depth, level);
  const auto t = t_set(inst);
  if (t.empty()) {
    auto f = ctx.oracles.optimization(inst);
    if (ctx.trace)
      ctx.trace->push_back({level, std::nullopt, Branch::Leaf, std::nullopt,
                            f ? std::optional<Rational>(f->weight) : std::nullopt});
    return f;
  }
  const VertexId u = t.front();
  const Instance zero = restrict_parity(inst, u, 0);
  if (!ctx.oracles.decision(zero)) {
    if (ctx.trace) ctx.trace->push_back({level, u, Branch::OnlyOne, std::nullopt, std::nullopt});
    return main_rec(restrict_parity(inst, u, 1), ctx, level + 1);
  }
  auto f = main_rec(zero, ctx, level + 1);
  if (!f) throw InternalError("Decision found a factor of the D^0 branch but Main did not");
  return improve(inst, u, *f, ctx, level);
}

}  // namespace detail

/// Optimal factor of an admissible instance, or nullopt when none exists.
inline SolveResult main_solve(const Instance& inst, OracleHandle& oracles,
                              const SolveOptions& opt = {}) {
  require_admissible(inst);
  SolveResult r;
  const auto start = std::chrono::steady_clock::now();
  const auto dec0 = oracles.dec_calls();
  const auto opt0 = oracles.opt_calls();
  detail::SolveContext ctx{oracles, r.stats, opt.trace ? &r.trace : nullptr};
  r.outcome = detail::main_rec(inst, ctx, 0);
  r.stats.dec_calls = oracles.dec_calls() - dec0;
  r.stats.opt_calls = oracles.opt_calls() - opt0;
  r.stats.wall_time = std::chrono::steady_clock::now() - start;
  if (r.outcome && !is_factor(inst, r.outcome->edges))
    throw InternalError("solver returned a non-factor");
  if (opt.check_bounds && !within_bounds(r.stats, inst.vertex_count()))
    throw InternalError("oracle call counts exceed the counting bounds");
  return r;
}

inline SolveResult main_solve(const Instance& inst, const std::string& backend = "matching",
                              const SolveOptions& opt = {}) {
  auto oracles = OracleHandle::named(backend);
  return main_solve(inst, oracles, opt);
}

/// The loop run after recursion: every slice Ω_W^f with W = {u, v}, v ∈ T.
inline Factor improvement_loop(const Instance& inst, VertexId u, const Factor& f,
                               OracleHandle& oracles) {
  if (!is_factor(inst, f.edges)) throw UsageError("improvement loop needs a factor");
  SolveStats stats;
  detail::SolveContext ctx{oracles, stats, nullptr};
  return detail::improve(inst, u, f, ctx, 0);
}

/// The optimality criterion evaluated literally with brute-force slice optima:
/// ω(cand) ≥ ω(f) and ω(cand) ≥ Opt(Ω_W^f) for every W ∋ u, W ⊆ T, |W| ∈ {1,2}.
inline bool check_optimality_criterion(const Instance& inst, VertexId u, const Factor& f,
                                       const Factor& cand) {
  if (!is_factor(inst, f.edges) || !is_factor(inst, cand.edges))
    throw UsageError("criterion needs two factors");
  const auto t = t_set(inst);
  if (std::find(t.begin(), t.end(), u) == t.end()) throw UsageError("u is not in T");
  if (cand.weight < f.weight) return false;
  for (VertexId v : t) {
    std::vector<VertexId> w{u};
    if (v != u) w.push_back(v);
    auto best = brute_force_opt(slice(inst, f.edges, w));
    if (best && best->weight > cand.weight) return false;
  }
  return true;
}

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Leaf: return "leaf";
    case Branch::OnlyOne: return "branch1";
    case Branch::Improve: return "improve";
  }
  return "?";
}

}  // namespace factorum
