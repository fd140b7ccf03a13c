#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "factorum/degree_constraint.hpp"
#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/rational.hpp"

namespace factorum {

/// Ω = (G, π, ω). The graph is shared between an instance and every
/// sub-instance derived from it, so edge sets stay interchangeable.
class Instance {
 public:
  Instance() : graph_(std::make_shared<const Graph>()) {}

  Instance(std::shared_ptr<const Graph> graph, std::vector<DegreeConstraint> constraints,
           std::vector<Rational> weights)
      : graph_(std::move(graph)), constraints_(std::move(constraints)), weights_(std::move(weights)) {
    if (!graph_) throw UsageError("null graph");
    if (constraints_.size() != graph_->vertex_count())
      throw UsageError("need one constraint per vertex");
    if (weights_.size() != graph_->edge_count()) throw UsageError("need one weight per edge");
  }

  Instance(Graph graph, std::vector<DegreeConstraint> constraints, std::vector<Rational> weights)
      : Instance(std::make_shared<const Graph>(std::move(graph)), std::move(constraints),
                 std::move(weights)) {}

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  std::size_t vertex_count() const { return graph_->vertex_count(); }
  std::size_t edge_count() const { return graph_->edge_count(); }
  const DegreeConstraint& constraint(VertexId v) const { return constraints_.at(v); }
  const std::vector<DegreeConstraint>& constraints() const { return constraints_; }
  const Rational& weight(EdgeId e) const { return weights_.at(e); }
  const std::vector<Rational>& weights() const { return weights_; }

  /// Copy with one constraint replaced.
  Instance with_constraint(VertexId v, DegreeConstraint d) const {
    Instance out = *this;
    out.constraints_.at(v) = d;
    return out;
  }
  Instance with_constraints(std::vector<DegreeConstraint> cs) const {
    return Instance(graph_, std::move(cs), weights_);
  }
  Instance with_weights(std::vector<Rational> ws) const {
    return Instance(graph_, constraints_, std::move(ws));
  }

  Rational weight_of(const EdgeSet& s) const {
    Rational w = 0;
    for (EdgeId e : s.ids()) w += weights_[e];
    return w;
  }

 private:
  std::shared_ptr<const Graph> graph_;
  std::vector<DegreeConstraint> constraints_;
  std::vector<Rational> weights_;
};

struct Factor {
  EdgeSet edges;
  Rational weight;
};

inline Factor make_factor(const Instance& inst, EdgeSet s) {
  Rational w = inst.weight_of(s);
  return Factor{std::move(s), std::move(w)};
}

struct ValidationReport {
  std::vector<std::string> violations;   // structural problems
  std::vector<VertexId> inadmissible;    // constraints outside the four solver families

  /// Arity and feasibility invariants hold; the brute-force oracle accepts it.
  bool valid() const { return violations.empty(); }
  /// Valid and every constraint is an interval, parity interval, type-1 or type-2.
  bool admissible() const { return valid() && inadmissible.empty(); }
};

inline ValidationReport validate(const Instance& inst) {
  ValidationReport r;
  const Graph& g = inst.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& d = inst.constraint(v);
    if (d.arity() != g.degree(v))
      r.violations.push_back("vertex " + std::to_string(v) + ": arity " +
                             std::to_string(d.arity()) + " but degree " +
                             std::to_string(g.degree(v)));
    if (d.max() > g.degree(v))
      r.violations.push_back("vertex " + std::to_string(v) + ": " + to_string(d) +
                             " exceeds degree " + std::to_string(g.degree(v)));
    if (!classify(d).admissible()) r.inadmissible.push_back(v);
  }
  return r;
}

inline void require_valid(const Instance& inst) {
  auto r = validate(inst);
  if (!r.valid()) throw UsageError("invalid instance: " + r.violations.front());
}

inline void require_admissible(const Instance& inst) {
  auto r = validate(inst);
  if (!r.valid()) throw UsageError("invalid instance: " + r.violations.front());
  if (!r.admissible())
    throw UsageError("vertex " + std::to_string(r.inadmissible.front()) + " has constraint " +
                     to_string(inst.constraint(r.inadmissible.front())) +
                     " outside the solver's families");
}

inline bool is_factor(const Instance& inst, const EdgeSet& s) {
  if (!s.belongs_to(inst.graph())) throw UsageError("edge set is not over this instance's graph");
  auto deg = degrees_in(inst.graph(), s);
  for (VertexId v = 0; v < deg.size(); ++v)
    if (!inst.constraint(v).contains(static_cast<unsigned>(deg[v]))) return false;
  return true;
}

/// First vertex whose degree in `s` is infeasible, if any.
inline std::optional<VertexId> first_violation(const Instance& inst, const EdgeSet& s) {
  auto deg = degrees_in(inst.graph(), s);
  for (VertexId v = 0; v < deg.size(); ++v)
    if (!inst.constraint(v).contains(static_cast<unsigned>(deg[v]))) return v;
  return std::nullopt;
}

/// T_Ω, ascending.
inline std::vector<VertexId> t_set(const Instance& inst) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < inst.vertex_count(); ++v)
    if (classify(inst.constraint(v)).in_t()) out.push_back(v);
  return out;
}

/// Ω_u^i: π(u) replaced by D_u^i.
inline Instance restrict_parity(const Instance& inst, VertexId u, int i) {
  if (u >= inst.vertex_count() || !classify(inst.constraint(u)).in_t())
    throw UsageError("vertex " + std::to_string(u) + " is not in T");
  if (i != 0 && i != 1) throw UsageError("branch must be 0 or 1");
  auto halves = split(inst.constraint(u));
  return inst.with_constraint(u, i == 0 ? halves.d0 : halves.d1);
}

/// Ω_W^F: π \ D^F on W, D^F on T \ W, π elsewhere.
inline Instance slice(const Instance& inst, const EdgeSet& f, const std::vector<VertexId>& w) {
  if (!is_factor(inst, f)) throw UsageError("slice base is not a factor");
  const auto t = t_set(inst);
  for (VertexId x : w)
    if (!std::binary_search(t.begin(), t.end(), x))
      throw UsageError("slice set contains vertex " + std::to_string(x) + " outside T");
  auto cs = inst.constraints();
  for (VertexId v : t) {
    auto df = max_parity_subset(cs[v], static_cast<unsigned>(degree_in(inst.graph(), f, v)));
    bool in_w = std::find(w.begin(), w.end(), v) != w.end();
    cs[v] = in_w ? complement_within(cs[v], df) : df;
  }
  return inst.with_constraints(std::move(cs));
}

inline std::vector<VertexId> t_odd(const Instance& inst, const EdgeSet& f, const EdgeSet& g) {
  std::vector<VertexId> out;
  for (VertexId v : t_set(inst))
    if ((degree_in(inst.graph(), f, v) + degree_in(inst.graph(), g, v)) % 2 == 1)
      out.push_back(v);
  return out;
}

namespace detail {

// Exhaustive search over edge subsets in id order with per-vertex degree
// pruning. `visit` sees every complete factor; returning false aborts.
class FactorSearch {
 public:
  explicit FactorSearch(const Instance& inst)
      : inst_(inst), g_(inst.graph()), deg_(g_.vertex_count(), 0), left_(g_.vertex_count(), 0) {
    for (VertexId v = 0; v < g_.vertex_count(); ++v) left_[v] = g_.degree(v);
    chosen_.reserve(g_.edge_count());
  }

  template <typename Visit, typename Prune>
  void run(Visit&& visit, Prune&& prune) {
    for (VertexId v = 0; v < g_.vertex_count(); ++v)
      if (!reachable(v)) return;
    stop_ = false;
    dfs(0, visit, prune);
  }

  const std::vector<EdgeId>& chosen() const { return chosen_; }

 private:
  // Some feasible degree lies in [deg, deg + left].
  bool reachable(VertexId v) const {
    const auto& d = inst_.constraint(v);
    const std::size_t lo = deg_[v];
    const std::size_t hi = deg_[v] + left_[v];
    if (lo > 63) return false;
    std::uint64_t window = hi >= 63 ? ~std::uint64_t{0} : (DegreeConstraint::bit(hi + 1) - 1);
    window &= ~(DegreeConstraint::bit(lo) - 1);
    return (d.mask() & window) != 0;
  }

  template <typename Visit, typename Prune>
  void dfs(EdgeId e, Visit& visit, Prune& prune) {
    if (stop_) return;
    if (e == g_.edge_count()) {
      if (!visit(chosen_)) stop_ = true;
      return;
    }
    if (prune(e)) return;
    const auto [a, b] = g_.edge(e);
    --left_[a];
    --left_[b];
    // exclude first so that smaller sets are met before their supersets
    if (reachable(a) && reachable(b)) dfs(e + 1, visit, prune);
    ++deg_[a];
    ++deg_[b];
    chosen_.push_back(e);
    if (reachable(a) && reachable(b)) dfs(e + 1, visit, prune);
    chosen_.pop_back();
    --deg_[a];
    --deg_[b];
    ++left_[a];
    ++left_[b];
  }

  const Instance& inst_;
  const Graph& g_;
  std::vector<std::size_t> deg_;
  std::vector<std::size_t> left_;
  std::vector<EdgeId> chosen_;
  bool stop_ = false;
};

template <typename W>
std::optional<std::vector<EdgeId>> brute_force_best(const Instance& inst, const std::vector<W>& w) {
  const std::size_t m = inst.edge_count();
  std::vector<W> positive_suffix(m + 1, W(0));
  for (std::size_t e = m; e-- > 0;) positive_suffix[e] = positive_suffix[e + 1] + (w[e] > 0 ? w[e] : W(0));

  std::optional<std::vector<EdgeId>> best;
  W best_w = W(0);
  FactorSearch search(inst);
  auto visit = [&](const std::vector<EdgeId>& chosen) {
    W total = W(0);
    for (EdgeId e : chosen) total += w[e];
    if (!best || total > best_w || (total == best_w && std::lexicographical_compare(
                                                           chosen.begin(), chosen.end(),
                                                           best->begin(), best->end()))) {
      best = chosen;
      best_w = total;
    }
    return true;
  };
  auto prune = [&](EdgeId e) {
    if (!best) return false;
    W partial = W(0);
    for (EdgeId x : search.chosen()) partial += w[x];
    return partial + positive_suffix[e] < best_w;
  };
  search.run(visit, prune);
  return best;
}

}  // namespace detail

inline constexpr std::size_t kBruteForceEdgeCap = 24;

/// Exact optimum by exhaustive search (m ≤ 24). Ties go to the lexicographically
/// smallest edge set. nullopt means no factor exists.
inline std::optional<Factor> brute_force_opt(const Instance& inst) {
  if (inst.edge_count() > kBruteForceEdgeCap)
    throw CapacityError("brute force is capped at " + std::to_string(kBruteForceEdgeCap) + " edges");
  require_valid(inst);
  auto scaled = scale_to_integers(inst.weights());
  std::optional<std::vector<EdgeId>> best;
  if (scaled.fits_int64(2)) {
    best = detail::brute_force_best(inst, scaled.as_int64());
  } else {
    best = detail::brute_force_best(inst, scaled.numerators);
  }
  if (!best) return std::nullopt;
  return make_factor(inst, EdgeSet(inst.graph(), std::span<const EdgeId>(*best)));
}

/// Calls `fn(const EdgeSet&)` on every factor; stops early if it returns false.
inline void for_each_factor(const Instance& inst, const std::function<bool(const EdgeSet&)>& fn) {
  if (inst.edge_count() > kBruteForceEdgeCap)
    throw CapacityError("factor enumeration is capped at " + std::to_string(kBruteForceEdgeCap) +
                        " edges");
  detail::FactorSearch search(inst);
  search.run(
      [&](const std::vector<EdgeId>& chosen) {
        return fn(EdgeSet(inst.graph(), std::span<const EdgeId>(chosen)));
      },
      [](EdgeId) { return false; });
}

inline std::vector<EdgeSet> all_factors(const Instance& inst) {
  std::vector<EdgeSet> out;
  for_each_factor(inst, [&](const EdgeSet& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace factorum
