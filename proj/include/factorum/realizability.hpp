#pragma once

// Delta-matroid checks and exhaustive realizability of matching gadgets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factorum/degree_constraint.hpp"
#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/oracles.hpp"

namespace factorum {

inline constexpr std::size_t kSetFamilyGroundCap = 20;
inline constexpr std::size_t kDeltaMatroidGroundCap = 16;
inline constexpr std::size_t kGadgetVertexCap = 24;

/// Subsets of {0..ground-1} as bit masks; members kept sorted and distinct.
class SetFamily {
 public:
  SetFamily() = default;
  SetFamily(std::size_t ground, std::vector<std::uint32_t> members) : ground_(ground) {
    if (ground > kSetFamilyGroundCap)
      throw CapacityError("set family ground size capped at " + std::to_string(kSetFamilyGroundCap));
    for (auto m : members)
      if (ground < 32 && (m >> ground) != 0) throw UsageError("member outside the ground set");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    members_ = std::move(members);
  }

  std::size_t ground() const { return ground_; }
  const std::vector<std::uint32_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::uint32_t x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
  }

  static SetFamily all_subsets(std::size_t ground) {
    std::vector<std::uint32_t> m;
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << ground); ++x) m.push_back(x);
    return SetFamily(ground, std::move(m));
  }

  /// Subsets of {0..arity-1} whose size lies in d.
  static SetFamily symmetric(const DegreeConstraint& d) {
    const std::size_t n = d.arity();
    if (n > kSetFamilyGroundCap) throw CapacityError("arity too large for a set family");
    std::vector<std::uint32_t> m;
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << n); ++x)
      if (d.contains(static_cast<unsigned>(std::popcount(x)))) m.push_back(x);
    return SetFamily(n, std::move(m));
  }

 private:
  std::size_t ground_ = 0;
  std::vector<std::uint32_t> members_;
};

/// Exchange axiom checked exhaustively: for X, Y in F and u in X Δ Y there is
/// v in X Δ Y (v = u allowed) with X Δ {u, v} in F.
inline bool is_delta_matroid(const SetFamily& fam) {
  const std::size_t n = fam.ground();
  if (n > kDeltaMatroidGroundCap)
    throw CapacityError("delta-matroid check capped at ground size " +
                        std::to_string(kDeltaMatroidGroundCap));
  std::vector<bool> in(std::size_t{1} << n, false);
  for (auto x : fam.members()) in[x] = true;
  for (auto x : fam.members()) {
    for (std::size_t u = 0; u < n; ++u) {
      const std::uint32_t bu = std::uint32_t{1} << u;
      // rescue[v]: X Δ {u, v} is a member
      std::uint32_t rescue = 0;
      for (std::size_t v = 0; v < n; ++v) {
        const std::uint32_t bv = std::uint32_t{1} << v;
        if (in[x ^ bu ^ (v == u ? 0 : bv)]) rescue |= bv;
      }
      for (auto y : fam.members()) {
        const std::uint32_t diff = x ^ y;
        if ((diff & bu) && !(diff & rescue)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- gadgets

namespace detail {

struct GadgetSearch {
  const GadgetBlueprint& gb;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;  // (neighbor, edge)
  std::vector<bool> allowed;
  std::vector<bool> must;
  std::vector<std::optional<std::size_t>> mate_edge;

  explicit GadgetSearch(const GadgetBlueprint& g) : gb(g), adj(g.vertex_count()) {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      adj[g.edges[e].a].push_back({g.edges[e].b, e});
      adj[g.edges[e].b].push_back({g.edges[e].a, e});
    }
  }

  bool dfs() {
    std::size_t x = gb.vertex_count();
    for (std::size_t v = 0; v < gb.vertex_count(); ++v)
      if (must[v] && !mate_edge[v]) {
        x = v;
        break;
      }
    if (x == gb.vertex_count()) return true;
    for (auto [y, e] : adj[x]) {
      if (!allowed[y] || mate_edge[y]) continue;
      mate_edge[x] = e;
      mate_edge[y] = e;
      if (dfs()) return true;
      mate_edge[x].reset();
      mate_edge[y].reset();
    }
    return false;
  }

  // A matching covering exactly the stubs in w, every required vertex, and
  // any optional vertices.
  std::optional<std::vector<std::size_t>> run(std::uint32_t w) {
    const std::size_t n = gb.vertex_count();
    allowed.assign(n, true);
    must.assign(n, false);
    mate_edge.assign(n, std::nullopt);
    for (std::size_t v = 0; v < n; ++v) {
      if (gb.is_stub(v)) {
        const bool in_w = (w >> v) & 1U;
        allowed[v] = in_w;
        must[v] = in_w;
      } else {
        must[v] = gb.is_required(v);
      }
    }
    if (!dfs()) return std::nullopt;
    std::vector<std::size_t> edges;
    for (std::size_t v = 0; v < n; ++v)
      if (mate_edge[v] && gb.edges[*mate_edge[v]].a == v) edges.push_back(*mate_edge[v]);
    std::sort(edges.begin(), edges.end());
    return edges;
  }
};

inline void check_gadget(const GadgetBlueprint& gb) {
  if (gb.vertex_count() > kGadgetVertexCap)
    throw CapacityError("gadget search capped at " + std::to_string(kGadgetVertexCap) + " vertices");
  if (gb.stub_count > kSetFamilyGroundCap) throw CapacityError("too many stubs");
  std::vector<std::size_t> deg(gb.vertex_count(), 0);
  for (const auto& e : gb.edges) {
    if (e.a >= gb.vertex_count() || e.b >= gb.vertex_count() || e.a == e.b)
      throw UsageError("gadget edge out of range");
    if (gb.is_stub(e.a) && gb.is_stub(e.b)) throw UsageError("gadget stubs must not be adjacent");
    ++deg[e.a];
    ++deg[e.b];
  }
  for (std::size_t s = 0; s < gb.stub_count; ++s)
    if (deg[s] != 1) throw UsageError("gadget stubs must have degree 1");
}

}  // namespace detail

/// Edge indices of a matching that witnesses stub subset w, if any.
inline std::optional<std::vector<std::size_t>> gadget_matching(const GadgetBlueprint& gb,
                                                               std::uint32_t w) {
  detail::check_gadget(gb);
  return detail::GadgetSearch(gb).run(w);
}

/// {W ⊆ U : some matching covers exactly W among the stubs and all required vertices}.
inline SetFamily feasible_family(const GadgetBlueprint& gb) {
  detail::check_gadget(gb);
  detail::GadgetSearch search(gb);
  std::vector<std::uint32_t> members;
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << gb.stub_count); ++w)
    if (search.run(w)) members.push_back(w);
  return SetFamily(gb.stub_count, std::move(members));
}

/// k is realized iff every stub subset of size k is feasible.
inline DegreeConstraint realized_set(const GadgetBlueprint& gb) {
  const SetFamily fam = feasible_family(gb);
  const std::size_t n = gb.stub_count;
  std::vector<bool> all_ok(n + 1, true);
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << n); ++w)
    if (!fam.contains(w)) all_ok[static_cast<std::size_t>(std::popcount(w))] = false;
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k <= n; ++k)
    if (all_ok[k]) mask |= DegreeConstraint::bit(static_cast<unsigned>(k));
  return DegreeConstraint(static_cast<unsigned>(n), mask);
}

/// The gap-free gadget for {p, .., p+r} of arity n (same frame as the interval builder).
inline GadgetBlueprint matchgate(unsigned p, unsigned r, unsigned n) {
  return build_interval_gadget(p, p + r, n);
}

struct PartitionWitness {
  std::vector<std::size_t> singles;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  bool unions_feasible = false;  // every union P keeps v1 Δ P and v2 Δ P feasible
};

/// Splits v1 Δ v2 along the paths of M1 Δ M2: stubs joined by a path form a
/// pair, a stub whose path ends at an optional vertex is a single.
inline PartitionWitness partition_witness(const GadgetBlueprint& gb, std::uint32_t v1,
                                          std::uint32_t v2) {
  detail::check_gadget(gb);
  detail::GadgetSearch search(gb);
  auto m1 = search.run(v1);
  auto m2 = search.run(v2);
  if (!m1 || !m2) throw UsageError("partition witness needs two feasible stub sets");

  std::vector<int> side(gb.edges.size(), 0);
  for (auto e : *m1) side[e] ^= 1;
  for (auto e : *m2) side[e] ^= 2;
  std::vector<std::vector<std::size_t>> inc(gb.vertex_count());
  for (std::size_t e = 0; e < gb.edges.size(); ++e)
    if (side[e] == 1 || side[e] == 2) {
      inc[gb.edges[e].a].push_back(e);
      inc[gb.edges[e].b].push_back(e);
    }

  PartitionWitness out;
  const std::uint32_t diff = v1 ^ v2;
  std::vector<bool> done(gb.stub_count, false);
  for (std::size_t s = 0; s < gb.stub_count; ++s) {
    if (!((diff >> s) & 1U) || done[s]) continue;
    if (inc[s].size() != 1) throw InternalError("stub in v1 Δ v2 is not a path end");
    std::size_t x = s;
    std::size_t via = inc[s][0];
    while (true) {
      const std::size_t y = gb.edges[via].other(x);
      x = y;
      if (inc[x].size() != 2) break;
      via = inc[x][0] == via ? inc[x][1] : inc[x][0];
    }
    done[s] = true;
    if (gb.is_stub(x)) {
      done[x] = true;
      out.pairs.push_back({s, x});
    } else {
      out.singles.push_back(s);
    }
  }

  const std::size_t parts = out.singles.size() + out.pairs.size();
  if (parts > 20) throw CapacityError("too many parts to check every union");
  out.unions_feasible = true;
  for (std::uint32_t pick = 0; pick < (std::uint32_t{1} << parts) && out.unions_feasible; ++pick) {
    std::uint32_t p = 0;
    for (std::size_t i = 0; i < parts; ++i) {
      if (!((pick >> i) & 1U)) continue;
      if (i < out.singles.size()) {
        p |= std::uint32_t{1} << out.singles[i];
      } else {
        const auto& pr = out.pairs[i - out.singles.size()];
        p |= (std::uint32_t{1} << pr.first) | (std::uint32_t{1} << pr.second);
      }
    }
    out.unions_feasible = search.run(v1 ^ p).has_value() && search.run(v2 ^ p).has_value();
  }
  return out;
}

enum class Realizability { Consistent, NotRealizable };

inline const char* to_string(Realizability r) {
  return r == Realizability::Consistent ? "realizable-consistent" : "not-realizable";
}

/// A gap-≤1 constraint with both a gap of length 0 and one of length 1 next to
/// each other ({p,p+1,p+3} or {p,p+2,p+3} with the middle missing) cannot be
/// realized: splitting the 3-element difference into singles and pairs always
/// leaves a single, which would put the missing size back into d.
inline Realizability obstruction_check(const DegreeConstraint& d) {
  if (classify(d).max_gap > 1) throw UsageError("obstruction check needs gaps of length at most 1");
  for (unsigned p = 0; p + 3 <= d.arity(); ++p) {
    if (!d.contains(p) || !d.contains(p + 3)) continue;
    if (d.contains(p + 1) != d.contains(p + 2)) return Realizability::NotRealizable;
  }
  return Realizability::Consistent;
}

}  // namespace factorum
