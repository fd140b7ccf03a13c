#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "factorum/degree_constraint.hpp"
#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/instance.hpp"

namespace factorum {

enum ConstraintFamily : unsigned {
  kInterval = 1,
  kParity = 2,
  kType1 = 4,
  kType2 = 8,
  kAllFamilies = 15,
};

/// "interval,parity,type1,type2" (any subset, any order) -> family mask.
inline unsigned parse_families(const std::string& text) {
  unsigned mask = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item == "interval") mask |= kInterval;
    else if (item == "parity") mask |= kParity;
    else if (item == "type1") mask |= kType1;
    else if (item == "type2") mask |= kType2;
    else if (item == "all") mask |= kAllFamilies;
    else throw UsageError("unknown constraint family '" + item + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (mask == 0) throw UsageError("no constraint family selected");
  return mask;
}

struct GenParams {
  std::size_t n = 6;
  std::size_t m = 8;
  unsigned families = kAllFamilies;
  std::int64_t weight_lo = -5;
  std::int64_t weight_hi = 5;
};

namespace detail {

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  // bound > 0; plain modulo keeps output identical across standard libraries
  return rng() % bound;
}

inline Graph random_simple_graph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<Endpoints> all;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b) all.push_back({a, b});
  if (m > all.size())
    throw UsageError("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) +
                     " vertices");
  for (std::size_t i = 0; i < m; ++i) std::swap(all[i], all[i + draw(rng, all.size() - i)]);
  all.resize(m);
  return Graph(n, all);
}

// Draws from the selected families that fit degree d; half the draws start at 0
// so that a fair share of instances stays feasible.
inline DegreeConstraint random_constraint(std::mt19937_64& rng, unsigned d, unsigned families) {
  std::vector<unsigned> options;
  for (unsigned fam : {kInterval, kParity, kType1, kType2})
    if ((families & fam) && ((fam != kType1 && fam != kType2) || d >= 3)) options.push_back(fam);
  if (options.empty()) options.push_back((families & kParity) && !(families & kInterval) ? kParity : kInterval);
  const unsigned fam = options[draw(rng, options.size())];
  const bool from_zero = draw(rng, 2) == 0;
  switch (fam) {
    case kInterval: {
      unsigned g = from_zero ? 0 : static_cast<unsigned>(draw(rng, d + 1));
      unsigned f = g + static_cast<unsigned>(draw(rng, d - g + 1));
      return DegreeConstraint::range(d, g, f);
    }
    case kParity: {
      unsigned g = from_zero ? 0 : static_cast<unsigned>(draw(rng, d + 1));
      unsigned f = g + 2 * static_cast<unsigned>(draw(rng, (d - g) / 2 + 1));
      return DegreeConstraint::range(d, g, f, 2);
    }
    default: {
      unsigned p = from_zero ? 0 : static_cast<unsigned>(draw(rng, d - 2));
      return fam == kType1 ? DegreeConstraint::of(d, {p, p + 1, p + 3})
                           : DegreeConstraint::of(d, {p, p + 2, p + 3});
    }
  }
}

}  // namespace detail

/// Reproducible random admissible instance.
inline Instance random_instance(std::mt19937_64& rng, const GenParams& p) {
  if (p.weight_lo > p.weight_hi) throw UsageError("empty weight range");
  Graph g = detail::random_simple_graph(rng, p.n, p.m);
  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    cs.push_back(detail::random_constraint(rng, static_cast<unsigned>(g.degree(v)), p.families));
  std::vector<Rational> ws;
  const auto span = static_cast<std::uint64_t>(p.weight_hi - p.weight_lo) + 1;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    ws.emplace_back(p.weight_lo + static_cast<std::int64_t>(detail::draw(rng, span)));
  return Instance(std::move(g), std::move(cs), std::move(ws));
}

inline Instance random_instance(std::uint64_t seed, const GenParams& p) {
  std::mt19937_64 rng(seed);
  return random_instance(rng, p);
}

/// Key-instance labels: 1 -> {0,1}, 2 -> {0,2}, 3 -> {0,1,3} or {0,2,3}.
inline DegreeConstraint key_label(unsigned degree, bool type1) {
  switch (degree) {
    case 1: return DegreeConstraint::of(1, {0, 1});
    case 2: return DegreeConstraint::of(2, {0, 2});
    case 3: return type1 ? DegreeConstraint::of(3, {0, 1, 3}) : DegreeConstraint::of(3, {0, 2, 3});
    default: throw UsageError("key instances have degrees 1..3");
  }
}

/// Random subcubic graph without isolated vertices, labelled as a key instance.
inline Instance random_key_instance(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                    std::int64_t weight_lo = -5, std::int64_t weight_hi = 5) {
  std::vector<Endpoints> pairs;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b) pairs.push_back({a, b});
  for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[detail::draw(rng, i)]);
  std::vector<unsigned> deg(n, 0);
  std::vector<Endpoints> chosen;
  for (const auto& e : pairs) {
    if (chosen.size() == m) break;
    if (deg[e.a] < 3 && deg[e.b] < 3) {
      chosen.push_back(e);
      ++deg[e.a];
      ++deg[e.b];
    }
  }
  std::vector<VertexId> rename(n, n);
  std::size_t next = 0;
  for (VertexId v = 0; v < n; ++v)
    if (deg[v] > 0) rename[v] = next++;
  std::sort(chosen.begin(), chosen.end(), [](const Endpoints& x, const Endpoints& y) {
    return std::pair(std::min(x.a, x.b), std::max(x.a, x.b)) <
           std::pair(std::min(y.a, y.b), std::max(y.a, y.b));
  });
  for (auto& e : chosen) e = {rename[e.a], rename[e.b]};
  Graph g(next, chosen);
  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    cs.push_back(key_label(static_cast<unsigned>(g.degree(v)), detail::draw(rng, 2) == 0));
  std::vector<Rational> ws;
  const auto span = static_cast<std::uint64_t>(weight_hi - weight_lo) + 1;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    ws.emplace_back(weight_lo + static_cast<std::int64_t>(detail::draw(rng, span)));
  return Instance(std::move(g), std::move(cs), std::move(ws));
}

/// Scaling family: a Hamiltonian cycle on n vertices; every fourth vertex t
/// carries {0,2,3} and a chord to t+2, all other vertices {0,2}. |T| = n/4.
inline Instance scaling_instance(std::size_t n, std::uint64_t seed) {
  if (n < 8 || n % 4 != 0) throw UsageError("scaling family needs n >= 8 divisible by 4");
  std::mt19937_64 rng(seed);
  std::vector<Endpoints> es;
  for (VertexId v = 0; v < n; ++v) es.push_back({v, (v + 1) % n});
  for (VertexId t = 0; t < n; t += 4) es.push_back({t, t + 2});
  Graph g(n, es);
  std::vector<DegreeConstraint> cs;
  for (VertexId v = 0; v < n; ++v) {
    const auto d = static_cast<unsigned>(g.degree(v));
    cs.push_back(v % 4 == 0 ? DegreeConstraint::of(d, {0, 2, 3}) : DegreeConstraint::of(d, {0, 2}));
  }
  std::vector<Rational> ws;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    ws.emplace_back(static_cast<std::int64_t>(detail::draw(rng, 11)) - 5);
  return Instance(std::move(g), std::move(cs), std::move(ws));
}

/// The four named branch vertices of the two-triangle example.
struct TwoTriangles {
  Instance instance;
  VertexId v = 0;
  VertexId s = 1;
  VertexId u = 2;
  VertexId t = 3;
};

/// Triangle C1 at v, paths v-s, s-u (twice) and u-t, triangle C2 at t. Each of
/// the six pieces weighs 1 and every subdivision vertex carries {0,2}.
/// π(u) = π(v) = π(t) = {0,1,3}, π(s) = {0,2,3}; 14 edges, optimum 6.
inline TwoTriangles two_triangles_instance() {
  TwoTriangles fig;
  const std::vector<Endpoints> pieces{{fig.v, fig.v}, {fig.v, fig.s}, {fig.s, fig.u},
                                      {fig.s, fig.u}, {fig.u, fig.t}, {fig.t, fig.t}};
  const std::vector<std::size_t> lengths{3, 2, 2, 2, 2, 3};
  Subdivision sub = subdivide(4, pieces, lengths);
  std::vector<DegreeConstraint> cs;
  for (VertexId x = 0; x < sub.graph.vertex_count(); ++x) {
    if (x == fig.s) cs.push_back(DegreeConstraint::of(3, {0, 2, 3}));
    else if (x < 4) cs.push_back(DegreeConstraint::of(3, {0, 1, 3}));
    else cs.push_back(DegreeConstraint::of(2, {0, 2}));
  }
  std::vector<Rational> ws;
  for (EdgeId e = 0; e < sub.graph.edge_count(); ++e)
    ws.emplace_back(1, static_cast<long>(lengths[sub.origin[e]]));
  fig.instance = Instance(std::move(sub.graph), std::move(cs), std::move(ws));
  return fig;
}

}  // namespace factorum
