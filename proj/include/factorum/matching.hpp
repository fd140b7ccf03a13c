#pragma once

// Maximum-weight perfect matching on general graphs.
//
// Array-based primal-dual blossom algorithm (Edmonds; Galil's O(n^3)
// bookkeeping), structured after Van Rantwijk's well-known mwmatching
// implementation and run in maximum-cardinality mode. Weights are scaled to
// integers and doubled so that every dual update stays integral.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "factorum/error.hpp"
#include "factorum/graph.hpp"
#include "factorum/rational.hpp"

namespace factorum {

struct MatchingProblem {
  Graph graph;
  std::vector<Rational> weights;
};

struct Matching {
  EdgeSet edges;
  Rational weight;
};

struct MatchingOptions {
  bool certify = true;              // check the dual certificate before returning
  bool lexicographic_ties = false;  // among optima prefer the lexicographically smallest edge set
};

namespace detail {

template <typename W>
class Blossom {
 public:
  struct Edge {
    std::size_t i;
    std::size_t j;
    W w;
  };

  Blossom(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {}

  /// mate[v] = partner vertex or npos. Maximum cardinality, then maximum weight.
  std::vector<std::size_t> solve();

  /// Complementary slackness for a perfect matching; vertex duals are free.
  bool certificate_holds() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  using Idx = std::ptrdiff_t;  // -1 marks "none" in the working arrays

  W slack(std::size_t k) const {
    const Edge& e = edges_[k];
    return dual_[e.i] + dual_[e.j] - 2 * e.w;
  }

  template <typename Fn>
  void for_leaves(Idx b, Fn&& fn) const {
    if (b < static_cast<Idx>(n_)) {
      fn(b);
      return;
    }
    for (Idx t : childs_[b]) for_leaves(t, fn);
  }

  static Idx at(const std::vector<Idx>& v, Idx j) {
    const Idx size = static_cast<Idx>(v.size());
    return v[static_cast<std::size_t>(((j % size) + size) % size)];
  }

  void assign_label(Idx w, int t, Idx p);
  Idx scan_blossom(Idx v, Idx w);
  void add_blossom(Idx base, std::size_t k);
  void expand_blossom(Idx b, bool endstage);
  void augment_blossom(Idx b, Idx v);
  void augment_matching(std::size_t k);

  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<Idx> endpoint_;
  std::vector<std::vector<Idx>> neighbend_;
  std::vector<Idx> mate_;
  std::vector<int> label_;
  std::vector<Idx> labelend_;
  std::vector<Idx> inblossom_;
  std::vector<Idx> parent_;
  std::vector<std::vector<Idx>> childs_;
  std::vector<Idx> base_;
  std::vector<std::vector<Idx>> endps_;
  std::vector<Idx> bestedge_;
  std::vector<std::optional<std::vector<Idx>>> blossombestedges_;
  std::vector<Idx> unused_;
  std::vector<W> dual_;
  std::vector<bool> allowedge_;
  std::vector<Idx> queue_;
};

template <typename W>
void Blossom<W>::assign_label(Idx w, int t, Idx p) {
  Idx b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    for_leaves(b, [&](Idx v) { queue_.push_back(v); });
  } else if (t == 2) {
    Idx base = base_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

template <typename W>
typename Blossom<W>::Idx Blossom<W>::scan_blossom(Idx v, Idx w) {
  std::vector<Idx> path;
  Idx base = -1;
  while (v != -1 || w != -1) {
    Idx b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (Idx b : path) label_[b] = 1;
  return base;
}

template <typename W>
void Blossom<W>::add_blossom(Idx base, std::size_t k) {
  Idx v = static_cast<Idx>(edges_[k].i);
  Idx w = static_cast<Idx>(edges_[k].j);
  Idx bb = inblossom_[base];
  Idx bv = inblossom_[v];
  Idx bw = inblossom_[w];
  Idx b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  std::vector<Idx> path;
  std::vector<Idx> endps;
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(static_cast<Idx>(2 * k));
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  childs_[b] = path;
  endps_[b] = endps;
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for_leaves(b, [&](Idx leaf) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  });

  std::vector<Idx> bestedgeto(2 * n_, -1);
  for (Idx sub : path) {
    std::vector<std::vector<Idx>> nblists;
    if (!blossombestedges_[sub]) {
      for_leaves(sub, [&](Idx leaf) {
        std::vector<Idx> ks;
        for (Idx p : neighbend_[leaf]) ks.push_back(p / 2);
        nblists.push_back(std::move(ks));
      });
    } else {
      nblists.push_back(*blossombestedges_[sub]);
    }
    for (const auto& nblist : nblists) {
      for (Idx kk : nblist) {
        Idx i = static_cast<Idx>(edges_[kk].i);
        Idx j = static_cast<Idx>(edges_[kk].j);
        if (inblossom_[j] == b) std::swap(i, j);
        Idx bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    }
    blossombestedges_[sub].reset();
    bestedge_[sub] = -1;
  }
  std::vector<Idx> best;
  for (Idx kk : bestedgeto)
    if (kk != -1) best.push_back(kk);
  bestedge_[b] = -1;
  for (Idx kk : best)
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  blossombestedges_[b] = std::move(best);
}

template <typename W>
void Blossom<W>::expand_blossom(Idx b, bool endstage) {
  for (Idx s : childs_[b]) {
    parent_[s] = -1;
    if (s < static_cast<Idx>(n_)) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for_leaves(s, [&](Idx leaf) { inblossom_[leaf] = s; });
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& ch = childs_[b];
    const auto& ep = endps_[b];
    Idx entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    Idx j = std::find(ch.begin(), ch.end(), entrychild) - ch.begin();
    Idx jstep;
    Idx endptrick;
    if (j & 1) {
      j -= static_cast<Idx>(ch.size());
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    Idx p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[at(ep, j - endptrick) ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[at(ep, j - endptrick) / 2] = true;
      j += jstep;
      p = at(ep, j - endptrick) ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    Idx bv = at(ch, j);
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (at(ch, j) != entrychild) {
      bv = at(ch, j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      Idx labelled = -1;
      for_leaves(bv, [&](Idx leaf) {
        if (labelled == -1 && label_[leaf] != 0) labelled = leaf;
      });
      if (labelled != -1) {
        label_[labelled] = 0;
        label_[endpoint_[mate_[base_[bv]]]] = 0;
        assign_label(labelled, 2, labelend_[labelled]);
      }
      j += jstep;
    }
  }
  label_[b] = -1;
  labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  blossombestedges_[b].reset();
  bestedge_[b] = -1;
  unused_.push_back(b);
}

template <typename W>
void Blossom<W>::augment_blossom(Idx b, Idx v) {
  Idx t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= static_cast<Idx>(n_)) augment_blossom(t, v);
  auto& ch = childs_[b];
  auto& ep = endps_[b];
  const Idx i = std::find(ch.begin(), ch.end(), t) - ch.begin();
  Idx j = i;
  Idx jstep;
  Idx endptrick;
  if (i & 1) {
    j -= static_cast<Idx>(ch.size());
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = at(ch, j);
    Idx p = at(ep, j - endptrick) ^ endptrick;
    if (t >= static_cast<Idx>(n_)) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = at(ch, j);
    if (t >= static_cast<Idx>(n_)) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  base_[b] = base_[ch[0]];
}

template <typename W>
void Blossom<W>::augment_matching(std::size_t k) {
  const Idx starts[2][2] = {{static_cast<Idx>(edges_[k].i), static_cast<Idx>(2 * k + 1)},
                            {static_cast<Idx>(edges_[k].j), static_cast<Idx>(2 * k)}};
  for (const auto& start : starts) {
    Idx s = start[0];
    Idx p = start[1];
    while (true) {
      Idx bs = inblossom_[s];
      if (bs >= static_cast<Idx>(n_)) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      Idx t = endpoint_[labelend_[bs]];
      Idx bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      Idx j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= static_cast<Idx>(n_)) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

template <typename W>
std::vector<std::size_t> Blossom<W>::solve() {
  const std::size_t n = n_;
  const std::size_t m = edges_.size();
  W maxweight = 0;
  for (const auto& e : edges_) maxweight = std::max(maxweight, e.w);

  endpoint_.resize(2 * m);
  neighbend_.assign(n, {});
  for (std::size_t k = 0; k < m; ++k) {
    endpoint_[2 * k] = static_cast<Idx>(edges_[k].i);
    endpoint_[2 * k + 1] = static_cast<Idx>(edges_[k].j);
    neighbend_[edges_[k].i].push_back(static_cast<Idx>(2 * k + 1));
    neighbend_[edges_[k].j].push_back(static_cast<Idx>(2 * k));
  }
  mate_.assign(n, -1);
  label_.assign(2 * n, 0);
  labelend_.assign(2 * n, -1);
  inblossom_.resize(n);
  for (std::size_t v = 0; v < n; ++v) inblossom_[v] = static_cast<Idx>(v);
  parent_.assign(2 * n, -1);
  childs_.assign(2 * n, {});
  base_.assign(2 * n, -1);
  for (std::size_t v = 0; v < n; ++v) base_[v] = static_cast<Idx>(v);
  endps_.assign(2 * n, {});
  bestedge_.assign(2 * n, -1);
  blossombestedges_.assign(2 * n, std::nullopt);
  unused_.clear();
  for (std::size_t b = n; b < 2 * n; ++b) unused_.push_back(static_cast<Idx>(b));
  dual_.assign(2 * n, W(0));
  for (std::size_t v = 0; v < n; ++v) dual_[v] = maxweight;
  allowedge_.assign(m, false);

  for (std::size_t stage = 0; stage < n; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (std::size_t b = n; b < 2 * n; ++b) blossombestedges_[b].reset();
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(static_cast<Idx>(v), 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        Idx v = queue_.back();
        queue_.pop_back();
        for (Idx p : neighbend_[v]) {
          std::size_t k = static_cast<std::size_t>(p / 2);
          Idx w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          W kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              Idx base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            Idx b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = static_cast<Idx>(k);
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = static_cast<Idx>(k);
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      W delta = 0;
      Idx deltaedge = -1;
      Idx deltablossom = -1;
      for (std::size_t v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          W d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (std::size_t b = 0; b < 2 * n; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          W ks = slack(bestedge_[b]);
          if (ks % 2 != 0) throw InternalError("odd slack between two outer vertices");
          W d = ks / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (std::size_t b = n; b < 2 * n; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = static_cast<Idx>(b);
        }
      }
      if (deltatype == -1) {
        // No further progress possible: the matching has maximum cardinality.
        deltatype = 1;
        W lo = dual_[0];
        for (std::size_t v = 1; v < n; ++v) lo = std::min(lo, dual_[v]);
        delta = std::max(W(0), lo);
      }

      for (std::size_t v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 1)
          dual_[v] -= delta;
        else if (label_[inblossom_[v]] == 2)
          dual_[v] += delta;
      }
      for (std::size_t b = n; b < 2 * n; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1)
            dual_[b] += delta;
          else if (label_[b] == 2)
            dual_[b] -= delta;
        }
      }

      if (deltatype == 1) break;
      if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        Idx i = static_cast<Idx>(edges_[deltaedge].i);
        Idx j = static_cast<Idx>(edges_[deltaedge].j);
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(static_cast<Idx>(edges_[deltaedge].i));
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (std::size_t b = n; b < 2 * n; ++b) {
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0)
        expand_blossom(static_cast<Idx>(b), true);
    }
  }

  std::vector<std::size_t> mate(n, npos);
  for (std::size_t v = 0; v < n; ++v)
    if (mate_[v] >= 0) mate[v] = static_cast<std::size_t>(endpoint_[mate_[v]]);
  return mate;
}

template <typename W>
bool Blossom<W>::certificate_holds() const {
  const std::size_t n = n_;
  for (std::size_t v = 0; v < n; ++v)
    if (mate_[v] < 0) return false;
  for (std::size_t b = n; b < 2 * n; ++b)
    if (base_[b] >= 0 && dual_[b] < 0) return false;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    W s = dual_[e.i] + dual_[e.j] - 2 * e.w;
    // blossoms containing both endpoints contribute 2 z_B
    std::vector<Idx> bi{static_cast<Idx>(e.i)};
    std::vector<Idx> bj{static_cast<Idx>(e.j)};
    while (parent_[bi.back()] != -1) bi.push_back(parent_[bi.back()]);
    while (parent_[bj.back()] != -1) bj.push_back(parent_[bj.back()]);
    std::reverse(bi.begin(), bi.end());
    std::reverse(bj.begin(), bj.end());
    for (std::size_t t = 0; t < std::min(bi.size(), bj.size()) && bi[t] == bj[t]; ++t)
      s += 2 * dual_[bi[t]];
    if (s < 0) return false;
    const Idx ki = static_cast<Idx>(k);
    const bool mi = mate_[e.i] / 2 == ki;
    const bool mj = mate_[e.j] / 2 == ki;
    if (mi != mj) return false;
    if (mi && s != 0) return false;
  }
  for (std::size_t b = n; b < 2 * n; ++b) {
    if (base_[b] < 0 || dual_[b] <= 0) continue;
    const auto& ep = endps_[b];
    if (ep.size() % 2 != 1) return false;
    for (std::size_t t = 1; t < ep.size(); t += 2) {
      Idx p = ep[t];
      if (mate_[endpoint_[p]] != (p ^ 1) || mate_[endpoint_[p ^ 1]] != p) return false;
    }
  }
  return true;
}

template <typename W>
std::optional<std::vector<EdgeId>> perfect_matching_core(const Graph& g, const std::vector<W>& w,
                                                         bool certify) {
  const std::size_t n = g.vertex_count();
  if (n % 2 == 1) return std::nullopt;
  for (VertexId v = 0; v < n; ++v)
    if (g.degree(v) == 0) return std::nullopt;
  if (n == 0) return std::vector<EdgeId>{};

  // Shift to nonnegative and double so that every dual step is integral.
  W lo = w.empty() ? W(0) : *std::min_element(w.begin(), w.end());
  std::vector<typename Blossom<W>::Edge> edges;
  edges.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    edges.push_back({g.edge(e).a, g.edge(e).b, 2 * (w[e] - lo)});
  Blossom<W> solver(n, std::move(edges));
  auto mate = solver.solve();
  for (VertexId v = 0; v < n; ++v)
    if (mate[v] == Blossom<W>::npos) return std::nullopt;
  if (certify && !solver.certificate_holds())
    throw InternalError("matching dual certificate check failed");
  std::vector<EdgeId> out;
  for (VertexId v = 0; v < n; ++v)
    if (v < mate[v]) out.push_back(*g.find_edge(v, mate[v]));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Maximum-weight perfect matching with exact arithmetic, or nullopt when
/// the graph has no perfect matching.
inline std::optional<Matching> max_weight_perfect_matching(const Graph& g,
                                                           std::span<const Rational> weights,
                                                           const MatchingOptions& opt = {}) {
  if (weights.size() != g.edge_count()) throw UsageError("need one weight per edge");
  auto scaled = scale_to_integers(weights);
  std::optional<std::vector<EdgeId>> ids;
  if (opt.lexicographic_ties) {
    // w' = w * 2^m + 2^(m-1-e): the bonus never outweighs a unit of w and
    // favours the set holding the smallest differing edge id.
    const std::size_t m = g.edge_count();
    std::vector<BigInt> w(m);
    for (std::size_t e = 0; e < m; ++e)
      w[e] = (scaled.numerators[e] << m) + (BigInt(1) << (m - 1 - e));
    ids = detail::perfect_matching_core(g, w, opt.certify);
  } else if (scaled.fits_int64(BigInt(8) * (g.vertex_count() + 2))) {
    ids = detail::perfect_matching_core(g, scaled.as_int64(), opt.certify);
  } else {
    ids = detail::perfect_matching_core(g, scaled.numerators, opt.certify);
  }
  if (!ids) return std::nullopt;
  EdgeSet s(g, std::span<const EdgeId>(*ids));
  Rational total = 0;
  for (EdgeId e : *ids) total += weights[e];
  return Matching{std::move(s), std::move(total)};
}

inline std::optional<Matching> max_weight_perfect_matching(const MatchingProblem& p,
                                                           const MatchingOptions& opt = {}) {
  return max_weight_perfect_matching(p.graph, p.weights, opt);
}

/// Disjointness, perfection and weight arithmetic.
inline bool verify_matching(const Graph& g, std::span<const Rational> weights, const Matching& m) {
  if (!m.edges.belongs_to(g)) return false;
  auto deg = degrees_in(g, m.edges);
  for (auto d : deg)
    if (d != 1) return false;
  Rational total = 0;
  for (EdgeId e : m.edges.ids()) total += weights[e];
  return total == m.weight;
}

inline bool verify_matching(const MatchingProblem& p, const Matching& m) {
  return verify_matching(p.graph, p.weights, m);
}

/// Exhaustive reference: best perfect matching by recursive pairing of the
/// lowest uncovered vertex. Exponential; for tests and small graphs only.
inline std::optional<Matching> brute_force_perfect_matching(const Graph& g,
                                                            std::span<const Rational> weights) {
  const std::size_t n = g.vertex_count();
  if (n > 20) throw CapacityError("brute-force matching is capped at 20 vertices");
  std::vector<bool> used(n, false);
  std::vector<EdgeId> cur;
  std::optional<std::vector<EdgeId>> best;
  Rational best_w = 0;
  Rational cur_w = 0;
  auto rec = [&](auto&& self) -> void {
    VertexId v = 0;
    while (v < n && used[v]) ++v;
    if (v == n) {
      std::vector<EdgeId> sorted = cur;
      std::sort(sorted.begin(), sorted.end());
      if (!best || cur_w > best_w || (cur_w == best_w && sorted < *best)) {
        best = sorted;
        best_w = cur_w;
      }
      return;
    }
    used[v] = true;
    for (const auto& inc : g.incident(v)) {
      if (used[inc.neighbor]) continue;
      used[inc.neighbor] = true;
      cur.push_back(inc.edge);
      cur_w += weights[inc.edge];
      self(self);
      cur_w -= weights[inc.edge];
      cur.pop_back();
      used[inc.neighbor] = false;
    }
    used[v] = false;
  };
  rec(rec);
  if (!best) return std::nullopt;
  return Matching{EdgeSet(g, std::span<const EdgeId>(*best)), best_w};
}

}  // namespace factorum
