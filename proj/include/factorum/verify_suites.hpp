#pragma once

// Seeded property sweeps shared by the `verify` command and the acceptance
// binary. Each check returns a result instead of asserting, so callers can
// print a report and pick their own exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "factorum/generators.hpp"
#include "factorum/instance.hpp"
#include "factorum/matching.hpp"
#include "factorum/oracles.hpp"
#include "factorum/realizability.hpp"
#include "factorum/solver.hpp"
#include "factorum/structural.hpp"

namespace factorum {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;
  std::vector<std::uint64_t> failing_seeds;
  double seconds = 0;

  void fail(std::uint64_t seed, const std::string& why) {
    if (passed) detail = why;
    passed = false;
    if (failing_seeds.size() < 16) failing_seeds.push_back(seed);
  }
};

struct SweepConfig {
  std::uint64_t seed = 1;
  std::size_t cases = 0;  // 0 = the check's own default
};

namespace verify_detail {

template <typename Body>
CheckResult timed(const std::string& name, Body body) {
  CheckResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::size_t cases_or(const SweepConfig& c, std::size_t fallback) {
  return c.cases == 0 ? fallback : c.cases;
}

// Per-case seed derived from the sweep seed, so a failing case reruns alone.
inline std::uint64_t case_seed(const SweepConfig& c, std::uint64_t salt, std::size_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(i)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// n in [3, max_n], m up to min(max_m, n(n-1)/2).
inline GenParams small_params(std::mt19937_64& rng, std::size_t max_n, std::size_t max_m,
                              unsigned families) {
  GenParams p;
  p.n = 3 + detail::draw(rng, max_n - 2);
  const std::size_t cap = std::min(max_m, p.n * (p.n - 1) / 2);
  p.m = 1 + detail::draw(rng, cap);
  p.families = families;
  return p;
}

inline std::string show(const std::optional<Factor>& f) {
  return f ? to_string(f->weight) : std::string("No");
}

}  // namespace verify_detail

// ---------------------------------------------------------------- solver

inline CheckResult check_two_triangles() {
  return verify_detail::timed("two-triangle-regression", [](CheckResult& r) {
    auto fig = two_triangles_instance();
    auto res = main_solve(fig.instance);
    r.cases = 1;
    if (!res.outcome) return r.fail(0, "solver returned No");
    if (res.outcome->weight != 6) return r.fail(0, "weight " + to_string(res.outcome->weight));
    if (res.outcome->edges != EdgeSet::full(fig.instance.graph()))
      return r.fail(0, "optimum is not the full edge set");
    if (res.stats.wall_time > std::chrono::seconds(1)) return r.fail(0, "slower than 1 s");
    r.detail = "weight 6, " + std::to_string(res.outcome->edges.size()) + " edges";
  });
}

/// main_solve against brute_force_opt on random admissible instances.
inline CheckResult check_oracle_equivalence(const SweepConfig& cfg = {},
                                            const std::string& backend = "matching") {
  return verify_detail::timed("oracle-equivalence", [&](CheckResult& r) {
    std::size_t no = 0;
    for (std::size_t i = 0; i < verify_detail::cases_or(cfg, 500); ++i) {
      const auto seed = verify_detail::case_seed(cfg, 1, i);
      std::mt19937_64 rng(seed);
      auto inst = random_instance(rng, verify_detail::small_params(rng, 10, 16, kAllFamilies));
      auto got = main_solve(inst, backend).outcome;
      auto want = brute_force_opt(inst);
      ++r.cases;
      if (!want) ++no;
      if (got.has_value() != want.has_value() || (got && got->weight != want->weight))
        r.fail(seed, "solver " + verify_detail::show(got) + " vs brute force " +
                         verify_detail::show(want));
    }
    if (r.passed) r.detail = std::to_string(r.cases) + " instances, " + std::to_string(no) + " without a factor";
  });
}

/// Every solve stays within the counting bounds (checked without throwing).
inline CheckResult check_counting_bounds(const SweepConfig& cfg = {}) {
  return verify_detail::timed("counting-bounds", [&](CheckResult& r) {
    SolveOptions opt;
    opt.check_bounds = false;
    auto check = [&](const Instance& inst, std::uint64_t seed) {
      auto res = main_solve(inst, "matching", opt);
      ++r.cases;
      if (!within_bounds(res.stats, inst.vertex_count())) {
        std::ostringstream s;
        s << "n=" << inst.vertex_count() << " dec=" << res.stats.dec_calls
          << " opt=" << res.stats.opt_calls << " cmp=" << res.stats.comparisons
          << " depth=" << res.stats.recursion_depth;
        r.fail(seed, s.str());
      }
    };
    check(two_triangles_instance().instance, 0);
    for (std::size_t i = 0; i < verify_detail::cases_or(cfg, 300); ++i) {
      const auto seed = verify_detail::case_seed(cfg, 2, i);
      std::mt19937_64 rng(seed);
      check(random_instance(rng, verify_detail::small_params(rng, 10, 16, kAllFamilies)), seed);
    }
    for (std::size_t n : {8, 12, 16, 20}) check(scaling_instance(n, cfg.seed), cfg.seed);
    if (r.passed) r.detail = std::to_string(r.cases) + " solves within bounds";
  });
}

/// For each factor cand of a small instance: the criterion holds iff cand is
/// a global optimum.
inline CheckResult check_theorem4(const SweepConfig& cfg = {}) {
  return verify_detail::timed("optimality-criterion", [&](CheckResult& r) {
    const std::size_t want = verify_detail::cases_or(cfg, 100);
    for (std::size_t i = 0; r.cases < want && i < 50 * want; ++i) {
      const auto seed = verify_detail::case_seed(cfg, 3, i);
      std::mt19937_64 rng(seed);
      auto inst = random_instance(rng, verify_detail::small_params(rng, 7, 10, kAllFamilies));
      const auto t = t_set(inst);
      if (t.empty()) continue;
      const VertexId u = t.front();
      auto f = brute_force_opt(restrict_parity(inst, u, 0));
      if (!f) continue;
      const auto best = brute_force_opt(inst);
      ++r.cases;
      for_each_factor(inst, [&](const EdgeSet& s) {
        const Factor cand = make_factor(inst, s);
        const bool crit = check_optimality_criterion(inst, u, *f, cand);
        const bool optimal = cand.weight == best->weight;
        if (crit != optimal) {
          r.fail(seed, std::string("criterion ") + (crit ? "accepts" : "rejects") + " a " +
                           (optimal ? "" : "non-") + "optimal factor");
          return false;
        }
        return true;
      });
    }
    if (r.cases < want) r.fail(cfg.seed, "too few instances with a D^0 branch factor");
    if (r.passed) r.detail = std::to_string(r.cases) + " instances, every factor checked";
  });
}

/// Log-log slope of wall time over n in {20, 40, 80}; counts within bounds.
inline CheckResult check_scaling(const SweepConfig& cfg = {}) {
  return verify_detail::timed("scaling-sanity", [&](CheckResult& r) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::ostringstream s;
    for (std::size_t n : {20, 40, 80}) {
      auto inst = scaling_instance(n, cfg.seed);
      SolveOptions opt;
      opt.check_bounds = false;
      auto res = main_solve(inst, "matching", opt);
      ++r.cases;
      if (!within_bounds(res.stats, n)) r.fail(cfg.seed, "bounds exceeded at n=" + std::to_string(n));
      const double ms = std::max(1e-3, res.stats.wall_time.count() / 1e6);
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(ms));
      s << "n=" << n << ":" << static_cast<long long>(ms) << "ms ";
    }
    const double mx = (xs[0] + xs[1] + xs[2]) / 3;
    const double my = (ys[0] + ys[1] + ys[2]) / 3;
    double num = 0;
    double den = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    s << "slope " << std::round(slope * 100) / 100;
    if (!(slope < 7)) r.fail(cfg.seed, s.str());
    if (r.passed) r.detail = s.str();
  });
}

// ---------------------------------------------------------------- matching

inline CheckResult check_matching_equivalence(const SweepConfig& cfg = {}) {
  return verify_detail::timed("matching-equivalence", [&](CheckResult& r) {
    const std::size_t n_cases = verify_detail::cases_or(cfg, 500);
    for (std::size_t i = 0; i < n_cases; ++i) {
      const auto seed = verify_detail::case_seed(cfg, 4, i);
      std::mt19937_64 rng(seed);
      auto inst = random_instance(rng, verify_detail::small_params(rng, 9, 14, kInterval | kParity));
      auto got = opt_matching_backend(inst);
      auto want = brute_force_opt(inst);
      ++r.cases;
      if (got.has_value() != want.has_value() || (got && got->weight != want->weight))
        r.fail(seed, "reduction " + verify_detail::show(got) + " vs brute force " +
                         verify_detail::show(want));
    }
    for (std::size_t i = 0; i < n_cases; ++i) {
      const auto seed = verify_detail::case_seed(cfg, 5, i);
      std::mt19937_64 rng(seed);
      const std::size_t n = 2 + 2 * detail::draw(rng, 5);  // even, up to 10
      const std::size_t m = 1 + detail::draw(rng, n * (n - 1) / 2);
      Graph g = detail::random_simple_graph(rng, n, m);
      std::vector<Rational> w;
      for (EdgeId e = 0; e < g.edge_count(); ++e)
        w.emplace_back(static_cast<std::int64_t>(detail::draw(rng, 41)) - 20);
      auto got = max_weight_perfect_matching(g, w);
      auto want = brute_force_perfect_matching(g, w);
      ++r.cases;
      if (got.has_value() != want.has_value() || (got && got->weight != want->weight))
        r.fail(seed, "blossom and exhaustive matching disagree");
      else if (got && !verify_matching(g, w, *got))
        r.fail(seed, "blossom result fails its own check");
    }
    if (r.passed) r.detail = std::to_string(n_cases) + " reductions + " + std::to_string(n_cases) + " matchings";
  });
}

// ---------------------------------------------------------------- structural

namespace verify_detail {

// A random admissible instance with two factors, small enough that the key
// instance stays within the enumeration cap.
inline std::optional<std::tuple<Instance, EdgeSet, EdgeSet>> random_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto inst = random_instance(rng, small_params(rng, 8, 12, kAllFamilies));
  auto facs = all_factors(inst);
  if (facs.size() < 2) return std::nullopt;
  const auto& f = facs[detail::draw(rng, facs.size())];
  const auto& g = facs[detail::draw(rng, facs.size())];
  return std::tuple{inst, f, g};
}

}  // namespace verify_detail

inline CheckResult check_normalization(const SweepConfig& cfg = {}) {
  return verify_detail::timed("normalization-invariants", [&](CheckResult& r) {
    const std::size_t want = verify_detail::cases_or(cfg, 200);
    for (std::size_t i = 0; r.cases < want && i < 20 * want; ++i) {
      const auto seed = verify_detail::case_seed(cfg, 6, i);
      auto triple = verify_detail::random_pair(seed);
      if (!triple) continue;
      auto& [inst, f, g] = *triple;
      auto norm = normalize(inst, f, g);
      ++r.cases;
      if (!is_key_instance(norm.key)) {
        r.fail(seed, "output is not a key instance");
        continue;
      }
      if (norm.key.weight_of(EdgeSet::full(norm.key.graph())) != inst.weight_of(g) - inst.weight_of(f))
        r.fail(seed, "signed weight differs from the weight gap");
      const auto delta = sym_diff(f, g);
      for (VertexId v = 0; v < inst.vertex_count(); ++v) {
        std::size_t sum = 0;
        for (VertexId x : norm.expansion[v]) sum += norm.key.graph().degree(x);
        if (sum != degree_in(inst.graph(), delta, v)) {
          r.fail(seed, "degree sum over S(v) differs at vertex " + std::to_string(v));
          break;
        }
      }
    }
    if (r.cases < want) r.fail(cfg.seed, "too few factor pairs generated");
    if (r.passed) r.detail = std::to_string(r.cases) + " triples";
  });
}

inline CheckResult check_positive_basic(const SweepConfig& cfg = {}) {
  return verify_detail::timed("positive-basic-factor", [&](CheckResult& r) {
    const std::size_t want = verify_detail::cases_or(cfg, 200);
    for (std::size_t i = 0; r.cases < want && i < 50 * want; ++i) {
      const auto seed = verify_detail::case_seed(cfg, 7, i);
      auto triple = verify_detail::random_pair(seed);
      if (!triple) continue;
      auto& [inst, f, g] = *triple;
      if (!(inst.weight_of(g) > inst.weight_of(f))) continue;
      auto norm = normalize(inst, f, g);
      ++r.cases;
      const BasicFactor bf = find_positive_basic_factor(norm.key);
      bool listed = false;
      for_each_basic_factor(norm.key, [&](const BasicFactor& b) {
        listed = b.edges == bf.edges;
        return !listed;
      });
      if (!listed) {
        r.fail(seed, "result missing from the enumeration");
        continue;
      }
      const EdgeSet h = lift_basic_subgraph(norm, bf);
      auto deg = degrees_in(inst.graph(), h);
      const auto odd = std::count_if(deg.begin(), deg.end(), [](std::size_t d) { return d % 2 == 1; });
      if (odd > 2) r.fail(seed, "lifted subgraph has more than two odd vertices");
      if (!(inst.weight_of(sym_diff(f, h)) > inst.weight_of(f)))
        r.fail(seed, "lifted subgraph does not improve f");
    }
    if (r.cases < want) r.fail(cfg.seed, "too few improving pairs generated");
    if (r.passed) r.detail = std::to_string(r.cases) + " improving pairs";
  });
}

inline CheckResult check_even_at_u(const SweepConfig& cfg = {}) {
  return verify_detail::timed("even-at-u-basic-factor", [&](CheckResult& r) {
    const std::size_t want = verify_detail::cases_or(cfg, 200);
    for (std::size_t i = 0; r.cases < want && i < 50 * want; ++i) {
      const auto seed = verify_detail::case_seed(cfg, 8, i);
      std::mt19937_64 rng(seed);
      const std::size_t n = 4 + detail::draw(rng, 8);
      const std::size_t m = 3 + detail::draw(rng, 10);
      auto key = random_key_instance(rng, n, m, -2, 6);
      const Rational total = key.weight_of(EdgeSet::full(key.graph()));
      if (!(total > 0)) continue;
      bool dominated = true;
      for_each_basic_factor(key, [&](const BasicFactor& b) {
        dominated = b.weight < total;
        return dominated;
      });
      if (!dominated) continue;
      for (VertexId u = 0; u < key.vertex_count(); ++u) {
        const auto d = key.graph().degree(u);
        if (!(d == 1 || (d == 3 && is_type2(key, u)))) continue;
        ++r.cases;
        const BasicFactor bf = find_even_at_u_basic_factor(key, u);
        if (!(bf.weight > 0) || degree_in(key.graph(), bf.edges, u) % 2 != 0)
          r.fail(seed, "returned factor is not positive and even at u");
      }
    }
    if (r.cases < want) r.fail(cfg.seed, "too few instances meet the hypotheses");

    // negative control: type-1 u in the two-triangle example
    auto fig = two_triangles_instance();
    std::size_t even = 0;
    for_each_basic_factor(fig.instance, [&](const BasicFactor& b) {
      even += degree_in(fig.instance.graph(), b.edges, fig.u) % 2 == 0;
      return true;
    });
    if (even != 0) r.fail(0, "two-triangle example has a basic factor even at u");
    if (r.passed)
      r.detail = std::to_string(r.cases) + " (instance, u) pairs; negative control holds";
  });
}

// ---------------------------------------------------------------- gadgets

inline CheckResult check_gadget_realizability(unsigned max_d = 6) {
  return verify_detail::timed("gadget-realizability", [&](CheckResult& r) {
    for (unsigned d = 0; d <= max_d; ++d)
      for (unsigned g = 0; g <= d; ++g)
        for (unsigned f = g; f <= d; ++f) {
          ++r.cases;
          const auto got = realized_set(build_interval_gadget(g, f, d));
          if (got != DegreeConstraint::range(d, g, f))
            r.fail(d, "interval " + std::to_string(g) + ".." + std::to_string(f) + " arity " +
                          std::to_string(d) + " realizes " + to_string(got));
          if ((f - g) % 2 != 0) continue;
          ++r.cases;
          const auto gb = build_parity_gadget(g, f, d);
          const auto pgot = realized_set(gb);
          if (pgot != DegreeConstraint::range(d, g, f, 2))
            r.fail(d, "parity " + std::to_string(g) + ".." + std::to_string(f) + " arity " +
                          std::to_string(d) + " realizes " + to_string(pgot));
        }
    if (r.passed) r.detail = std::to_string(r.cases) + " gadgets, d <= " + std::to_string(max_d);
  });
}

/// Feasible families of the builders are delta-matroids, and every partition
/// witness keeps all unions feasible.
inline CheckResult check_gadget_structure(unsigned max_d = 4) {
  return verify_detail::timed("gadget-structure", [&](CheckResult& r) {
    for (unsigned d = 0; d <= max_d; ++d)
      for (unsigned g = 0; g <= d; ++g)
        for (unsigned f = g; f <= d; ++f)
          for (int parity = 0; parity < 2; ++parity) {
            if (parity && (f - g) % 2 != 0) continue;
            const auto gb = parity ? build_parity_gadget(g, f, d) : build_interval_gadget(g, f, d);
            const auto fam = feasible_family(gb);
            ++r.cases;
            if (!is_delta_matroid(fam)) r.fail(d, "feasible family is not a delta-matroid");
            for (auto a : fam.members())
              for (auto b : fam.members())
                if (!partition_witness(gb, a, b).unions_feasible)
                  r.fail(d, "partition witness union infeasible");
          }
    if (r.passed) r.detail = std::to_string(r.cases) + " gadgets";
  });
}

inline CheckResult check_obstruction(unsigned max_arity = 10) {
  return verify_detail::timed("obstruction", [&](CheckResult& r) {
    for (unsigned n = 3; n <= max_arity; ++n)
      for (unsigned p = 0; p <= 3 && p + 3 <= n; ++p)
        for (const auto& d : {DegreeConstraint::of(n, {p, p + 1, p + 3}),
                              DegreeConstraint::of(n, {p, p + 2, p + 3})}) {
          ++r.cases;
          if (obstruction_check(d) != Realizability::NotRealizable)
            r.fail(n, to_string(d) + " not flagged");
        }
    for (unsigned n = 0; n <= max_arity; ++n)
      for (unsigned g = 0; g <= n; ++g)
        for (unsigned f = g; f <= n; ++f) {
          ++r.cases;
          if (obstruction_check(DegreeConstraint::range(n, g, f)) != Realizability::Consistent)
            r.fail(n, "interval flagged");
          if ((f - g) % 2 == 0 &&
              obstruction_check(DegreeConstraint::range(n, g, f, 2)) != Realizability::Consistent)
            r.fail(n, "parity interval flagged");
        }
    if (r.passed) r.detail = std::to_string(r.cases) + " constraints";
  });
}

// ---------------------------------------------------------------- suites

/// "solver", "structural", "gadgets", "matching" or "all".
inline std::vector<CheckResult> run_suite(const std::string& suite, const SweepConfig& cfg) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "solver") {
    known = true;
    out.push_back(check_two_triangles());
    out.push_back(check_oracle_equivalence(cfg));
    out.push_back(check_counting_bounds(cfg));
    out.push_back(check_theorem4(cfg));
  }
  if (all || suite == "matching") {
    known = true;
    out.push_back(check_matching_equivalence(cfg));
  }
  if (all || suite == "structural") {
    known = true;
    out.push_back(check_normalization(cfg));
    out.push_back(check_positive_basic(cfg));
    out.push_back(check_even_at_u(cfg));
  }
  if (all || suite == "gadgets") {
    known = true;
    out.push_back(check_gadget_realizability());
    out.push_back(check_gadget_structure());
    out.push_back(check_obstruction());
  }
  if (!known) throw UsageError("unknown suite '" + suite + "'");
  return out;
}

inline std::string format_result(const CheckResult& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << " (" << r.cases
    << " cases, " << std::round(r.seconds * 100) / 100 << " s)";
  if (!r.failing_seeds.empty()) {
    s << " seeds:";
    for (auto x : r.failing_seeds) s << ' ' << x;
  }
  return s.str();
}

}  // namespace factorum
