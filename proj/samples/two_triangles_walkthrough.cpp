// Solves the two-triangle example, prints the branch trace, then shows why a
// type-1 vertex breaks the even-degree basic factor argument there.

#include <iostream>

#include "factorum/factorum.hpp"

int main() {
  using namespace factorum;
  const TwoTriangles fig = two_triangles_instance();

  SolveOptions opt;
  opt.trace = true;
  const SolveResult res = main_solve(fig.instance, "matching", opt);
  std::cout << "optimum weight " << to_string(res.outcome->weight) << " using "
            << res.outcome->edges.size() << " of " << fig.instance.edge_count() << " edges\n";
  std::cout << "decision calls " << res.stats.dec_calls << ", optimization calls "
            << res.stats.opt_calls << '\n';
  for (const auto& e : res.trace) {
    std::cout << "  level " << e.level << ' ' << to_string(e.branch);
    if (e.u) std::cout << " u=" << *e.u;
    if (e.v) std::cout << " v=" << *e.v;
    if (e.incumbent) std::cout << " incumbent " << to_string(*e.incumbent);
    std::cout << '\n';
  }

  // The instance is already a key instance. Its basic factors all use u with
  // odd degree, even though the whole graph is the unique heavier factor.
  const auto basics = enumerate_basic_factors(fig.instance);
  std::size_t even = 0;
  for (const auto& b : basics) {
    even += degree_in(fig.instance.graph(), b.edges, fig.u) % 2 == 0;
    std::cout << "  basic " << to_string(b.shape) << " weight " << to_string(b.weight)
              << " deg(u)=" << degree_in(fig.instance.graph(), b.edges, fig.u) << '\n';
  }
  std::cout << basics.size() << " basic factors, " << even << " even at u\n";
  return 0;
}
