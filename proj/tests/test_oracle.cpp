#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "relpoly/oracle.hpp"
#include "relpoly/random.hpp"

using namespace relpoly;

namespace {

const char* toy_edges = "# toy\n0 1\n1 2\n2 5\n1 3\n3 5\n0 4\n4 5\n";

Graph toy()
{
  std::istringstream in(toy_edges);
  return parse_graph(in, true);
}

Graph to_graph(const oracle::SimpleGraph& s)
{
  Graph g;
  g.vertex_count = s.n;
  g.edges = s.edges;
  g.directed = s.directed;
  return g;
}

oracle::SimpleGraph to_simple(const Graph& g)
{
  return { g.vertex_count, g.edges, g.directed };
}

std::function<Rational(const std::vector<std::size_t>&)> reference_rule(const oracle::SimpleGraph& g,
                                                                         const PropertyRule& r)
{
  return [&g, r](const std::vector<std::size_t>& kept) -> Rational {
    if (r.kind == PropertyRule::Kind::st_connectivity)
      return oracle::reaches(g, kept, r.source, r.target) ? 1 : 0;
    auto sizes = oracle::component_sizes(g, kept);
    if (r.kind == PropertyRule::Kind::largest_component)
      return *std::max_element(sizes.begin(), sizes.end()) >= r.min_size ? 1 : 0;
    std::size_t covered = 0;
    for (auto s : sizes)
      if (s >= r.min_size)
        covered += s;
    return Rational(static_cast<long>(covered), static_cast<long>(g.n));
  };
}

} // namespace

TEST_CASE("toy network: exact enumeration")
{
  Graph g = toy();
  CHECK(g.vertex_count == 6);
  CHECK(g.edge_count() == 7);
  auto beta = exact_beta_rational(g, PropertyRule::st(0, 5));
  std::vector<Rational> want{ 0, 0, Rational(1, 21), Rational(1, 5),
                              Rational(18, 35), Rational(19, 21), 1, 1 };
  CHECK(beta == want);
  // 7 of the C(7,3) = 35 three-edge subsets connect S to T
  CHECK(beta[3] * 35 == 7);
  CHECK(beta == oracle::beta_by_combinations(to_simple(g), reference_rule(to_simple(g), PropertyRule::st(0, 5))));
}

TEST_CASE("exact enumeration agrees with combination walk on random graphs")
{
  std::mt19937_64 rng(77);
  for (int t = 0; t < 12; ++t) {
    auto s = oracle::random_graph(rng, 4 + t % 4, 6 + t % 5, t % 2 == 0);
    Graph g = to_graph(s);
    std::vector<PropertyRule> rules{ PropertyRule::st(0, s.n - 1) };
    if (!s.directed) {
      rules.push_back(PropertyRule::component(3));
      rules.push_back(PropertyRule::largest(3));
    }
    for (const auto& r : rules)
      CHECK(exact_beta_rational(g, r) == oracle::beta_by_combinations(s, reference_rule(s, r)));
  }
}

TEST_CASE("exhaustive limit")
{
  std::mt19937_64 rng(1);
  Graph g = to_graph(oracle::random_graph(rng, 10, 20, false));
  CHECK_THROWS_AS(exact_beta_rational(g, PropertyRule::st(0, 9), 19), ExhaustiveLimitError);
}

TEST_CASE("graph parsing")
{
  std::istringstream ok("vertices 5\n# c\n0 1 # trailing\n\n3 4\n");
  Graph g = parse_graph(ok, false);
  CHECK(g.vertex_count == 5);
  CHECK(g.edge_count() == 2);

  std::istringstream loop("0 1\n2 2\n");
  try {
    parse_graph(loop, false, "loop.edges");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream junk("0 x\n");
  CHECK_THROWS_AS(parse_graph(junk, false), ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(parse_graph(empty, false), ParseError);
  CHECK_THROWS(PropertyRule::st(0, 9).validate(g));
  CHECK_THROWS(PropertyRule::st(1, 1).validate(g));
}

TEST_CASE("karate graph file")
{
  Graph g = load_graph(RELPOLY_DATA_DIR "/karate.edges", false);
  CHECK(g.vertex_count == 34);
  CHECK(g.edge_count() == 78);
  std::vector<std::size_t> all(78);
  std::iota(all.begin(), all.end(), 0);
  CHECK(acceptance_weight(g, all, PropertyRule::largest(34)) == 1.0);
  CHECK(acceptance_weight(g, all, PropertyRule::component(34)) == 1.0);
}

TEST_CASE("Monte Carlo is within 4 sigma of exact on the toy")
{
  Graph g = toy();
  auto rule = PropertyRule::st(0, 5);
  auto exact = exact_beta(g, rule);
  for (std::size_t k = 0; k <= 7; ++k) {
    auto m = mc_beta(g, rule, k, { 20000, derive_seed(9, k), 1 });
    double sigma = std::sqrt(exact[k] * (1 - exact[k]) / 20000.0);
    CHECK(std::abs(m.beta - exact[k]) <= 4 * sigma + 1e-12);
    CHECK(m.samples == 20000);
  }
}

TEST_CASE("Monte Carlo determinism and worker streams")
{
  Graph g = load_graph(RELPOLY_DATA_DIR "/karate.edges", false);
  auto rule = PropertyRule::largest(10);
  McConfig cfg{ 5000, 42, 1 };
  auto a = mc_tally(g, rule, 15, cfg);
  auto b = mc_tally(g, rule, 15, cfg);
  CHECK(a.weight_sum == b.weight_sum);
  cfg.workers = 3;
  auto c = mc_tally(g, rule, 15, cfg);
  auto d = mc_tally(g, rule, 15, cfg);
  CHECK(c.weight_sum == d.weight_sum);
  CHECK(c.samples == 5000);
  cfg.seed = 43;
  cfg.workers = 1;
  CHECK(mc_tally(g, rule, 15, cfg).weight_sum != a.weight_sum);
}

TEST_CASE("Monte Carlo tally matches a replay with the reference rule")
{
  Graph g = load_graph(RELPOLY_DATA_DIR "/karate.edges", false);
  auto s = to_simple(g);
  for (auto rule : { PropertyRule::st(0, 33), PropertyRule::largest(10), PropertyRule::component(10) }) {
    const std::uint64_t seed = 314;
    const std::size_t k = 20;
    McTally t = mc_tally(g, rule, k, { 300, seed, 1 });
    auto ref = reference_rule(s, rule);
    Rng rng(derive_seed(seed, 0));
    SubsetSampler sampler(78);
    Rational sum = 0;
    for (int i = 0; i < 300; ++i) {
      auto d = sampler.draw(rng, k);
      sum += ref(std::vector<std::size_t>(d.begin(), d.end()));
    }
    CHECK(Rational(static_cast<long>(t.weight_sum), static_cast<long>(t.denominator)) == sum);
  }
}

TEST_CASE("subset sampler is uniform (chi-square)")
{
  SubsetSampler sampler(6);
  Rng rng(derive_seed(2024, 0));
  std::map<unsigned, long> counts;
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) {
    unsigned mask = 0;
    for (auto e : sampler.draw(rng, 3))
      mask |= 1u << e;
    ++counts[mask];
  }
  CHECK(counts.size() == 20);
  double expected = draws / 20.0;
  double chi2 = 0.0;
  for (const auto& [mask, c] : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 43.82); // df 19, alpha 0.001
}

TEST_CASE("derive_seed and uniform_below")
{
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 7) == derive_seed(5, 7));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i)
    CHECK(uniform_below(rng, 7) < 7);
}

TEST_CASE("anchors")
{
  Graph g = toy();
  auto r = find_anchors(g, PropertyRule::st(0, 5), AnchorMethod::exact);
  REQUIRE_FALSE(r.degenerate);
  CHECK(r.lower.k == 2);
  CHECK(r.lower.beta == doctest::Approx(1.0 / 21));
  CHECK(r.upper.k == 5);
  CHECK(r.upper.beta == doctest::Approx(19.0 / 21));

  auto mc = find_anchors(g, PropertyRule::st(0, 5), AnchorMethod::mc_scan, { 20000, 3, 1 });
  REQUIRE_FALSE(mc.degenerate);
  CHECK(mc.lower.k == 2);
  CHECK(mc.upper.k == 5);

  std::istringstream apart("vertices 4\n0 1\n2 3\n");
  Graph split = parse_graph(apart, false);
  CHECK(find_anchors(split, PropertyRule::st(0, 3), AnchorMethod::exact).degenerate);
}

TEST_CASE("measurement sources")
{
  Graph g = toy();
  ExactOracle ex(g, PropertyRule::st(0, 5));
  CHECK(ex.measure(3).beta == doctest::Approx(0.2));
  CHECK(ex.measure(3).std_error == 0.0);
  MonteCarloOracle mc(g, PropertyRule::st(0, 5), { 1000, 8, 1 });
  auto a = mc.measure(4);
  auto b = mc.measure(4);
  CHECK(a.beta == b.beta);
  CHECK(a.seed == derive_seed(8, 4));
  TableOracle table({ { 3, 0.25, 0.01, 0, 0 } });
  CHECK(table.measure(3).beta == 0.25);
  CHECK_THROWS(table.measure(4));
}
