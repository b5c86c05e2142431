#include "relpoly/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#include "relpoly/random.hpp"

namespace relpoly {

ParseError::ParseError(const std::string& source,
                       std::size_t line,
                       const std::string& what)
  : std::runtime_error(source + ":" + std::to_string(line) + ": " + what)
  , line_(line)
{
}

Graph parse_graph(std::istream& in, bool directed, const std::string& source)
{
  Graph g;
  g.directed = directed;
  std::size_t declared = 0;
  std::size_t max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first))
      continue;
    if (first == "vertices") {
      long long n = -1;
      std::string extra;
      if (!(ls >> n) || n < 0 || (ls >> extra))
        throw ParseError(source, lineno, "expected 'vertices <count>'");
      declared = static_cast<std::size_t>(n);
      continue;
    }
    long long u = -1;
    long long v = -1;
    std::string extra;
    std::istringstream fs(first);
    if (!(fs >> u) || !fs.eof() || !(ls >> v) || (ls >> extra) || u < 0 ||
        v < 0)
      throw ParseError(source, lineno, "expected two non-negative vertex indices");
    if (u == v)
      throw ParseError(source, lineno, "self-loop on vertex " + std::to_string(u));
    g.edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    max_index = std::max({ max_index, static_cast<std::size_t>(u),
                           static_cast<std::size_t>(v) });
  }
  if (g.edges.empty())
    throw ParseError(source, lineno, "graph has no edges");
  g.vertex_count = std::max(declared, max_index + 1);
  if (declared != 0 && declared <= max_index)
    throw ParseError(source, lineno, "edge endpoint exceeds declared vertex count");
  return g;
}

Graph load_graph(const std::filesystem::path& path, bool directed)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open graph file " + path.string());
  return parse_graph(in, directed, path.string());
}

PropertyRule PropertyRule::st(std::size_t source, std::size_t target)
{
  return { Kind::st_connectivity, source, target, 1 };
}

PropertyRule PropertyRule::component(std::size_t min_size)
{
  return { Kind::component_threshold, 0, 0, min_size };
}

PropertyRule PropertyRule::largest(std::size_t min_size)
{
  return { Kind::largest_component, 0, 0, min_size };
}

void PropertyRule::validate(const Graph& g) const
{
  switch (kind) {
    case Kind::st_connectivity:
      if (source >= g.vertex_count || target >= g.vertex_count)
        throw std::invalid_argument("st rule: source/target outside the graph");
      if (source == target)
        throw std::invalid_argument("st rule: source equals target");
      break;
    case Kind::component_threshold:
    case Kind::largest_component:
      if (min_size < 1)
        throw std::invalid_argument("component rule: threshold must be >= 1");
      break;
  }
}

std::string PropertyRule::describe() const
{
  switch (kind) {
    case Kind::st_connectivity:
      return "st(" + std::to_string(source) + "->" + std::to_string(target) + ")";
    case Kind::component_threshold:
      return "component(" + std::to_string(min_size) + ")";
    case Kind::largest_component:
      return "largest(" + std::to_string(min_size) + ")";
  }
  return "?";
}

RuleEvaluator::RuleEvaluator(const Graph& g, const PropertyRule& rule)
  : graph_(g)
  , rule_(rule)
  , denominator_(rule.kind == PropertyRule::Kind::component_threshold
                   ? static_cast<std::uint32_t>(g.vertex_count)
                   : 1)
  , parent_(g.vertex_count)
  , size_(g.vertex_count)
  , adjacency_(g.vertex_count)
  , seen_(g.vertex_count)
{
  rule_.validate(g);
  queue_.reserve(g.vertex_count);
}

std::uint32_t RuleEvaluator::numerator(std::span<const std::size_t> subset)
{
  for (auto e : subset) {
    if (e >= graph_.edges.size())
      throw std::invalid_argument("edge index " + std::to_string(e) +
                                  " outside the graph");
  }
  if (rule_.kind == PropertyRule::Kind::st_connectivity)
    return reachability(subset);
  return components(subset);
}

std::uint32_t RuleEvaluator::reachability(std::span<const std::size_t> subset)
{
  for (auto& a : adjacency_)
    a.clear();
  for (auto e : subset) {
    auto [u, v] = graph_.edges[e];
    adjacency_[u].push_back(v);
    if (!graph_.directed)
      adjacency_[v].push_back(u);
  }
  std::fill(seen_.begin(), seen_.end(), 0);
  queue_.clear();
  queue_.push_back(rule_.source);
  seen_[rule_.source] = 1;
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    std::size_t u = queue_[head];
    if (u == rule_.target)
      return 1;
    for (auto v : adjacency_[u]) {
      if (!seen_[v]) {
        seen_[v] = 1;
        queue_.push_back(v);
      }
    }
  }
  return 0;
}

std::size_t RuleEvaluator::find(std::size_t v)
{
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

std::uint32_t RuleEvaluator::components(std::span<const std::size_t> subset)
{
  const std::size_t n = graph_.vertex_count;
  for (std::size_t v = 0; v < n; ++v) {
    parent_[v] = v;
    size_[v] = 1;
  }
  for (auto e : subset) {
    std::size_t a = find(graph_.edges[e].first);
    std::size_t b = find(graph_.edges[e].second);
    if (a == b)
      continue;
    if (size_[a] < size_[b])
      std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  if (rule_.kind == PropertyRule::Kind::largest_component) {
    for (std::size_t v = 0; v < n; ++v) {
      if (parent_[v] == v && size_[v] >= rule_.min_size)
        return 1;
    }
    return 0;
  }
  std::uint32_t covered = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (parent_[v] == v && size_[v] >= rule_.min_size)
      covered += static_cast<std::uint32_t>(size_[v]);
  }
  return covered;
}

double acceptance_weight(const Graph& g,
                         std::span<const std::size_t> subset,
                         const PropertyRule& rule)
{
  RuleEvaluator eval(g, rule);
  return eval.weight(subset);
}

std::vector<Rational> exact_beta_rational(const Graph& g,
                                          const PropertyRule& rule,
                                          std::size_t limit)
{
  const std::size_t n = g.edge_count();
  if (n > limit || n >= 63)
    throw ExhaustiveLimitError(
      "exact enumeration refused: " + std::to_string(n) +
      " edges exceeds the exhaustive limit of " + std::to_string(limit) +
      "; use the Monte Carlo oracle instead");

  RuleEvaluator eval(g, rule);
  std::vector<std::uint64_t> sums(n + 1, 0);
  std::vector<std::size_t> subset;
  subset.reserve(n);
  const std::uint64_t total = std::uint64_t{ 1 } << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    subset.clear();
    for (std::uint64_t m = mask; m != 0; m &= m - 1)
      subset.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    sums[subset.size()] += eval.numerator(subset);
  }

  std::vector<Rational> beta(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt den = binomial_exact(static_cast<unsigned>(n), static_cast<unsigned>(k)) *
                 eval.denominator();
    beta[k] = Rational(BigInt(sums[k]), den);
  }
  return beta;
}

BernsteinPoly exact_beta(const Graph& g, const PropertyRule& rule, std::size_t limit)
{
  auto exact = exact_beta_rational(g, rule, limit);
  std::vector<double> beta;
  beta.reserve(exact.size());
  for (const auto& b : exact)
    beta.push_back(to_double(b));
  return BernsteinPoly(std::move(beta), true);
}

double McTally::mean() const
{
  if (samples == 0)
    return 0.0;
  return static_cast<double>(weight_sum) /
         (static_cast<double>(samples) * denominator);
}

namespace {

McTally run_stream(const Graph& g,
                   const PropertyRule& rule,
                   std::size_t k,
                   std::uint64_t samples,
                   std::uint64_t seed)
{
  RuleEvaluator eval(g, rule);
  SubsetSampler sampler(g.edge_count());
  Rng rng(seed);
  McTally t;
  t.denominator = eval.denominator();
  t.samples = samples;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::uint32_t w = eval.numerator(sampler.draw(rng, k));
    t.weight_sum += w;
    t.positive += w > 0;
    t.full += w == eval.denominator();
  }
  return t;
}

} // namespace

McTally mc_tally(const Graph& g,
                 const PropertyRule& rule,
                 std::size_t k,
                 const McConfig& cfg)
{
  if (k > g.edge_count())
    throw std::invalid_argument("mc_beta: k exceeds the edge count");
  if (cfg.samples < 1)
    throw std::invalid_argument("mc_beta: need at least one sample");
  rule.validate(g);

  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  std::vector<McTally> parts(workers);
  auto share = [&](std::size_t w) {
    return cfg.samples / workers + (w < cfg.samples % workers ? 1 : 0);
  };
  if (workers == 1) {
    parts[0] = run_stream(g, rule, k, cfg.samples, derive_seed(cfg.seed, 0));
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        parts[w] = run_stream(g, rule, k, share(w), derive_seed(cfg.seed, w));
      });
    }
  }

  McTally total;
  total.denominator = parts[0].denominator;
  for (const auto& p : parts) {
    total.samples += p.samples;
    total.weight_sum += p.weight_sum;
    total.positive += p.positive;
    total.full += p.full;
  }
  return total;
}

BetaMeasurement mc_beta(const Graph& g,
                        const PropertyRule& rule,
                        std::size_t k,
                        const McConfig& cfg)
{
  McTally t = mc_tally(g, rule, k, cfg);
  double beta = t.mean();
  double se = std::sqrt(beta * (1.0 - beta) / static_cast<double>(t.samples));
  return { k, beta, se, t.samples, cfg.seed };
}

AnchorResult find_anchors(const Graph& g,
                          const PropertyRule& rule,
                          AnchorMethod method,
                          const McConfig& cfg,
                          std::size_t limit)
{
  const std::size_t n = g.edge_count();
  AnchorResult r;
  bool have_min = false;
  bool have_max = false;

  if (method == AnchorMethod::exact) {
    BernsteinPoly beta = exact_beta(g, rule, limit);
    for (std::size_t k = 0; k <= n && !have_min; ++k) {
      if (beta[k] > 0.0) {
        r.lower = { k, beta[k], 0.0 };
        have_min = true;
      }
    }
    for (std::size_t k = n + 1; k-- > 0 && !have_max;) {
      if (beta[k] < 1.0) {
        r.upper = { k, beta[k], 0.0 };
        have_max = true;
      }
    }
  } else {
    for (std::size_t k = 0; k <= n && !have_min; ++k) {
      McConfig c = cfg;
      c.seed = derive_seed(cfg.seed, k);
      McTally t = mc_tally(g, rule, k, c);
      if (t.positive > 0) {
        BetaMeasurement m = mc_beta(g, rule, k, c);
        r.lower = { k, m.beta, m.std_error };
        have_min = true;
      }
    }
    for (std::size_t k = n + 1; k-- > 0 && !have_max;) {
      McConfig c = cfg;
      c.seed = derive_seed(cfg.seed, k);
      McTally t = mc_tally(g, rule, k, c);
      if (t.full < t.samples) {
        BetaMeasurement m = mc_beta(g, rule, k, c);
        r.upper = { k, m.beta, m.std_error };
        have_max = true;
      }
    }
  }

  if (!have_min) {
    r.degenerate = true;
    r.reason = "no k with beta_k > 0: the property never holds";
  } else if (!have_max) {
    r.degenerate = true;
    r.reason = "no k with beta_k < 1: the property always holds";
  } else if (r.lower.k >= r.upper.k) {
    r.degenerate = true;
    r.reason = "k_min >= k_max: the coefficients jump straight from 0 to 1";
  }
  return r;
}

ExactOracle::ExactOracle(const Graph& g, const PropertyRule& rule, std::size_t limit)
  : beta_(exact_beta(g, rule, limit))
{
}

BetaMeasurement ExactOracle::measure(std::size_t k)
{
  if (k > beta_.degree())
    throw std::out_of_range("ExactOracle: k outside the graph");
  return { k, beta_[k], 0.0, 0, 0 };
}

MonteCarloOracle::MonteCarloOracle(Graph g, PropertyRule rule, McConfig cfg)
  : graph_(std::move(g))
  , rule_(rule)
  , cfg_(cfg)
{
  rule_.validate(graph_);
}

BetaMeasurement MonteCarloOracle::measure(std::size_t k)
{
  McConfig c = cfg_;
  c.seed = derive_seed(cfg_.seed, k);
  return mc_beta(graph_, rule_, k, c);
}

TableOracle::TableOracle(std::vector<BetaMeasurement> table)
  : table_(std::move(table))
{
}

BetaMeasurement TableOracle::measure(std::size_t k)
{
  for (const auto& m : table_) {
    if (m.k == k)
      return m;
  }
  throw std::out_of_range("TableOracle: no entry for k=" + std::to_string(k));
}

} // namespace relpoly
