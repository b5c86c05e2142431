#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relpoly/bernstein.hpp"
#include "relpoly/estimator.hpp"
#include "relpoly/exact.hpp"

namespace relpoly {

class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

//! Edge-indexed graph. The edge order fixes the meaning of edge subsets.
struct Graph
{
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  bool directed = false;

  std::size_t edge_count() const { return edges.size(); }
};

/// Edge list, one "u v" pair per line, 0-based vertex indices, '#' starts a
/// comment. An optional "vertices N" line declares isolated trailing
/// vertices; otherwise the vertex count is one past the largest index seen.
Graph parse_graph(std::istream& in, bool directed, const std::string& source = "<stream>");
Graph load_graph(const std::filesystem::path& path, bool directed);

/// Monotone acceptance functionals on edge subsets.
///
/// - st_connectivity: 1 when target is reachable from source.
/// - component_threshold: fraction of vertices whose component has at least
///   min_size vertices, i.e. the chance that a uniformly random seed vertex
///   sits in a large enough cluster.
/// - largest_component: 1 when some component has at least min_size
///   vertices.
///
/// Component rules ignore edge direction.
struct PropertyRule
{
  enum class Kind
  {
    st_connectivity,
    component_threshold,
    largest_component
  };

  Kind kind = Kind::st_connectivity;
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t min_size = 1;

  static PropertyRule st(std::size_t source, std::size_t target);
  static PropertyRule component(std::size_t min_size);
  static PropertyRule largest(std::size_t min_size);

  //! Throws std::invalid_argument if the parameters do not fit the graph.
  void validate(const Graph& g) const;
  std::string describe() const;
};

/// Reusable evaluator for one (graph, rule) pair. Weights are exact
/// fractions numerator / denominator() with a fixed denominator per rule.
/// Not thread-safe; use one per worker.
class RuleEvaluator
{
public:
  RuleEvaluator(const Graph& g, const PropertyRule& rule);

  std::uint32_t denominator() const { return denominator_; }
  std::uint32_t numerator(std::span<const std::size_t> subset);
  double weight(std::span<const std::size_t> subset)
  {
    return static_cast<double>(numerator(subset)) / denominator_;
  }

private:
  std::uint32_t reachability(std::span<const std::size_t> subset);
  std::uint32_t components(std::span<const std::size_t> subset);
  std::size_t find(std::size_t v);

  const Graph& graph_;
  PropertyRule rule_;
  std::uint32_t denominator_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<char> seen_;
  std::vector<std::size_t> queue_;
};

double acceptance_weight(const Graph& g,
                         std::span<const std::size_t> subset,
                         const PropertyRule& rule);

struct BetaMeasurement
{
  std::size_t k = 0;
  double beta = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

class ExhaustiveLimitError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_exhaustive_limit = 25;

//! beta_k as exact fractions, by enumerating all 2^N edge subsets.
std::vector<Rational> exact_beta_rational(const Graph& g,
                                          const PropertyRule& rule,
                                          std::size_t limit = default_exhaustive_limit);
BernsteinPoly exact_beta(const Graph& g,
                         const PropertyRule& rule,
                         std::size_t limit = default_exhaustive_limit);

struct McConfig
{
  std::uint64_t samples = 40000;
  std::uint64_t seed = 1;
  //! Sample streams; the estimate depends on (seed, workers), not on how
  //! many threads actually run them.
  std::size_t workers = 1;
};

//! Raw Monte Carlo counts for one k.
struct McTally
{
  std::uint64_t samples = 0;
  std::uint64_t weight_sum = 0; // in units of 1/denominator
  std::uint64_t positive = 0;   // draws with weight > 0
  std::uint64_t full = 0;       // draws with weight == 1
  std::uint32_t denominator = 1;

  double mean() const;
};

McTally mc_tally(const Graph& g, const PropertyRule& rule, std::size_t k, const McConfig& cfg);

BetaMeasurement mc_beta(const Graph& g,
                        const PropertyRule& rule,
                        std::size_t k,
                        const McConfig& cfg);

enum class AnchorMethod
{
  exact,
  mc_scan
};

struct AnchorResult
{
  bool degenerate = false;
  std::string reason;
  Anchor lower;
  Anchor upper;
};

//! Locates k_min (first beta_k > 0) and k_max (last beta_k < 1). The MC scan
//! declares beta_k = 0 when no draw is accepted and 1 when every draw is
//! fully accepted. For MC the seed of each k is derive_seed(cfg.seed, k).
AnchorResult find_anchors(const Graph& g,
                          const PropertyRule& rule,
                          AnchorMethod method,
                          const McConfig& cfg = {},
                          std::size_t limit = default_exhaustive_limit);

/// Something that can be asked for beta_k.
class MeasurementSource
{
public:
  virtual ~MeasurementSource() = default;
  virtual BetaMeasurement measure(std::size_t k) = 0;
};

//! Exact enumeration, done once up front.
class ExactOracle : public MeasurementSource
{
public:
  ExactOracle(const Graph& g,
              const PropertyRule& rule,
              std::size_t limit = default_exhaustive_limit);
  BetaMeasurement measure(std::size_t k) override;
  const BernsteinPoly& beta() const { return beta_; }

private:
  BernsteinPoly beta_;
};

//! Monte Carlo; each k uses its own stream derive_seed(cfg.seed, k), so a
//! value does not depend on the order of queries.
class MonteCarloOracle : public MeasurementSource
{
public:
  MonteCarloOracle(Graph g, PropertyRule rule, McConfig cfg);
  BetaMeasurement measure(std::size_t k) override;

private:
  Graph graph_;
  PropertyRule rule_;
  McConfig cfg_;
};

//! Looks values up in a known table (tests, replaying measured data).
class TableOracle : public MeasurementSource
{
public:
  explicit TableOracle(std::vector<BetaMeasurement> table);
  BetaMeasurement measure(std::size_t k) override;

private:
  std::vector<BetaMeasurement> table_;
};

} // namespace relpoly
