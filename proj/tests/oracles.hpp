#pragma once

// Reference implementations for the tests. Deliberately naive and
// independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relpoly/exact.hpp"

namespace oracle {

using relpoly::BigInt;
using relpoly::Rational;

inline BigInt choose(unsigned n, unsigned k)
{
  if (k > n)
    return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

inline Rational rpow(const Rational& x, unsigned e)
{
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i)
    r *= x;
  return r;
}

//! C(N,k) x^k (1-x)^(N-k) in exact arithmetic.
inline Rational basis(unsigned n, unsigned k, const Rational& x)
{
  return Rational(choose(n, k)) * rpow(x, k) * rpow(1 - x, n - k);
}

//! beta_k = sum_{j<=k} C(k,j)/C(N,j) a_j
inline std::vector<Rational> monomial_to_bernstein(const std::vector<Rational>& a, unsigned n)
{
  std::vector<Rational> beta(n + 1, Rational(0));
  for (unsigned k = 0; k <= n; ++k) {
    for (unsigned j = 0; j <= k && j < a.size(); ++j)
      beta[k] += Rational(choose(k, j)) / Rational(choose(n, j)) * a[j];
  }
  return beta;
}

//! Plain double evaluation of sum beta_k C(N,k) x^k (1-x)^(N-k).
inline double bernstein_eval(const std::vector<double>& beta, double x)
{
  const unsigned n = static_cast<unsigned>(beta.size() - 1);
  double s = 0.0;
  for (unsigned k = 0; k <= n; ++k) {
    double c = 1.0;
    for (unsigned i = 1; i <= k; ++i)
      c = c * (n - k + i) / i;
    s += beta[k] * c * std::pow(x, k) * std::pow(1.0 - x, n - k);
  }
  return s;
}

//! int_0^1 f(x)^2 dx by adaptive Gauss-Kronrod.
inline double l2_quadrature(const std::function<double(double)>& f)
{
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
    [&](double x) { return f(x) * f(x); }, 0.0, 1.0, 15, 1e-14, &err);
  return std::sqrt(v);
}

//! Gauss-Legendre with 20 nodes is exact for the degree <= 39 integrand.
inline double gram_quadrature(unsigned n, unsigned i, unsigned j)
{
  const double ci = relpoly::to_double(Rational(choose(n, i)));
  const double cj = relpoly::to_double(Rational(choose(n, j)));
  auto bij = [&](double x) {
    return ci * std::pow(x, i) * std::pow(1 - x, n - i) * cj * std::pow(x, j) *
           std::pow(1 - x, n - j);
  };
  return boost::math::quadrature::gauss<double, 20>::integrate(bij, 0.0, 1.0);
}

struct SimpleGraph
{
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  bool directed = false;
};

//! Transitive closure by repeated relaxation over the kept edges.
inline bool reaches(const SimpleGraph& g,
                    const std::vector<std::size_t>& kept,
                    std::size_t s,
                    std::size_t t)
{
  std::vector<char> r(g.n, 0);
  r[s] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto e : kept) {
      auto [u, v] = g.edges[e];
      if (r[u] && !r[v]) {
        r[v] = 1;
        changed = true;
      }
      if (!g.directed && r[v] && !r[u]) {
        r[u] = 1;
        changed = true;
      }
    }
  }
  return r[t] != 0;
}

//! Component sizes via recursive DFS (undirected view).
inline std::vector<std::size_t> component_sizes(const SimpleGraph& g,
                                                const std::vector<std::size_t>& kept)
{
  std::vector<std::vector<std::size_t>> adj(g.n);
  for (auto e : kept) {
    adj[g.edges[e].first].push_back(g.edges[e].second);
    adj[g.edges[e].second].push_back(g.edges[e].first);
  }
  std::vector<char> seen(g.n, 0);
  std::vector<std::size_t> sizes;
  std::function<std::size_t(std::size_t)> dfs = [&](std::size_t v) -> std::size_t {
    seen[v] = 1;
    std::size_t c = 1;
    for (auto w : adj[v])
      if (!seen[w])
        c += dfs(w);
    return c;
  };
  for (std::size_t v = 0; v < g.n; ++v)
    if (!seen[v])
      sizes.push_back(dfs(v));
  return sizes;
}

//! Exact beta_k by walking all k-combinations in lexicographic order.
inline std::vector<Rational> beta_by_combinations(
  const SimpleGraph& g,
  const std::function<Rational(const std::vector<std::size_t>&)>& weight)
{
  const std::size_t m = g.edges.size();
  std::vector<Rational> beta(m + 1, Rational(0));
  for (std::size_t k = 0; k <= m; ++k) {
    std::vector<char> sel(m, 0);
    std::fill(sel.begin(), sel.begin() + static_cast<long>(k), 1);
    Rational sum = 0;
    BigInt count = 0;
    do {
      std::vector<std::size_t> kept;
      for (std::size_t i = 0; i < m; ++i)
        if (sel[i])
          kept.push_back(i);
      sum += weight(kept);
      ++count;
    } while (std::prev_permutation(sel.begin(), sel.end()));
    beta[k] = sum / Rational(count);
  }
  return beta;
}

//! Random simple graph with n vertices and m distinct edges (no self-loops).
inline SimpleGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool directed)
{
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && (directed || u < v))
        all.emplace_back(u, v);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(m, all.size()));
  return { n, all, directed };
}

} // namespace oracle
