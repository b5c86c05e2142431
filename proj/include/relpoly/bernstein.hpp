#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "relpoly/exact.hpp"

namespace relpoly {

//! Polynomial of fixed degree N written in the Bernstein basis,
//! f(x) = sum_k beta_k * C(N,k) x^k (1-x)^(N-k).
class BernsteinPoly
{
public:
  BernsteinPoly() = default;
  explicit BernsteinPoly(std::vector<double> coefficients,
                         bool probability_curve = false);

  //! Constant polynomial of the given degree.
  static BernsteinPoly constant(std::size_t degree, double value);

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::span<const double> coefficients() const { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_[k]; }
  bool is_probability_curve() const { return probability_; }

private:
  std::vector<double> coeffs_{ 0.0 };
  bool probability_ = false;
};

//! Power-basis polynomial, coefficients ordered 1, x, x^2, ...
struct MonomialPoly
{
  std::vector<double> coefficients{ 0.0 };
  std::size_t degree() const { return coefficients.size() - 1; }
};

//! log C(n, k) through lgamma.
double log_binomial(std::size_t n, std::size_t k);

//! B(N,k,x), evaluated in log space so that N in the hundreds stays finite.
double basis_value(std::size_t degree, std::size_t k, double x);

//! de Casteljau evaluation; the result stays inside the coefficient hull.
double eval_de_casteljau(const BernsteinPoly& p, double x);

//! Direct sum over basis functions. Slower and only used to cross-check
//! eval_de_casteljau.
double eval_basis_sum(const BernsteinPoly& p, double x);

// Basis conversions. Done in exact rational arithmetic; the double overloads
// convert their (exactly representable) inputs to rationals and round once at
// the end. Note that the monomial basis is badly conditioned: rounding the
// Bernstein coefficients to double already costs about 1e-2 in the monomial
// coefficients at degree 30.
std::vector<Rational> monomial_to_bernstein(std::span<const Rational> monomial,
                                            std::size_t degree);
std::vector<Rational> bernstein_to_monomial(std::span<const Rational> bernstein);

BernsteinPoly monomial_to_bernstein(const MonomialPoly& m);
//! Elevates m to the requested degree (>= m.degree()) on the way.
BernsteinPoly monomial_to_bernstein(const MonomialPoly& m, std::size_t degree);
MonomialPoly bernstein_to_monomial(const BernsteinPoly& p);

/// Dense Gram matrix of the order-N Bernstein basis on [0,1]:
/// G(i,j) = C(N,i) C(N,j) / ((2N+1) C(2N,i+j)).
class GramMatrix
{
public:
  explicit GramMatrix(std::size_t degree);

  std::size_t degree() const { return degree_; }
  double operator()(std::size_t i, std::size_t j) const
  {
    return entries_[i * (degree_ + 1) + j];
  }

  //! d^T G d, clamped at zero.
  double quadratic_form(std::span<const double> d) const;

private:
  std::size_t degree_;
  std::vector<double> entries_;
};

//! Process-wide cache, one matrix per degree; safe to call from any thread.
std::shared_ptr<const GramMatrix> gram_matrix(std::size_t degree);

//! || a - b ||_2 on [0,1], computed from the coefficient difference through
//! the Gram matrix.
double l2_norm_diff(const BernsteinPoly& a, const BernsteinPoly& b);
double l2_norm_diff(std::span<const double> a, std::span<const double> b);

std::vector<std::pair<double, double>> sample_curve(const BernsteinPoly& p,
                                                    std::size_t grid_size);

} // namespace relpoly
