#include "relpoly/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace relpoly {

BernsteinPoly::BernsteinPoly(std::vector<double> coefficients,
                             bool probability_curve)
  : coeffs_(std::move(coefficients))
  , probability_(probability_curve)
{
  if (coeffs_.empty())
    throw std::invalid_argument("BernsteinPoly: need at least one coefficient");
  if (probability_) {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (!(coeffs_[k] >= 0.0 && coeffs_[k] <= 1.0))
        throw std::invalid_argument("BernsteinPoly: coefficient " +
                                    std::to_string(k) +
                                    " outside [0,1] for a probability curve");
    }
  }
}

BernsteinPoly BernsteinPoly::constant(std::size_t degree, double value)
{
  return BernsteinPoly(std::vector<double>(degree + 1, value));
}

double log_binomial(std::size_t n, std::size_t k)
{
  if (k > n)
    throw std::domain_error("log_binomial: k > n");
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace {

void check_unit_interval(double x, const char* who)
{
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error(std::string(who) + ": x = " + std::to_string(x) +
                            " outside [0,1]");
}

} // namespace

double basis_value(std::size_t degree, std::size_t k, double x)
{
  if (k > degree)
    throw std::domain_error("basis_value: k = " + std::to_string(k) +
                            " exceeds degree " + std::to_string(degree));
  check_unit_interval(x, "basis_value");
  if (x == 0.0)
    return k == 0 ? 1.0 : 0.0;
  if (x == 1.0)
    return k == degree ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  const double rest = static_cast<double>(degree - k);
  return std::exp(log_binomial(degree, k) + kd * std::log(x) +
                  rest * std::log1p(-x));
}

double eval_de_casteljau(const BernsteinPoly& p, double x)
{
  check_unit_interval(x, "eval_de_casteljau");
  auto c = p.coefficients();
  std::vector<double> work(c.begin(), c.end());
  const double s = 1.0 - x;
  for (std::size_t r = work.size() - 1; r > 0; --r) {
    for (std::size_t i = 0; i < r; ++i)
      work[i] = s * work[i] + x * work[i + 1];
  }
  return work[0];
}

double eval_basis_sum(const BernsteinPoly& p, double x)
{
  check_unit_interval(x, "eval_basis_sum");
  double sum = 0.0;
  for (std::size_t k = 0; k <= p.degree(); ++k)
    sum += p[k] * basis_value(p.degree(), k, x);
  return sum;
}

std::vector<Rational> monomial_to_bernstein(std::span<const Rational> monomial,
                                            std::size_t degree)
{
  if (monomial.empty())
    throw std::invalid_argument("monomial_to_bernstein: empty coefficients");
  if (monomial.size() > degree + 1)
    throw std::invalid_argument(
      "monomial_to_bernstein: target degree below polynomial degree");

  // beta_k = sum_{i<=k} C(k,i)/C(N,i) a_i
  const auto n = static_cast<unsigned>(degree);
  std::vector<BigInt> cn(degree + 1);
  for (unsigned i = 0; i <= n; ++i)
    cn[i] = binomial_exact(n, i);

  std::vector<Rational> beta(degree + 1);
  for (unsigned k = 0; k <= n; ++k) {
    Rational acc = 0;
    const unsigned top = std::min<unsigned>(k, monomial.size() - 1);
    for (unsigned i = 0; i <= top; ++i) {
      if (monomial[i] == 0)
        continue;
      acc += monomial[i] * Rational(binomial_exact(k, i), cn[i]);
    }
    beta[k] = acc;
  }
  return beta;
}

std::vector<Rational> bernstein_to_monomial(std::span<const Rational> bernstein)
{
  if (bernstein.empty())
    throw std::invalid_argument("bernstein_to_monomial: empty coefficients");
  const auto n = static_cast<unsigned>(bernstein.size() - 1);

  // a_i = C(N,i) sum_{k<=i} (-1)^(i-k) C(i,k) beta_k
  std::vector<Rational> a(bernstein.size());
  for (unsigned i = 0; i <= n; ++i) {
    Rational acc = 0;
    for (unsigned k = 0; k <= i; ++k) {
      Rational term = bernstein[k] * Rational(binomial_exact(i, k));
      if ((i - k) % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    a[i] = acc * Rational(binomial_exact(n, i));
  }
  return a;
}

namespace {

std::vector<Rational> to_rationals(std::span<const double> values)
{
  std::vector<Rational> out;
  out.reserve(values.size());
  for (double v : values)
    out.push_back(to_rational(v));
  return out;
}

std::vector<double> to_doubles(std::span<const Rational> values)
{
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values)
    out.push_back(to_double(v));
  return out;
}

} // namespace

BernsteinPoly monomial_to_bernstein(const MonomialPoly& m)
{
  return monomial_to_bernstein(m, m.degree());
}

BernsteinPoly monomial_to_bernstein(const MonomialPoly& m, std::size_t degree)
{
  auto exact = monomial_to_bernstein(to_rationals(m.coefficients), degree);
  return BernsteinPoly(to_doubles(exact));
}

MonomialPoly bernstein_to_monomial(const BernsteinPoly& p)
{
  auto exact = bernstein_to_monomial(to_rationals(p.coefficients()));
  return MonomialPoly{ to_doubles(exact) };
}

GramMatrix::GramMatrix(std::size_t degree)
  : degree_(degree)
  , entries_((degree + 1) * (degree + 1))
{
  const double scale = 1.0 / static_cast<double>(2 * degree + 1);
  std::vector<double> log_cn(degree + 1);
  for (std::size_t i = 0; i <= degree; ++i)
    log_cn[i] = log_binomial(degree, i);
  for (std::size_t i = 0; i <= degree; ++i) {
    for (std::size_t j = i; j <= degree; ++j) {
      double g =
        scale * std::exp(log_cn[i] + log_cn[j] - log_binomial(2 * degree, i + j));
      entries_[i * (degree + 1) + j] = g;
      entries_[j * (degree + 1) + i] = g;
    }
  }
}

double GramMatrix::quadratic_form(std::span<const double> d) const
{
  if (d.size() != degree_ + 1)
    throw std::domain_error("GramMatrix: vector length does not match degree");
  double sum = 0.0;
  for (std::size_t i = 0; i <= degree_; ++i) {
    if (d[i] == 0.0)
      continue;
    double row = 0.0;
    for (std::size_t j = 0; j <= degree_; ++j)
      row += entries_[i * (degree_ + 1) + j] * d[j];
    sum += d[i] * row;
  }
  return std::max(sum, 0.0);
}

std::shared_ptr<const GramMatrix> gram_matrix(std::size_t degree)
{
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const GramMatrix>> cache;

  std::lock_guard lock(mutex);
  auto& slot = cache[degree];
  if (!slot)
    slot = std::make_shared<const GramMatrix>(degree);
  return slot;
}

double l2_norm_diff(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size() || a.empty())
    throw std::domain_error("l2_norm_diff: degree mismatch");
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    d[k] = a[k] - b[k];
  return std::sqrt(gram_matrix(a.size() - 1)->quadratic_form(d));
}

double l2_norm_diff(const BernsteinPoly& a, const BernsteinPoly& b)
{
  return l2_norm_diff(a.coefficients(), b.coefficients());
}

std::vector<std::pair<double, double>> sample_curve(const BernsteinPoly& p,
                                                    std::size_t grid_size)
{
  if (grid_size < 2)
    throw std::invalid_argument("sample_curve: grid_size must be at least 2");
  std::vector<std::pair<double, double>> out;
  out.reserve(grid_size);
  const auto last = static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    double x = static_cast<double>(i) / last;
    out.emplace_back(x, eval_de_casteljau(p, x));
  }
  return out;
}

} // namespace relpoly
