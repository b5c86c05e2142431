#include "relpoly/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relpoly {

PartialCoefficients::PartialCoefficients(std::size_t degree,
                                         Anchor lower,
                                         Anchor upper,
                                         bool monotone)
  : degree_(degree)
  , lower_(lower)
  , upper_(upper)
  , monotone_(monotone)
{
  if (!(lower_.k < upper_.k && upper_.k <= degree_))
    throw std::invalid_argument("anchors need k_min < k_max <= N (got k_min=" +
                                std::to_string(lower_.k) + ", k_max=" +
                                std::to_string(upper_.k) + ", N=" +
                                std::to_string(degree_) + ")");
  if (!(lower_.beta > 0.0 && lower_.beta <= 1.0))
    throw std::invalid_argument("beta at k_min must lie in (0,1]");
  if (!(upper_.beta >= 0.0 && upper_.beta < 1.0))
    throw std::invalid_argument("beta at k_max must lie in [0,1)");
  if (lower_.std_error < 0.0 || upper_.std_error < 0.0)
    throw std::invalid_argument("anchor standard error must be >= 0");
  if (monotone_ && lower_.beta > upper_.beta)
    throw std::invalid_argument(
      "monotone coefficients need beta(k_min) <= beta(k_max)");
}

bool PartialCoefficients::is_known(std::size_t k) const
{
  if (k > degree_)
    return false;
  if (k <= lower_.k || k >= upper_.k)
    return true;
  return measured_.count(k) != 0;
}

std::optional<double> PartialCoefficients::known_value(std::size_t k) const
{
  if (k > degree_)
    return std::nullopt;
  if (k < lower_.k)
    return 0.0;
  if (k > upper_.k)
    return 1.0;
  if (k == lower_.k)
    return lower_.beta;
  if (k == upper_.k)
    return upper_.beta;
  auto it = measured_.find(k);
  if (it == measured_.end())
    return std::nullopt;
  return it->second.beta;
}

double PartialCoefficients::known_stderr(std::size_t k) const
{
  if (k == lower_.k)
    return lower_.std_error;
  if (k == upper_.k)
    return upper_.std_error;
  auto it = measured_.find(k);
  return it == measured_.end() ? 0.0 : it->second.std_error;
}

std::vector<std::size_t> PartialCoefficients::unknown_indices() const
{
  std::vector<std::size_t> out;
  for (std::size_t k = lower_.k + 1; k < upper_.k; ++k) {
    if (!measured_.count(k))
      out.push_back(k);
  }
  return out;
}

void PartialCoefficients::check_monotone_insert(std::size_t k,
                                                double beta) const
{
  // nearest known neighbours on either side; anchors always exist
  double left = lower_.beta;
  double right = upper_.beta;
  auto it = measured_.lower_bound(k);
  if (it != measured_.end())
    right = it->second.beta;
  if (it != measured_.begin())
    left = std::prev(it)->second.beta;
  if (beta < left || beta > right)
    throw std::invalid_argument(
      "measurement beta_" + std::to_string(k) + " = " + std::to_string(beta) +
      " breaks monotonicity (neighbours " + std::to_string(left) + ", " +
      std::to_string(right) + ")");
}

void PartialCoefficients::add_measurement(std::size_t k,
                                          double beta,
                                          double std_error)
{
  if (k <= lower_.k || k >= upper_.k)
    throw std::invalid_argument("measurement at k=" + std::to_string(k) +
                                " is not strictly between the anchors");
  if (measured_.count(k))
    throw std::invalid_argument("k=" + std::to_string(k) +
                                " is already measured");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("measured beta must lie in [0,1]");
  if (!(std_error >= 0.0))
    throw std::invalid_argument("standard error must be >= 0");
  if (monotone_)
    check_monotone_insert(k, beta);
  measured_.emplace(k, Measurement{ beta, std_error });
}

std::vector<std::pair<std::size_t, double>> PartialCoefficients::knots() const
{
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(measured_.size() + 2);
  out.emplace_back(lower_.k, lower_.beta);
  for (const auto& [k, m] : measured_)
    out.emplace_back(k, m.beta);
  out.emplace_back(upper_.k, upper_.beta);
  return out;
}

std::vector<double> interpolate_knots(
  std::size_t degree,
  std::span<const std::pair<std::size_t, double>> knots)
{
  if (knots.size() < 2)
    throw std::invalid_argument("interpolate_knots: need at least two knots");
  std::vector<double> beta(degree + 1, 0.0);
  for (std::size_t k = knots.back().first + 1; k <= degree; ++k)
    beta[k] = 1.0;

  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const auto [k0, b0] = knots[s];
    const auto [k1, b1] = knots[s + 1];
    if (k1 <= k0 || k1 > degree)
      throw std::invalid_argument("interpolate_knots: knots must increase in k");
    const auto span = static_cast<double>(k1 - k0);
    beta[k0] = b0;
    for (std::size_t k = k0 + 1; k < k1; ++k)
      beta[k] = b0 + (b1 - b0) * static_cast<double>(k - k0) / span;
  }
  beta[knots.back().first] = knots.back().second;
  return beta;
}

BernsteinPoly interpolate(const PartialCoefficients& pc)
{
  return BernsteinPoly(interpolate_knots(pc.degree(), pc.knots()), true);
}

namespace {

void require_monotone(const PartialCoefficients& pc, const char* who)
{
  if (!pc.monotone())
    throw UnsupportedError(std::string(who) +
                           ": bounds need the monotone-coefficient flag");
}

// lower_k = max of lo_j over known j <= k; upper_k = min of hi_j over known
// j >= k. Unknown entries carry no information.
BoundsPair envelopes(const PartialCoefficients& pc,
                     const std::vector<std::optional<std::pair<double, double>>>&
                       intervals)
{
  const std::size_t n = pc.degree();
  std::vector<double> lower(n + 1);
  std::vector<double> upper(n + 1);

  double run = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (intervals[k])
      run = std::max(run, intervals[k]->first);
    lower[k] = run;
  }
  run = 1.0;
  for (std::size_t k = n + 1; k-- > 0;) {
    if (intervals[k])
      run = std::min(run, intervals[k]->second);
    upper[k] = run;
  }
  return { BernsteinPoly(std::move(lower), true),
           BernsteinPoly(std::move(upper), true) };
}

} // namespace

BoundsPair bounds(const PartialCoefficients& pc)
{
  return widen_by_error(pc, 0.0);
}

double bound_gap(const PartialCoefficients& pc)
{
  auto b = bounds(pc);
  return l2_norm_diff(b.upper, b.lower);
}

BoundsPair widen_by_error(const PartialCoefficients& pc, double eps)
{
  require_monotone(pc, "bounds");
  if (!(eps >= 0.0))
    throw std::invalid_argument("widen_by_error: eps must be >= 0");

  std::vector<std::optional<std::pair<double, double>>> intervals(pc.degree() +
                                                                  1);
  for (std::size_t k = 0; k <= pc.degree(); ++k) {
    auto v = pc.known_value(k);
    if (!v)
      continue;
    if (*v > 0.0 && *v < 1.0)
      intervals[k] = { std::max(0.0, *v - eps), std::min(1.0, *v + eps) };
    else
      intervals[k] = { *v, *v };
  }
  return envelopes(pc, intervals);
}

} // namespace relpoly
