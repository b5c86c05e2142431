#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <stdexcept>
#include <vector>

#include "relpoly/bernstein.hpp"

namespace relpoly {

//! Raised when an operation needs the monotone-coefficient guarantee and the
//! input does not carry it.
class UnsupportedError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

struct Anchor
{
  std::size_t k = 0;
  double beta = 0.0;
  double std_error = 0.0;
};

struct Measurement
{
  double beta = 0.0;
  double std_error = 0.0;
};

/// A degree-N coefficient vector known only in part.
///
/// Below k_min every coefficient is exactly 0 and above k_max exactly 1.
/// The two anchors themselves are known, and so is every entry of
/// `measured()`, all of which sit strictly between the anchors. With the
/// monotone flag set (coherent systems, where adding an edge can only help)
/// all known values must be non-decreasing in k.
class PartialCoefficients
{
public:
  PartialCoefficients(std::size_t degree,
                      Anchor lower,
                      Anchor upper,
                      bool monotone = true);

  std::size_t degree() const { return degree_; }
  const Anchor& lower_anchor() const { return lower_; }
  const Anchor& upper_anchor() const { return upper_; }
  std::size_t k_min() const { return lower_.k; }
  std::size_t k_max() const { return upper_.k; }
  bool monotone() const { return monotone_; }
  const std::map<std::size_t, Measurement>& measured() const
  {
    return measured_;
  }

  //! Throws std::invalid_argument if k is not an unknown interior index or
  //! the value would break monotonicity.
  void add_measurement(std::size_t k, double beta, double std_error = 0.0);

  //! Interior coefficients between the anchors: k_max - k_min - 1.
  std::size_t interior_count() const { return k_max() - k_min() - 1; }
  std::size_t unknown_count() const
  {
    return interior_count() - measured_.size();
  }
  std::vector<std::size_t> unknown_indices() const;
  //! (k, beta) for the anchors and every measurement, ascending in k.
  std::vector<std::pair<std::size_t, double>> knots() const;

  bool is_known(std::size_t k) const;
  //! Known value at k (implied 0/1, anchors, measurements); nullopt if unknown.
  std::optional<double> known_value(std::size_t k) const;
  //! Standard error attached to a known value (0 for implied entries).
  double known_stderr(std::size_t k) const;

private:
  void check_monotone_insert(std::size_t k, double beta) const;

  std::size_t degree_;
  Anchor lower_;
  Anchor upper_;
  bool monotone_;
  std::map<std::size_t, Measurement> measured_;
};

struct BoundsPair
{
  BernsteinPoly lower;
  BernsteinPoly upper;
};

//! Piecewise-linear (in k) completion of the known coefficients.
BernsteinPoly interpolate(const PartialCoefficients& pc);

//! Same completion from an explicit knot list (sorted by k; the first and
//! last knots play the role of the anchors). No monotonicity is required.
std::vector<double> interpolate_knots(
  std::size_t degree,
  std::span<const std::pair<std::size_t, double>> knots);

//! Monotone envelopes: lower_k = max known beta_j over j <= k,
//! upper_k = min known beta_j over j >= k.
BoundsPair bounds(const PartialCoefficients& pc);

//! L2 distance between the two envelope curves.
double bound_gap(const PartialCoefficients& pc);

//! Envelopes when every known value strictly inside (0,1) may be off by up
//! to eps in either direction.
BoundsPair widen_by_error(const PartialCoefficients& pc, double eps);

} // namespace relpoly
