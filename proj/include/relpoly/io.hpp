#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "relpoly/bernstein.hpp"
#include "relpoly/design.hpp"
#include "relpoly/estimator.hpp"
#include "relpoly/exact.hpp"
#include "relpoly/oracle.hpp"

namespace relpoly {

//! Shortest decimal text that reads back to the same double; independent
//! of the C locale.
std::string format_double(double v);

/// Contents of a beta file.
///
///     # comment
///     degree 7            (optional; else the largest k seen)
///     kmin 2 1/21 [stderr]
///     kmax 5 19/21 [stderr]
///     3 0.2 [stderr]      (k beta [stderr])
///
/// Values may be decimals or exact fractions p/q.
struct BetaFile
{
  struct Entry
  {
    std::size_t k = 0;
    Rational exact;
    double beta = 0.0;
    double std_error = 0.0;
  };

  std::optional<std::size_t> declared_degree;
  std::optional<Anchor> kmin;
  std::optional<Anchor> kmax;
  std::vector<Entry> entries;

  std::size_t degree() const;
  bool has_anchors() const { return kmin.has_value() && kmax.has_value(); }

  //! Anchors plus the entries strictly between them. Entries outside the
  //! anchors must agree with the implied 0/1 values.
  PartialCoefficients partial(bool monotone = true) const;
  //! Every coefficient 0..N, each listed exactly once.
  CoefficientData full() const;
  //! full() if there are no anchors, otherwise interpolate(partial()).
  BernsteinPoly curve() const;
};

BetaFile parse_beta_file(std::istream& in, const std::string& source = "<stream>");
BetaFile load_beta_file(const std::filesystem::path& path);

void write_beta_vector(std::ostream& out,
                       const BernsteinPoly& p,
                       const std::vector<double>* std_error = nullptr);
void write_partial(std::ostream& out, const PartialCoefficients& pc);
void write_measurement(std::ostream& out, const BetaMeasurement& m);

//! One real per line, ascending powers, '#' comments; exact rationals.
std::vector<Rational> parse_monomial_file(std::istream& in,
                                          const std::string& source = "<stream>");

//! Columns x,lower,estimate,upper[,truth] on an even grid.
void write_curves_csv(std::ostream& out,
                      const BoundsPair& bounds,
                      const BernsteinPoly& estimate,
                      const BernsteinPoly* truth,
                      std::size_t grid_size);

/// Plain-text trace, one record per line in the order
///   m k beta raw_beta stderr clamped l2_vs_truth bound_gap
///   log_likelihood sigma degenerate aic bic
/// with '-' for fields that do not apply; a final "# stop_reason" line.
void write_trace_text(std::ostream& out, const DesignTrace& trace);
nlohmann::json trace_to_json(const DesignTrace& trace);

//! Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

} // namespace relpoly
