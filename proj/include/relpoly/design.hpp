#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relpoly/bernstein.hpp"
#include "relpoly/estimator.hpp"
#include "relpoly/oracle.hpp"

namespace relpoly {

enum class SelectionMode
{
  bound_gap,       // uses only the provable envelopes
  oracle_informed  // needs the true coefficients; reference runs only
};

struct CandidateScore
{
  std::size_t k = 0;
  //! bound_gap mode: expected envelope gap after measuring k.
  //! oracle_informed mode: L2 distance to the truth after measuring k.
  double score = 0.0;
  std::size_t rank = 0; // 1 = best
};

/// A full coefficient vector with per-coefficient standard errors, e.g. a
/// high-precision Monte Carlo reference curve.
struct CoefficientData
{
  std::vector<double> beta;
  std::vector<double> std_error;

  std::size_t degree() const { return beta.size() - 1; }
  BernsteinPoly poly() const { return BernsteinPoly(beta); }
};

//! Ranks every unknown interior k, lowest score first; ties go to the
//! smaller k. Empty when nothing is unknown.
std::vector<CandidateScore> score_candidates(const PartialCoefficients& pc,
                                             SelectionMode mode,
                                             const BernsteinPoly* truth = nullptr);

struct LikelihoodConfig
{
  enum class Sigma
  {
    pooled,         // one scalar sd over all resampled coefficients
    per_coefficient // each difference scaled by its own sd
  };
  enum class Data
  {
    measurements, // resample the anchors and measurements, re-interpolate
    reference     // resample a full reference coefficient vector
  };

  std::size_t n_samples = 10;
  //! Resampled proportions are clamped to beta +- clamp_width * stderr.
  double clamp_width = 1.0;
  Sigma sigma = Sigma::pooled;
  Data data = Data::measurements;
};

struct LikelihoodResult
{
  double log_likelihood = 0.0; // ln L (<= 0)
  double sigma = 0.0;
  bool degenerate = false; // no sampling spread; ln L reported as 0
};

/// -ln L = 1/2 || f_hat - f_tilde ||^2 / sigma^2, where f_hat interpolates
/// the known coefficients and f_tilde is the mean of n_samples binomially
/// resampled coefficient vectors. Deterministic for a given seed.
LikelihoodResult log_likelihood(const PartialCoefficients& pc,
                                const LikelihoodConfig& cfg,
                                std::uint64_t seed,
                                const CoefficientData* reference = nullptr);

//! Binomial trial count implied by a proportion and its standard error.
std::uint64_t implied_trials(double beta, double std_error);

double aic(std::size_t p_unknown, double log_likelihood);
double bic(std::size_t p_unknown, double log_likelihood, std::size_t n_points);

enum class Criterion
{
  aic,
  bic
};

enum class StopReason
{
  budget_exhausted,
  all_measured,
  info_below_cost,
  gap_below_tol
};

std::string to_string(StopReason r);
std::string to_string(SelectionMode m);
std::string to_string(Criterion c);

struct StoppingConfig
{
  //! Minimum criterion improvement per measurement worth paying for.
  std::optional<double> cost_bits;
  double gap_tol = 0.0;
  std::optional<std::size_t> max_measurements;
  Criterion criterion = Criterion::aic;
};

struct DesignConfig
{
  SelectionMode mode = SelectionMode::bound_gap;
  StoppingConfig stop;
  LikelihoodConfig likelihood;
  std::uint64_t seed = 1;
};

struct StepRecord
{
  std::size_t m = 0;
  std::optional<std::size_t> measured_k; // empty for the m = 0 record
  double beta = 0.0;
  double std_error = 0.0;
  //! Oracle value pulled back into the current envelope.
  bool clamped = false;
  double raw_beta = 0.0;
  std::optional<double> l2_vs_truth;
  double bound_gap = 0.0;
  double log_likelihood = 0.0;
  double sigma = 0.0;
  bool degenerate_likelihood = false;
  double aic = 0.0;
  double bic = 0.0;

  double criterion(Criterion c) const { return c == Criterion::aic ? aic : bic; }
};

struct DesignTrace
{
  StepRecord initial;
  std::vector<StepRecord> steps;
  std::optional<StopReason> stop_reason;
};

//! Thrown when the oracle fails mid-run; carries everything recorded so far.
class DesignAborted : public std::runtime_error
{
public:
  DesignAborted(DesignTrace partial, const std::string& what)
    : std::runtime_error(what)
    , partial_(std::move(partial))
  {
  }
  const DesignTrace& partial() const { return partial_; }

private:
  DesignTrace partial_;
};

using StepObserver =
  std::function<void(const PartialCoefficients&, const StepRecord&)>;

/// Sequential design: score, measure the best candidate, update, record,
/// and stop on exhaustion, gap tolerance, information per cost, or budget.
///
/// `pc` is updated in place. The truth, when given, feeds l2_vs_truth, the
/// oracle_informed selector and (with Data::reference) the likelihood.
DesignTrace run_design_loop(PartialCoefficients& pc,
                            MeasurementSource& oracle,
                            const DesignConfig& cfg,
                            const CoefficientData* truth = nullptr,
                            const StepObserver& observer = {});

} // namespace relpoly
