#include "relpoly/design.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "relpoly/random.hpp"

namespace relpoly {

namespace {

std::vector<double> with_knot(const PartialCoefficients& pc,
                              std::size_t k,
                              double beta)
{
  auto knots = pc.knots();
  auto pos = std::lower_bound(
    knots.begin(), knots.end(), k,
    [](const auto& knot, std::size_t key) { return knot.first < key; });
  knots.insert(pos, { k, beta });
  return interpolate_knots(pc.degree(), knots);
}

} // namespace

std::vector<CandidateScore> score_candidates(const PartialCoefficients& pc,
                                             SelectionMode mode,
                                             const BernsteinPoly* truth)
{
  if (mode == SelectionMode::oracle_informed) {
    if (!truth)
      throw std::invalid_argument(
        "oracle_informed scoring needs the true coefficients");
    if (truth->degree() != pc.degree())
      throw std::domain_error("truth degree does not match the estimate");
  }

  std::vector<CandidateScore> out;
  const BoundsPair current =
    mode == SelectionMode::bound_gap ? bounds(pc) : BoundsPair{};
  for (std::size_t k : pc.unknown_indices()) {
    double score = 0.0;
    if (mode == SelectionMode::oracle_informed) {
      score = l2_norm_diff(truth->coefficients(), with_knot(pc, k, (*truth)[k]));
    } else {
      const double lo = current.lower[k];
      const double hi = current.upper[k];
      for (double v : { lo, 0.5 * (lo + hi), hi }) {
        PartialCoefficients next = pc;
        next.add_measurement(k, v);
        score += bound_gap(next);
      }
      score /= 3.0;
    }
    out.push_back({ k, score, 0 });
  }

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.score < b.score || (a.score == b.score && a.k < b.k);
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].rank = i + 1;
  return out;
}

std::uint64_t implied_trials(double beta, double std_error)
{
  if (!(std_error > 0.0))
    return 1;
  double t = std::round(beta * (1.0 - beta) / (std_error * std_error));
  return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
}

namespace {

struct Sampled
{
  std::size_t k;
  double beta;
  double std_error;
};

double resample(Rng& rng, const Sampled& s, double clamp_width)
{
  const std::uint64_t trials = implied_trials(s.beta, s.std_error);
  std::binomial_distribution<std::int64_t> draw(
    static_cast<std::int64_t>(trials), std::clamp(s.beta, 0.0, 1.0));
  double v = static_cast<double>(draw(rng)) / static_cast<double>(trials);
  const double half = clamp_width * s.std_error;
  return std::clamp(v, std::max(0.0, s.beta - half), std::min(1.0, s.beta + half));
}

} // namespace

LikelihoodResult log_likelihood(const PartialCoefficients& pc,
                                const LikelihoodConfig& cfg,
                                std::uint64_t seed,
                                const CoefficientData* reference)
{
  if (cfg.n_samples < 2)
    throw std::invalid_argument("log_likelihood: need at least two samples");
  if (!(cfg.clamp_width > 0.0))
    throw std::invalid_argument("log_likelihood: clamp width must be positive");

  const std::size_t n = pc.degree();
  const bool use_reference = cfg.data == LikelihoodConfig::Data::reference;
  if (use_reference) {
    if (!reference)
      throw std::invalid_argument("log_likelihood: reference data requested but missing");
    if (reference->degree() != n || reference->std_error.size() != n + 1)
      throw std::domain_error("log_likelihood: reference degree mismatch");
  }

  std::vector<Sampled> sampled;
  if (use_reference) {
    for (std::size_t k = 0; k <= n; ++k) {
      if (reference->std_error[k] > 0.0)
        sampled.push_back({ k, reference->beta[k], reference->std_error[k] });
    }
  } else {
    for (const auto& [k, beta] : pc.knots()) {
      double se = pc.known_stderr(k);
      if (se > 0.0)
        sampled.push_back({ k, beta, se });
    }
  }

  Rng rng(seed);
  std::vector<std::vector<double>> draws;
  draws.reserve(cfg.n_samples);
  for (std::size_t s = 0; s < cfg.n_samples; ++s) {
    if (use_reference) {
      std::vector<double> v = reference->beta;
      for (const auto& e : sampled)
        v[e.k] = resample(rng, e, cfg.clamp_width);
      draws.push_back(std::move(v));
    } else {
      auto knots = pc.knots();
      for (const auto& e : sampled) {
        auto it = std::find_if(knots.begin(), knots.end(),
                               [&](const auto& kn) { return kn.first == e.k; });
        it->second = resample(rng, e, cfg.clamp_width);
      }
      draws.push_back(interpolate_knots(n, knots));
    }
  }

  std::vector<double> mean(n + 1, 0.0);
  for (const auto& v : draws) {
    for (std::size_t k = 0; k <= n; ++k)
      mean[k] += v[k];
  }
  for (auto& m : mean)
    m /= static_cast<double>(cfg.n_samples);

  // spread of the resampled coefficients only
  const double dof = static_cast<double>(cfg.n_samples - 1);
  std::vector<double> sd(n + 1, 0.0);
  double pooled = 0.0;
  for (const auto& e : sampled) {
    double ss = 0.0;
    for (const auto& v : draws)
      ss += (v[e.k] - mean[e.k]) * (v[e.k] - mean[e.k]);
    sd[e.k] = std::sqrt(ss / dof);
    pooled += ss;
  }

  LikelihoodResult r;
  if (sampled.empty() || pooled == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.sigma = std::sqrt(pooled / (dof * static_cast<double>(sampled.size())));

  const BernsteinPoly estimate = interpolate(pc);
  std::vector<double> d(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    d[k] = estimate[k] - mean[k];
    if (cfg.sigma == LikelihoodConfig::Sigma::per_coefficient)
      d[k] /= sd[k] > 0.0 ? sd[k] : r.sigma;
    else
      d[k] /= r.sigma;
  }
  r.log_likelihood = -0.5 * gram_matrix(n)->quadratic_form(d);
  return r;
}

double aic(std::size_t p_unknown, double log_likelihood)
{
  return 2.0 * static_cast<double>(p_unknown) - 2.0 * log_likelihood;
}

double bic(std::size_t p_unknown, double log_likelihood, std::size_t n_points)
{
  if (n_points < 1)
    throw std::invalid_argument("bic: need at least one point");
  return std::log(static_cast<double>(n_points)) *
           static_cast<double>(p_unknown) -
         2.0 * log_likelihood;
}

std::string to_string(StopReason r)
{
  switch (r) {
    case StopReason::budget_exhausted:
      return "budget_exhausted";
    case StopReason::all_measured:
      return "all_measured";
    case StopReason::info_below_cost:
      return "info_below_cost";
    case StopReason::gap_below_tol:
      return "gap_below_tol";
  }
  return "unknown";
}

std::string to_string(SelectionMode m)
{
  return m == SelectionMode::bound_gap ? "bound-gap" : "oracle-informed";
}

std::string to_string(Criterion c)
{
  return c == Criterion::aic ? "aic" : "bic";
}

namespace {

void fill_state(StepRecord& rec,
                const PartialCoefficients& pc,
                const DesignConfig& cfg,
                const CoefficientData* truth)
{
  const BernsteinPoly estimate = interpolate(pc);
  if (truth)
    rec.l2_vs_truth = l2_norm_diff(truth->beta, estimate.coefficients());
  rec.bound_gap = bound_gap(pc);
  LikelihoodResult lr =
    log_likelihood(pc, cfg.likelihood, derive_seed(cfg.seed, rec.m), truth);
  rec.log_likelihood = lr.log_likelihood;
  rec.sigma = lr.sigma;
  rec.degenerate_likelihood = lr.degenerate;
  const std::size_t p = pc.unknown_count();
  rec.aic = aic(p, lr.log_likelihood);
  rec.bic = bic(p, lr.log_likelihood, pc.degree());
}

} // namespace

DesignTrace run_design_loop(PartialCoefficients& pc,
                            MeasurementSource& oracle,
                            const DesignConfig& cfg,
                            const CoefficientData* truth,
                            const StepObserver& observer)
{
  if (!pc.monotone())
    throw UnsupportedError("design loop needs monotone coefficients for its bounds");
  if (cfg.stop.gap_tol < 0.0 || (cfg.stop.cost_bits && *cfg.stop.cost_bits < 0.0))
    throw std::invalid_argument("stopping thresholds must be >= 0");
  if (truth && truth->degree() != pc.degree())
    throw std::domain_error("truth degree does not match the estimate");
  if (cfg.likelihood.data == LikelihoodConfig::Data::reference && !truth)
    throw std::invalid_argument("reference likelihood needs a truth vector");

  std::optional<BernsteinPoly> truth_poly;
  if (truth)
    truth_poly = truth->poly();

  DesignTrace trace;
  fill_state(trace.initial, pc, cfg, truth);
  if (observer)
    observer(pc, trace.initial);

  auto stop_now = [&](const StepRecord& rec,
                      const StepRecord* prev) -> std::optional<StopReason> {
    if (pc.unknown_count() == 0)
      return StopReason::all_measured;
    if (rec.bound_gap < cfg.stop.gap_tol)
      return StopReason::gap_below_tol;
    if (prev && cfg.stop.cost_bits) {
      double gain = prev->criterion(cfg.stop.criterion) -
                    rec.criterion(cfg.stop.criterion);
      if (gain < *cfg.stop.cost_bits)
        return StopReason::info_below_cost;
    }
    if (cfg.stop.max_measurements && rec.m >= *cfg.stop.max_measurements)
      return StopReason::budget_exhausted;
    return std::nullopt;
  };

  trace.stop_reason = stop_now(trace.initial, nullptr);
  while (!trace.stop_reason) {
    auto ranked = score_candidates(pc, cfg.mode, truth_poly ? &*truth_poly : nullptr);
    const std::size_t k = ranked.front().k;

    BetaMeasurement meas;
    try {
      meas = oracle.measure(k);
      if (meas.k != k)
        throw std::runtime_error("oracle answered for k=" + std::to_string(meas.k));
      if (!(meas.beta >= 0.0 && meas.beta <= 1.0) || !(meas.std_error >= 0.0))
        throw std::runtime_error("oracle returned an invalid value");
    } catch (const std::exception& e) {
      throw DesignAborted(trace, "oracle failed at k=" + std::to_string(k) +
                                   ": " + e.what());
    }

    StepRecord rec;
    rec.m = trace.steps.size() + 1;
    rec.measured_k = k;
    rec.raw_beta = meas.beta;
    rec.std_error = meas.std_error;

    // Noisy values may fall outside what monotonicity allows; the envelope
    // is provable, so pull them back into it.
    const BoundsPair env = bounds(pc);
    rec.beta = std::clamp(meas.beta, env.lower[k], env.upper[k]);
    rec.clamped = rec.beta != meas.beta;
    pc.add_measurement(k, rec.beta, meas.std_error);

    fill_state(rec, pc, cfg, truth);
    trace.steps.push_back(rec);
    if (observer)
      observer(pc, rec);

    const StepRecord& prev =
      trace.steps.size() > 1 ? trace.steps[trace.steps.size() - 2] : trace.initial;
    trace.stop_reason = stop_now(rec, &prev);
  }
  return trace;
}

} // namespace relpoly
