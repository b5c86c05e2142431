#include "relpoly/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace relpoly {

std::string format_double(double v)
{
  if (v == 0.0)
    return "0"; // also folds -0
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::vector<std::string> tokens_of(std::string line)
{
  if (auto hash = line.find('#'); hash != std::string::npos)
    line.erase(hash);
  std::istringstream ls(line);
  std::vector<std::string> out;
  for (std::string t; ls >> t;)
    out.push_back(t);
  return out;
}

std::size_t parse_index(const std::string& t, const std::string& source, std::size_t lineno)
{
  std::size_t value = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ParseError(source, lineno, "expected a non-negative integer, got '" + t + "'");
  return value;
}

Rational parse_value(const std::string& t, const std::string& source, std::size_t lineno)
{
  try {
    return parse_rational(t);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, lineno, e.what());
  }
}

double parse_stderr(const std::vector<std::string>& tok,
                    std::size_t at,
                    const std::string& source,
                    std::size_t lineno)
{
  if (tok.size() <= at)
    return 0.0;
  double se = to_double(parse_value(tok[at], source, lineno));
  if (!(se >= 0.0))
    throw ParseError(source, lineno, "standard error must be >= 0");
  return se;
}

} // namespace

BetaFile parse_beta_file(std::istream& in, const std::string& source)
{
  BetaFile f;
  std::set<std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = tokens_of(line);
    if (tok.empty())
      continue;
    if (tok[0] == "degree") {
      if (tok.size() != 2)
        throw ParseError(source, lineno, "expected 'degree <N>'");
      f.declared_degree = parse_index(tok[1], source, lineno);
      continue;
    }
    if (tok[0] == "kmin" || tok[0] == "kmax") {
      if (tok.size() < 3 || tok.size() > 4)
        throw ParseError(source, lineno, "expected '" + tok[0] + " <k> <beta> [stderr]'");
      Anchor a{ parse_index(tok[1], source, lineno),
                to_double(parse_value(tok[2], source, lineno)),
                parse_stderr(tok, 3, source, lineno) };
      auto& slot = tok[0] == "kmin" ? f.kmin : f.kmax;
      if (slot)
        throw ParseError(source, lineno, "duplicate " + tok[0] + " line");
      slot = a;
      continue;
    }
    if (tok.size() < 2 || tok.size() > 3)
      throw ParseError(source, lineno, "expected '<k> <beta> [stderr]'");
    BetaFile::Entry e;
    e.k = parse_index(tok[0], source, lineno);
    e.exact = parse_value(tok[1], source, lineno);
    e.beta = to_double(e.exact);
    e.std_error = parse_stderr(tok, 2, source, lineno);
    if (!seen.insert(e.k).second)
      throw ParseError(source, lineno, "duplicate entry for k=" + std::to_string(e.k));
    f.entries.push_back(std::move(e));
  }
  if (f.entries.empty() && !f.kmin && !f.kmax)
    throw ParseError(source, lineno, "no coefficients");
  if (f.kmin.has_value() != f.kmax.has_value())
    throw ParseError(source, lineno, "kmin and kmax must be given together");
  if (f.declared_degree && f.degree() != *f.declared_degree)
    throw ParseError(source, lineno, "index exceeds the declared degree");
  return f;
}

BetaFile load_beta_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open beta file " + path.string());
  return parse_beta_file(in, path.string());
}

std::size_t BetaFile::degree() const
{
  std::size_t top = 0;
  for (const auto& e : entries)
    top = std::max(top, e.k);
  if (kmax)
    top = std::max(top, kmax->k);
  if (kmin)
    top = std::max(top, kmin->k);
  if (declared_degree)
    return std::max(top, *declared_degree);
  return top;
}

PartialCoefficients BetaFile::partial(bool monotone) const
{
  if (!has_anchors())
    throw std::invalid_argument("beta file has no kmin/kmax anchors");
  PartialCoefficients pc(degree(), *kmin, *kmax, monotone);
  for (const auto& e : entries) {
    if (e.k > kmin->k && e.k < kmax->k) {
      pc.add_measurement(e.k, e.beta, e.std_error);
    } else {
      auto implied = pc.known_value(e.k);
      if (implied && *implied != e.beta)
        throw std::invalid_argument("entry k=" + std::to_string(e.k) +
                                    " contradicts the anchors");
    }
  }
  return pc;
}

CoefficientData BetaFile::full() const
{
  const std::size_t n = degree();
  CoefficientData d;
  d.beta.assign(n + 1, 0.0);
  d.std_error.assign(n + 1, 0.0);
  std::vector<char> have(n + 1, 0);
  for (const auto& e : entries) {
    d.beta[e.k] = e.beta;
    d.std_error[e.k] = e.std_error;
    have[e.k] = 1;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    if (!have[k])
      throw std::invalid_argument("beta file lacks coefficient k=" + std::to_string(k));
  }
  return d;
}

BernsteinPoly BetaFile::curve() const
{
  if (has_anchors())
    return interpolate(partial());
  return BernsteinPoly(full().beta);
}

void write_beta_vector(std::ostream& out,
                       const BernsteinPoly& p,
                       const std::vector<double>* std_error)
{
  out << "degree " << p.degree() << '\n';
  for (std::size_t k = 0; k <= p.degree(); ++k) {
    out << k << ' ' << format_double(p[k]);
    if (std_error)
      out << ' ' << format_double((*std_error)[k]);
    out << '\n';
  }
}

void write_partial(std::ostream& out, const PartialCoefficients& pc)
{
  out << "degree " << pc.degree() << '\n';
  const auto& lo = pc.lower_anchor();
  const auto& hi = pc.upper_anchor();
  out << "kmin " << lo.k << ' ' << format_double(lo.beta) << ' '
      << format_double(lo.std_error) << '\n';
  out << "kmax " << hi.k << ' ' << format_double(hi.beta) << ' '
      << format_double(hi.std_error) << '\n';
  for (const auto& [k, m] : pc.measured())
    out << k << ' ' << format_double(m.beta) << ' ' << format_double(m.std_error)
        << '\n';
}

void write_measurement(std::ostream& out, const BetaMeasurement& m)
{
  out << m.k << ' ' << format_double(m.beta) << ' ' << format_double(m.std_error)
      << '\n';
}

std::vector<Rational> parse_monomial_file(std::istream& in, const std::string& source)
{
  std::vector<Rational> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = tokens_of(line);
    if (tok.empty())
      continue;
    if (tok.size() != 1)
      throw ParseError(source, lineno, "expected one coefficient per line");
    out.push_back(parse_value(tok[0], source, lineno));
  }
  if (out.empty())
    throw ParseError(source, lineno, "no coefficients");
  return out;
}

void write_curves_csv(std::ostream& out,
                      const BoundsPair& bounds,
                      const BernsteinPoly& estimate,
                      const BernsteinPoly* truth,
                      std::size_t grid_size)
{
  auto lower = sample_curve(bounds.lower, grid_size);
  auto upper = sample_curve(bounds.upper, grid_size);
  auto est = sample_curve(estimate, grid_size);
  std::vector<std::pair<double, double>> tr;
  if (truth)
    tr = sample_curve(*truth, grid_size);

  out << "x,lower,estimate,upper" << (truth ? ",truth" : "") << '\n';
  for (std::size_t i = 0; i < grid_size; ++i) {
    out << format_double(est[i].first) << ',' << format_double(lower[i].second)
        << ',' << format_double(est[i].second) << ','
        << format_double(upper[i].second);
    if (truth)
      out << ',' << format_double(tr[i].second);
    out << '\n';
  }
}

namespace {

void write_record(std::ostream& out, const StepRecord& r)
{
  auto opt = [](bool present, double v) {
    return present ? format_double(v) : std::string("-");
  };
  const bool step = r.measured_k.has_value();
  out << r.m << ' ' << (step ? std::to_string(*r.measured_k) : "-") << ' '
      << opt(step, r.beta) << ' ' << opt(step, r.raw_beta) << ' '
      << opt(step, r.std_error) << ' ' << (step ? (r.clamped ? "1" : "0") : "-")
      << ' ' << opt(r.l2_vs_truth.has_value(), r.l2_vs_truth.value_or(0.0)) << ' '
      << format_double(r.bound_gap) << ' ' << format_double(r.log_likelihood) << ' '
      << format_double(r.sigma) << ' ' << (r.degenerate_likelihood ? 1 : 0) << ' '
      << format_double(r.aic) << ' ' << format_double(r.bic) << '\n';
}

nlohmann::json record_json(const StepRecord& r)
{
  nlohmann::json j;
  j["m"] = r.m;
  if (r.measured_k) {
    j["k"] = *r.measured_k;
    j["beta"] = r.beta;
    j["raw_beta"] = r.raw_beta;
    j["stderr"] = r.std_error;
    j["clamped"] = r.clamped;
  }
  j["l2_vs_truth"] = r.l2_vs_truth ? nlohmann::json(*r.l2_vs_truth) : nlohmann::json();
  j["bound_gap"] = r.bound_gap;
  j["log_likelihood"] = r.log_likelihood;
  j["sigma"] = r.sigma;
  j["degenerate_likelihood"] = r.degenerate_likelihood;
  j["aic"] = r.aic;
  j["bic"] = r.bic;
  return j;
}

} // namespace

void write_trace_text(std::ostream& out, const DesignTrace& trace)
{
  out << "# m k beta raw_beta stderr clamped l2_vs_truth bound_gap "
         "log_likelihood sigma degenerate aic bic\n";
  write_record(out, trace.initial);
  for (const auto& s : trace.steps)
    write_record(out, s);
  out << "# stop_reason "
      << (trace.stop_reason ? to_string(*trace.stop_reason) : "aborted") << '\n';
}

nlohmann::json trace_to_json(const DesignTrace& trace)
{
  nlohmann::json j;
  j["initial"] = record_json(trace.initial);
  j["steps"] = nlohmann::json::array();
  for (const auto& s : trace.steps)
    j["steps"].push_back(record_json(s));
  j["stop_reason"] = trace.stop_reason ? nlohmann::json(to_string(*trace.stop_reason))
                                       : nlohmann::json();
  return j;
}

std::string sha256_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest init failed");
  std::array<char, 1 << 14> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

} // namespace relpoly
