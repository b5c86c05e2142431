#include "relpoly/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "relpoly/bernstein.hpp"
#include "relpoly/design.hpp"
#include "relpoly/estimator.hpp"
#include "relpoly/io.hpp"
#include "relpoly/oracle.hpp"
#include "relpoly/random.hpp"

#ifndef RELPOLY_VERSION
#define RELPOLY_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace relpoly::cli {

namespace {

struct GraphArgs
{
  std::string graph;
  bool directed = false;
  std::string rule = "st";
  std::size_t source = 0;
  std::optional<std::size_t> target;
  std::size_t threshold = 10;
};

void add_graph_options(CLI::App* sub, GraphArgs& g)
{
  sub->add_option("--graph", g.graph, "edge-list file")->required()->check(CLI::ExistingFile);
  sub->add_flag("--directed", g.directed, "treat edges as directed");
  sub->add_option("--rule", g.rule, "property rule")
    ->check(CLI::IsMember({ "st", "component", "largest" }))
    ->capture_default_str();
  sub->add_option("--source", g.source, "st rule: source vertex")->capture_default_str();
  sub->add_option("--target", g.target, "st rule: target vertex");
  sub->add_option("--threshold", g.threshold, "component rules: minimum component size")
    ->capture_default_str();
}

PropertyRule make_rule(const GraphArgs& g)
{
  if (g.rule == "st") {
    if (!g.target)
      throw std::invalid_argument("--rule st needs --target");
    return PropertyRule::st(g.source, *g.target);
  }
  if (g.rule == "component")
    return PropertyRule::component(g.threshold);
  return PropertyRule::largest(g.threshold);
}

void append_graph_args(std::vector<std::string>& a, const GraphArgs& g)
{
  a.insert(a.end(), { "--graph", g.graph, "--rule", g.rule });
  if (g.directed)
    a.push_back("--directed");
  if (g.rule == "st") {
    a.insert(a.end(), { "--source", std::to_string(g.source) });
    if (g.target)
      a.insert(a.end(), { "--target", std::to_string(*g.target) });
  } else {
    a.insert(a.end(), { "--threshold", std::to_string(g.threshold) });
  }
}

std::string utc_now()
{
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_text_file(const fs::path& path, const std::string& content)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write " + path.string());
  f << content;
}

// ---------------------------------------------------------------- convert

struct ConvertArgs
{
  std::string input;
  std::string output;
  std::optional<std::size_t> degree;
  bool invert = false;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err)
{
  std::ifstream in(a.input);
  if (!in)
    throw std::runtime_error("cannot open " + a.input);

  std::ostringstream body;
  double max_err = 0.0;
  if (!a.invert) {
    auto mono = parse_monomial_file(in, a.input);
    std::size_t degree = a.degree.value_or(mono.size() - 1);
    auto exact = monomial_to_bernstein(mono, degree);
    std::vector<double> beta;
    std::vector<Rational> rounded;
    for (const auto& b : exact) {
      beta.push_back(to_double(b));
      rounded.push_back(to_rational(beta.back()));
    }
    write_beta_vector(body, BernsteinPoly(beta));
    // what the double coefficients actually represent, back in powers of x
    auto back = bernstein_to_monomial(rounded);
    for (std::size_t i = 0; i < back.size(); ++i) {
      Rational want = i < mono.size() ? mono[i] : Rational(0);
      max_err = std::max(max_err, std::abs(to_double(back[i] - want)));
    }
  } else {
    BetaFile bf = parse_beta_file(in, a.input);
    BernsteinPoly p = bf.curve();
    std::vector<Rational> exact;
    for (double b : p.coefficients())
      exact.push_back(to_rational(b));
    auto mono = bernstein_to_monomial(exact);
    std::vector<Rational> rounded;
    for (const auto& c : mono) {
      double v = to_double(c);
      body << format_double(v) << '\n';
      rounded.push_back(to_rational(v));
    }
    auto back = monomial_to_bernstein(rounded, p.degree());
    for (std::size_t k = 0; k < back.size(); ++k)
      max_err = std::max(max_err, std::abs(to_double(back[k] - exact[k])));
  }

  if (a.output.empty()) {
    out << body.str();
    err << "max round-trip error: " << format_double(max_err) << '\n';
  } else {
    write_text_file(a.output, body.str());
    out << "max round-trip error: " << format_double(max_err) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- norm

int cmd_norm(const std::string& a, const std::string& b, std::ostream& out)
{
  BernsteinPoly pa = load_beta_file(a).curve();
  BernsteinPoly pb = load_beta_file(b).curve();
  if (pa.degree() != pb.degree())
    throw std::domain_error("degree mismatch: " + std::to_string(pa.degree()) +
                            " vs " + std::to_string(pb.degree()));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", l2_norm_diff(pa, pb));
  out << buf << '\n';
  return 0;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs
{
  std::string input;
  std::string output;
  std::string truth;
  double eps = 0.0;
  std::size_t grid = 101;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out)
{
  PartialCoefficients pc = load_beta_file(a.input).partial();
  BoundsPair b = widen_by_error(pc, a.eps);
  BernsteinPoly est = interpolate(pc);
  std::optional<BernsteinPoly> truth;
  if (!a.truth.empty())
    truth = load_beta_file(a.truth).curve();

  std::ostringstream csv;
  write_curves_csv(csv, b, est, truth ? &*truth : nullptr, a.grid);
  if (a.output.empty()) {
    out << csv.str();
  } else {
    write_text_file(a.output, csv.str());
    out << "bound_gap " << format_double(l2_norm_diff(b.upper, b.lower)) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs
{
  GraphArgs graph;
  std::optional<std::size_t> k;
  bool all = false;
  bool exact = false;
  std::uint64_t samples = 40000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t limit = default_exhaustive_limit;
  std::string output;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out)
{
  Graph g = load_graph(a.graph.graph, a.graph.directed);
  PropertyRule rule = make_rule(a.graph);
  rule.validate(g);
  if (a.all == a.k.has_value())
    throw std::invalid_argument("give exactly one of --k and --all");
  if (a.k && *a.k > g.edge_count())
    throw std::invalid_argument("--k exceeds the edge count");

  std::vector<std::size_t> ks;
  if (a.all) {
    for (std::size_t k = 0; k <= g.edge_count(); ++k)
      ks.push_back(k);
  } else {
    ks.push_back(*a.k);
  }

  std::ostringstream body;
  body << "# rule " << rule.describe() << ", edges " << g.edge_count() << '\n';
  if (a.exact) {
    auto beta = exact_beta_rational(g, rule, a.limit);
    body << "# exact enumeration\n";
    if (a.all)
      body << "degree " << g.edge_count() << '\n';
    for (auto k : ks)
      body << k << ' ' << beta[k].str() << " 0\n";
  } else {
    body << "# monte carlo, samples " << a.samples << ", seed " << a.seed
         << ", workers " << a.workers << " (stream seed per k derived from seed)\n";
    if (a.all)
      body << "degree " << g.edge_count() << '\n';
    for (auto k : ks) {
      McConfig cfg{ a.samples, derive_seed(a.seed, k), a.workers };
      write_measurement(body, mc_beta(g, rule, k, cfg));
    }
  }

  if (a.output.empty())
    out << body.str();
  else
    write_text_file(a.output, body.str());
  return 0;
}

// ---------------------------------------------------------------- anchors

struct AnchorArgs
{
  GraphArgs graph;
  bool exact = false;
  std::uint64_t samples = 40000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t limit = default_exhaustive_limit;
};

int cmd_anchors(const AnchorArgs& a, std::ostream& out)
{
  Graph g = load_graph(a.graph.graph, a.graph.directed);
  PropertyRule rule = make_rule(a.graph);
  AnchorResult r = find_anchors(g, rule, a.exact ? AnchorMethod::exact : AnchorMethod::mc_scan,
                                McConfig{ a.samples, a.seed, a.workers }, a.limit);
  if (r.degenerate) {
    out << "# degenerate: " << r.reason << '\n';
    return 0;
  }
  out << "degree " << g.edge_count() << '\n';
  out << "kmin " << r.lower.k << ' ' << format_double(r.lower.beta) << ' '
      << format_double(r.lower.std_error) << '\n';
  out << "kmax " << r.upper.k << ' ' << format_double(r.upper.beta) << ' '
      << format_double(r.upper.std_error) << '\n';
  return 0;
}

// ---------------------------------------------------------------- design

struct DesignArgs
{
  GraphArgs graph;
  std::optional<std::size_t> kmin;
  std::optional<double> beta_kmin;
  std::optional<std::size_t> kmax;
  std::optional<double> beta_kmax;
  std::string mode = "bound-gap";
  std::string truth;
  std::uint64_t samples = 40000;
  std::uint64_t anchor_samples = 0; // 0: same as --samples
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  double gap_tol = 0.0;
  std::optional<double> cost_bits;
  std::string criterion = "aic";
  std::optional<std::size_t> max_measurements;
  bool exact = false;
  std::size_t limit = default_exhaustive_limit;
  std::string likelihood_data = "measurements";
  std::string sigma = "pooled";
  std::size_t likelihood_samples = 10;
  double clamp_width = 1.0;
  std::size_t grid = 101;
  std::string out;
};

std::vector<std::string> canonical_args(const DesignArgs& a)
{
  auto num = [](double v) { return format_double(v); };
  std::vector<std::string> v{ "design" };
  append_graph_args(v, a.graph);
  if (a.kmin)
    v.insert(v.end(), { "--kmin", std::to_string(*a.kmin) });
  if (a.beta_kmin)
    v.insert(v.end(), { "--beta-kmin", num(*a.beta_kmin) });
  if (a.kmax)
    v.insert(v.end(), { "--kmax", std::to_string(*a.kmax) });
  if (a.beta_kmax)
    v.insert(v.end(), { "--beta-kmax", num(*a.beta_kmax) });
  v.insert(v.end(), { "--mode", a.mode });
  if (!a.truth.empty())
    v.insert(v.end(), { "--truth", a.truth });
  v.insert(v.end(), { "--samples", std::to_string(a.samples), "--anchor-samples",
                      std::to_string(a.anchor_samples), "--seed", std::to_string(a.seed),
                      "--workers", std::to_string(a.workers), "--gap-tol", num(a.gap_tol) });
  if (a.cost_bits)
    v.insert(v.end(), { "--cost-bits", num(*a.cost_bits) });
  v.insert(v.end(), { "--criterion", a.criterion });
  if (a.max_measurements)
    v.insert(v.end(), { "--max-measurements", std::to_string(*a.max_measurements) });
  if (a.exact)
    v.push_back("--exact");
  v.insert(v.end(), { "--exhaustive-limit", std::to_string(a.limit), "--likelihood-data",
                      a.likelihood_data, "--sigma", a.sigma, "--likelihood-samples",
                      std::to_string(a.likelihood_samples), "--clamp-width",
                      num(a.clamp_width), "--grid", std::to_string(a.grid), "--out", a.out });
  return v;
}

json config_json(const DesignArgs& a)
{
  auto opt = [](const auto& o) { return o ? json(*o) : json(); };
  return json{ { "graph", a.graph.graph },
               { "directed", a.graph.directed },
               { "rule", a.graph.rule },
               { "source", a.graph.source },
               { "target", opt(a.graph.target) },
               { "threshold", a.graph.threshold },
               { "kmin", opt(a.kmin) },
               { "beta_kmin", opt(a.beta_kmin) },
               { "kmax", opt(a.kmax) },
               { "beta_kmax", opt(a.beta_kmax) },
               { "mode", a.mode },
               { "truth", a.truth },
               { "samples", a.samples },
               { "anchor_samples", a.anchor_samples },
               { "workers", a.workers },
               { "gap_tol", a.gap_tol },
               { "cost_bits", opt(a.cost_bits) },
               { "criterion", a.criterion },
               { "max_measurements", opt(a.max_measurements) },
               { "exact", a.exact },
               { "exhaustive_limit", a.limit },
               { "likelihood_data", a.likelihood_data },
               { "sigma", a.sigma },
               { "likelihood_samples", a.likelihood_samples },
               { "clamp_width", a.clamp_width },
               { "grid", a.grid },
               { "out", a.out } };
}

Anchor resolve_anchor(std::size_t k,
                      std::optional<double> beta,
                      MeasurementSource& oracle)
{
  if (beta)
    return { k, *beta, 0.0 };
  BetaMeasurement m = oracle.measure(k);
  return { k, m.beta, m.std_error };
}

int cmd_design(const DesignArgs& a,
               const std::vector<std::string>& argv,
               std::ostream& out,
               std::ostream& err)
{
  json manifest;
  manifest["tool"] = "relpoly";
  manifest["version"] = RELPOLY_VERSION;
  manifest["command_line"] = argv;
  manifest["canonical_args"] = canonical_args(a);
  manifest["config"] = config_json(a);
  manifest["seeds"] = { { "seed", a.seed },
                        { "per_k_stream", "derive_seed(seed, k)" },
                        { "likelihood_stream", "derive_seed(seed, m)" } };
  manifest["started_at"] = utc_now();
  json inputs;
  inputs["graph"] = { { "path", a.graph.graph }, { "sha256", sha256_file(a.graph.graph) } };
  if (!a.truth.empty())
    inputs["truth"] = { { "path", a.truth }, { "sha256", sha256_file(a.truth) } };
  manifest["inputs"] = inputs;

  const fs::path dir(a.out);
  fs::create_directories(dir / "curves");

  auto finish = [&](const DesignTrace& trace, int status, const std::string& error) {
    std::ostringstream text;
    write_trace_text(text, trace);
    write_text_file(dir / "trace.txt", text.str());
    write_text_file(dir / "trace.json", trace_to_json(trace).dump(2) + "\n");
    manifest["finished_at"] = utc_now();
    manifest["stop_reason"] =
      trace.stop_reason ? json(to_string(*trace.stop_reason)) : json();
    manifest["exit_status"] = status;
    if (!error.empty())
      manifest["error"] = error;
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return status;
  };

  Graph g = load_graph(a.graph.graph, a.graph.directed);
  PropertyRule rule = make_rule(a.graph);
  rule.validate(g);

  std::unique_ptr<MeasurementSource> oracle;
  std::optional<CoefficientData> truth;
  if (a.exact) {
    auto exact = std::make_unique<ExactOracle>(g, rule, a.limit);
    CoefficientData d;
    auto c = exact->beta().coefficients();
    d.beta.assign(c.begin(), c.end());
    d.std_error.assign(d.beta.size(), 0.0);
    truth = std::move(d);
    oracle = std::move(exact);
  } else {
    oracle = std::make_unique<MonteCarloOracle>(g, rule, McConfig{ a.samples, a.seed, a.workers });
  }
  if (!a.truth.empty())
    truth = load_beta_file(a.truth).full();
  if (truth && truth->degree() != g.edge_count())
    throw std::domain_error("truth degree does not match the graph's edge count");

  Anchor lower;
  Anchor upper;
  if (a.kmin.has_value() != a.kmax.has_value())
    throw std::invalid_argument("--kmin and --kmax go together");
  if (a.kmin) {
    lower = resolve_anchor(*a.kmin, a.beta_kmin, *oracle);
    upper = resolve_anchor(*a.kmax, a.beta_kmax, *oracle);
  } else {
    const std::uint64_t scan = a.anchor_samples ? a.anchor_samples : a.samples;
    AnchorResult r = find_anchors(g, rule, a.exact ? AnchorMethod::exact : AnchorMethod::mc_scan,
                                  McConfig{ scan, a.seed, a.workers }, a.limit);
    if (r.degenerate)
      throw std::runtime_error("degenerate anchors: " + r.reason);
    lower = r.lower;
    upper = r.upper;
  }
  manifest["anchors"] = { { "kmin", lower.k }, { "beta_kmin", lower.beta },
                          { "kmax", upper.k }, { "beta_kmax", upper.beta } };

  PartialCoefficients pc(g.edge_count(), lower, upper, true);

  DesignConfig cfg;
  cfg.mode = a.mode == "oracle-informed" ? SelectionMode::oracle_informed
                                         : SelectionMode::bound_gap;
  cfg.seed = a.seed;
  cfg.stop.gap_tol = a.gap_tol;
  cfg.stop.cost_bits = a.cost_bits;
  cfg.stop.max_measurements = a.max_measurements;
  cfg.stop.criterion = a.criterion == "bic" ? Criterion::bic : Criterion::aic;
  cfg.likelihood.n_samples = a.likelihood_samples;
  cfg.likelihood.clamp_width = a.clamp_width;
  cfg.likelihood.sigma = a.sigma == "per-coefficient"
                           ? LikelihoodConfig::Sigma::per_coefficient
                           : LikelihoodConfig::Sigma::pooled;
  cfg.likelihood.data = a.likelihood_data == "reference" ? LikelihoodConfig::Data::reference
                                                         : LikelihoodConfig::Data::measurements;

  std::optional<BernsteinPoly> truth_poly;
  if (truth)
    truth_poly = truth->poly();
  auto observer = [&](const PartialCoefficients& state, const StepRecord& rec) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%03zu.csv", rec.m);
    std::ostringstream csv;
    write_curves_csv(csv, bounds(state), interpolate(state),
                     truth_poly ? &*truth_poly : nullptr, a.grid);
    write_text_file(dir / "curves" / name, csv.str());
  };

  DesignTrace trace;
  try {
    trace = run_design_loop(pc, *oracle, cfg, truth ? &*truth : nullptr, observer);
  } catch (const DesignAborted& e) {
    err << "design aborted: " << e.what() << '\n';
    std::ostringstream est;
    write_partial(est, pc);
    write_text_file(dir / "estimate.beta", est.str());
    return finish(e.partial(), 1, e.what());
  }

  std::ostringstream est;
  write_partial(est, pc);
  write_text_file(dir / "estimate.beta", est.str());

  const StepRecord& last = trace.steps.empty() ? trace.initial : trace.steps.back();
  out << "anchors k_min=" << lower.k << " k_max=" << upper.k << ", measured "
      << trace.steps.size() << ", stop " << to_string(*trace.stop_reason)
      << ", bound_gap " << format_double(last.bound_gap);
  if (last.l2_vs_truth)
    out << ", l2_vs_truth " << format_double(*last.l2_vs_truth);
  out << '\n';
  return finish(trace, 0, "");
}

void add_design_options(CLI::App* sub, DesignArgs& d)
{
  add_graph_options(sub, d.graph);
  sub->add_option("--kmin", d.kmin, "anchor index k_min (skips the anchor scan)");
  sub->add_option("--beta-kmin", d.beta_kmin, "beta at k_min (measured if omitted)");
  sub->add_option("--kmax", d.kmax, "anchor index k_max");
  sub->add_option("--beta-kmax", d.beta_kmax, "beta at k_max (measured if omitted)");
  sub->add_option("--mode", d.mode, "candidate selection")
    ->check(CLI::IsMember({ "bound-gap", "oracle-informed" }))
    ->capture_default_str();
  sub->add_option("--truth", d.truth, "reference beta file (full vector, optional stderr)")
    ->check(CLI::ExistingFile);
  sub->add_option("--samples", d.samples, "Monte Carlo samples per measurement")
    ->capture_default_str();
  sub->add_option("--anchor-samples", d.anchor_samples,
                  "samples per k for the anchor scan (0: --samples)")
    ->capture_default_str();
  sub->add_option("--seed", d.seed, "base seed")->capture_default_str();
  sub->add_option("--workers", d.workers, "Monte Carlo sample streams")->capture_default_str();
  sub->add_option("--gap-tol", d.gap_tol, "stop when the bound gap drops below this")
    ->capture_default_str();
  sub->add_option("--cost-bits", d.cost_bits,
                  "stop when a measurement improves the criterion by less than this");
  sub->add_option("--criterion", d.criterion, "information criterion for --cost-bits")
    ->check(CLI::IsMember({ "aic", "bic" }))
    ->capture_default_str();
  sub->add_option("--max-measurements", d.max_measurements, "measurement budget");
  sub->add_flag("--exact", d.exact, "exact enumeration oracle (small graphs)");
  sub->add_option("--exhaustive-limit", d.limit, "largest edge count for --exact")
    ->capture_default_str();
  sub->add_option("--likelihood-data", d.likelihood_data,
                  "resample the measurements or the --truth reference")
    ->check(CLI::IsMember({ "measurements", "reference" }))
    ->capture_default_str();
  sub->add_option("--sigma", d.sigma, "likelihood spread")
    ->check(CLI::IsMember({ "pooled", "per-coefficient" }))
    ->capture_default_str();
  sub->add_option("--likelihood-samples", d.likelihood_samples,
                  "resampled coefficient sets per likelihood")
    ->capture_default_str();
  sub->add_option("--clamp-width", d.clamp_width,
                  "resamples are clamped to beta +- width * stderr")
    ->capture_default_str();
  sub->add_option("--grid", d.grid, "points per CSV curve")->capture_default_str();
  sub->add_option("--out", d.out, "output directory")->required();
}

int cmd_replay(const std::string& manifest_path,
               const std::string& out_dir,
               std::ostream& out,
               std::ostream& err)
{
  std::ifstream in(manifest_path);
  if (!in)
    throw std::runtime_error("cannot open manifest " + manifest_path);
  json m = json::parse(in);
  for (const auto& [name, input] : m.at("inputs").items()) {
    std::string path = input.at("path");
    if (sha256_file(path) != input.at("sha256").get<std::string>())
      throw std::runtime_error("input '" + name + "' (" + path +
                               ") changed since the manifest was written");
  }
  auto args = m.at("canonical_args").get<std::vector<std::string>>();
  auto it = std::find(args.begin(), args.end(), "--out");
  if (it == args.end() || std::next(it) == args.end())
    throw std::runtime_error("manifest has no --out argument");
  *std::next(it) = out_dir;
  return run(args, out, err);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Adaptive Bernstein estimation of network reliability polynomials" };
  app.require_subcommand(1);
  const char* env = std::getenv(config_env);
  app.set_config("--config", env ? env : "", "flat key = value config file");

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "monomial coefficients to a beta file (or back)");
  c->add_option("input", convert.input, "input file")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--output", convert.output, "output file (default stdout)");
  c->add_option("--degree", convert.degree, "target Bernstein degree (>= polynomial degree)");
  c->add_flag("--invert", convert.invert, "beta file to monomial coefficients");

  std::string norm_a;
  std::string norm_b;
  auto* n = app.add_subcommand("norm", "L2 distance between two beta files");
  n->add_option("a", norm_a)->required()->check(CLI::ExistingFile);
  n->add_option("b", norm_b)->required()->check(CLI::ExistingFile);

  BoundsArgs bargs;
  auto* b = app.add_subcommand("bounds", "envelope and estimate curves for a partial beta file");
  b->add_option("input", bargs.input)->required()->check(CLI::ExistingFile);
  b->add_option("-o,--output", bargs.output, "CSV file (default stdout)");
  b->add_option("--truth", bargs.truth, "reference beta file")->check(CLI::ExistingFile);
  b->add_option("--eps", bargs.eps, "widen every measured value by +-eps")->capture_default_str();
  b->add_option("--grid", bargs.grid)->capture_default_str();

  OracleArgs oargs;
  auto* o = app.add_subcommand("oracle", "measure beta_k on a graph");
  add_graph_options(o, oargs.graph);
  o->add_option("--k", oargs.k, "single coefficient");
  o->add_flag("--all", oargs.all, "every coefficient 0..N");
  o->add_flag("--exact", oargs.exact, "exact enumeration");
  o->add_option("--samples", oargs.samples)->capture_default_str();
  o->add_option("--seed", oargs.seed)->capture_default_str();
  o->add_option("--workers", oargs.workers)->capture_default_str();
  o->add_option("--exhaustive-limit", oargs.limit)->capture_default_str();
  o->add_option("-o,--output", oargs.output, "beta file (default stdout)");

  AnchorArgs aargs;
  auto* an = app.add_subcommand("anchors", "locate k_min and k_max");
  add_graph_options(an, aargs.graph);
  an->add_flag("--exact", aargs.exact, "exact enumeration instead of a Monte Carlo scan");
  an->add_option("--samples", aargs.samples)->capture_default_str();
  an->add_option("--seed", aargs.seed)->capture_default_str();
  an->add_option("--workers", aargs.workers)->capture_default_str();
  an->add_option("--exhaustive-limit", aargs.limit)->capture_default_str();

  DesignArgs dargs;
  auto* d = app.add_subcommand("design", "run the sequential design loop");
  add_design_options(d, dargs);

  std::string manifest;
  std::string replay_out;
  auto* r = app.add_subcommand("replay", "rerun a design from its manifest");
  r->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  r->add_option("--out", replay_out, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*c)
      return cmd_convert(convert, out, err);
    if (*n)
      return cmd_norm(norm_a, norm_b, out);
    if (*b)
      return cmd_bounds(bargs, out);
    if (*o)
      return cmd_oracle(oargs, out);
    if (*an)
      return cmd_anchors(aargs, out);
    if (*d)
      return cmd_design(dargs, args, out, err);
    if (*r)
      return cmd_replay(manifest, replay_out, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace relpoly::cli
