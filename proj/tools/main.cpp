#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svg_chart.hpp"
#include "unicr/certify.hpp"
#include "unicr/errors.hpp"
#include "unicr/metrics.hpp"
#include "unicr/noise_pdf.hpp"
#include "unicr/oracles.hpp"
#include "unicr/pdf_opt.hpp"
#include "unicr/smoothing.hpp"

namespace {

using nlohmann::json;
using namespace unicr;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

double parse_norm(const std::string& s) {
  std::string low = s;
  std::transform(low.begin(), low.end(), low.begin(), ::tolower);
  if (low == "inf" || low == "infinity") return kInf;
  const double p = std::stod(s);
  if (!(p > 0.0)) throw OutOfRange("norm must be > 0 or 'inf'");
  return p;
}

// "a:b:step" inclusive range, or a comma list, or a single value.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0) {
      throw OutOfRange("range must be lo:hi:step with step > 0, got '" + s + "'");
    }
    for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::fabs(hi)); v += step) out.push_back(v);
    return out;
  }
  std::stringstream in(s);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    std::string low = token;
    std::transform(low.begin(), low.end(), low.begin(), ::tolower);
    out.push_back(low == "inf" || low == "infinity" ? kInf : std::stod(token));
  }
  if (out.empty()) throw OutOfRange("empty value list: '" + s + "'");
  return out;
}

// Tabular output with a comment preamble carrying the effective config.
struct Table {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_config(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
  }

  std::string to_csv() const {
    std::ostringstream out;
    for (const auto& [k, v] : config) out << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return out.str();
  }

  std::string to_json() const {
    json doc;
    json cfg = json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    doc["config"] = cfg;
    json rows_json = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < header.size() && i < row.size(); ++i) obj[header[i]] = row[i];
      rows_json.push_back(obj);
    }
    doc["rows"] = rows_json;
    return doc.dump(2) + "\n";
  }
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
}

struct CommonOpts {
  std::uint64_t seed = 12345;
  bool as_json = false;
  std::string out = "-";
  std::string svg;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  if (const char* env = std::getenv("UNICR_SEED")) {
    opts.seed = std::strtoull(env, nullptr, 10);
  }
  cmd->add_option("--seed", opts.seed, "base seed for every sampler");
  cmd->add_flag("--json", opts.as_json, "emit JSON instead of CSV");
  cmd->add_option("--out", opts.out, "output path ('-' for stdout)");
  cmd->add_option("--svg", opts.svg, "also render an SVG chart to this path");
  cmd->add_option("--threads", opts.threads, "max worker threads (results are identical)");
}

struct CertifyOpts {
  std::size_t n_samples = 100000;
  double k_tolerance = 0.005;
  int iterations = 30;
  double lambda_max = 0.0;
  int particles = 16;
  int pso_iterations = 30;
  double init_magnitude = 0.1;
  double alpha0 = 0.0;
  double dkw_delta = 0.1;
};

void add_certify_opts(CLI::App* cmd, CertifyOpts& opts) {
  cmd->add_option("--n", opts.n_samples, "Monte Carlo samples per gap evaluation");
  cmd->add_option("--k-tol", opts.k_tolerance, "boundary gap tolerance");
  cmd->add_option("--iters", opts.iterations, "bisection iteration budget");
  cmd->add_option("--lambda-max", opts.lambda_max, "bracketing cap (0 = 50x noise RMS)");
  cmd->add_option("--particles", opts.particles, "PSO particle count");
  cmd->add_option("--pso-iters", opts.pso_iterations, "PSO iteration count");
  cmd->add_option("--init-mag", opts.init_magnitude, "PSO initial position magnitude");
  cmd->add_option("--alpha0", opts.alpha0, "probability-bound confidence level");
  cmd->add_option("--delta", opts.dkw_delta, "CDF concentration width for the confidence report");
}

ScalarSearchConfig make_scfg(const CertifyOpts& o, std::uint64_t seed) {
  ScalarSearchConfig cfg;
  cfg.n_samples = o.n_samples;
  cfg.k_tolerance = o.k_tolerance;
  cfg.max_iterations = o.iterations;
  cfg.lambda_max = o.lambda_max;
  cfg.base_seed = seed;
  return cfg;
}

PsoConfig make_pcfg(const CertifyOpts& o) {
  PsoConfig cfg;
  cfg.particles = o.particles;
  cfg.iterations = o.pso_iterations;
  cfg.init_magnitude = o.init_magnitude;
  return cfg;
}

void add_radius_config(Table& table, const std::string& command, const NoisePdf& pdf,
                       const CertifyOpts& opts, const CommonOpts& common) {
  table.add_config("command", command);
  table.add_config("pdf", to_spec_string(pdf));
  table.add_config("n_samples", fmt_u64(opts.n_samples));
  table.add_config("k_tolerance", fmt(opts.k_tolerance));
  table.add_config("iterations", fmt_u64(opts.iterations));
  table.add_config("lambda_max", fmt(opts.lambda_max));
  table.add_config("particles", fmt_u64(opts.particles));
  table.add_config("pso_iterations", fmt_u64(opts.pso_iterations));
  table.add_config("seed", fmt_u64(common.seed));
}

std::vector<std::string> radius_row(double p_a, const RadiusResult& r, const NoisePdf& pdf,
                                    const CertifyOpts& opts, std::uint64_t seed) {
  return {fmt(p_a),
          fmt(r.radius),
          fmt(r.norm_p),
          family_name(pdf.family),
          fmt(pdf.alpha),
          fmt(pdf.beta),
          fmt_u64(static_cast<std::uint64_t>(pdf.dim)),
          fmt_u64(opts.n_samples),
          fmt(opts.k_tolerance),
          fmt_u64(seed),
          fmt(r.confidence),
          status_name(r.status)};
}

const std::vector<std::string> kRadiusHeader = {
    "p_a",  "radius",    "norm_p",      "family", "alpha",      "beta",
    "dim",  "n_samples", "k_tolerance", "seed",   "confidence", "status"};

struct LabeledInput {
  std::vector<double> vector;
  int label = -1;
};

std::vector<LabeledInput> load_inputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutOfRange("cannot open inputs file: " + path);
  json doc;
  in >> doc;
  if (!doc.is_array()) throw OutOfRange("inputs file must hold a JSON array");
  std::vector<LabeledInput> inputs;
  for (const auto& entry : doc) {
    LabeledInput li;
    li.vector = entry.at("vector").get<std::vector<double>>();
    if (entry.contains("label")) li.label = entry.at("label").get<int>();
    inputs.push_back(std::move(li));
  }
  if (inputs.empty()) throw OutOfRange("inputs file holds no inputs");
  return inputs;
}

int finish(const Table& table, const CommonOpts& common, bool computed_ok) {
  write_output(common.out, common.as_json ? table.to_json() : table.to_csv());
  return computed_ok ? 0 : 2;
}

void maybe_svg(const CommonOpts& common, const cli::SvgChart& chart) {
  if (!common.svg.empty()) cli::write_svg(chart, common.svg);
}

// ---------------------------------------------------------------------------
// curve / radius

int run_curve(const std::string& command, const std::string& pdf_spec,
              const std::string& pa_spec, const std::string& norm_str, bool binary, double pb,
              const CertifyOpts& copts, const CommonOpts& common) {
  const NoisePdf pdf = parse_pdf_spec(pdf_spec);
  const double norm_p = parse_norm(norm_str);
  const std::vector<double> pas = parse_grid(pa_spec);
  const ScalarSearchConfig scfg = make_scfg(copts, common.seed);
  const PsoConfig pcfg = make_pcfg(copts);

  Table table;
  add_radius_config(table, command, pdf, copts, common);
  table.add_config("norm", fmt(norm_p));
  table.add_config("mode", binary ? "binary" : "two_class");
  if (!binary) table.add_config("p_b", fmt(pb));
  table.header = kRadiusHeader;

  cli::SvgChart chart;
  chart.title = "certified radius vs p_a";
  chart.x_label = "p_a";
  chart.y_label = "radius";
  chart.series.push_back({to_spec_string(pdf), {}});

  bool any_certified = false;
  for (double pa : pas) {
    const ProbabilityBounds bounds =
        binary ? ProbabilityBounds::binary_case(pa) : ProbabilityBounds::two_class(pa, pb);
    const RadiusResult r =
        certified_radius(pdf, bounds, norm_p, scfg, pcfg, copts.alpha0, copts.dkw_delta);
    any_certified |= r.status == CertifyStatus::Certified;
    table.rows.push_back(radius_row(pa, r, pdf, copts, common.seed));
    if (r.status == CertifyStatus::Certified) chart.series[0].points.emplace_back(pa, r.radius);
  }
  maybe_svg(common, chart);
  return finish(table, common, any_certified);
}

// ---------------------------------------------------------------------------
// radius-vs-p

int run_radius_vs_p(const std::string& pdf_spec, double pa, bool binary, double pb,
                    const std::string& p_list_str, const CertifyOpts& copts,
                    const CommonOpts& common) {
  const NoisePdf pdf = parse_pdf_spec(pdf_spec);
  const std::vector<double> p_list = parse_grid(p_list_str);
  const ProbabilityBounds bounds =
      binary ? ProbabilityBounds::binary_case(pa) : ProbabilityBounds::two_class(pa, pb);
  const auto results =
      radius_vs_p_curve(pdf, bounds, p_list, make_scfg(copts, common.seed), make_pcfg(copts));

  Table table;
  add_radius_config(table, "radius-vs-p", pdf, copts, common);
  table.add_config("p_a", fmt(pa));
  table.header = kRadiusHeader;
  cli::SvgChart chart;
  chart.title = "certified radius vs norm order p";
  chart.x_label = "p";
  chart.y_label = "radius";
  chart.series.push_back({to_spec_string(pdf), {}});

  bool any = false;
  for (const auto& [p, r] : results) {
    any |= r.status == CertifyStatus::Certified;
    table.rows.push_back(radius_row(pa, r, pdf, copts, common.seed));
    if (r.status == CertifyStatus::Certified && std::isfinite(p)) {
      chart.series[0].points.emplace_back(p, r.radius);
    }
  }
  maybe_svg(common, chart);
  return finish(table, common, any);
}

// ---------------------------------------------------------------------------
// certify (end to end over labeled inputs)

int run_certify(const std::string& classifier_path, const std::string& inputs_path,
                const std::string& pdf_spec, const std::string& norm_str, std::size_t n0,
                std::size_t n_pred, double alpha0, const CertifyOpts& copts,
                const CommonOpts& common) {
  const auto f = NearestPrototypeClassifier::from_json_file(classifier_path);
  const auto inputs = load_inputs(inputs_path);
  const NoisePdf pdf = parse_pdf_spec(pdf_spec);
  const double norm_p = parse_norm(norm_str);

  Table table;
  add_radius_config(table, "certify", pdf, copts, common);
  table.add_config("classifier", classifier_path);
  table.add_config("n0", fmt_u64(n0));
  table.add_config("n_pred", fmt_u64(n_pred));
  table.add_config("alpha0", fmt(alpha0));
  table.header = {"index",  "label",  "top_class",   "p_a_lower", "radius",     "norm_p",
                  "status", "n_samples", "k_tolerance", "seed",      "confidence", "correct"};

  bool any = false;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    McConfig mc;
    mc.n0 = n0;
    mc.n = n_pred;
    mc.alpha0 = alpha0;
    mc.seed = derive_seed(common.seed, 0xCE2ULL, i);
    ScalarSearchConfig scfg = make_scfg(copts, derive_seed(common.seed, 0xCE3ULL, i));
    const auto pred = smoothed_predict(f, inputs[i].vector, pdf, n0, n_pred, alpha0, mc.seed);
    const auto r = certify_input(f, inputs[i].vector, pdf, norm_p, mc, scfg, make_pcfg(copts));
    any |= r.status == CertifyStatus::Certified;
    const bool correct = inputs[i].label < 0 || pred.top_class == inputs[i].label;
    table.rows.push_back({fmt_u64(i), fmt_u64(static_cast<std::uint64_t>(
                                          inputs[i].label < 0 ? 0 : inputs[i].label)),
                          fmt_u64(static_cast<std::uint64_t>(pred.top_class)),
                          fmt(pred.p_a_lower), fmt(r.radius), fmt(r.norm_p), status_name(r.status),
                          fmt_u64(copts.n_samples), fmt(copts.k_tolerance), fmt_u64(mc.seed),
                          fmt(r.confidence), correct ? "1" : "0"});
  }
  return finish(table, common, any);
}

// ---------------------------------------------------------------------------
// copt

int run_copt(const std::string& classifier_path, const std::string& inputs_path,
             const std::string& family_str, int dim, const std::string& beta_range,
             const std::string& sigmas_str, const std::string& norm_str, std::size_t n0,
             std::size_t n_pred, double alpha0, const CertifyOpts& copts,
             const CommonOpts& common) {
  const auto f = NearestPrototypeClassifier::from_json_file(classifier_path);
  const auto inputs = load_inputs(inputs_path);
  const Family family = family_from_name(family_str);
  const double norm_p = parse_norm(norm_str);
  const std::vector<double> betas = parse_grid(beta_range);
  const std::vector<double> sigmas = parse_grid(sigmas_str);
  if (betas.size() < 2) throw OutOfRange("copt needs a beta grid of at least two points");

  NoisePdf base;
  base.family = family;
  base.dim = dim;
  base.beta = betas.front();
  base.alpha = 1.0;

  HyperParamSpace space;
  space.names = {"beta"};
  space.lows = {betas.front()};
  space.highs = {betas.back()};
  space.steps = {betas[1] - betas[0]};

  // Score of one sigma-normalized pdf: exact area under its own certified
  // accuracy curve over the labeled inputs.
  RadiusEvaluator evaluator = [&](const NoisePdf& pdf) -> std::optional<double> {
    std::vector<CertificationRecord> records;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      McConfig mc;
      mc.n0 = n0;
      mc.n = n_pred;
      mc.alpha0 = alpha0;
      mc.seed = derive_seed(common.seed, 0xC07ULL, i);
      ScalarSearchConfig scfg = make_scfg(copts, derive_seed(common.seed, 0xC08ULL, i));
      const auto pred = smoothed_predict(f, inputs[i].vector, pdf, n0, n_pred, alpha0, mc.seed);
      const auto r = certify_input(f, inputs[i].vector, pdf, norm_p, mc, scfg, make_pcfg(copts));
      CertificationRecord rec;
      rec.sigma_tag = sigma_equivalent_or_alpha(pdf);
      rec.prediction_correct =
          (inputs[i].label < 0 || pred.top_class == inputs[i].label) && !pred.abstained;
      rec.radius = r.status == CertifyStatus::Certified ? r.radius : 0.0;
      records.push_back(rec);
    }
    const AccuracyCurve curve = make_accuracy_curve(records, records.front().sigma_tag, true);
    const double r_max = curve.points.back().first;
    const std::vector<AccuracyCurve> one{curve};
    return robustness_score(one, std::max(r_max, 1e-12));
  };

  const CoptResult result = c_opt_grid(base, space, evaluator, sigmas);

  Table table;
  table.add_config("command", "copt");
  table.add_config("family", family_name(family));
  table.add_config("dim", fmt_u64(static_cast<std::uint64_t>(dim)));
  table.add_config("norm", fmt(norm_p));
  table.add_config("seed", fmt_u64(common.seed));
  table.add_config("best_beta", fmt(result.best_pdf.beta));
  table.add_config("best_alpha", fmt(result.best_pdf.alpha));
  table.add_config("best_score", fmt(result.best_score));
  table.header = {"beta", "alpha", "sigma", "score"};
  for (const auto& row : result.table) {
    table.rows.push_back({fmt(row.beta), fmt(row.alpha), fmt(row.sigma),
                          row.score ? fmt(*row.score) : "nan"});
  }
  std::cerr << "copt best: beta=" << fmt(result.best_pdf.beta)
            << " alpha=" << fmt(result.best_pdf.alpha) << " score=" << fmt(result.best_score)
            << "\n";
  return finish(table, common, true);
}

// ---------------------------------------------------------------------------
// iopt

int run_iopt(const std::string& classifier_path, const std::string& inputs_path,
             const std::string& pdf_spec, const std::string& beta_range,
             const std::string& alpha_range, const std::string& norm_str, std::size_t n0,
             std::size_t n_pred, double alpha0, bool require_consistency,
             const CertifyOpts& copts, const CommonOpts& common) {
  const auto f = NearestPrototypeClassifier::from_json_file(classifier_path);
  const auto inputs = load_inputs(inputs_path);
  const NoisePdf initial = parse_pdf_spec(pdf_spec);
  const double norm_p = parse_norm(norm_str);

  HyperParamSpace space;
  auto add_axis = [&space](const std::string& name, const std::string& range) {
    if (range.empty()) return;
    const auto grid = parse_grid(range);
    if (grid.size() < 2) throw OutOfRange("iopt " + name + " range needs lo:hi:step");
    space.names.push_back(name);
    space.lows.push_back(grid.front());
    space.highs.push_back(grid.back());
    space.steps.push_back(grid[1] - grid[0]);
  };
  add_axis("beta", beta_range);
  add_axis("alpha", alpha_range);
  if (space.names.empty()) throw OutOfRange("iopt needs --beta and/or --alpha ranges");

  Table table;
  table.add_config("command", "iopt");
  table.add_config("pdf0", to_spec_string(initial));
  table.add_config("norm", fmt(norm_p));
  table.add_config("seed", fmt_u64(common.seed));
  table.add_config("consistency", require_consistency ? "on" : "off");
  table.header = {"index",      "label",      "initial_radius", "final_radius",
                  "final_alpha", "final_beta", "steps",          "improved"};

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    McConfig mc;
    mc.n0 = n0;
    mc.n = n_pred;
    mc.alpha0 = alpha0;
    mc.seed = derive_seed(common.seed, 0x107ULL, i);
    const ScalarSearchConfig scfg = make_scfg(copts, derive_seed(common.seed, 0x108ULL, i));
    const PsoConfig pcfg = make_pcfg(copts);
    const std::vector<double>& x = inputs[i].vector;

    // Seeds stay fixed across probes so comparisons are paired.
    RadiusEvaluator evaluator = [&](const NoisePdf& pdf) -> std::optional<double> {
      const auto r = certify_input(f, x, pdf, norm_p, mc, scfg, pcfg);
      if (r.status != CertifyStatus::Certified) return std::nullopt;
      return r.radius;
    };
    std::function<bool(const NoisePdf&)> consistency;
    if (require_consistency) {
      const int base_label = f.classify(x);
      consistency = [&, base_label](const NoisePdf& pdf) {
        const auto pred = smoothed_predict(f, x, pdf, n0, n_pred, alpha0, mc.seed);
        return !pred.abstained && pred.top_class == base_label;
      };
    }

    const auto initial_value = evaluator(initial);
    const IOptResult result = i_opt_hill_climb(initial, space, evaluator, consistency);
    const double r0 = initial_value.value_or(0.0);
    const double r1 = result.trace.empty() ? r0 : result.best_value;
    table.rows.push_back({fmt_u64(i), fmt_u64(static_cast<std::uint64_t>(
                                          inputs[i].label < 0 ? 0 : inputs[i].label)),
                          fmt(r0), fmt(r1), fmt(result.best_pdf.alpha), fmt(result.best_pdf.beta),
                          fmt_u64(result.trace.size()), result.trace.empty() ? "0" : "1"});
  }
  return finish(table, common, true);
}

// ---------------------------------------------------------------------------
// score

int run_score(const std::string& records_path, double r_max, const std::string& radii_spec,
              const CommonOpts& common) {
  std::ifstream in(records_path);
  if (!in) throw OutOfRange("cannot open records file: " + records_path);
  std::vector<CertificationRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("radius", 0) == 0) continue;
    CertificationRecord rec;
    int correct = 0;
    if (std::sscanf(line.c_str(), "%lf,%d,%lf", &rec.radius, &correct, &rec.sigma_tag) != 3) {
      throw OutOfRange("records line is not 'radius,correct,sigma': '" + line + "'");
    }
    rec.prediction_correct = correct != 0;
    records.push_back(rec);
  }
  if (records.empty()) throw OutOfRange("records file holds no records");

  std::vector<double> sigmas;
  for (const auto& rec : records) {
    if (std::find(sigmas.begin(), sigmas.end(), rec.sigma_tag) == sigmas.end()) {
      sigmas.push_back(rec.sigma_tag);
    }
  }
  std::sort(sigmas.begin(), sigmas.end());
  std::vector<AccuracyCurve> curves;
  double max_radius = 0.0;
  for (double s : sigmas) {
    curves.push_back(make_accuracy_curve(records, s));
    max_radius = std::max(max_radius, curves.back().points.back().first);
  }
  if (r_max <= 0.0) r_max = max_radius;
  const double score = robustness_score(curves, std::max(r_max, 1e-12));

  Table table;
  table.add_config("command", "score");
  table.add_config("records", records_path);
  table.add_config("r_max", fmt(r_max));
  table.add_config("robustness_score", fmt(score));
  table.header = {"radius", "sigma", "accuracy"};
  const std::vector<double> radii = parse_grid(radii_spec);
  cli::SvgChart chart;
  chart.title = "certified accuracy vs radius";
  chart.x_label = "radius";
  chart.y_label = "accuracy";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    chart.series.push_back({"sigma=" + fmt(sigmas[c]), {}});
    for (double r : radii) {
      double acc = 0.0;
      for (const auto& [br, a] : curves[c].points) {
        if (br <= r) acc = a;
      }
      table.rows.push_back({fmt(r), fmt(sigmas[c]), fmt(acc)});
      chart.series.back().points.emplace_back(r, acc);
    }
  }
  for (double r : radii) {
    double env = 0.0;
    for (const auto& curve : curves) {
      double acc = 0.0;
      for (const auto& [br, a] : curve.points) {
        if (br <= r) acc = a;
      }
      env = std::max(env, acc);
    }
    table.rows.push_back({fmt(r), "envelope", fmt(env)});
  }
  maybe_svg(common, chart);
  return finish(table, common, true);
}

// ---------------------------------------------------------------------------
// validate

int run_validate(const std::string& pdf_spec, const std::string& norm_str,
                 const std::string& pa_spec, double gate, const CertifyOpts& copts,
                 const CommonOpts& common) {
  const NoisePdf pdf = parse_pdf_spec(pdf_spec);
  const double norm_p = parse_norm(norm_str);
  const std::vector<double> pas = parse_grid(pa_spec);
  const ScalarSearchConfig scfg = make_scfg(copts, common.seed);
  const PsoConfig pcfg = make_pcfg(copts);

  const bool gaussian_l2 = pdf.family == Family::Gaussian && norm_p == 2.0;
  const double sigma = sigma_equivalent_or_alpha(pdf);

  Table table;
  add_radius_config(table, "validate", pdf, copts, common);
  table.add_config("norm", fmt(norm_p));
  table.add_config("oracle", gaussian_l2 ? "cohen_gaussian_l2" : "one_d_boundary");
  table.header = {"p_a", "unicr_radius", "oracle_radius", "rel_dev", "status"};

  cli::SvgChart chart;
  chart.title = "tightness validation";
  chart.x_label = "p_a";
  chart.y_label = "radius";
  chart.series.push_back({"unicr", {}});
  chart.series.push_back({"oracle", {}});

  double max_dev = 0.0;
  bool any = false;
  for (double pa : pas) {
    const RadiusResult r = certified_radius(pdf, ProbabilityBounds::binary_case(pa), norm_p, scfg,
                                            pcfg, copts.alpha0, copts.dkw_delta);
    double oracle = std::numeric_limits<double>::quiet_NaN();
    if (gaussian_l2) {
      oracle = cohen_gaussian_l2(sigma, pa, 1.0 - pa);
    } else {
      oracle = one_d_boundary_oracle(pdf, pa, std::max(1e-3, sigma / 50.0));
    }
    double dev = std::numeric_limits<double>::quiet_NaN();
    if (r.status == CertifyStatus::Certified && oracle > 0.0) {
      dev = std::fabs(r.radius - oracle) / oracle;
      max_dev = std::max(max_dev, dev);
      any = true;
      chart.series[0].points.emplace_back(pa, r.radius);
      chart.series[1].points.emplace_back(pa, oracle);
    }
    table.rows.push_back({fmt(pa), fmt(r.radius), fmt(oracle), fmt(dev), status_name(r.status)});
  }
  table.add_config("max_rel_dev", fmt(max_dev));
  table.add_config("gate", fmt(gate));
  table.add_config("verdict", any && max_dev <= gate ? "PASS" : "FAIL");
  std::cerr << "validate: max relative deviation " << fmt(max_dev) << " vs gate " << fmt(gate)
            << " -> " << (any && max_dev <= gate ? "PASS" : "FAIL") << "\n";
  maybe_svg(common, chart);
  return finish(table, common, any);
}

// ---------------------------------------------------------------------------
// config preprocessing

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutOfRange("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw OutOfRange("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw OutOfRange("config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_string()) {
      tokens.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      tokens.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      tokens.push_back(fmt(value.get<double>()));
    } else {
      throw OutOfRange("config key '" + key + "' must be a scalar");
    }
  }
  return tokens;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"universal certified-robustness radius approximation"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  // Shared state bound into every subcommand.
  CommonOpts common;
  CertifyOpts copts;

  std::string pdf_spec;
  std::string norm_str = "2";
  std::string pa_spec = "0.9";
  bool binary = false;
  double pb = 0.0;
  std::string p_list = "1,2,inf";
  std::string classifier_path;
  std::string inputs_path;
  std::string family_str = "general_normal";
  int dim = 8;
  std::string beta_range;
  std::string alpha_range;
  std::string sigmas_str = "0.5,1.0";
  std::size_t n0 = 100;
  std::size_t n_pred = 1000;
  double alpha0 = 0.001;
  bool require_consistency = false;
  std::string records_path;
  double r_max = 0.0;
  std::string radii_spec = "0:3:0.5";
  double gate = 0.05;
  std::uint64_t conf_n = 400;
  double conf_delta = 0.1;
  double conf_alpha0 = 0.001;
  std::string config_path;

  app.add_option("--config", config_path, "JSON config file mirroring the flags");

  auto* curve = app.add_subcommand("curve", "certified radius across a p_a grid");
  add_common(curve, common);
  add_certify_opts(curve, copts);
  curve->add_option("--pdf", pdf_spec, "noise pdf spec string")->required();
  curve->add_option("--norm", norm_str, "lp norm order (or 'inf')");
  curve->add_option("--pa", pa_spec, "p_a grid lo:hi:step or comma list");
  curve->add_flag("--binary", binary, "binary certification mode");
  curve->add_option("--pb", pb, "two-class p_b upper bound");

  auto* radius = app.add_subcommand("radius", "single certified radius query");
  add_common(radius, common);
  add_certify_opts(radius, copts);
  radius->add_option("--pdf", pdf_spec, "noise pdf spec string")->required();
  radius->add_option("--norm", norm_str, "lp norm order (or 'inf')");
  radius->add_option("--pa", pa_spec, "p_a lower bound")->required();
  radius->add_flag("--binary", binary, "binary certification mode");
  radius->add_option("--pb", pb, "two-class p_b upper bound");

  auto* rvp = app.add_subcommand("radius-vs-p", "certified radius across norm orders");
  add_common(rvp, common);
  add_certify_opts(rvp, copts);
  rvp->add_option("--pdf", pdf_spec, "noise pdf spec string")->required();
  rvp->add_option("--pa", pa_spec, "p_a lower bound");
  rvp->add_flag("--binary", binary, "binary certification mode");
  rvp->add_option("--pb", pb, "two-class p_b upper bound");
  rvp->add_option("--p-list", p_list, "comma list of norm orders (inf allowed)");

  auto* certify = app.add_subcommand("certify", "end-to-end certification of inputs");
  add_common(certify, common);
  add_certify_opts(certify, copts);
  certify->add_option("--classifier", classifier_path, "prototype classifier JSON")->required();
  certify->add_option("--inputs", inputs_path, "labeled inputs JSON")->required();
  certify->add_option("--pdf", pdf_spec, "noise pdf spec string")->required();
  certify->add_option("--norm", norm_str, "lp norm order (or 'inf')");
  certify->add_option("--n0", n0, "selection-pass sample count");
  certify->add_option("--n-pred", n_pred, "estimation-pass sample count");
  certify->add_option("--pred-alpha0", alpha0, "binomial bound confidence level");

  auto* copt = app.add_subcommand("copt", "grid search of noise hyper-parameters");
  add_common(copt, common);
  add_certify_opts(copt, copts);
  copt->add_option("--classifier", classifier_path, "prototype classifier JSON")->required();
  copt->add_option("--inputs", inputs_path, "labeled inputs JSON")->required();
  copt->add_option("--family", family_str, "noise family for the search");
  copt->add_option("--dim", dim, "input dimensionality");
  copt->add_option("--beta", beta_range, "beta grid lo:hi:step")->required();
  copt->add_option("--sigmas", sigmas_str, "comma list of noise RMS values");
  copt->add_option("--norm", norm_str, "lp norm order (or 'inf')");
  copt->add_option("--n0", n0, "selection-pass sample count");
  copt->add_option("--n-pred", n_pred, "estimation-pass sample count");
  copt->add_option("--pred-alpha0", alpha0, "binomial bound confidence level");

  auto* iopt = app.add_subcommand("iopt", "per-input noise hill climbing");
  add_common(iopt, common);
  add_certify_opts(iopt, copts);
  iopt->add_option("--classifier", classifier_path, "prototype classifier JSON")->required();
  iopt->add_option("--inputs", inputs_path, "labeled inputs JSON")->required();
  iopt->add_option("--pdf", pdf_spec, "initial noise pdf spec")->required();
  iopt->add_option("--beta", beta_range, "beta range lo:hi:step");
  iopt->add_option("--alpha", alpha_range, "alpha range lo:hi:step");
  iopt->add_option("--norm", norm_str, "lp norm order (or 'inf')");
  iopt->add_option("--n0", n0, "selection-pass sample count");
  iopt->add_option("--n-pred", n_pred, "estimation-pass sample count");
  iopt->add_option("--pred-alpha0", alpha0, "binomial bound confidence level");
  iopt->add_flag("--consistency", require_consistency,
                 "only accept noise keeping the smoothed prediction consistent");

  auto* score = app.add_subcommand("score", "robustness score of certification records");
  add_common(score, common);
  score->add_option("--records", records_path, "CSV of radius,correct,sigma rows")->required();
  score->add_option("--rmax", r_max, "integration upper limit (0 = largest radius)");
  score->add_option("--radii", radii_spec, "radius grid for the discrete table");

  auto* validate = app.add_subcommand("validate", "tightness validation against oracles");
  add_common(validate, common);
  add_certify_opts(validate, copts);
  validate->add_option("--pdf", pdf_spec, "noise pdf spec string")->required();
  validate->add_option("--norm", norm_str, "lp norm order (or 'inf')");
  validate->add_option("--pa", pa_spec, "p_a grid lo:hi:step or comma list");
  validate->add_option("--gate", gate, "maximum allowed relative deviation");

  auto* confidence = app.add_subcommand("confidence", "certification confidence report");
  add_common(confidence, common);
  confidence->add_option("--n", conf_n, "Monte Carlo sample count")->required();
  confidence->add_option("--delta", conf_delta, "CDF concentration width");
  confidence->add_option("--alpha0", conf_alpha0, "probability-bound confidence level");

  // Fold --config values in as tokens that user flags override.
  std::vector<std::string> tokens;
  try {
    std::string cfg_path;
    std::vector<std::string> raw;
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        cfg_path = argv[++i];
      } else if (arg.rfind("--config=", 0) == 0) {
        cfg_path = arg.substr(9);
      } else {
        raw.push_back(arg);
      }
    }
    tokens.push_back(argv[0]);
    if (!raw.empty() && !raw.front().empty() && raw.front()[0] != '-') {
      tokens.push_back(raw.front());
      if (!cfg_path.empty()) {
        for (auto& t : config_tokens(cfg_path)) tokens.push_back(t);
      }
      tokens.insert(tokens.end(), raw.begin() + 1, raw.end());
    } else {
      tokens.insert(tokens.end(), raw.begin(), raw.end());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<const char*> targv;
  targv.reserve(tokens.size());
  for (const auto& t : tokens) targv.push_back(t.c_str());

  try {
    app.parse(static_cast<int>(targv.size()), targv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  set_max_threads(common.threads);

  try {
    if (curve->parsed()) {
      return run_curve("curve", pdf_spec, pa_spec, norm_str, binary, pb, copts, common);
    }
    if (radius->parsed()) {
      return run_curve("radius", pdf_spec, pa_spec, norm_str, binary, pb, copts, common);
    }
    if (rvp->parsed()) {
      const auto pas = parse_grid(pa_spec);
      return run_radius_vs_p(pdf_spec, pas.front(), binary, pb, p_list, copts, common);
    }
    if (certify->parsed()) {
      return run_certify(classifier_path, inputs_path, pdf_spec, norm_str, n0, n_pred, alpha0,
                         copts, common);
    }
    if (copt->parsed()) {
      return run_copt(classifier_path, inputs_path, family_str, dim, beta_range, sigmas_str,
                      norm_str, n0, n_pred, alpha0, copts, common);
    }
    if (iopt->parsed()) {
      return run_iopt(classifier_path, inputs_path, pdf_spec, beta_range, alpha_range, norm_str,
                      n0, n_pred, alpha0, require_consistency, copts, common);
    }
    if (score->parsed()) {
      return run_score(records_path, r_max, radii_spec, common);
    }
    if (validate->parsed()) {
      return run_validate(pdf_spec, norm_str, pa_spec, gate, copts, common);
    }
    if (confidence->parsed()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.5f\n",
                    certification_confidence(conf_n, conf_delta, conf_alpha0));
      write_output(common.out, buf);
      return 0;
    }
  } catch (const InvalidPdf& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const OutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
