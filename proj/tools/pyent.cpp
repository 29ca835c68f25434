// pyent: entropy estimation for frequency data with unseen species.
//
// Subcommands: estimate, select, pmf, simulate, curves. Exit codes: 0 on
// success, 2 on input/config parse failure, 3 on invalid method or
// parameters.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pyent/estimate.hpp"
#include "pyent/harness.hpp"
#include "pyent/io.hpp"
#include "pyent/population.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Round through 15 significant digits so JSON numbers match the text output.
double r15(double v) { return std::strtod(fmt15(v).c_str(), nullptr); }

pyent::CountsFormat parse_counts_format(const std::string& s) {
  if (s == "lines") return pyent::CountsFormat::lines;
  if (s == "csv") return pyent::CountsFormat::csv;
  throw pyent::ParseError("unknown input format '" + s + "'");
}

nlohmann::json selection_json(const pyent::SelectionDiagnostics& diag) {
  nlohmann::json j;
  j["rule"] = diag.rule == pyent::SelectionRule::large_sample_default
                  ? "large_sample_default"
                  : "upper_bound_argmin";
  j["coverage"] = {{"c0", r15(diag.coverage.c0_hat)},
                   {"c1", r15(diag.coverage.c1_hat)},
                   {"c01", r15(diag.coverage.c01_hat)},
                   {"k", r15(diag.coverage.k_hat)},
                   {"f", r15(diag.coverage.f_hat)}};
  nlohmann::json cands = nlohmann::json::array();
  for (const pyent::Candidate& c : diag.candidates) {
    nlohmann::json jc = {{"label", pyent::to_string(c.label)},
                         {"d", r15(c.params.d)},
                         {"alpha", r15(c.params.alpha)}};
    if (c.objective) jc["objective"] = r15(*c.objective);
    cands.push_back(jc);
  }
  j["candidates"] = cands;
  j["selected"] = diag.selected;
  return j;
}

void print_selection_text(const pyent::SelectionDiagnostics& diag) {
  std::printf("rule: %s\n", diag.rule == pyent::SelectionRule::large_sample_default
                                ? "large_sample_default"
                                : "upper_bound_argmin");
  std::printf("coverage: c0=%s c1=%s k=%s f=%s\n", fmt15(diag.coverage.c0_hat).c_str(),
              fmt15(diag.coverage.c1_hat).c_str(), fmt15(diag.coverage.k_hat).c_str(),
              fmt15(diag.coverage.f_hat).c_str());
  std::printf("candidates:\n");
  for (std::size_t i = 0; i < diag.candidates.size(); ++i) {
    const pyent::Candidate& c = diag.candidates[i];
    std::printf("  %c %-22s d=%-22s alpha=%-22s %s\n",
                i == diag.selected ? '*' : ' ', pyent::to_string(c.label),
                fmt15(c.params.d).c_str(), fmt15(c.params.alpha).c_str(),
                c.objective ? ("f=" + fmt15(*c.objective)).c_str() : "");
  }
}

int cmd_estimate(const std::string& file, const std::string& input_format,
                 const std::string& method, double d, double alpha, bool has_params,
                 std::int64_t truncation, const std::string& format, bool bits) {
  pyent::MethodSpec spec;
  try {
    if (method == "mle") {
      spec = {pyent::Method::mle, {}};
    } else if (method == "miller-madow" || method == "miller_madow") {
      spec = {pyent::Method::miller_madow, {}};
    } else if (method == "chao-shen" || method == "chao_shen") {
      spec = {pyent::Method::chao_shen, {}};
    } else if (method == "proposed") {
      spec = {pyent::Method::proposed, {}};
    } else if (method == "dpym") {
      if (!has_params) {
        std::cerr << "error: --method dpym requires --d and --alpha\n";
        return kExitInvalid;
      }
      spec = {pyent::Method::dpym_fixed, pyent::PyParams(d, alpha)};
    } else {
      std::cerr << "error: unknown method '" << method << "'\n";
      return kExitInvalid;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    const pyent::CountArray raw =
        pyent::read_counts_file(file, parse_counts_format(input_format));
    std::int64_t dropped = 0;
    const pyent::FrequencyVector y = pyent::frequency_from_counts(raw, &dropped);
    if (dropped > 0)
      std::cerr << "note: dropped " << dropped << " zero count(s) (unobserved labels)\n";
    const pyent::EntropyEstimate est = pyent::estimate_entropy(y, spec, {}, truncation);

    if (format == "json") {
      nlohmann::json j;
      j["method"] = spec.label();
      j["entropy_nats"] = r15(est.value);
      if (bits) j["entropy_bits"] = r15(est.value / std::log(2.0));
      j["N"] = y.sample_size();
      j["T"] = y.species();
      j["m1"] = y.singletons();
      if (est.params_used) {
        j["d"] = r15(est.params_used->d);
        j["alpha"] = r15(est.params_used->alpha);
      }
      if (est.truncation_n) j["truncation_n"] = *est.truncation_n;
      if (est.remainder_bound) j["remainder_bound"] = r15(*est.remainder_bound);
      if (est.selection) j["selection"] = selection_json(*est.selection);
      std::cout << j.dump(2) << "\n";
    } else {
      std::printf("method: %s\n", spec.label().c_str());
      std::printf("entropy_nats: %s\n", fmt15(est.value).c_str());
      if (bits)
        std::printf("entropy_bits: %s\n", fmt15(est.value / std::log(2.0)).c_str());
      std::printf("N: %lld\nT: %lld\nm1: %lld\n",
                  static_cast<long long>(y.sample_size()),
                  static_cast<long long>(y.species()),
                  static_cast<long long>(y.singletons()));
      if (est.params_used)
        std::printf("d: %s\nalpha: %s\n", fmt15(est.params_used->d).c_str(),
                    fmt15(est.params_used->alpha).c_str());
      if (est.selection) print_selection_text(*est.selection);
    }
    return 0;
  } catch (const pyent::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_select(const std::string& file, const std::string& input_format,
               const std::string& format) {
  try {
    const pyent::CountArray raw =
        pyent::read_counts_file(file, parse_counts_format(input_format));
    std::int64_t dropped = 0;
    const pyent::FrequencyVector y = pyent::frequency_from_counts(raw, &dropped);
    if (dropped > 0)
      std::cerr << "note: dropped " << dropped << " zero count(s) (unobserved labels)\n";
    const pyent::SelectionResult sel = pyent::select_params(y);
    if (format == "json") {
      nlohmann::json j = selection_json(sel.diagnostics);
      j["d"] = r15(sel.params.d);
      j["alpha"] = r15(sel.params.alpha);
      std::cout << j.dump(2) << "\n";
    } else {
      print_selection_text(sel.diagnostics);
      std::printf("selected: d=%s alpha=%s\n", fmt15(sel.params.d).c_str(),
                  fmt15(sel.params.alpha).c_str());
    }
    return 0;
  } catch (const pyent::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_pmf(double d, double alpha, std::int64_t k_max) {
  try {
    const pyent::PyParams p(d, alpha);
    if (k_max < 1) throw std::invalid_argument("k-max must be >= 1");
    std::printf("k,pmf\n");
    for (std::int64_t k = 1; k <= k_max; ++k)
      std::printf("%lld,%s\n", static_cast<long long>(k),
                  fmt15(pyent::mpy_pmf(p, k)).c_str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 int threads, bool dry_run, bool has_seed, std::uint64_t seed) {
  pyent::SimulationConfig cfg;
  try {
    cfg = pyent::load_simulation_config(config_path);
  } catch (const pyent::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  if (has_seed) cfg.master_seed = seed;
  if (dry_run) {
    std::cerr << "config ok: " << cfg.scenarios.size() << " scenario(s), "
              << cfg.sample_sizes.size() << " sample size(s), " << cfg.replications
              << " replication(s), " << cfg.estimators.size() << " estimator(s)\n";
    return 0;
  }
  const pyent::SimulationResult result =
      pyent::run_simulation(cfg, threads, &std::cerr);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitParse;
  }
  pyent::write_csv(result, out);
  std::cerr << "wrote " << result.rows.size() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_curves(const std::string& kind, std::int64_t k, double a, double a_low,
               double a_high, double s, std::int64_t n, double d, double alpha_min,
               double alpha_max, std::int64_t alpha_steps, std::uint64_t seed) {
  try {
    pyent::PopulationSpec spec;
    if (kind == "dirichlet_symmetric")
      spec = pyent::PopulationSpec::dirichlet_symmetric(k, a);
    else if (kind == "dirichlet_mixed")
      spec = pyent::PopulationSpec::dirichlet_mixed(k, a_low, a_high);
    else if (kind == "zipf")
      spec = pyent::PopulationSpec::zipf(k, s);
    else {
      std::cerr << "error: unknown population kind '" << kind << "'\n";
      return kExitInvalid;
    }
    if (alpha_steps < 2) throw std::invalid_argument("alpha-steps must be >= 2");
    if (!(alpha_min > -1.0) || !(alpha_max > alpha_min))
      throw std::invalid_argument("need alpha_max > alpha_min > -1");

    pyent::Rng rng(seed);
    const pyent::ProbabilityVector p = pyent::gen_population(spec, rng);
    const pyent::CountArray labeled = pyent::sample_labeled_counts(p, n, rng);
    std::vector<double> grid(static_cast<std::size_t>(alpha_steps));
    for (std::int64_t i = 0; i < alpha_steps; ++i)
      grid[std::size_t(i)] =
          alpha_min + (alpha_max - alpha_min) * double(i) / double(alpha_steps - 1);
    const std::vector<pyent::CurvePoint> rows =
        pyent::curve_sweep(p, labeled, d, grid);
    std::printf("alpha,kl,bound_minus_entropy\n");
    for (const pyent::CurvePoint& r : rows)
      std::printf("%s,%s,%s\n", fmt15(r.alpha).c_str(), fmt15(r.kl).c_str(),
                  fmt15(r.bound_gap).c_str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shannon entropy estimation for samples with unseen species"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 1;
  std::string format = "text";
  app.add_option("--seed", seed, "Random seed (curves; overrides simulate config)")
      ->each([&](const std::string&) { has_seed = true; });
  app.add_option("--threads", threads, "Worker threads for simulate");
  app.add_option("--format", format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate entropy from a counts file");
  std::string file, input_format = "lines", method = "proposed";
  double d = 0.0, alpha = 0.0;
  std::int64_t truncation = pyent::kDefaultTruncation;
  bool bits = false;
  est->add_option("--file", file, "Counts file")->required();
  est->add_option("--input-format", input_format, "lines or csv")
      ->check(CLI::IsMember({"lines", "csv"}));
  est->add_option("--method", method,
                  "mle | miller-madow | chao-shen | dpym | proposed");
  auto* opt_d = est->add_option("--d", d, "Discount for --method dpym");
  auto* opt_a = est->add_option("--alpha", alpha, "Concentration for --method dpym");
  est->add_option("--truncation", truncation, "Tail truncation index");
  est->add_flag("--bits", bits, "Also report entropy in bits");

  // select
  auto* sel = app.add_subcommand("select", "Show hyperparameter selection diagnostics");
  std::string sel_file, sel_input_format = "lines";
  sel->add_option("--file", sel_file, "Counts file")->required();
  sel->add_option("--input-format", sel_input_format, "lines or csv")
      ->check(CLI::IsMember({"lines", "csv"}));

  // pmf
  auto* pmf = app.add_subcommand("pmf", "Emit the marginal PYP pmf as CSV");
  double pmf_d = 0.0, pmf_alpha = 1.0;
  std::int64_t k_max = 100;
  pmf->add_option("--d", pmf_d, "Discount")->required();
  pmf->add_option("--alpha", pmf_alpha, "Concentration")->required();
  pmf->add_option("--k-max", k_max, "Emit k = 1..k_max");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a replicated sampling study");
  std::string config_path, out_path = "results.csv";
  bool dry_run = false;
  sim->add_option("--config", config_path, "JSON config")->required();
  sim->add_option("--out", out_path, "Output CSV path");
  sim->add_flag("--dry-run", dry_run, "Validate the config and exit");

  // curves
  auto* cur = app.add_subcommand("curves", "KL divergence vs upper-bound gap sweep");
  std::string kind = "dirichlet_symmetric";
  std::int64_t cur_k = 500, cur_n = 100, alpha_steps = 200;
  double cur_a = 0.1, cur_a_low = 0.1, cur_a_high = 10.0, cur_s = 1.0;
  double cur_d = 0.0, alpha_min = 0.5, alpha_max = 1000.0;
  cur->add_option("--kind", kind, "dirichlet_symmetric | dirichlet_mixed | zipf");
  cur->add_option("--K", cur_k, "Population size");
  cur->add_option("--a", cur_a, "Dirichlet parameter");
  cur->add_option("--a-low", cur_a_low, "Mixed Dirichlet low parameter");
  cur->add_option("--a-high", cur_a_high, "Mixed Dirichlet high parameter");
  cur->add_option("--s", cur_s, "Zipf exponent");
  cur->add_option("--N", cur_n, "Sample size");
  cur->add_option("--d", cur_d, "Fixed discount");
  cur->add_option("--alpha-min", alpha_min, "Grid start");
  cur->add_option("--alpha-max", alpha_max, "Grid end");
  cur->add_option("--alpha-steps", alpha_steps, "Grid points");

  CLI11_PARSE(app, argc, argv);

  if (est->parsed())
    return cmd_estimate(file, input_format, method, d, alpha,
                        *opt_d && *opt_a, truncation, format, bits);
  if (sel->parsed()) return cmd_select(sel_file, sel_input_format, format);
  if (pmf->parsed()) return cmd_pmf(pmf_d, pmf_alpha, k_max);
  if (sim->parsed())
    return cmd_simulate(config_path, out_path, threads, dry_run, has_seed, seed);
  if (cur->parsed())
    return cmd_curves(kind, cur_k, cur_a, cur_a_low, cur_a_high, cur_s, cur_n, cur_d,
                      alpha_min, alpha_max, alpha_steps, seed);
  return 0;
}
