#ifndef PYENT_HARNESS_HPP
#define PYENT_HARNESS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "pyent/estimate.hpp"
#include "pyent/population.hpp"
#include "pyent/random.hpp"

// Replicated sampling study: for every (scenario, N, replication) cell a
// fresh population is generated, sampled, and handed (unlabeled) to each
// estimator; squared errors are aggregated into per-(scenario, N, method)
// MSE rows. Every cell derives its own seed from the master seed, so the
// result is a pure function of the config and is bitwise identical no
// matter how many worker threads execute it.

namespace pyent {

struct ScenarioSpec {
  std::string id;
  PopulationSpec population;
};

struct SimulationConfig {
  std::vector<ScenarioSpec> scenarios;
  std::vector<std::int64_t> sample_sizes;
  std::int64_t replications = 1;
  std::uint64_t master_seed = 0;
  std::vector<MethodSpec> estimators;
  std::int64_t truncation_n = kDefaultTruncation;
};

struct SimulationRow {
  std::string scenario;
  std::int64_t n;
  std::string method;
  double mse;
  double bias;
  double variance;
  std::int64_t reps;  // replications that produced a value
  std::uint64_t seed; // master seed of the run
};

struct SimulationResult {
  std::vector<SimulationRow> rows;
};

inline SimulationResult run_simulation(const SimulationConfig& cfg, int threads = 1,
                                       std::ostream* progress = nullptr) {
  if (cfg.scenarios.empty() || cfg.sample_sizes.empty() || cfg.estimators.empty() ||
      cfg.replications < 1)
    throw std::invalid_argument("run_simulation: empty config");
  if (threads < 1) threads = 1;

  const std::size_t n_scen = cfg.scenarios.size();
  const std::size_t n_sizes = cfg.sample_sizes.size();
  const std::size_t n_meth = cfg.estimators.size();
  const std::size_t reps = std::size_t(cfg.replications);
  const std::size_t cells = n_scen * n_sizes * reps;

  // errors[(((scen * n_sizes) + size) * reps + rep) * n_meth + m]
  std::vector<double> errors(cells * n_meth,
                             std::numeric_limits<double>::quiet_NaN());

  const auto run_cell = [&](std::size_t task) {
    const std::size_t rep = task % reps;
    const std::size_t size_i = (task / reps) % n_sizes;
    const std::size_t scen_i = task / (reps * n_sizes);
    const ScenarioSpec& scen = cfg.scenarios[scen_i];
    const std::int64_t n = cfg.sample_sizes[size_i];

    Rng rng(derive_seed(cfg.master_seed, scen.id, std::uint64_t(n), rep));
    const ProbabilityVector p = gen_population(scen.population, rng);
    const double h_true = shannon_entropy(p);
    const FrequencyVector y = sample_counts(p, n, rng);

    double* slot = errors.data() + task * n_meth;
    for (std::size_t m = 0; m < n_meth; ++m) {
      try {
        slot[m] = estimate_entropy(y, cfg.estimators[m], {}, cfg.truncation_n).value -
                  h_true;
      } catch (const std::exception&) {
        // missing cell; the aggregate skips it
      }
    }
  };

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  const std::size_t report_every = cells > 20 ? cells / 20 : 1;
  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= cells) return;
      run_cell(task);
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress && d % report_every == 0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "[sim] %zu/%zu cells\n", d, cells);
        *progress << buf << std::flush;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // canonical-order reduction
  SimulationResult result;
  for (std::size_t scen_i = 0; scen_i < n_scen; ++scen_i)
    for (std::size_t size_i = 0; size_i < n_sizes; ++size_i)
      for (std::size_t m = 0; m < n_meth; ++m) {
        KahanAccumulator<double> sum, sum_sq;
        std::int64_t ok = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const double e =
              errors[(((scen_i * n_sizes) + size_i) * reps + rep) * n_meth + m];
          if (std::isnan(e)) continue;
          sum.add(e);
          sum_sq.add(e * e);
          ++ok;
        }
        SimulationRow row;
        row.scenario = cfg.scenarios[scen_i].id;
        row.n = cfg.sample_sizes[size_i];
        row.method = cfg.estimators[m].label();
        row.reps = ok;
        row.seed = cfg.master_seed;
        if (ok > 0) {
          const double bias = sum.value() / double(ok);
          KahanAccumulator<double> var;
          for (std::size_t rep = 0; rep < reps; ++rep) {
            const double e =
                errors[(((scen_i * n_sizes) + size_i) * reps + rep) * n_meth + m];
            if (!std::isnan(e)) var.add((e - bias) * (e - bias));
          }
          row.bias = bias;
          row.mse = sum_sq.value() / double(ok);
          row.variance = var.value() / double(ok);
        } else {
          row.bias = row.mse = row.variance =
              std::numeric_limits<double>::quiet_NaN();
        }
        result.rows.push_back(std::move(row));
      }
  return result;
}

/// RFC 4180 field quoting: quote when the field contains a comma, a quote
/// or a line break, doubling embedded quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv(const SimulationResult& result, std::ostream& os) {
  os << "scenario,N,method,mse,bias,variance,reps,seed\n";
  char num[3][32];
  for (const SimulationRow& r : result.rows) {
    std::snprintf(num[0], sizeof num[0], "%.15g", r.mse);
    std::snprintf(num[1], sizeof num[1], "%.15g", r.bias);
    std::snprintf(num[2], sizeof num[2], "%.15g", r.variance);
    os << csv_field(r.scenario) << ',' << r.n << ',' << csv_field(r.method) << ','
       << num[0] << ',' << num[1] << ',' << num[2] << ',' << r.reps << ','
       << r.seed << '\n';
  }
}

}  // namespace pyent

#endif  // PYENT_HARNESS_HPP
