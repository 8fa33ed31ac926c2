#include "core/nas.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>

#include "core/common.hpp"
#include "core/eval.hpp"
#include "core/rng.hpp"

namespace gtwnn {

namespace {

constexpr double kLengthScale = 0.3;
constexpr double kNoise = 1e-6;
constexpr std::int64_t kEnumerationCap = 20000;
constexpr std::int64_t kCandidatePool = 4096;
constexpr std::int64_t kSizeCap = int64_t{1} << 40;

using Key = std::vector<std::int64_t>;  // depth followed by per-layer widths

Key key_of(std::int64_t depth, const std::vector<std::int64_t>& neurons) {
  Key k;
  k.reserve(neurons.size() + 1);
  k.push_back(depth);
  k.insert(k.end(), neurons.begin(), neurons.end());
  return k;
}

// Normalized GP coordinates: depth slot plus one slot per possible layer,
// absent layers padded with zero. Configs of different depth always differ
// in the depth slot. Shared-width spaces collapse to two dimensions
// (depth, width).
std::vector<double> coords_of(const Key& key, const SearchSpace& space) {
  double layer_span = static_cast<double>(space.layers_max - space.layers_min);
  double neuron_span = static_cast<double>(space.neurons_max - space.neurons_min);
  double depth_norm =
      layer_span > 0.0 ? static_cast<double>(key[0] - space.layers_min) / layer_span : 0.0;
  auto neuron_norm = [&](std::int64_t n) {
    return neuron_span > 0.0 ? static_cast<double>(n - space.neurons_min) / neuron_span : 0.0;
  };
  if (!space.per_layer_neurons) {
    return {depth_norm, neuron_norm(key[1])};
  }
  std::vector<double> x(static_cast<std::size_t>(1 + space.layers_max), 0.0);
  x[0] = depth_norm;
  for (std::size_t i = 1; i < key.size(); ++i) {
    x[i] = neuron_norm(key[i]);
  }
  return x;
}

double se_kernel(const std::vector<double>& a, const std::vector<double>& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-d2 / (2.0 * kLengthScale * kLengthScale));
}

// In-place Cholesky of a row-major SPD matrix; false when not positive
// definite at this jitter level.
bool cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (d <= 0.0) return false;
    a[j * n + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / a[j * n + j];
    }
  }
  return true;
}

void solve_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
    b[i] = s / l[i * n + i];
  }
}

void solve_upper_from_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * b[k];
    b[ii] = s / l[ii * n + ii];
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
}

struct GpModel {
  std::vector<std::vector<double>> x;
  std::vector<double> chol;  // Cholesky factor of K + noise*I
  std::vector<double> alpha;
  double y_mean = 0.0;
  double y_sd = 1.0;
  double best_std = 0.0;  // standardized best (lowest) observation
  bool degenerate = false;

  void fit(const std::vector<std::vector<double>>& xs, const std::vector<double>& ys) {
    x = xs;
    std::size_t n = ys.size();
    y_mean = 0.0;
    for (double v : ys) y_mean += v;
    y_mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : ys) var += (v - y_mean) * (v - y_mean);
    var /= static_cast<double>(n);
    if (var == 0.0) {
      degenerate = true;
      return;
    }
    degenerate = false;
    y_sd = std::sqrt(var);
    std::vector<double> y_std(n);
    best_std = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
      y_std[i] = (ys[i] - y_mean) / y_sd;
      best_std = std::min(best_std, y_std[i]);
    }

    double jitter = kNoise;
    for (;;) {
      chol.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double k = se_kernel(x[i], x[j]);
          chol[i * n + j] = k;
          chol[j * n + i] = k;
        }
        chol[i * n + i] += jitter;
      }
      if (cholesky(chol, n)) break;
      jitter *= 10.0;
      if (jitter > 1e-2) {
        throw Error(ErrorKind::internal, "surrogate covariance is not positive definite");
      }
    }
    alpha = y_std;
    solve_lower(chol, n, alpha);
    solve_upper_from_lower(chol, n, alpha);
  }

  // Expected improvement (for minimization) at a candidate point; always
  // non-negative.
  double expected_improvement(const std::vector<double>& xc) const {
    if (degenerate) return 0.0;
    std::size_t n = x.size();
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = se_kernel(xc, x[i]);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += ks[i] * alpha[i];
    std::vector<double> v = ks;
    solve_lower(chol, n, v);
    double var = 1.0 + kNoise;
    for (double vi : v) var -= vi * vi;
    var = std::max(var, 1e-12);
    double sigma = std::sqrt(var);
    double z = (best_std - mu) / sigma;
    double ei = (best_std - mu) * normal_cdf(z) + sigma * normal_pdf(z);
    return std::max(ei, 0.0);
  }
};

Key random_key(Rng& rng, const SearchSpace& space) {
  std::int64_t depth =
      space.layers_min + static_cast<std::int64_t>(rng.uniform_below(
                             static_cast<std::uint64_t>(space.layers_max - space.layers_min + 1)));
  std::uint64_t neuron_span = static_cast<std::uint64_t>(space.neurons_max - space.neurons_min + 1);
  std::vector<std::int64_t> neurons(static_cast<std::size_t>(depth));
  if (space.per_layer_neurons) {
    for (auto& n : neurons) {
      n = space.neurons_min + static_cast<std::int64_t>(rng.uniform_below(neuron_span));
    }
  } else {
    std::int64_t n = space.neurons_min + static_cast<std::int64_t>(rng.uniform_below(neuron_span));
    std::fill(neurons.begin(), neurons.end(), n);
  }
  return key_of(depth, neurons);
}

// All configurations in deterministic order: depth ascending, widths
// lexicographic. Only called when the space fits the enumeration cap.
std::vector<Key> enumerate_space(const SearchSpace& space) {
  std::vector<Key> keys;
  for (std::int64_t d = space.layers_min; d <= space.layers_max; ++d) {
    if (space.per_layer_neurons) {
      std::vector<std::int64_t> neurons(static_cast<std::size_t>(d), space.neurons_min);
      for (;;) {
        keys.push_back(key_of(d, neurons));
        std::int64_t i = d - 1;
        while (i >= 0) {
          if (++neurons[static_cast<std::size_t>(i)] <= space.neurons_max) break;
          neurons[static_cast<std::size_t>(i)] = space.neurons_min;
          --i;
        }
        if (i < 0) break;
      }
    } else {
      for (std::int64_t n = space.neurons_min; n <= space.neurons_max; ++n) {
        keys.push_back(key_of(d, std::vector<std::int64_t>(static_cast<std::size_t>(d), n)));
      }
    }
  }
  return keys;
}

ArchitectureSpec spec_of(Arch kind, std::int64_t n_types, const Key& key) {
  ArchitectureSpec spec;
  spec.kind = kind;
  spec.hidden_layers = key[0];
  spec.neurons.assign(key.begin() + 1, key.end());
  spec.n_types = n_types;
  return spec;
}

}  // namespace

void SearchSpace::validate() const {
  if (layers_min < 1 || layers_max < layers_min) {
    throw Error(ErrorKind::invalid_argument, "layers range must satisfy 1 <= min <= max");
  }
  if (neurons_min < 1 || neurons_max < neurons_min) {
    throw Error(ErrorKind::invalid_argument, "neurons range must satisfy 1 <= min <= max");
  }
}

std::int64_t SearchSpace::size() const {
  std::int64_t widths = neurons_max - neurons_min + 1;
  std::int64_t total = 0;
  for (std::int64_t d = layers_min; d <= layers_max; ++d) {
    if (per_layer_neurons) {
      std::int64_t combos = 1;
      for (std::int64_t i = 0; i < d; ++i) {
        if (combos > kSizeCap / widths) return kSizeCap;
        combos *= widths;
      }
      if (total > kSizeCap - combos) return kSizeCap;
      total += combos;
    } else {
      total += widths;
    }
  }
  return total;
}

SearchSpace default_space(Arch kind) {
  SearchSpace space;
  auto [lo, hi] = arch_depth_range(kind);
  space.layers_min = lo;
  space.layers_max = hi;
  space.neurons_min = 1;
  space.neurons_max = 15;
  space.per_layer_neurons = true;
  return space;
}

std::int64_t min_trials_for_top_fraction(double p, double confidence) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "p must be in (0, 1)");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "confidence must be in (0, 1)");
  }
  double est = std::log1p(-confidence) / std::log1p(-p);
  std::int64_t n = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(std::floor(est))) - 2);
  while (1.0 - std::pow(1.0 - p, static_cast<double>(n)) < confidence) ++n;
  return n;
}

SearchLog bayes_search(Arch kind, std::int64_t n_types, const SearchSpace& space,
                       const ObjectiveFn& objective, std::int64_t budget, std::uint64_t seed) {
  space.validate();
  if (budget < 2) {
    throw Error(ErrorKind::invalid_argument, "search budget must be at least 2");
  }
  auto [depth_lo, depth_hi] = arch_depth_range(kind);
  if (space.layers_min < depth_lo || space.layers_max > depth_hi) {
    throw Error(ErrorKind::invalid_argument,
                "layers range [" + format_int(space.layers_min) + ", " +
                    format_int(space.layers_max) + "] outside [" + format_int(depth_lo) + ", " +
                    format_int(depth_hi) + "] for " + to_string(kind));
  }

  std::int64_t space_size = space.size();
  bool enumerable = space_size <= kEnumerationCap;
  std::vector<Key> all_keys;
  if (enumerable) all_keys = enumerate_space(space);

  SearchLog log;
  std::set<Key> evaluated;
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;

  auto run_trial = [&](const Key& key, std::uint64_t trial_seed) {
    auto t0 = std::chrono::steady_clock::now();
    ArchitectureSpec spec = spec_of(kind, n_types, key);
    ObjectiveValue value = objective(spec, trial_seed);
    auto t1 = std::chrono::steady_clock::now();
    if (!std::isfinite(value.objective) || value.objective < 0.0) {
      throw Error(ErrorKind::domain, "trial objective must be finite and non-negative");
    }
    TrialResult trial;
    trial.config = spec;
    trial.objective = value.objective;
    trial.mape = value.mape;
    trial.r2 = value.r2;
    trial.seed = trial_seed;
    trial.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    log.trials.push_back(std::move(trial));
    evaluated.insert(key);
    xs.push_back(coords_of(key, space));
    ys.push_back(value.objective);
  };

  Rng rng(derive_seed(seed, "nas"));

  if (budget >= space_size && enumerable) {
    for (const Key& key : all_keys) {
      run_trial(key, derive_seed(seed, "trial-" + format_int(static_cast<std::int64_t>(
                                               log.trials.size()))));
    }
  } else {
    std::int64_t n_init = std::min<std::int64_t>(8, budget);
    std::int64_t attempts = 0;
    while (static_cast<std::int64_t>(log.trials.size()) < n_init) {
      Key key = random_key(rng, space);
      if (evaluated.count(key)) {
        if (++attempts > 64 * n_init && enumerable) {
          for (const Key& k : all_keys) {
            if (!evaluated.count(k)) {
              key = k;
              break;
            }
          }
        } else if (evaluated.count(key)) {
          continue;
        }
      }
      run_trial(key, derive_seed(seed, "trial-" + format_int(static_cast<std::int64_t>(
                                               log.trials.size()))));
    }

    GpModel gp;
    while (static_cast<std::int64_t>(log.trials.size()) < budget) {
      gp.fit(xs, ys);

      std::vector<Key> candidates;
      if (enumerable) {
        for (const Key& k : all_keys) {
          if (!evaluated.count(k)) candidates.push_back(k);
        }
      } else {
        std::set<Key> pool;
        std::int64_t draws = 0;
        while (static_cast<std::int64_t>(pool.size()) < kCandidatePool &&
               draws < 4 * kCandidatePool) {
          Key k = random_key(rng, space);
          ++draws;
          if (!evaluated.count(k)) pool.insert(std::move(k));
        }
        candidates.assign(pool.begin(), pool.end());
      }
      if (candidates.empty()) break;

      std::size_t best_c = 0;
      double best_ei = -1.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        double ei = gp.expected_improvement(coords_of(candidates[i], space));
        if (ei > best_ei) {
          best_ei = ei;
          best_c = i;
        }
      }
      run_trial(candidates[best_c],
                derive_seed(seed, "trial-" + format_int(static_cast<std::int64_t>(
                                      log.trials.size()))));
    }
  }

  log.best_index = 0;
  for (std::size_t i = 1; i < log.trials.size(); ++i) {
    if (log.trials[i].objective < log.trials[log.best_index].objective) log.best_index = i;
  }
  return log;
}

SearchReport run_architecture_search(Arch kind, const Dataset& train, const Dataset& test,
                                     const SearchSpace& space, std::int64_t budget,
                                     const TrainConfig& base, const LossSpec& loss) {
  space.validate();
  if (train.samples.empty() || test.samples.empty()) {
    throw Error(ErrorKind::invalid_argument, "architecture search needs non-empty splits");
  }
  std::int64_t n_types = train.n_types();

  ObjectiveFn objective = [&](const ArchitectureSpec& spec, std::uint64_t trial_seed) {
    Model model = build_model(spec, trial_seed);
    TrainConfig cfg = base;
    cfg.seed = trial_seed;
    train_model(model, train, cfg, loss);
    EvalResult ev = evaluate_model(model, test);
    return ObjectiveValue{ev.metrics.mse, ev.metrics.mape, ev.metrics.r2};
  };

  std::int64_t n_depths = space.layers_max - space.layers_min + 1;
  std::int64_t per_depth = std::max<std::int64_t>(2, budget / n_depths);

  SearchReport report;
  report.kind = kind;
  for (std::int64_t d = space.layers_min; d <= space.layers_max; ++d) {
    SearchSpace stratum = space;
    stratum.layers_min = d;
    stratum.layers_max = d;
    SearchLog log = bayes_search(kind, n_types, stratum, objective, per_depth,
                                 derive_seed(base.seed, "nas-depth-" + format_int(d)));
    DepthRow row;
    row.depth = d;
    row.best = log.trials[log.best_index];
    report.rows.push_back(std::move(row));
    report.trials.insert(report.trials.end(), log.trials.begin(), log.trials.end());
  }
  report.best_row = 0;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].best.objective < report.rows[report.best_row].best.objective) {
      report.best_row = i;
    }
  }
  return report;
}

}  // namespace gtwnn
