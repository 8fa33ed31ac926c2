#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core/d4.hpp"
#include "core/dataset.hpp"
#include "core/diagnostics.hpp"
#include "core/eval.hpp"
#include "core/grid.hpp"
#include "core/loss.hpp"
#include "core/matrix.hpp"
#include "core/model.hpp"
#include "core/nas.hpp"
#include "core/nn.hpp"
#include "core/rng.hpp"
#include "core/synth.hpp"
#include "core/train.hpp"

namespace {

using namespace gtwnn;
using Clock = std::chrono::steady_clock;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Analytic gradients vs central finite differences, every architecture
//    crossed with every loss kind, 20 random fixtures each.

Sample random_sample(Rng& rng) {
  Sample s;
  s.t = 2 + static_cast<std::int64_t>(rng.uniform_below(7));
  s.r = static_cast<std::int64_t>(rng.uniform_below(10));
  s.c = static_cast<std::int64_t>(rng.uniform_below(10));
  s.e_km = rng.uniform(0.5, 8.0);
  s.n_km = rng.uniform(0.5, 8.0);
  s.ef_t = {rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)};
  s.ef_tm1 = {rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)};
  return s;
}

TargetBlock random_target(Rng& rng, std::int64_t dim) {
  TargetBlock t;
  t.dim = dim;
  const std::int64_t center = dim == 1 ? 0 : dim == 9 ? 4 : 13;
  t.values.resize(static_cast<std::size_t>(dim));
  t.distances.resize(static_cast<std::size_t>(dim));
  t.time_offsets.resize(static_cast<std::size_t>(dim));
  t.mask.resize(static_cast<std::size_t>(dim));
  for (std::int64_t j = 0; j < dim; ++j) {
    const std::size_t i = static_cast<std::size_t>(j);
    t.values[i] = rng.uniform(0.0, 6.0);
    t.distances[i] = (dim == 1 || j % 9 == 4) ? 0.0 : rng.uniform(0.9, 3.2);
    t.time_offsets[i] = dim == 27 ? static_cast<double>(j / 9) - 1.0 : 0.0;
    t.mask[i] = (j == center || rng.uniform01() < 0.8) ? 1 : 0;
  }
  return t;
}

// Central differences are invalid when a perturbation can push a hidden
// pre-activation across the ReLU kink; fixtures without a clear margin are
// skipped in favour of the next derived seed.
bool kink_free(const Model& model, const Sample& s) {
  ModelTape tape;
  model_forward(model, s, &tape);
  for (const BlockTape& bt : tape.blocks) {
    for (std::size_t l = 0; l + 1 < bt.pres.size(); ++l) {
      for (double p : bt.pres[l]) {
        if (std::fabs(p) < 5e-3) return false;
      }
    }
  }
  return true;
}

double gradcheck(Model model, const Sample& s, const TargetBlock& tgt, const LossSpec& loss) {
  ModelTape tape;
  std::vector<double> out = model_forward(model, s, &tape);
  std::vector<double> grad_out;
  const double base = block_loss(out, tgt, loss, &grad_out);
  ModelGrads grads = ModelGrads::zeros_like(model);
  model_backward(model, s, tape, grad_out, grads);

  // Central differences resolve gradients only down to ~eps*|L|/h, so the
  // relative-error floor scales with the loss magnitude; below it both
  // sides are numerically zero.
  const double h = 1e-5;
  const double floor_scale = std::max(1e-6, 1e-5 * (1.0 + std::fabs(base)));
  double worst = 0.0;
  auto span = [&](std::vector<double>& params, const std::vector<double>& g) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double save = params[i];
      params[i] = save + h;
      const double lp = block_loss(model_forward(model, s, nullptr), tgt, loss, nullptr);
      params[i] = save - h;
      const double lm = block_loss(model_forward(model, s, nullptr), tgt, loss, nullptr);
      params[i] = save;
      const double fd = (lp - lm) / (2.0 * h);
      const double rel =
          std::fabs(g[i] - fd) / std::max({floor_scale, std::fabs(g[i]), std::fabs(fd)});
      worst = std::max(worst, rel);
    }
  };
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    for (std::size_t l = 0; l < model.blocks[b].layers.size(); ++l) {
      span(model.blocks[b].layers[l].w, grads.blocks[b].layers[l].w);
      span(model.blocks[b].layers[l].b, grads.blocks[b].layers[l].b);
    }
  }
  return worst;
}

std::string criterion_gradients() {
  const auto start = Clock::now();
  const std::array<LossKind, 3> losses = {LossKind::plain_mse, LossKind::spatial_weighted,
                                          LossKind::spatiotemporal_weighted};
  double worst = 0.0;
  int combos = 0;
  for (const std::string& tag : arch_tags()) {
    const Arch arch = arch_from_string(tag);
    for (LossKind kind : losses) {
      const std::uint64_t s0 = derive_seed(0xACC31001ull, tag + "/" + to_string(kind));
      for (int trial = 0; trial < 20; ++trial) {
        bool done = false;
        for (int attempt = 0; attempt < 10 && !done; ++attempt) {
          const std::uint64_t seed =
              s0 + static_cast<std::uint64_t>(trial) * 131 + static_cast<std::uint64_t>(attempt);
          Rng rng(derive_seed(seed, "fixture"));
          ArchitectureSpec spec;
          spec.kind = arch;
          spec.hidden_layers = 1 + trial % 2;
          spec.neurons = spec.hidden_layers == 1 ? std::vector<std::int64_t>{4}
                                                 : std::vector<std::int64_t>{4, 3};
          spec.n_types = 2;
          Model model = build_model(spec, derive_seed(seed, "init"));
          Sample s = random_sample(rng);
          if (!kink_free(model, s)) continue;
          TargetBlock tgt = random_target(rng, arch_output_dim(arch));
          LossSpec loss{kind, 1.3, 1.0};
          worst = std::max(worst, gradcheck(model, s, tgt, loss));
          done = true;
        }
        require(done, "no kink-free fixture found for " + tag + "/" + to_string(kind) +
                          " trial " + std::to_string(trial));
      }
      ++combos;
    }
  }
  require(worst <= 1e-4, "max relative gradient error " + sci(worst) + " exceeds 1e-4");
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  require(secs < 120.0, "gradient suite took " + num(secs) + "s, budget is 120s");
  return std::to_string(combos) + " arch/loss combos x 20 seeds, max rel err " + sci(worst);
}

// ---------------------------------------------------------------------------
// 2. Durbin-Levinson PACF against the order-k Yule-Walker normal equations
//    solved by an independent Gaussian-elimination route.

std::vector<double> ar_series(int kind, Rng& rng) {
  const int n = 240;
  const int burn = 50;
  double a1 = 0.0;
  double a2 = 0.0;
  if (kind == 0) a1 = rng.uniform(-0.75, 0.75);
  if (kind == 1) {
    a2 = rng.uniform(-0.55, 0.35);
    a1 = rng.uniform(-0.9 * (1.0 - a2), 0.9 * (1.0 - a2));
  }
  std::vector<double> x;
  x.reserve(n);
  double prev = 0.0;
  double prev2 = 0.0;
  for (int t = 0; t < n + burn; ++t) {
    const double v = a1 * prev + a2 * prev2 + rng.normal();
    prev2 = prev;
    prev = v;
    if (t >= burn) x.push_back(v);
  }
  return x;
}

std::vector<double> biased_rho(const std::vector<double>& x, std::int64_t max_lag) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1, 1.0);
  for (std::int64_t k = 1; k <= max_lag; ++k) {
    double numsum = 0.0;
    for (std::int64_t i = 0; i + k < n; ++i) {
      numsum += (x[static_cast<std::size_t>(i)] - mean) *
                (x[static_cast<std::size_t>(i + k)] - mean);
    }
    rho[static_cast<std::size_t>(k)] = numsum / denom;
  }
  return rho;
}

double yw_last_coefficient(const std::vector<double>& rho, std::int64_t k) {
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<std::vector<double>> m(kk, std::vector<double>(kk + 1, 0.0));
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = 0; j < kk; ++j) {
      m[i][j] = rho[static_cast<std::size_t>(std::llabs(static_cast<long long>(i) -
                                                        static_cast<long long>(j)))];
    }
    m[i][kk] = rho[i + 1];
  }
  for (std::size_t col = 0; col < kk; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < kk; ++row) {
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    }
    std::swap(m[col], m[pivot]);
    require(std::fabs(m[col][col]) > 1e-12, "singular yule-walker system at order " +
                                                 std::to_string(k));
    for (std::size_t row = col + 1; row < kk; ++row) {
      const double f = m[row][col] / m[col][col];
      for (std::size_t j = col; j <= kk; ++j) m[row][j] -= f * m[col][j];
    }
  }
  std::vector<double> phi(kk, 0.0);
  for (std::size_t i = kk; i-- > 0;) {
    double v = m[i][kk];
    for (std::size_t j = i + 1; j < kk; ++j) v -= m[i][j] * phi[j];
    phi[i] = v / m[i][i];
  }
  return phi[kk - 1];
}

std::string criterion_pacf_oracle() {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(derive_seed(0xACC32002ull, "series-" + std::to_string(i)));
    std::vector<double> x = ar_series(i % 3, rng);
    require(acf(x, 10).values[0] == 1.0, "acf(0) is not exactly 1 on series " + std::to_string(i));
    CorrelationCurve p = pacf(x, 10);
    std::vector<double> rho = biased_rho(x, 10);
    for (std::int64_t k = 1; k <= 10; ++k) {
      const double oracle = yw_last_coefficient(rho, k);
      worst = std::max(worst, std::fabs(p.values[static_cast<std::size_t>(k - 1)] - oracle));
    }
  }
  require(worst <= 1e-6, "max |pacf - yule-walker oracle| " + sci(worst) + " exceeds 1e-6");
  return "50 series (ar1/ar2/noise) x 10 lags, max deviation " + sci(worst);
}

// ---------------------------------------------------------------------------
// 3. Kernel endpoints and the centre-only spatial loss collapsing onto the
//    plain loss when both models share every contributing parameter.

std::string criterion_kernel_loss() {
  for (double h : {0.5, 1.0, 1.3, 2.7, 10.0}) {
    require(weight_kernel(0.0, h) == 1.0, "weight_kernel(0, h) != 1 at h=" + num(h));
    require(std::fabs(weight_kernel(h, h) - std::exp(-0.5)) <= 1e-12,
            "weight_kernel(h, h) misses exp(-0.5) at h=" + num(h));
  }

  SynthParams sp;
  sp.rows = 10;
  sp.cols = 12;
  sp.t_steps = 20;
  sp.base_rate = 5.0;
  sp.seed = 777;
  auto grid = std::make_shared<const SpatioTemporalGrid>(generate(sp));
  Dataset ds = build_dataset(grid);
  require(ds.size() > 0, "kernel/loss fixture dataset is empty");

  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ArchitectureSpec gs{Arch::gtwnn, 1, {5}, 2};
    ArchitectureSpec ls{Arch::gtwnn_ls, 1, {5}, 2};
    Model g = build_model(gs, seed);
    Model l = build_model(ls, seed + 1000);

    // Share the coordinate block and the hidden layers of the output block;
    // the centre row of the 9-way final layer takes the scalar model's
    // output row, every neighbour row is zeroed.
    l.blocks[0] = g.blocks[0];
    for (std::size_t i = 0; i + 1 < g.blocks[1].layers.size(); ++i) {
      l.blocks[1].layers[i] = g.blocks[1].layers[i];
    }
    LayerParams& lf = l.blocks[1].layers.back();
    const LayerParams& gf = g.blocks[1].layers.back();
    std::fill(lf.w.begin(), lf.w.end(), 0.0);
    std::fill(lf.b.begin(), lf.b.end(), 0.0);
    for (std::int64_t j = 0; j < lf.in; ++j) {
      lf.w[static_cast<std::size_t>(4 * lf.in + j)] = gf.w[static_cast<std::size_t>(j)];
    }
    lf.b[4] = gf.b[0];

    for (int pick = 0; pick < 3; ++pick) {
      const Sample& s =
          ds.samples[(static_cast<std::size_t>(seed) * 131 + static_cast<std::size_t>(pick) * 37) %
                     static_cast<std::size_t>(ds.size())];
      std::vector<double> go = model_forward(g, s, nullptr);
      std::vector<double> lo = model_forward(l, s, nullptr);
      require(std::fabs(lo[4] - go[0]) <= 1e-12, "shared-parameter centre outputs diverge");

      TargetBlock t9 = assemble_target(ds.grid_of(s), s, 9);
      for (std::int64_t j = 0; j < 9; ++j) {
        if (j != 4) t9.mask[static_cast<std::size_t>(j)] = 0;
      }
      TargetBlock t1 = assemble_target(ds.grid_of(s), s, 1);
      const double ll = block_loss(lo, t9, LossSpec{LossKind::spatial_weighted, 1.0, 0.0}, nullptr);
      const double gl = block_loss(go, t1, LossSpec{LossKind::plain_mse, 0.0, 0.0}, nullptr);
      worst = std::max(worst, std::fabs(ll - gl));
    }
  }
  require(worst <= 1e-12, "centre-only spatial loss deviates from plain loss by " + sci(worst));
  return "kernel endpoints exact, 20 seeds x 3 samples, max loss gap " + sci(worst);
}

// ---------------------------------------------------------------------------
// 4. Dihedral group relations and the 8x dataset augmentation.

std::string criterion_d4() {
  Matrix m(3, 4);
  for (std::int64_t r = 0; r < 3; ++r) {
    for (std::int64_t c = 0; c < 4; ++c) m.at(r, c) = static_cast<double>(r * 4 + c);
  }
  m.at(0, 0) = 17.0;

  Matrix rot = m;
  for (int i = 0; i < 4; ++i) rot = d4_apply(D4::rot90, rot);
  require(rot == m, "rot90 applied four times is not the identity");
  require(d4_apply(D4::mirror_diagonal, d4_apply(D4::mirror_diagonal, m)) == m,
          "transpose applied twice is not the identity");

  std::array<Matrix, 8> all = d4_transforms(m);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      require(!(all[i] == all[j]), std::string("transforms ") + to_string(d4_all()[i]) + " and " +
                                       to_string(d4_all()[j]) + " coincide on the fixture");
    }
  }

  SynthParams sp;
  sp.rows = 9;
  sp.cols = 11;
  sp.t_steps = 12;
  sp.base_rate = 4.0;
  sp.seed = 5;
  auto grid = std::make_shared<const SpatioTemporalGrid>(generate(sp));
  Dataset base = build_dataset(grid);
  Dataset aug = d4_augment_dataset(grid);
  require(aug.grids.size() == 8, "augmented dataset does not carry 8 grids");
  require(aug.size() == 8 * base.size(),
          "augmented size " + std::to_string(aug.size()) + " != 8 x " + std::to_string(base.size()));
  return "group relations hold, 8 distinct transforms, augmentation " +
         std::to_string(base.size()) + " -> " + std::to_string(aug.size());
}

// ---------------------------------------------------------------------------
// 5. Isotropy verdicts on constructed isotropic and anisotropic fields.

std::string criterion_isotropy() {
  double worst_iso = 0.0;
  double best_aniso = 1e9;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthParams iso;
    iso.rows = 20;
    iso.cols = 20;
    iso.t_steps = 200;
    iso.spatial_kernel_radius = 2;
    iso.base_rate = 5.0;
    iso.seed = seed;
    IsotropyReport ri = isotropy_test(generate(iso), 7, 0.25, seed, 0.15);
    require(ri.isotropic, "isotropic field judged anisotropic at seed " + std::to_string(seed));
    for (const auto& [t, d] : ri.symmetry_deviations) worst_iso = std::max(worst_iso, d);

    SynthParams aniso = iso;
    aniso.spatial_kernel_radius = 0;
    aniso.radius_rows = 4;
    aniso.radius_cols = 0;
    IsotropyReport ra = isotropy_test(generate(aniso), 7, 0.25, seed, 0.15);
    require(!ra.isotropic, "anisotropic field judged isotropic at seed " + std::to_string(seed));
    double top = 0.0;
    for (const auto& [t, d] : ra.symmetry_deviations) top = std::max(top, d);
    best_aniso = std::min(best_aniso, top);
  }
  return "5 seeds each; iso max deviation " + num(worst_iso) + ", aniso min " + num(best_aniso) +
         " vs threshold 0.15";
}

// ---------------------------------------------------------------------------
// 6. The four synthetic regimes drive the prescription to the four expected
//    architectures.

std::string criterion_prescription() {
  struct Regime {
    std::vector<double> ar;
    std::int64_t radius;
    Arch expected;
  };
  const std::vector<Regime> regimes = {
      {{}, 0, Arch::gtwnn},
      {{}, 2, Arch::gtwnn_ls},
      {{0.5, 0.3}, 0, Arch::hdgtwnn},
      {{0.5, 0.3}, 2, Arch::hdgtwnn_ls},
  };
  int correct = 0;
  for (const Regime& regime : regimes) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SynthParams sp;
      sp.rows = 24;
      sp.cols = 24;
      sp.t_steps = 400;
      sp.temporal_coeffs = regime.ar;
      sp.spatial_kernel_radius = regime.radius;
      sp.base_rate = 5.0;
      sp.seed = seed;
      DiagnosticsOptions opts;
      opts.seed = seed;
      DiagnosticsReport report = run_diagnostics(generate(sp), opts);
      if (report.prescription.recommended == regime.expected) {
        ++correct;
      } else {
        fail(std::string("regime expecting ") + to_string(regime.expected) + " got " +
             to_string(report.prescription.recommended) + " at seed " + std::to_string(seed));
      }
    }
  }
  return "4 regimes x 5 seeds, " + std::to_string(correct) + "/20 prescriptions correct";
}

// ---------------------------------------------------------------------------
// 7. Search finds the unique argmin of a separable quadratic, and the
//    trial-count bound matches its closed form.

std::string criterion_nas() {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 5;
  space.neurons_min = 1;
  space.neurons_max = 15;
  space.per_layer_neurons = false;

  ObjectiveFn objective = [](const ArchitectureSpec& spec, std::uint64_t) {
    const double l = static_cast<double>(spec.hidden_layers);
    const double w = static_cast<double>(spec.neurons[0]);
    ObjectiveValue v;
    v.objective = (l - 3.0) * (l - 3.0) + 0.25 * (w - 7.0) * (w - 7.0);
    return v;
  };

  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SearchLog log = bayes_search(Arch::vanilla, 2, space, objective, 50, seed);
    const ArchitectureSpec& best = log.trials[log.best_index].config;
    const bool width_ok = std::all_of(best.neurons.begin(), best.neurons.end(),
                                      [](std::int64_t n) { return n == 7; });
    if (best.hidden_layers == 3 && width_ok) ++hits;
  }
  require(hits >= 19, "argmin (3 layers, width 7) found in only " + std::to_string(hits) +
                          "/20 seeds, need 19");

  const std::int64_t trials = min_trials_for_top_fraction(0.05, 0.95);
  require(trials == 59, "min_trials_for_top_fraction(0.05, 0.95) = " + std::to_string(trials) +
                            ", expected 59");
  return "argmin found in " + std::to_string(hits) + "/20 seeds; min-trials bound = 59";
}

// ---------------------------------------------------------------------------
// 8. Metric fixed points: perfect, mean, worse-than-mean, zero-target MAPE.

std::string criterion_metrics() {
  Metrics perfect = compute_metrics({3.0, 1.0, 4.0}, {3.0, 1.0, 4.0});
  require(perfect.mse == 0.0 && perfect.mape == 0.0 && perfect.r2 == 1.0 && !perfect.r2_undefined,
          "perfect prediction does not score (0, 0, 1)");

  Metrics mean_pred = compute_metrics({1.0, 3.0}, {2.0, 2.0});
  require(mean_pred.r2 == 0.0, "mean predictor r2 is " + num(mean_pred.r2) + ", expected 0");

  Metrics worse = compute_metrics({1.0, 3.0}, {3.0, 1.0});
  require(worse.r2 < 0.0, "worse-than-mean predictor r2 is " + num(worse.r2) + ", expected < 0");

  Metrics blowup = compute_metrics({0.0, 2.0}, {1.0, 2.0});
  const double expected = 0.5 / kMapeEpsilon;
  require(std::fabs(blowup.mape - expected) <= 1e-3 * expected && blowup.mape >= 1e6,
          "zero-target mape is " + sci(blowup.mape) + ", expected ~" + sci(expected));
  return "perfect (0,0,1); mean r2=0; inverted r2=" + num(worse.r2) + "; zero-target mape " +
         sci(blowup.mape);
}

// ---------------------------------------------------------------------------
// 9. A factor-driven grid: the count at t is one fixed nonlinear function of
//    the two per-type counts at t-1, so a model that consumes the factor
//    channels must clearly beat one that only sees coordinates.

SpatioTemporalGrid factor_grid(std::uint64_t seed) {
  GridSpec spec;
  spec.rows = 12;
  spec.cols = 12;
  spec.cell_w_km = 1.0;
  spec.cell_h_km = 1.0;
  spec.t_steps = 60;
  SpatioTemporalGrid g(spec, {"factor_a", "factor_b"});
  Rng rng(derive_seed(seed, "factor-grid"));
  for (std::int64_t t = 0; t < 2; ++t) {
    for (std::int64_t r = 0; r < spec.rows; ++r) {
      for (std::int64_t c = 0; c < spec.cols; ++c) {
        const std::int64_t a = static_cast<std::int64_t>(rng.uniform_below(5));
        const std::int64_t b = static_cast<std::int64_t>(rng.uniform_below(5));
        g.type_count(0, t, r, c) = a;
        g.type_count(1, t, r, c) = b;
        g.count(t, r, c) = a + b;
      }
    }
  }
  for (std::int64_t t = 2; t < spec.t_steps; ++t) {
    for (std::int64_t r = 0; r < spec.rows; ++r) {
      for (std::int64_t c = 0; c < spec.cols; ++c) {
        const double a = static_cast<double>(g.type_count(0, t - 1, r, c));
        const double b = static_cast<double>(g.type_count(1, t - 1, r, c));
        const std::int64_t total =
            2 + static_cast<std::int64_t>(std::floor(0.7 * a + 0.6 * b)) + (a > b ? 1 : 0);
        const std::int64_t cap = std::min<std::int64_t>(4, total);
        const std::int64_t na =
            static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(cap) + 1));
        g.type_count(0, t, r, c) = na;
        g.type_count(1, t, r, c) = total - na;
        g.count(t, r, c) = total;
      }
    }
  }
  g.validate_consistency();
  return g;
}

std::string criterion_learnability() {
  const auto start = Clock::now();
  std::string ratios;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto grid = std::make_shared<const SpatioTemporalGrid>(factor_grid(seed));
    Dataset full = build_dataset(grid);
    auto [train_ds, test_ds] = split_train_test(full, derive_seed(seed, "split"));

    std::map<Arch, double> mse;
    for (Arch arch : {Arch::gtwnn, Arch::vanilla}) {
      ArchitectureSpec spec{arch, 1, {8}, 2};
      Model model =
          build_model(spec, derive_seed(seed, std::string("init-") + to_string(arch)));
      TrainConfig cfg;
      cfg.epochs = 6;
      cfg.batch_size = 10;
      cfg.seed = derive_seed(seed, std::string("train-") + to_string(arch));
      // Both models get the same step size; 1e-2 lets each reach its own
      // loss floor inside the fixed six-epoch budget.
      cfg.adam.alpha = 1e-2;
      train_model(model, train_ds, cfg, LossSpec{arch_default_loss(arch), 0.0, 0.0});
      mse[arch] = evaluate_model(model, test_ds).metrics.mse;
    }
    const double ratio = mse[Arch::gtwnn] / mse[Arch::vanilla];
    require(mse[Arch::gtwnn] <= 0.5 * mse[Arch::vanilla],
            "seed " + std::to_string(seed) + ": gtwnn mse " + num(mse[Arch::gtwnn]) +
                " vs vanilla " + num(mse[Arch::vanilla]) + " (ratio " + num(ratio) +
                ", need <= 0.5)");
    if (!ratios.empty()) ratios += ", ";
    ratios += num(ratio);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  require(secs < 300.0, "learnability run took " + num(secs) + "s, budget is 300s");
  return "3 seeds, gtwnn/vanilla test-mse ratios " + ratios + " (need <= 0.5)";
}

// ---------------------------------------------------------------------------
// 10. The synth -> train -> evaluate pipeline, run twice from one master
//     seed through the CLI, leaves byte-identical artifacts.

std::string slurp_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + GTWNN_CLI_PATH + "' " + args + " > /dev/null";
  require(std::system(cmd.c_str()) == 0, "cli command failed: " + cmd);
}

std::string criterion_determinism() {
  namespace fs = std::filesystem;
  const auto stamp = std::chrono::system_clock::now().time_since_epoch().count();
  const fs::path base = fs::temp_directory_path() / ("gtwnn-accept-" + std::to_string(stamp));
  const std::array<fs::path, 2> dirs = {base / "a", base / "b"};

  for (const fs::path& dir : dirs) {
    fs::create_directories(dir);
    const std::string out = "--out '" + dir.string() + "' --seed 4242";
    run_cli("synth " + out + " --rows 14 --cols 14 --steps 48 --ar 0.4 --radius 1 --base-rate 6");
    run_cli("train " + out + " --arch gtwnn --layers 1 --neurons 6 --epochs 3");
    run_cli("evaluate " + out);
  }

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  for (const char* needed : {"grid.bin", "model.bin", "loss_curve.csv", "eval_report.csv",
                             "actual_map.csv", "predicted_map.csv", "diff_map.csv",
                             "actual_map.ppm", "predicted_map.ppm", "diff_map.ppm"}) {
    require(std::find(names.begin(), names.end(), needed) != names.end(),
            std::string("pipeline did not produce ") + needed);
  }
  std::size_t compared = 0;
  for (const std::string& name : names) {
    require(fs::exists(dirs[1] / name), "second run is missing " + name);
    require(slurp_bytes(dirs[0] / name) == slurp_bytes(dirs[1] / name),
            name + " differs between identically seeded runs");
    ++compared;
  }
  fs::remove_all(base);
  return std::to_string(compared) + " artifacts byte-identical across reruns";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<std::string()>>> criteria = {
      {"gradient-suite", criterion_gradients}, {"pacf-oracle", criterion_pacf_oracle},
      {"kernel-loss", criterion_kernel_loss},  {"d4-augmentation", criterion_d4},
      {"isotropy", criterion_isotropy},        {"prescription", criterion_prescription},
      {"nas-search", criterion_nas},           {"metrics", criterion_metrics},
      {"learnability", criterion_learnability}, {"determinism", criterion_determinism},
  };

  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    try {
      const std::string detail = criteria[i].second();
      const double secs = std::chrono::duration<double>(Clock::now() - start).count();
      std::printf("PASS %2zu %-16s %s (%.1fs)\n", i + 1, criteria[i].first, detail.c_str(), secs);
      ++passed;
    } catch (const std::exception& e) {
      std::printf("FAIL %2zu %-16s %s\n", i + 1, criteria[i].first, e.what());
    }
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
