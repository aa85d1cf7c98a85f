// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance            run criteria 1-8
//   acceptance 2 7        run a subset (criterion 8 reruns whatever 1, 2, 5 produced)

#include "cae/bound.hpp"
#include "cae/data.hpp"
#include "cae/eval.hpp"
#include "cae/gradcheck.hpp"
#include "cae/io_format.hpp"
#include "cae/mmd.hpp"
#include "cae/net.hpp"
#include "cae/particles.hpp"
#include "cae/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using cae::KernelSpec;
using cae::SampleSet;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Artifacts produced by criteria 1, 2 and 5, compared again by criterion 8.
std::map<std::string, std::string> g_artifacts;

// ---------------------------------------------------------------- 1

std::map<std::string, std::string> landscape_artifacts(std::vector<std::size_t>* minima_counts, double* coulomb_min_z) {
  const cae::ChargeSystem fixed{SampleSet::from_scalars({-4, 0, 4}), {1, 1, 1}};
  const auto grid = cae::make_grid(-6, 6, 0.01);
  std::map<std::string, std::string> out;
  const std::vector<std::pair<std::string, KernelSpec>> kernels{
      {"coulomb", KernelSpec::coulomb(1, 0.0)}, {"gaussian", KernelSpec::gaussian(1.0, 1)}, {"imq", KernelSpec::imq(1, 2.0)}};
  for (const auto& [name, spec] : kernels) {
    const auto land = cae::landscape_scan(spec, fixed, 1, grid);
    const auto minima = cae::landscape_local_minima(land);
    if (minima_counts) minima_counts->push_back(minima.size());
    if (coulomb_min_z && name == "coulomb" && !minima.empty()) *coulomb_min_z = grid[minima.front()];
    std::ostringstream csv;
    cae::write_landscape_csv(csv, land);
    out["landscape_" + name] = csv.str();
  }
  return out;
}

Verdict criterion1() {
  const auto start = Clock::now();
  std::vector<std::size_t> counts;
  double zmin = std::nan("");
  const auto artifacts = landscape_artifacts(&counts, &zmin);
  const double elapsed = seconds_since(start);
  g_artifacts.insert(artifacts.begin(), artifacts.end());
  const bool ok = counts[0] == 1 && std::abs(zmin) <= 0.02 && counts[1] >= 3 && counts[2] >= 3 && elapsed < 1.0;
  std::ostringstream d;
  d << "coulomb h=1 minima=" << counts[0] << " at z=" << fmt("%.3f", zmin) << ", gaussian minima=" << counts[1]
    << ", imq minima=" << counts[2] << ", " << fmt("%.3f", elapsed) << " s";
  return {ok, d.str()};
}

// ---------------------------------------------------------------- 2

struct DescentTally {
  int coulomb_matches = 0;
  int gaussian_failures = 0;
};

std::map<std::string, std::string> descent_artifacts(std::vector<std::pair<std::string, DescentTally>>* tallies) {
  const std::vector<std::pair<int, int>> settings{{2, 6}, {2, 8}, {3, 8}, {2, 12}};
  std::map<std::string, std::string> out;
  cae::DescentOptions opt;  // lr 0.05, 2e4 iterations
  for (auto [h, n] : settings) {
    DescentTally t;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto prob = cae::seeded_descent_problem(static_cast<std::size_t>(n), static_cast<std::size_t>(h), seed);
      for (bool coulomb : {true, false}) {
        const KernelSpec spec = coulomb ? KernelSpec::coulomb(h, 1e-3) : KernelSpec::gaussian(1.0, h);
        const auto res = cae::particle_descent(spec, prob.targets, prob.init, opt);
        const bool matched = cae::match_permutation(res.final_positions, prob.targets, 0.05).has_value();
        if (coulomb && matched) ++t.coulomb_matches;
        if (!coulomb && !matched) ++t.gaussian_failures;
        std::ostringstream csv;
        cae::write_trajectory_csv(csv, res);
        out["descent_h" + std::to_string(h) + "_n" + std::to_string(n) + "_s" + std::to_string(seed) +
            (coulomb ? "_coulomb" : "_gaussian")] = csv.str();
      }
    }
    if (tallies) tallies->push_back({"(" + std::to_string(h) + "," + std::to_string(n) + ")", t});
  }
  return out;
}

Verdict criterion2() {
  const auto start = Clock::now();
  std::vector<std::pair<std::string, DescentTally>> tallies;
  const auto artifacts = descent_artifacts(&tallies);
  const double elapsed = seconds_since(start);
  g_artifacts.insert(artifacts.begin(), artifacts.end());
  bool all_match = true, control_fails = false;
  std::ostringstream d;
  d << "coulomb matches/20:";
  for (const auto& [name, t] : tallies) {
    d << ' ' << name << '=' << t.coulomb_matches;
    all_match = all_match && t.coulomb_matches >= 19;
    control_fails = control_fails || t.gaussian_failures >= 5;
  }
  d << "; gaussian failures/20:";
  for (const auto& [name, t] : tallies) d << ' ' << name << '=' << t.gaussian_failures;
  d << "; " << fmt("%.1f", elapsed) << " s";
  return {all_match && control_fails && elapsed < 120.0, d.str()};
}

// ---------------------------------------------------------------- 3

Verdict criterion3() {
  const auto start = Clock::now();
  const auto spec = KernelSpec::gaussian(1.0, 2);
  const int reps = 2000;
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> n01;
  auto draw = [&](double shift) {
    SampleSet s(2, 64);
    for (std::size_t i = 0; i < 64; ++i) {
      s.matrix()(0, static_cast<Eigen::Index>(i)) = n01(rng) + shift;
      s.matrix()(1, static_cast<Eigen::Index>(i)) = n01(rng);
    }
    return s;
  };
  auto stats = [&](double shift) {
    double sum = 0, sum2 = 0;
    for (int r = 0; r < reps; ++r) {
      const auto p = draw(0.0);
      const auto q = draw(shift);
      const double v = cae::mmd_unbiased(spec, p, q);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / reps;
    const double var = (sum2 - reps * mean * mean) / (reps - 1);
    return std::pair{mean, std::sqrt(var / reps)};
  };
  const auto [m0, se0] = stats(0.0);
  const auto [m1, se1] = stats(2.0);
  const double elapsed = seconds_since(start);
  const double z0 = m0 / se0, z1 = m1 / se1;
  std::ostringstream d;
  d << "same distribution mean=" << fmt("%.3e", m0) << " (" << fmt("%.2f", z0) << " SE), shifted mean=" << fmt("%.3e", m1)
    << " (" << fmt("%.1f", z1) << " SE), " << fmt("%.1f", elapsed) << " s";
  return {std::abs(z0) <= 4.0 && z1 >= 10.0 && elapsed < 30.0, d.str()};
}

// ---------------------------------------------------------------- 4

double rel_inf(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
  return scale == 0.0 ? 0.0 : (a - b).lpNorm<Eigen::Infinity>() / scale;
}

double kernel_grad_suite() {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> n01;
  double worst = 0;
  for (const auto& spec : {KernelSpec::coulomb(1), KernelSpec::coulomb(2), KernelSpec::coulomb(3), KernelSpec::coulomb(2, 1e-3),
                           KernelSpec::gaussian(1.0, 2), KernelSpec::imq(2)}) {
    int done = 0;
    while (done < 100) {
      cae::Point a(spec.h), b(spec.h);
      for (int d = 0; d < spec.h; ++d) {
        a(d) = 1.5 * n01(rng);
        b(d) = 1.5 * n01(rng);
      }
      if ((a - b).norm() < 0.2) continue;
      cae::Point fd(spec.h);
      for (int d = 0; d < spec.h; ++d) {
        cae::Point up = a, dn = a;
        up(d) += 1e-5;
        dn(d) -= 1e-5;
        fd(d) = (cae::kernel_eval(spec, up, b) - cae::kernel_eval(spec, dn, b)) / 2e-5;
      }
      worst = std::max(worst, rel_inf(cae::kernel_grad(spec, a, b), fd));
      ++done;
    }
  }
  return worst;
}

double mmd_grad_suite() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> size(2, 8);
  double worst = 0;
  std::uint64_t seed = 0;
  for (const auto& spec : {KernelSpec::coulomb(2, 1e-3), KernelSpec::coulomb(3, 1e-3), KernelSpec::gaussian(1.0, 2), KernelSpec::imq(2)}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto p = cae::gaussian_prior_sample(static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(spec.h), ++seed);
      const auto q = cae::gaussian_prior_sample(static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(spec.h), ++seed);
      Eigen::MatrixXd fd(q.dim(), q.size());
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t d = 0; d < q.dim(); ++d) {
          SampleSet up = q, dn = q;
          up.matrix()(d, i) += 1e-5;
          dn.matrix()(d, i) -= 1e-5;
          fd(d, i) = (cae::mmd_unbiased(spec, p, up) - cae::mmd_unbiased(spec, p, dn)) / 2e-5;
        }
      worst = std::max(worst, rel_inf(cae::mmd_grad_q(spec, p, q), fd));
    }
  }
  return worst;
}

// Backprop vs central differences of <g, f(x)> on up to 200 sampled entries
// per tensor, 20 random triples per architecture.
double mlp_backward_suite() {
  std::mt19937_64 rng(606);
  std::normal_distribution<double> n01;
  double worst = 0;
  for (double factor : {0.25, 0.5, 1.0}) {
    const int w = static_cast<int>(128 * factor);
    const std::vector<int> widths{2, w, w, 2};
    for (int rep = 0; rep < 20; ++rep) {
      auto p = cae::mlp_init(widths, static_cast<std::uint64_t>(rep) + 7000);
      for (auto& b : p.biases)
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 0.1 * n01(rng);
      Eigen::MatrixXd x(2, 4), gout(2, 4);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        x(i) = 2 * n01(rng);
        gout(i) = n01(rng);
      }
      const auto grads = cae::mlp_backward(p, cae::mlp_forward(p, x).cache, gout);
      auto objective = [&] { return (cae::mlp_apply(p, x).array() * gout.array()).sum(); };
      auto check = [&](auto& param, const auto& analytic) {
        std::uniform_int_distribution<Eigen::Index> pick(0, param.size() - 1);
        const Eigen::Index n = std::min<Eigen::Index>(param.size(), 200);
        double diff = 0, scale = 0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Eigen::Index idx = param.size() <= 200 ? k : pick(rng);
          const double saved = param(idx);
          param(idx) = saved + 1e-6;
          const double up = objective();
          param(idx) = saved - 1e-6;
          const double dn = objective();
          param(idx) = saved;
          const double num = (up - dn) / 2e-6;
          diff = std::max(diff, std::abs(num - analytic(idx)));
          scale = std::max({scale, std::abs(num), std::abs(analytic(idx))});
        }
        if (scale > 0) worst = std::max(worst, diff / scale);
      };
      for (std::size_t l = 0; l < p.layers(); ++l) {
        check(p.weights[l], grads.weights[l]);
        check(p.biases[l], grads.biases[l]);
      }
      check(x, grads.input);
    }
  }
  return worst;
}

double full_loss_suite() {
  double worst = 0;
  for (const auto& spec : {KernelSpec::coulomb(2, 1e-3), KernelSpec::gaussian(1.0, 2), KernelSpec::imq(2)})
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      worst = std::max(worst, cae::check_loss_gradient({2, 8, 8, 2}, 8, seed, spec, 100.0).max_rel_error);
  return worst;
}

Verdict criterion4() {
  const auto start = Clock::now();
  const double k = kernel_grad_suite();
  const double m = mmd_grad_suite();
  const double b = mlp_backward_suite();
  const double f = full_loss_suite();
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "kernel_grad " << fmt("%.1e", k) << " (<1e-6), mmd_grad_q " << fmt("%.1e", m) << " (<1e-6), mlp_backward "
    << fmt("%.1e", b) << " (<1e-5), full loss " << fmt("%.1e", f) << " (<1e-4), " << fmt("%.1f", elapsed) << " s";
  return {k < 1e-6 && m < 1e-6 && b < 1e-5 && f < 1e-4 && elapsed < 30.0, d.str()};
}

// ---------------------------------------------------------------- 5, 6

constexpr std::uint64_t kTrainDataSeed = 0;
constexpr std::uint64_t kTestDataSeed = 1;
constexpr std::uint64_t kGenerateSeed = 2;

struct GridRun {
  double loglik = 0;
  int modes = 0;
  double xi_hat = 0;       // max squared reconstruction error on held-out data
  double train_recon = 0;  // mean squared reconstruction error on the training set
  double holdout_mean = 0; // diagnostic only
  double seconds = 0;
  std::map<std::string, std::string> artifacts;
};

GridRun grid_run(double width_factor, std::uint64_t seed) {
  const auto start = Clock::now();
  cae::TrainConfig cfg;  // desk-scale defaults
  cfg.width_factor = width_factor;
  cfg.seed = seed;
  const auto train = cae::grid_dataset(500, kTrainDataSeed);
  const auto test = cae::grid_dataset(10000, kTestDataSeed);
  const auto trained = cae::train(cfg, train);
  const auto gen = cae::generate(trained.dec, 10000, kGenerateSeed);
  const auto kde = cae::kde_loglik(gen, test, cae::default_bandwidths());
  const auto cov = cae::mode_coverage(gen, cae::grid_centers());

  GridRun r;
  r.loglik = kde.best_loglik;
  r.modes = cov.covered;
  const auto held = cae::reconstruct(trained.enc, trained.dec, test);
  r.xi_hat = held.max_error;
  r.holdout_mean = held.mean_error;
  r.train_recon = cae::reconstruct(trained.enc, trained.dec, train).mean_error;
  std::ostringstream hist, samples, kde_csv, enc, dec;
  cae::write_history_csv(hist, trained.history);
  cae::write_samples_csv(samples, gen);
  cae::write_kde_csv(kde_csv, kde);
  cae::write_checkpoint(enc, trained.enc);
  cae::write_checkpoint(dec, trained.dec);
  r.artifacts = {{"grid_history", hist.str()},
                 {"grid_generated", samples.str()},
                 {"grid_kde", kde_csv.str()},
                 {"grid_encoder", enc.str()},
                 {"grid_decoder", dec.str()}};
  r.seconds = seconds_since(start);
  return r;
}

std::map<std::pair<double, std::uint64_t>, GridRun> g_grid_runs;

const GridRun& cached_grid_run(double factor, std::uint64_t seed) {
  auto it = g_grid_runs.find({factor, seed});
  if (it == g_grid_runs.end()) it = g_grid_runs.emplace(std::pair{factor, seed}, grid_run(factor, seed)).first;
  return it->second;
}

Verdict criterion5() {
  const auto& r = cached_grid_run(1.0, 0);
  g_artifacts.insert(r.artifacts.begin(), r.artifacts.end());
  std::ostringstream d;
  d << "modes covered=" << r.modes << "/25 (>=20), kde loglik=" << fmt("%.3f", r.loglik) << " (>=-6.0), train recon="
    << fmt("%.4f", r.train_recon) << ", " << fmt("%.0f", r.seconds) << " s";
  return {r.modes >= 20 && r.loglik >= -6.0 && r.seconds < 900.0, d.str()};
}

double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Verdict criterion6() {
  const std::vector<double> factors{0.25, 0.5, 1.0};
  std::vector<double> med_ll, med_xi;
  std::ostringstream d;
  for (double f : factors) {
    std::vector<double> ll, xi, mean_err;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto& r = cached_grid_run(f, seed);
      ll.push_back(r.loglik);
      xi.push_back(r.xi_hat);
      mean_err.push_back(r.holdout_mean);
    }
    med_ll.push_back(median3(ll));
    med_xi.push_back(median3(xi));
    d << "x" << f << ": loglik " << fmt("%.3f", ll[0]) << '/' << fmt("%.3f", ll[1]) << '/' << fmt("%.3f", ll[2])
      << " med " << fmt("%.3f", med_ll.back()) << ", xi_hat " << fmt("%.3f", xi[0]) << '/' << fmt("%.3f", xi[1]) << '/'
      << fmt("%.3f", xi[2]) << " med " << fmt("%.3f", med_xi.back()) << " (held-out mean error med "
      << fmt("%.4f", median3(mean_err)) << "); ";
  }
  bool ok = true;
  for (std::size_t i = 1; i < factors.size(); ++i) ok = ok && med_ll[i] >= med_ll[i - 1] && med_xi[i] <= med_xi[i - 1];
  d << "median loglik nondecreasing and median xi_hat nonincreasing in width";
  return {ok, d.str()};
}

// ---------------------------------------------------------------- 7

Verdict criterion7() {
  cae::BoundInputs ex;
  ex.N = 1000;
  ex.K = 1;
  ex.xi = 1;
  ex.lambda = 1;
  ex.s = ex.u = ex.v = ex.t = 0.1;
  const double p = cae::generalization_bound(ex).probability;
  const bool hand = fmt("%.3e", p) == "1.816e-04";

  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> pos(0.01, 2.0), grow(1.01, 3.0);
  std::uniform_int_distribution<long long> nn(2, 5000);
  int violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    cae::BoundInputs in;
    in.N = nn(rng);
    in.K = pos(rng);
    in.xi = pos(rng);
    in.lambda = pos(rng);
    in.s = 0.1 * pos(rng);
    in.u = 0.1 * pos(rng);
    in.v = 0.1 * pos(rng);
    in.t = 0.1 * pos(rng);
    const auto base = cae::generalization_bound(in);
    const double g = grow(rng);
    auto raw = [&](const std::function<void(cae::BoundInputs&)>& mutate) {
      cae::BoundInputs m = in;
      mutate(m);
      return cae::generalization_bound(m);
    };
    violations += raw([&](auto& m) { m.N = 2 * in.N; }).raw_sum > base.raw_sum;
    violations += raw([&](auto& m) { m.s *= g; }).raw_sum > base.raw_sum;
    violations += raw([&](auto& m) { m.u *= g; }).raw_sum > base.raw_sum;
    violations += raw([&](auto& m) { m.v *= g; }).raw_sum > base.raw_sum;
    violations += raw([&](auto& m) { m.t *= g; }).raw_sum > base.raw_sum;
    violations += raw([&](auto& m) { m.xi *= g; }).raw_sum < base.raw_sum;
    violations += raw([&](auto& m) { m.K *= g; }).raw_sum < base.raw_sum;
    violations += raw([&](auto& m) { m.lambda *= g; }).probability != base.probability;
    violations += !(base.probability >= 0 && base.probability <= 1);
  }
  std::ostringstream d;
  d << "example=" << fmt("%.3e", p) << " (1.816e-04), sweep violations=" << violations << "/900";
  return {hand && violations == 0, d.str()};
}

// ---------------------------------------------------------------- 8

Verdict criterion8() {
  std::map<std::string, std::string> again;
  std::set<std::string> families;
  for (const auto& [name, _] : g_artifacts) families.insert(name.substr(0, name.find('_')));
  if (families.count("landscape")) {
    const auto a = landscape_artifacts(nullptr, nullptr);
    again.insert(a.begin(), a.end());
  }
  if (families.count("descent")) {
    const auto a = descent_artifacts(nullptr);
    again.insert(a.begin(), a.end());
  }
  if (families.count("grid")) {
    const auto r = grid_run(1.0, 0);
    again.insert(r.artifacts.begin(), r.artifacts.end());
  }
  if (g_artifacts.empty()) return {false, "nothing to compare: criteria 1, 2 and 5 were not run"};
  int same = 0, differ = 0;
  std::string first_diff;
  for (const auto& [name, text] : g_artifacts) {
    const auto it = again.find(name);
    if (it != again.end() && it->second == text) {
      ++same;
    } else {
      ++differ;
      if (first_diff.empty()) first_diff = name;
    }
  }
  std::ostringstream d;
  d << same << " of " << g_artifacts.size() << " artifacts bit-identical on rerun";
  for (const auto& f : families) d << (f == *families.begin() ? " (" : ", ") << f;
  d << ")";
  if (differ) d << ", first difference: " << first_diff;
  return {differ == 0 && families.size() == 3, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"landscape minima", criterion1},   {"permutation optimum", criterion2}, {"mmd calibration", criterion3},
      {"gradient suites", criterion4},    {"grid experiment", criterion5},     {"capacity trend", criterion6},
      {"bound calculator", criterion7},   {"determinism", criterion8}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first << "): " << v.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
