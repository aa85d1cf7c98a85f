// cae: command-line front end for the Coulomb autoencoder toolkit.
//
//   cae landscape  --kernel coulomb --h 1 --free 1 --out land.csv
//   cae descent    --n 8 --h 2 --seed 7 --out traj.csv        (exit 0 = matched, 1 = not)
//   cae make-data  --kind grid --n 500 --seed 0 --out train.csv
//   cae train      --config cfg.txt --data train.csv --out-dir run/
//   cae generate   --ckpt run/decoder.ckpt --n 10000 --seed 1 --out gen.csv
//   cae eval       --gen gen.csv --test test.csv --out kde.csv
//   cae bound      --N 1000 --K 1 --xi 1 --lambda 1 --s 0.1 --u 0.1 --v 0.1 --t 0.1
//   cae gradcheck  --widths 2,8,8,2 --batch 8 --seed 0
//   cae rerun      --manifest land.csv.manifest.json
//
// Every command writes a JSON manifest with its fully resolved flags; `rerun`
// replays one. Exit codes: 0 ok, 1 negative result (descent/gradcheck),
// 2 usage or missing input, 3 nonfinite training loss.

#include "cae/bound.hpp"
#include "cae/data.hpp"
#include "cae/eval.hpp"
#include "cae/gradcheck.hpp"
#include "cae/io_format.hpp"
#include "cae/mmd.hpp"
#include "cae/particles.hpp"
#include "cae/plot.hpp"
#include "cae/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonFinite = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolved flags of one invocation, replayable through `cae rerun`.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void arg(const std::string& name, const std::string& value) { args_[name] = value; }
  void arg(const std::string& name, double value) { args_[name] = cae::format_double(value); }
  void arg(const std::string& name, long long value) { args_[name] = std::to_string(value); }
  void arg(const std::string& name, int value) { args_[name] = std::to_string(value); }
  void arg(const std::string& name, std::uint64_t value) { args_[name] = std::to_string(value); }
  void flag(const std::string& name, bool on) { args_[name] = on; }
  void output(const std::string& path) { outputs_.push_back(path); }

  void write(const std::string& path) const {
    json doc;
    doc["tool"] = "cae";
    doc["format"] = 1;
    doc["command"] = command_;
    doc["args"] = args_;
    doc["outputs"] = outputs_;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << doc.dump(2) << '\n';
  }

 private:
  std::string command_;
  json args_ = json::object();
  std::vector<std::string> outputs_;
};

std::ofstream open_out(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = cae::parse_double(item);
    if (!v) throw UsageError("bad number '" + item + "' in list '" + text + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text)) {
    if (v != static_cast<int>(v) || v <= 0) throw UsageError("widths must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string manifest_path(const std::string& requested, const std::string& fallback) {
  return requested.empty() ? fallback : requested;
}

struct KernelFlags {
  std::string family = "coulomb";
  int h = 2;
  double epsilon = 0.0;
  double sigma = 1.0;
  double c = 0.0;  // 0 = 2h

  void add(CLI::App* app, double default_epsilon, int default_h) {
    epsilon = default_epsilon;
    h = default_h;
    app->add_option("--kernel", family, "coulomb | gaussian | imq")
        ->check(CLI::IsMember({"coulomb", "gaussian", "imq"}))
        ->capture_default_str();
    app->add_option("--h", h, "latent dimension")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--epsilon", epsilon, "coulomb smoothing length")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--sigma", sigma, "gaussian bandwidth")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--c", c, "imq offset (default 2h)")->check(CLI::NonNegativeNumber);
  }

  cae::KernelSpec spec() const {
    cae::KernelSpec s;
    s.family = cae::parse_kernel_family(family);
    s.h = h;
    s.epsilon = epsilon;
    s.sigma = sigma;
    s.c = c > 0.0 ? c : 2.0 * h;
    return s;
  }

  void record(Manifest& m) const {
    m.arg("kernel", family);
    m.arg("h", h);
    m.arg("epsilon", epsilon);
    m.arg("sigma", sigma);
    m.arg("c", spec().c);
  }
};

// ---------------------------------------------------------------- landscape

struct LandscapeCmd {
  KernelFlags kernel;
  int free = 1;
  double grid_min = -6.0, grid_max = 6.0, grid_step = 0.01;
  std::string positives = "-4,0,4";
  std::string out, manifest;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("landscape", "energy of free negative charges over a 1-D grid");
    kernel.add(app, 0.0, 1);
    app->add_option("--free", free, "number of free charges (1 or 2)")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();
    app->add_option("--grid-min", grid_min)->capture_default_str();
    app->add_option("--grid-max", grid_max)->capture_default_str();
    app->add_option("--grid-step", grid_step)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--positives", positives, "comma-separated unit positive charge locations")
        ->capture_default_str();
    app->add_option("--out", out, "landscape CSV (an SVG is written next to it)")->required();
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto spec = kernel.spec();
    const auto pos = parse_list(positives);
    cae::ChargeSystem fixed{cae::SampleSet::from_scalars(pos), std::vector<double>(pos.size(), 1.0)};
    const auto grid = cae::make_grid(grid_min, grid_max, grid_step);
    const auto land = cae::landscape_scan(spec, fixed, free, grid);

    {
      auto csv = open_out(out);
      cae::write_landscape_csv(csv, land);
    }
    const std::string svg_path = fs::path(out).replace_extension(".svg").string();
    {
      auto svg = open_out(svg_path);
      cae::write_landscape_svg(svg, land,
                               std::string(cae::to_string(spec.family)) + " kernel, " + std::to_string(free) +
                                   " free charge" + (free == 2 ? "s" : ""));
    }

    if (free == 1) {
      const auto minima = cae::landscape_local_minima(land);
      std::cout << "local_minima=" << minima.size() << '\n';
      for (std::size_t m : minima)
        std::cout << "minimum z=" << cae::format_double(land.grid[m]) << " energy=" << cae::format_double(land.energy[m])
                  << '\n';
    } else {
      const auto cells = cae::global_minimum_cells(land);
      std::cout << "global_minimum_cells=" << cells.size() << '\n';
      for (auto [i, j] : cells)
        std::cout << "minimum z1=" << cae::format_double(land.grid[i]) << " z2=" << cae::format_double(land.grid[j])
                  << " energy=" << cae::format_double(land.at(i, j)) << '\n';
    }

    Manifest m("landscape");
    kernel.record(m);
    m.arg("free", free);
    m.arg("grid-min", grid_min);
    m.arg("grid-max", grid_max);
    m.arg("grid-step", grid_step);
    m.arg("positives", positives);
    m.arg("out", out);
    m.output(out);
    m.output(svg_path);
    m.write(manifest_path(manifest, out + ".manifest.json"));
  }
};

// ---------------------------------------------------------------- descent

struct DescentCmd {
  KernelFlags kernel;
  int n = 8;
  std::uint64_t seed = 7;
  double lr = 0.05;
  int iters = 20000;
  int record_every = 100;
  double tol = 0.05;
  bool plain = false;
  std::string out, manifest;
  int* exit_code = nullptr;

  void add(CLI::App& root, int* code) {
    exit_code = code;
    auto* app = root.add_subcommand("descent", "particle descent onto seeded targets + permutation match");
    kernel.add(app, 1e-3, 2);
    app->add_option("--n", n, "number of targets and free particles")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--lr", lr)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--iters", iters)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--record-every", record_every)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--tol", tol, "match tolerance (euclidean)")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_flag("--plain", plain, "raw q -= lr*grad steps without the step safeguard");
    app->add_option("--out", out, "trajectory CSV")->required();
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    if (n <= kernel.h) throw UsageError("descent needs N > h (got N=" + std::to_string(n) + ", h=" + std::to_string(kernel.h) + ")");
    const auto spec = kernel.spec();
    const auto [targets, init] =
        cae::seeded_descent_problem(static_cast<std::size_t>(n), static_cast<std::size_t>(kernel.h), seed);
    cae::DescentOptions opt;
    opt.lr = lr;
    opt.iters = iters;
    opt.record_every = record_every;
    opt.safeguarded = !plain;
    const auto res = cae::particle_descent(spec, targets, init, opt);
    {
      auto csv = open_out(out);
      cae::write_trajectory_csv(csv, res);
    }
    const auto perm = cae::match_permutation(res.final_positions, targets, tol);
    std::cout << "initial_energy=" << cae::format_double(res.trajectory.front().energy) << '\n'
              << "final_energy=" << cae::format_double(res.trajectory.back().energy) << '\n'
              << "matched=" << (perm ? "yes" : "no") << '\n';
    if (res.comparison_mode) std::cout << "note: non-coulomb kernel (comparison mode)\n";

    Manifest m("descent");
    kernel.record(m);
    m.arg("n", n);
    m.arg("seed", seed);
    m.arg("lr", lr);
    m.arg("iters", iters);
    m.arg("record-every", record_every);
    m.arg("tol", tol);
    m.flag("plain", plain);
    m.arg("out", out);
    m.output(out);
    m.write(manifest_path(manifest, out + ".manifest.json"));
    *exit_code = perm ? 0 : kExitNegative;
  }
};

// ---------------------------------------------------------------- make-data

struct MakeDataCmd {
  std::string kind = "grid";
  std::size_t n = 500;
  std::uint64_t seed = 0;
  int h = 2;
  std::string out, manifest;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("make-data", "write a synthetic dataset as CSV");
    app->add_option("--kind", kind, "grid | prior")->check(CLI::IsMember({"grid", "prior"}))->capture_default_str();
    app->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--h", h, "dimension for --kind prior")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--out", out)->required();
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto set = kind == "grid" ? cae::grid_dataset(n, seed)
                                    : cae::gaussian_prior_sample(n, static_cast<std::size_t>(h), seed);
    {
      auto csv = open_out(out);
      cae::write_samples_csv(csv, set);
    }
    std::cout << "wrote " << set.size() << " samples of dim " << set.dim() << " to " << out << '\n';
    Manifest m("make-data");
    m.arg("kind", kind);
    m.arg("n", static_cast<long long>(n));
    m.arg("seed", seed);
    m.arg("h", h);
    m.arg("out", out);
    m.output(out);
    m.write(manifest_path(manifest, out + ".manifest.json"));
  }
};

// ---------------------------------------------------------------- train

struct TrainCmd {
  std::string config_path, data, out_dir, manifest;
  std::string set_iters, set_seed, set_width_factor, set_lambda;
  bool quiet = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("train", "train encoder/decoder on a CSV dataset");
    app->add_option("--config", config_path, "key=value TrainConfig file (defaults if omitted)");
    app->add_option("--data", data, "training samples CSV")->required();
    app->add_option("--out-dir", out_dir)->required();
    app->add_option("--iters", set_iters, "override iters");
    app->add_option("--seed", set_seed, "override seed");
    app->add_option("--width-factor", set_width_factor, "override width_factor");
    app->add_option("--lambda", set_lambda, "override lambda");
    app->add_flag("--quiet", quiet, "no per-history progress on stderr");
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    std::stringstream resolved;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open " + config_path);
      resolved << in.rdbuf() << '\n';
    }
    if (!set_iters.empty()) resolved << "iters=" << set_iters << '\n';
    if (!set_seed.empty()) resolved << "seed=" << set_seed << '\n';
    if (!set_width_factor.empty()) resolved << "width_factor=" << set_width_factor << '\n';
    if (!set_lambda.empty()) resolved << "lambda=" << set_lambda << '\n';
    const cae::TrainConfig cfg = cae::parse_train_config(resolved);
    const cae::SampleSet dataset = cae::load_samples_csv(data);

    fs::create_directories(out_dir);
    const std::string enc_path = (fs::path(out_dir) / "encoder.ckpt").string();
    const std::string dec_path = (fs::path(out_dir) / "decoder.ckpt").string();
    const std::string hist_path = (fs::path(out_dir) / "history.csv").string();
    const std::string cfg_path = (fs::path(out_dir) / "config.txt").string();
    {
      auto out = open_out(cfg_path);
      cae::write_train_config(out, cfg);
    }

    const auto result = cae::train(cfg, dataset, [this](const cae::HistoryRow& row) {
      if (!quiet && row.iter % 1000 == 0)
        std::cerr << "iter " << row.iter << " total=" << row.loss.total << " recon=" << row.loss.recon
                  << " mmd=" << row.loss.mmd << '\n';
    });
    cae::save_checkpoint(enc_path, result.enc);
    cae::save_checkpoint(dec_path, result.dec);
    {
      auto out = open_out(hist_path);
      cae::write_history_csv(out, result.history);
    }
    const auto rec = cae::reconstruct(result.enc, result.dec, dataset);
    std::cout << "final_total=" << cae::format_double(result.history.empty() ? 0.0 : result.history.back().loss.total)
              << '\n'
              << "train_recon_mean=" << cae::format_double(rec.mean_error) << '\n'
              << "train_recon_max=" << cae::format_double(rec.max_error) << '\n';

    Manifest m("train");
    m.arg("config", cfg_path);  // the resolved configuration
    m.arg("data", data);
    m.arg("out-dir", out_dir);
    m.flag("quiet", quiet);
    for (const auto& p : {enc_path, dec_path, hist_path, cfg_path}) m.output(p);
    m.write(manifest_path(manifest, (fs::path(out_dir) / "manifest.json").string()));
  }
};

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  std::string ckpt, out, manifest;
  std::size_t n = 10000;
  std::uint64_t seed = 1;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("generate", "decode seeded prior draws");
    app->add_option("--ckpt", ckpt, "decoder checkpoint")->required();
    app->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--out", out)->required();
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto dec = cae::load_checkpoint(ckpt);
    const auto samples = cae::generate(dec, n, seed);
    {
      auto csv = open_out(out);
      cae::write_samples_csv(csv, samples);
    }
    std::cout << "wrote " << samples.size() << " samples to " << out << '\n';
    Manifest m("generate");
    m.arg("ckpt", ckpt);
    m.arg("n", static_cast<long long>(n));
    m.arg("seed", seed);
    m.arg("out", out);
    m.output(out);
    m.write(manifest_path(manifest, out + ".manifest.json"));
  }
};

// ---------------------------------------------------------------- eval

struct EvalCmd {
  std::string gen, test, out, manifest;
  bool modes = false;
  double radius = 0.15;
  int min_count = 10;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("eval", "KDE test log-likelihood of generated samples");
    app->add_option("--gen", gen, "generated samples CSV")->required();
    app->add_option("--test", test, "test samples CSV")->required();
    app->add_option("--out", out, "per-bandwidth CSV")->required();
    app->add_flag("--modes", modes, "also report grid mode coverage of the generated samples");
    app->add_option("--radius", radius)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--min-count", min_count)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto g = cae::load_samples_csv(gen);
    const auto t = cae::load_samples_csv(test);
    const auto bw = cae::default_bandwidths();
    const auto res = cae::kde_loglik(g, t, bw);
    {
      auto csv = open_out(out);
      cae::write_kde_csv(csv, res);
    }
    std::cout << "best_bandwidth=" << cae::format_double(res.best_bandwidth) << '\n'
              << "mean_loglik=" << cae::format_double(res.best_loglik) << '\n';
    if (modes) {
      const auto cov = cae::mode_coverage(g, cae::grid_centers(), radius, min_count);
      std::cout << "modes_covered=" << cov.covered << "/25\n";
    }
    Manifest m("eval");
    m.arg("gen", gen);
    m.arg("test", test);
    m.arg("out", out);
    m.flag("modes", modes);
    m.arg("radius", radius);
    m.arg("min-count", min_count);
    m.output(out);
    m.write(manifest_path(manifest, out + ".manifest.json"));
  }
};

// ---------------------------------------------------------------- bound

struct BoundCmd {
  cae::BoundInputs in;
  std::string out, manifest;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("bound", "generalization bound: threshold, probability and terms");
    app->add_option("--N", in.N)->required();
    app->add_option("--K", in.K)->required();
    app->add_option("--xi", in.xi)->required();
    app->add_option("--lambda", in.lambda)->required();
    app->add_option("--s", in.s)->required();
    app->add_option("--u", in.u)->required();
    app->add_option("--v", in.v)->required();
    app->add_option("--t", in.t)->required();
    app->add_option("--out", out, "also write the CSV row to this file");
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto r = cae::generalization_bound(in);
    std::ostringstream csv;
    csv << "threshold,probability,raw_sum,term_t,term_s,term_u,term_v\n"
        << cae::format_double(r.threshold) << ',' << cae::format_double(r.probability) << ','
        << cae::format_double(r.raw_sum);
    for (double term : r.terms) csv << ',' << cae::format_double(term);
    csv << '\n';
    std::cout << csv.str();
    char summary[96];
    std::snprintf(summary, sizeof summary, "probability %.3e threshold %.4g\n", r.probability, r.threshold);
    std::cout << summary;
    if (!out.empty()) {
      auto f = open_out(out);
      f << csv.str();
    }
    Manifest m("bound");
    m.arg("N", in.N);
    m.arg("K", in.K);
    m.arg("xi", in.xi);
    m.arg("lambda", in.lambda);
    m.arg("s", in.s);
    m.arg("u", in.u);
    m.arg("v", in.v);
    m.arg("t", in.t);
    if (!out.empty()) {
      m.arg("out", out);
      m.output(out);
    }
    m.write(manifest_path(manifest, out.empty() ? "bound.manifest.json" : out + ".manifest.json"));
  }
};

// ---------------------------------------------------------------- gradcheck

struct GradcheckCmd {
  std::string widths = "2,8,8,2";
  int batch = 8;
  std::uint64_t seed = 0;
  double lambda = 100.0;
  double tolerance = 1e-4;
  KernelFlags kernel;
  std::string manifest;
  int* exit_code = nullptr;

  void add(CLI::App& root, int* code) {
    exit_code = code;
    auto* app = root.add_subcommand("gradcheck", "finite-difference check of the full loss gradient");
    app->add_option("--widths", widths, "encoder widths; decoder uses the reverse")->capture_default_str();
    app->add_option("--batch", batch)->check(CLI::Range(2, 1 << 20))->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--lambda", lambda)->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--tolerance", tolerance)->check(CLI::PositiveNumber)->capture_default_str();
    kernel.add(app, 1e-3, 2);
    app->add_option("--manifest", manifest);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto w = parse_int_list(widths);
    auto spec = kernel.spec();
    const auto report = cae::check_loss_gradient(w, batch, seed, spec, lambda);
    std::cout << "parameters=" << report.parameters << '\n'
              << "max_rel_error=" << cae::format_double(report.max_rel_error) << '\n';
    Manifest m("gradcheck");
    m.arg("widths", widths);
    m.arg("batch", batch);
    m.arg("seed", seed);
    m.arg("lambda", lambda);
    m.arg("tolerance", tolerance);
    kernel.record(m);
    m.write(manifest_path(manifest, "gradcheck.manifest.json"));
    *exit_code = report.max_rel_error < tolerance ? 0 : kExitNegative;
  }
};

int run_cli(std::vector<std::string> args);

// ---------------------------------------------------------------- rerun

struct RerunCmd {
  std::string manifest;
  std::vector<std::string> overrides;
  int* exit_code = nullptr;

  void add(CLI::App& root, int* code) {
    exit_code = code;
    auto* app = root.add_subcommand("rerun", "replay a run from its manifest");
    app->add_option("--manifest", manifest)->required();
    app->add_option("--set", overrides, "override a recorded flag, key=value (e.g. out=other.csv)");
    app->callback([this] { run(); });
  }

  void run() const {
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error("cannot open " + manifest);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("manifest " + manifest + ": " + e.what());
    }
    if (doc.value("tool", "") != "cae" || !doc.contains("command") || !doc.contains("args"))
      throw UsageError("manifest " + manifest + " is not a cae manifest");
    std::map<std::string, json> args;
    for (auto& [k, v] : doc["args"].items()) args[k] = v;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
      const std::string key = o.substr(0, eq), value = o.substr(eq + 1);
      const auto it = args.find(key);
      if (it != args.end() && it->second.is_boolean()) {
        if (value != "true" && value != "false") throw UsageError("--set " + key + " expects true or false");
        args[key] = value == "true";
      } else {
        args[key] = value;
      }
    }
    std::vector<std::string> argv{"cae", doc["command"].get<std::string>()};
    for (const auto& [k, v] : args) {
      if (v.is_boolean()) {
        if (v.get<bool>()) argv.push_back("--" + k);
      } else {
        argv.push_back("--" + k);
        argv.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
    *exit_code = run_cli(argv);
  }
};

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Coulomb-kernel MMD autoencoder toolkit"};
  // --h is the latent dimension, so help is long-form only.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  int code = 0;

  LandscapeCmd landscape;
  DescentCmd descent;
  MakeDataCmd make_data;
  TrainCmd train;
  GenerateCmd generate;
  EvalCmd eval;
  BoundCmd bound;
  GradcheckCmd gradcheck;
  RerunCmd rerun;
  landscape.add(app);
  descent.add(app, &code);
  make_data.add(app);
  train.add(app);
  generate.add(app);
  eval.add(app);
  bound.add(app);
  gradcheck.add(app, &code);
  rerun.add(app, &code);

  std::reverse(args.begin(), args.end());
  args.pop_back();  // program name
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cae::NonFiniteLossError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonFinite;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc));
}
