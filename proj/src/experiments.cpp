#include "msr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "msr/adversarial.hpp"
#include "msr/bounds.hpp"
#include "msr/errors.hpp"
#include "msr/incoherence.hpp"
#include "msr/plot.hpp"
#include "msr/serialization.hpp"
#include "msr/vandermonde.hpp"

namespace msr {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kVersion = "0.1.0";

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<Complex> random_amplitudes(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> a;
  for (int j = 0; j < n; ++j) a.push_back(std::polar(1.0 + 0.5 * u(rng), 2.0 * kPi * u(rng)));
  return a;
}

// Unit gaps in [1, 1.25] with one gap exactly 1.
std::vector<double> unit_layout(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pos{0.0};
  const int exact = n > 1 ? static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1)) : 0;
  for (int j = 0; j + 1 < n; ++j) pos.push_back(pos.back() + (j == exact ? 1.0 : 1.0 + 0.25 * u(rng)));
  return pos;
}

// 1 + cos(k . (y - c) + 2 pi t / T + off)
IlluminationSet shifted_cosines(int frames, const Location& k, const Location& c, double off) {
  std::vector<Pattern> pats;
  for (int t = 0; t < frames; ++t) {
    Sinusoid s;
    s.offset = 1.0;
    s.amplitude = 1.0;
    s.wavevector = k;
    s.phase = 2.0 * kPi * t / frames + off - dot(k, c);
    pats.emplace_back(s);
  }
  return IlluminationSet(std::move(pats));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, std::vector<std::string> header) : path_(path), os_(path), width_(header.size()) {
    if (!os_) throw std::runtime_error("cannot write " + path.string());
    line(header);
  }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
    line(cells);
    ++rows_;
  }
  int rows() const { return rows_; }
  const fs::path& path() const { return path_; }
  void close() {
    os_.close();
    if (os_.fail()) throw std::runtime_error("write failed: " + path_.string());
  }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
    if (!os_) throw std::runtime_error("write failed: " + path_.string());
  }
  fs::path path_;
  std::ofstream os_;
  std::size_t width_;
  int rows_ = 0;
};

std::string b(bool v) { return v ? "1" : "0"; }
std::string i2s(long long v) { return std::to_string(v); }

struct Context {
  const ExperimentConfig& config;
  RunManifest& manifest;
  Json& cells;
  fs::path out;

  void add_file(const fs::path& p) { manifest.files.push_back(p.filename().string()); }
  void add_cell(Json cell) {
    cells.push_back(std::move(cell));
    ++manifest.cells;
  }
  void svg(const fs::path& csv, PlotKind kind, const std::string& suffix) {
    const fs::path p = out / (csv.stem().string() + suffix + ".svg");
    plot_file(csv, kind, p);
    add_file(p);
  }
};

std::vector<std::size_t> best_permutation(const std::vector<double>& truth, const std::vector<double>& rec) {
  std::vector<std::size_t> perm(truth.size()), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t j = 0; j < perm.size(); ++j) cost += std::abs(rec[perm[j]] - truth[j]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// --- scenarios -------------------------------------------------------------

void phase_transition_1d(Context& ctx) {
  const auto& c = ctx.config;
  const int n = c.integer("n", 2);
  const auto frames = c.numbers("frames", {1, 2});
  const auto seps = c.numbers("separations", {0.02, 0.03, 0.05, 0.075, 0.1, 0.15, 0.2, 0.3});
  const auto noises = c.numbers("noise", {1e-2});
  const int trials = c.integer("trials", 50);
  const double omega = c.number("omega", 1.0);
  const auto base = static_cast<std::uint64_t>(c.integer("seed", 1));

  CsvWriter summary(ctx.out / "phase1d_thresholds.csv",
                    {"frames", "noise", "empirical_threshold", "theorem_threshold", "found"});
  std::map<double, std::map<int, std::optional<double>>> by_noise;
  for (double tf : frames) {
    const int T = static_cast<int>(tf);
    const fs::path path = ctx.out / ("phase1d_T" + std::to_string(T) + ".csv");
    CsvWriter csv(path, {"frames", "separation", "noise", "trial", "seed", "success", "sparsity", "max_deviation",
                         "max_residual", "threshold", "sigma_inf_min"});
    for (std::size_t zi = 0; zi < noises.size(); ++zi) {
      std::vector<double> rates;
      double thr_sum = 0.0;
      int thr_count = 0;
      for (std::size_t si = 0; si < seps.size(); ++si) {
        int ok = 0;
        const std::uint64_t cell = static_cast<std::uint64_t>(T) * 1000000 + zi * 1000 + si;
        for (int i = 0; i < trials; ++i) {
          LineSpec spec;
          spec.n = n;
          spec.frames = T;
          spec.noise_ratio = noises[zi];
          spec.omega = omega;
          spec.separation = seps[si] * kPi / omega;
          spec.pattern_frequency = c.number("pattern_frequency", 4.0);
          spec.grid_nodes = c.integer("grid_nodes", 60);
          spec.seed = cell_seed(base, cell, static_cast<std::uint64_t>(i));
          const auto inst = make_line_instance(spec);
          const auto out = run_line_trial(inst);
          ok += out.success;
          const double max_res = out.result.per_frame_residuals.empty()
                                     ? std::nan("")
                                     : *std::max_element(out.result.per_frame_residuals.begin(),
                                                         out.result.per_frame_residuals.end());
          const double thr = inst.threshold * omega / kPi;
          if (std::isfinite(thr)) {
            thr_sum += thr;
            ++thr_count;
          }
          csv.row({i2s(T), fmt(seps[si]), fmt(noises[zi]), i2s(i), i2s(static_cast<long long>(spec.seed)),
                   b(out.success), i2s(out.result.sparsity),
                   fmt(out.matching.deviations.empty() ? std::nan("") : out.matching.max_deviation * omega / kPi),
                   fmt(max_res), fmt(thr), fmt(inst.sigma_inf_min)});
        }
        rates.push_back(static_cast<double>(ok) / trials);
        ctx.add_cell({{"frames", T}, {"noise", noises[zi]}, {"separation", seps[si]}, {"trials", trials},
                      {"successes", ok}, {"seed_base", base}, {"cell", cell}});
      }
      const auto emp = empirical_threshold(seps, rates);
      const double theorem = thr_count ? thr_sum / thr_count : std::nan("");
      by_noise[noises[zi]][T] = emp;
      summary.row({i2s(T), fmt(noises[zi]), fmt(emp.value_or(std::nan(""))), fmt(theorem), b(emp.has_value())});
      if (emp && std::isfinite(theorem) && *emp > theorem)
        ctx.manifest.notes.push_back("T=" + std::to_string(T) + " noise " + fmt(noises[zi]) +
                                     ": empirical threshold above the theorem threshold");
      if (!emp)
        ctx.manifest.notes.push_back("T=" + std::to_string(T) + " noise " + fmt(noises[zi]) +
                                     ": no tested separation reached 95% success");
    }
    ctx.manifest.rows += csv.rows();
    csv.close();
    ctx.add_file(path);
    ctx.svg(path, PlotKind::heatmap, "_heatmap");
    ctx.svg(path, PlotKind::threshold_overlay, "_overlay");
  }
  summary.close();
  ctx.add_file(summary.path());
  for (const auto& [z, m] : by_noise) {
    for (auto it = m.begin(); it != m.end() && std::next(it) != m.end(); ++it) {
      const auto& lo = it->second;
      const auto& hi = std::next(it)->second;
      const bool better = hi && (!lo || *hi < *lo);
      ctx.manifest.notes.push_back("noise " + fmt(z) + ": T=" + std::to_string(std::next(it)->first) +
                                   (better ? " resolves below " : " does not resolve below ") +
                                   "T=" + std::to_string(it->first));
    }
  }
}

void phase_transition_2d(Context& ctx) {
  const auto& c = ctx.config;
  const int n = c.integer("n", 2);
  const auto factors = c.numbers("factors", {0.5, 0.75, 1.0});
  const auto noises = c.numbers("noise", {1e-4});
  const int trials = c.integer("trials", 20);
  const double omega = c.number("omega", 1.0);
  const auto base = static_cast<std::uint64_t>(c.integer("seed", 1));
  const fs::path path = ctx.out / "phase2d.csv";
  CsvWriter csv(path, {"factor", "separation", "noise", "trial", "seed", "success", "sparsity", "max_deviation",
                       "planar_bound", "threshold"});
  for (std::size_t zi = 0; zi < noises.size(); ++zi)
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      int ok = 0;
      const std::uint64_t cell = zi * 1000 + fi;
      for (int i = 0; i < trials; ++i) {
        PlaneSpec spec;
        spec.n = n;
        spec.frames = c.integer("frames", 2);
        spec.noise_ratio = noises[zi];
        spec.omega = omega;
        spec.c0 = c.number("c0", 1.0);
        spec.threshold_factor = factors[fi];
        spec.seed = cell_seed(base, cell, static_cast<std::uint64_t>(i));
        const auto inst = make_plane_instance(spec);
        const auto out = run_plane_trial(inst);
        ok += out.trial.success;
        csv.row({fmt(factors[fi]), fmt(inst.d_min * omega / kPi), fmt(noises[zi]), i2s(i),
                 i2s(static_cast<long long>(spec.seed)), b(out.trial.success), i2s(out.trial.result.sparsity),
                 fmt(out.trial.matching.deviations.empty() ? std::nan("") : out.trial.matching.max_deviation),
                 fmt(out.pigeonhole ? out.pigeonhole->planar_bound : std::nan("")),
                 fmt(inst.threshold * omega / kPi)});
      }
      ctx.add_cell({{"noise", noises[zi]}, {"factor", factors[fi]}, {"trials", trials}, {"successes", ok},
                    {"seed_base", base}, {"cell", cell}});
    }
  ctx.manifest.rows += csv.rows();
  csv.close();
  ctx.add_file(path);
  ctx.svg(path, PlotKind::heatmap, "_heatmap");
  ctx.svg(path, PlotKind::deviation_scatter, "_deviations");
}

void theorem_certify(Context& ctx) {
  const auto& c = ctx.config;
  const int n = c.integer("n", 2);
  const int trials = c.integer("trials", 20);
  const double omega = c.number("omega", 1.0);
  const auto base = static_cast<std::uint64_t>(c.integer("seed", 1));
  const fs::path path = ctx.out / "certify.csv";
  CsvWriter csv(path, {"trial", "seed", "separation", "threshold", "success", "max_deviation", "error_bound",
                       "slack", "within_bound", "infeasible_below_n"});
  int passed = 0;
  for (int i = 0; i < trials; ++i) {
    LineSpec spec;
    spec.n = n;
    spec.frames = c.integer("frames", n);
    spec.noise_ratio = c.number("noise", 1e-3);
    spec.omega = omega;
    spec.threshold_factor = c.number("factor", 1.0);
    spec.seed = cell_seed(base, static_cast<std::uint64_t>(i));
    auto inst = make_line_instance(spec);
    const auto out = run_line_trial(inst);
    const auto cert = certify_against_theorem(inst.truth, out.result.measure,
                                              build_illumination_matrix(inst.illum, inst.truth), inst.sigma, omega,
                                              TheoremMode::wrapped_1d);
    inst.problem.max_sparsity = n - 1;
    const bool infeasible = !solve_l0(inst.problem).feasible;
    const bool within = !cert.vacuous && cert.max_deviation <= cert.error_bound;
    const bool ok = out.success && within && infeasible;
    passed += ok;
    csv.row({i2s(i), i2s(static_cast<long long>(spec.seed)), fmt(inst.d_min * omega / kPi),
             fmt(inst.threshold * omega / kPi), b(out.success), fmt(cert.max_deviation), fmt(cert.error_bound),
             fmt(cert.slack), b(within), b(infeasible)});
    ctx.add_cell({{"trial", i}, {"seed", spec.seed}, {"passed", ok}});
  }
  if (passed != trials) {
    ctx.manifest.all_passed = false;
    ctx.manifest.notes.push_back(std::to_string(trials - passed) + " certification trials failed");
  }
  ctx.manifest.rows += csv.rows();
  csv.close();
  ctx.add_file(path);
  ctx.svg(path, PlotKind::deviation_scatter, "_deviations");
}

void adversarial_demo(Context& ctx) {
  const auto& c = ctx.config;
  const auto ns = c.numbers("n", {2, 3, 4});
  const int trials = c.integer("trials", 10);
  const int frames = c.integer("frames", 3);
  const double omega = c.number("omega", 1.0);
  const double ratio = c.number("noise", 1e-2);
  const auto base = static_cast<std::uint64_t>(c.integer("seed", 1));
  const fs::path path = ctx.out / "adversarial.csv";
  CsvWriter csv(path, {"n", "trial", "seed", "tau", "omega_tau", "sigma", "max_residual", "max_amplitude_sum",
                       "amplitude_bound", "disjoint", "passed"});
  Json instances = Json::array();
  for (double nf : ns) {
    const int n = static_cast<int>(nf);
    const double tau = adversarial_spacing(n, omega, ratio, 1.0);
    for (int i = 0; i < trials; ++i) {
      const auto seed = cell_seed(base, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i));
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
      std::vector<double> phases;
      for (int j = 0; j < n; ++j) phases.push_back(u(rng));
      const auto illum = random_bounded_illumination(frames, -n * tau, (n - 1) * tau, 20.0 * omega, rng());
      bool ok = false, disjoint = false;
      double max_res = std::nan(""), max_sum = std::nan(""), bound = amplitude_sum_bound(n, 1.0);
      try {
        const auto inst = build_instance(n, omega, ratio, 1.0, illum, phases);
        std::set<double> mu_pos, rho_pos;
        for (const auto& l : inst.mu.locations()) mu_pos.insert(l.x);
        for (const auto& l : inst.rho.locations()) rho_pos.insert(l.x);
        disjoint = std::none_of(mu_pos.begin(), mu_pos.end(), [&](double x) { return rho_pos.count(x) > 0; });
        max_res = *std::max_element(inst.residuals.begin(), inst.residuals.end());
        max_sum = *std::max_element(inst.amplitude_sums.begin(), inst.amplitude_sums.end());
        ok = disjoint && max_res < inst.sigma && max_sum <= bound && omega * inst.tau < 0.05;
        if (n == 3 && i == 0) instances.push_back(to_json(inst));
      } catch (const DomainError& e) {
        ctx.manifest.notes.push_back("n=" + std::to_string(n) + " trial " + std::to_string(i) + ": " + e.what());
      } catch (const CertificationError& e) {
        ctx.manifest.notes.push_back("n=" + std::to_string(n) + " trial " + std::to_string(i) + ": " + e.what());
      }
      if (!ok) ctx.manifest.all_passed = false;
      csv.row({i2s(n), i2s(i), i2s(static_cast<long long>(seed)), fmt(tau), fmt(omega * tau), fmt(ratio),
               fmt(max_res), fmt(max_sum), fmt(bound), b(disjoint), b(ok)});
      ctx.add_cell({{"n", n}, {"trial", i}, {"seed", seed}, {"passed", ok}});
    }
  }
  ctx.manifest.rows += csv.rows();
  csv.close();
  ctx.add_file(path);
  const fs::path jp = ctx.out / "adversarial_examples.json";
  std::ofstream(jp) << instances.dump(2) << '\n';
  ctx.add_file(jp);
}

struct LemmaTally {
  std::string lemma;
  int k = 0;
  int instances = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // largest (observed / allowed) or (allowed / observed)
};

void lemma_suite(Context& ctx) {
  const auto& c = ctx.config;
  const auto base = static_cast<std::uint64_t>(c.integer("seed", 1));
  std::vector<LemmaTally> tallies;

  // smallest eta over theta_hat versus xi(k) (2 theta_min / pi)^k
  const int eta_configs = c.integer("eta_configs", 10);
  const int eta_starts = c.integer("eta_starts", 100);
  for (int k = 1; k <= 3; ++k) {
    LemmaTally t{"eta-lower-bound", k};
    std::mt19937_64 rng(cell_seed(base, 1, static_cast<std::uint64_t>(k)));
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int r = 0; r < eta_configs; ++r) {
      std::vector<double> theta;
      do {
        theta.clear();
        for (int j = 0; j <= k; ++j) theta.push_back(u(rng));
      } while (theta_min(theta) < 0.05);
      const auto rep = eta_lower_bound_check(theta, eta_starts - 1, rng());
      t.instances += rep.starts;
      t.violations += rep.violations;
      t.worst_ratio = std::max(t.worst_ratio, rep.bound / rep.min_found);
    }
    tallies.push_back(t);
  }

  // projection distance versus 2^-k |prod (e^{i theta} - e^{i theta_hat_j})|
  {
    LemmaTally t{"projection-distance", 6};
    std::mt19937_64 rng(cell_seed(base, 2));
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const int count = c.integer("projection_instances", 10000);
    for (int r = 0; r < count; ++r) {
      const int k = 1 + static_cast<int>(rng() % 6);
      std::vector<double> th;
      do {
        th.clear();
        for (int j = 0; j < k; ++j) th.push_back(u(rng));
      } while (k > 1 && theta_min(th) < 1e-2);
      const double theta = u(rng);
      double prod = 1.0;
      for (double x : th) prod *= std::abs(std::polar(1.0, theta) - std::polar(1.0, x));
      const double rhs = prod / std::ldexp(1.0, k);
      const double lhs = projection_distance(th, theta);
      ++t.instances;
      if (lhs < rhs * (1.0 - 1e-9) - 1e-12) ++t.violations;
      if (lhs > 0.0) t.worst_ratio = std::max(t.worst_ratio, rhs / lhs);
    }
    tallies.push_back(t);
  }

  // pair perturbation strictly decreases on the admissible grid
  {
    LemmaTally t{"pair-perturbation", 2};
    const int g = c.integer("pair_grid", 100);
    const double delta = c.number("pair_delta", 1e-4);
    for (int i = 0; i < g; ++i) {
      const double p = 2.0 * kPi * (i + 0.5) / g;
      const double qmax = std::min(p + kPi, 2.0 * kPi);
      for (int j = 0; j < g; ++j) {
        const double q = p + (qmax - p) * (j + 0.5) / g;
        ++t.instances;
        if (!pair_perturbation_decreases(p, q, delta)) ++t.violations;
      }
    }
    tallies.push_back(t);
  }

  // stability inversion on instances satisfying its hypotheses
  {
    const int count = c.integer("stability_instances", 500);
    LemmaTally t3{"stability-inversion", 3}, t4{"stability-inversion", 4};
    std::mt19937_64 rng(cell_seed(base, 3));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int accepted = 0;
    while (accepted < count) {
      const int k = 3 + static_cast<int>(rng() % 2);
      std::vector<double> th;
      for (int j = 0; j < k; ++j) th.push_back(2.0 * kPi * u(rng));
      std::sort(th.begin(), th.end());
      const double tmin = theta_min(th);
      if (tmin < 0.3) continue;
      const double eps = to_double(lambda(k)) * std::pow(tmin, k) / 4.0 * (0.01 + 0.99 * u(rng));
      const double target = std::pow(2.0 / kPi, k) * eps;
      const double scale = u(rng);
      std::vector<double> hat = th;
      for (int j = 0; j < k; ++j) {
        double prod = 1.0;
        for (int m = 0; m < k; ++m)
          if (m != j) prod *= std::abs(std::polar(1.0, th[j]) - std::polar(1.0, th[m]));
        hat[j] += target / prod * scale * (2.0 * u(rng) - 1.0) * 3.0;
      }
      if (eta_angles(th, hat).maxCoeff() >= target) continue;
      ++accepted;
      auto& t = k == 3 ? t3 : t4;
      ++t.instances;
      try {
        const auto rep = stability_inversion(th, hat, eps);
        const double worst = *std::max_element(rep.deviations.begin(), rep.deviations.end());
        t.worst_ratio = std::max(t.worst_ratio, worst / rep.quantitative_bound);
      } catch (const CertificationError&) {
        ++t.violations;
      }
    }
    tallies.push_back(t3);
    tallies.push_back(t4);
  }

  // residual below sigma implies ||eta||_inf < 2^k sigma / sigma_inf_min(B)
  {
    const int count = c.integer("approx_instances", 200);
    std::mt19937_64 rng(cell_seed(base, 4));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 2; k <= 4; ++k) {
      LemmaTally t{"approx-certificate", k};
      for (int r = 0; r < count / 3; ++r) {
        std::vector<double> th;
        do {
          th.clear();
          for (int j = 0; j < k; ++j) th.push_back(2.0 * kPi * u(rng));
        } while (theta_min(th) < 0.2);
        std::vector<double> hat = th;
        const double jitter = std::pow(10.0, -3.0 * u(rng));
        for (double& x : hat) x += jitter * (2.0 * u(rng) - 1.0);
        const int frames = k + static_cast<int>(rng() % 2);
        Eigen::MatrixXcd bm(frames, k);
        for (int i = 0; i < frames; ++i)
          for (int j = 0; j < k; ++j) bm(i, j) = Complex(g(rng), g(rng));
        auto cert = approx_eta_certificate(th, hat, bm, 1.0);
        cert = approx_eta_certificate(th, hat, bm, cert.max_residual * (1.0 + u(rng)) + 1e-300);
        ++t.instances;
        if (!cert.hypothesis || !cert.holds) ++t.violations;
        if (cert.bound > 0.0) t.worst_ratio = std::max(t.worst_ratio, cert.eta_inf / cert.bound);
      }
      tallies.push_back(t);
    }
  }

  const int n_max = c.integer("combinatorial_n", 50);
  const auto comb = verify_combinatorial_lemmas(n_max);
  {
    LemmaTally t{"combinatorial", n_max};
    for (const auto& chk : comb.checks) {
      ++t.instances;
      if (!chk.holds) ++t.violations;
      if (chk.rhs != 0.0) t.worst_ratio = std::max(t.worst_ratio, chk.lhs / chk.rhs);
    }
    tallies.push_back(t);
  }

  const fs::path path = ctx.out / "lemmas.csv";
  CsvWriter csv(path, {"lemma", "k", "instances", "violations", "worst_ratio", "passed"});
  for (const auto& t : tallies) {
    const bool ok = t.violations == 0;
    if (!ok) ctx.manifest.all_passed = false;
    csv.row({t.lemma, i2s(t.k), i2s(t.instances), i2s(t.violations), fmt(t.worst_ratio), b(ok)});
    ctx.add_cell({{"lemma", t.lemma}, {"k", t.k}, {"instances", t.instances}, {"violations", t.violations}});
  }
  ctx.manifest.rows += csv.rows();
  csv.close();
  ctx.add_file(path);
  const fs::path jp = ctx.out / "combinatorial.json";
  std::ofstream(jp) << to_json(comb).dump(2) << '\n';
  ctx.add_file(jp);
}

void incoherence_sweep(Context& ctx) {
  const auto& c = ctx.config;
  const auto ss = c.numbers("s", {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  const int random = c.integer("random", 20);
  const int rows = c.integer("rows", 3);
  const int cols = c.integer("cols", 2);
  const double tol = c.number("tol", 1e-6);
  const auto base = static_cast<std::uint64_t>(c.integer("seed", 1));
  const fs::path path = ctx.out / "incoherence.csv";
  CsvWriter csv(path, {"case", "s", "value", "reference", "svd_lower_bound", "abs_error", "passed"});
  for (double s : ss) {
    Eigen::MatrixXcd a(2, 2);
    a << 1.0, s, s, 1.0;
    const auto rep = sigma_inf_min(a, tol);
    const double ref = sigma_inf_min_2x2(s);
    const bool ok = std::abs(rep.value - ref) <= tol;
    if (!ok) ctx.manifest.all_passed = false;
    csv.row({"2x2", fmt(s), fmt(rep.value), fmt(ref), fmt(rep.lower_bound_svd), fmt(std::abs(rep.value - ref)),
             b(ok)});
    ctx.add_cell({{"case", "2x2"}, {"s", s}, {"passed", ok}});
  }
  std::mt19937_64 rng(cell_seed(base, 5));
  std::normal_distribution<double> g(0.0, 1.0);
  for (int r = 0; r < random; ++r) {
    Eigen::MatrixXcd a(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = Complex(g(rng), g(rng));
    const auto rep = sigma_inf_min(a, tol);
    const bool ok = rep.value >= rep.lower_bound_svd - tol;
    if (!ok) ctx.manifest.all_passed = false;
    csv.row({"random", fmt(std::nan("")), fmt(rep.value), fmt(std::nan("")), fmt(rep.lower_bound_svd),
             fmt(std::nan("")), b(ok)});
    ctx.add_cell({{"case", "random"}, {"index", r}, {"passed", ok}});
  }
  ctx.manifest.rows += csv.rows();
  csv.close();
  ctx.add_file(path);
}

void write_manifest(const fs::path& out, const ExperimentConfig& config, const RunManifest& m, const Json& cells) {
  Json j;
  j["version"] = kVersion;
  j["scenario"] = m.scenario;
  j["complete"] = m.complete;
  j["all_passed"] = m.all_passed;
  j["config"] = config.values;
  j["cell_count"] = m.cells;
  j["rows"] = m.rows;
  j["cells"] = cells;
  j["files"] = m.files;
  j["notes"] = m.notes;
  std::ofstream os(out / "manifest.json");
  os << j.dump(2) << '\n';
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix(splitmix(splitmix(splitmix(base) ^ a) ^ b) ^ c);
}

IlluminationSet random_bounded_illumination(int frames, double lo, double hi, double kmax, std::uint64_t seed) {
  if (frames < 1 || !(hi > lo)) throw DomainError("random_bounded_illumination needs frames >= 1 and lo < hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Pattern> pats;
  for (int t = 0; t < frames; ++t) {
    if (u(rng) < 0.5) {
      const double split = u(rng);
      Sinusoid s;
      s.offset = std::polar(split, 2.0 * kPi * u(rng));
      s.amplitude = std::polar(1.0 - split, 2.0 * kPi * u(rng));
      s.wavevector = {kmax * u(rng), 0.0};
      s.phase = 2.0 * kPi * u(rng);
      pats.emplace_back(s);
    } else {
      const double extent = hi - lo;
      pats.emplace_back(SpeckleGrid::random(1, {lo, 0.0}, extent, extent / 64.0, kmax, 8, rng()));
    }
  }
  return IlluminationSet(std::move(pats));
}

LineInstance make_line_instance(const LineSpec& spec) {
  if (spec.n < 1 || spec.frames < 1) throw DomainError("line instance needs n >= 1 and at least one frame");
  if (!(spec.noise_ratio > 0.0) || !(spec.omega > 0.0)) throw DomainError("noise ratio and cut-off must be positive");
  if (spec.separation && !(*spec.separation > 0.0)) throw DomainError("separation must be positive");
  const double omega = spec.omega;
  const double period = spec.n * kPi / omega;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::mt19937_64 rng(cell_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto amps = random_amplitudes(spec.n, rng);
    double m_min = std::abs(amps[0]);
    for (const auto& a : amps) m_min = std::min(m_min, std::abs(a));
    const double sigma = spec.noise_ratio * m_min;
    const double off = 2.0 * kPi * u(rng);
    const double shift = (2.0 * u(rng) - 1.0) * kPi / omega;

    std::vector<double> pos;
    double d = 0.0, kwave = 0.0, sinf = 0.0;
    Bound thr;
    if (!spec.separation) {
      const auto unit = unit_layout(spec.n, rng);
      const double cu = 0.5 * (unit.front() + unit.back());
      const auto unit_mu = DiscreteMeasure::line(unit, amps);
      const auto unit_illum =
          shifted_cosines(spec.frames, {2.0 * kPi / spec.n, 0.0}, {cu, 0.0}, off);
      sinf = sigma_inf_min(build_illumination_matrix(unit_illum, unit_mu)).value;
      thr = threshold_1d_wrapped(spec.n, omega, sigma, m_min, sinf);
      if (thr.vacuous || !(sinf > 0.0)) continue;
      // nudged so the rounded positions keep d_min at or above the target
      d = spec.threshold_factor * thr.value * (1.0 + 1e-12);
      if ((unit.back() + 1.0) * d > period) continue;
      for (double x : unit) pos.push_back(shift + d * (x - cu));
      kwave = 2.0 * kPi / (spec.n * d);
    } else {
      d = *spec.separation;
      for (int j = 0; j < spec.n; ++j) pos.push_back(shift + d * (j - 0.5 * (spec.n - 1)));
      kwave = spec.pattern_frequency * omega;
    }
    const Location center{shift, 0.0};
    // a single fixed-separation frame is the uniformly lit baseline
    auto illum = spec.separation && spec.frames == 1 ? IlluminationSet::constant(1)
                                                     : shifted_cosines(spec.frames, {kwave, 0.0}, center, off);
    auto truth = DiscreteMeasure::line(pos, amps);
    if (spec.separation) {
      sinf = sigma_inf_min(build_illumination_matrix(illum, truth)).value;
      thr = threshold_1d_wrapped(spec.n, omega, sigma, m_min, sinf);
    }

    const auto clean = fourier_transform(truth, illum, FrequencyGrid::uniform(omega, spec.grid_nodes));
    auto noisy = add_noise(clean, sigma, NoiseModel::gaussian_capped, cell_seed(spec.seed, 0x4015e));

    RecoveryProblem p;
    p.measurements = std::move(noisy);
    p.illum_mode = spec.mode;
    p.patterns = illum;
    if (spec.mode == IlluminationMode::approximated) {
      p.patterns = illum.perturbed(spec.perturbation, kwave, cell_seed(spec.seed, 0xa55));
      p.perturbation_bound = spec.perturbation;
    }
    p.interval = {shift - period / 2.0, shift + period / 2.0};
    p.sigma = sigma;
    p.grid_pitch = std::min(spec.pitch_fraction * d, kPi / (8.0 * kwave));
    p.max_sparsity = spec.n;

    Metric metric = spec.separation ? Metric{EuclideanMetric{}} : Metric{WrappedMetric{period}};
    return LineInstance{std::move(truth), std::move(illum), std::move(p), d, thr.value, sinf, sigma, metric};
  }
  throw DomainError("could not draw a line instance with a non-vacuous threshold inside one period");
}

PlaneInstance make_plane_instance(const PlaneSpec& spec) {
  if (spec.n < 2 || spec.frames < 1) throw DomainError("plane instance needs n >= 2 and at least one frame");
  if (!(spec.noise_ratio > 0.0) || !(spec.omega > 0.0)) throw DomainError("noise ratio and cut-off must be positive");
  if (!(spec.noise_fraction > 0.0 && spec.noise_fraction <= 1.0)) throw DomainError("noise fraction must be in (0, 1]");
  const double omega = spec.omega;
  const double radius = spec.c0 * spec.n * kPi / omega;
  const int big_n = (spec.n + 2) * (spec.n + 1) / 2;
  const double fan_theta = 2.0 * kPi / ((spec.n + 2) * (spec.n + 1));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::mt19937_64 rng(cell_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto amps = random_amplitudes(spec.n, rng);
    double m_min = std::abs(amps[0]);
    for (const auto& a : amps) m_min = std::min(m_min, std::abs(a));
    const double sigma = spec.noise_ratio * m_min;
    const double off = 2.0 * kPi * u(rng);
    const double ang = 2.0 * kPi * u(rng);
    const Location dir{std::cos(ang), std::sin(ang)};

    const auto unit = unit_layout(spec.n, rng);
    const double cu = 0.5 * (unit.front() + unit.back());
    std::vector<Location> unit_locs;
    for (double x : unit) unit_locs.push_back((x - cu) * dir);
    const DiscreteMeasure unit_mu(2, unit_locs, amps);
    const auto unit_illum = shifted_cosines(spec.frames, (2.0 * kPi / spec.n) * dir, {}, off);
    const double sinf = sigma_inf_min(build_illumination_matrix(unit_illum, unit_mu)).value;
    const auto thr = threshold_2d(spec.n, omega, sigma, m_min, sinf, spec.c0);
    if (thr.vacuous || !(sinf > 0.0)) continue;
    const double d = spec.threshold_factor * thr.value * (1.0 + 1e-12);
    const double half = 0.5 * unit.back() * d;
    const double room = std::min(0.1 * radius, radius - half - 0.5 * d);
    if (room < 0.0) continue;
    const double cr = room * std::sqrt(u(rng)), ca = 2.0 * kPi * u(rng);
    const Location center{cr * std::cos(ca), cr * std::sin(ca)};

    std::vector<Location> locs;
    for (const auto& l : unit_locs) locs.push_back(center + d * l);
    DiscreteMeasure truth(2, locs, amps);
    auto illum = shifted_cosines(spec.frames, (2.0 * kPi / (spec.n * d)) * dir, center, off);

    const double h = omega / (spec.c0 * spec.n);
    const int count = static_cast<int>(std::floor(2.0 * spec.c0 * spec.n));
    const auto line = FrequencyGrid::theorem_euclidean(omega, spec.n, spec.c0, count, h / 2.0);
    std::vector<FrequencyGrid> parts{FrequencyGrid::polar(omega, 8, 16)};
    for (int tau = 1; tau <= big_n; ++tau)
      parts.push_back(FrequencyGrid::along(line, {std::cos(tau * fan_theta), std::sin(tau * fan_theta)}));
    const auto grid = FrequencyGrid::join(parts);

    const auto clean = fourier_transform(truth, illum, grid, NormMode::sup);
    auto noisy = add_noise(clean, spec.noise_fraction * sigma, NoiseModel::uniform_disk, cell_seed(spec.seed, 0x4015e));
    noisy.sigma = sigma;

    RecoveryProblem p;
    p.measurements = std::move(noisy);
    p.illum_mode = IlluminationMode::known;
    p.patterns = illum;
    p.disk = {{}, radius};
    p.sigma = sigma;
    p.grid_pitch = spec.pitch_fraction * d;
    p.max_sparsity = spec.n;
    return PlaneInstance{std::move(truth), std::move(illum), std::move(p), d, thr.value, sinf, sigma, spec.c0};
  }
  throw DomainError("could not draw a plane instance with a non-vacuous threshold inside the disk");
}

TrialOutcome evaluate_trial(const DiscreteMeasure& truth, const RecoveryResult& result, const Metric& metric,
                            double d_min) {
  TrialOutcome out;
  out.result = result;
  if (result.feasible && result.measure.size() == truth.size() && !truth.empty()) {
    out.matching = match_supports(truth, result.measure, metric);
    out.success = result.sparsity == static_cast<int>(truth.size()) && out.matching.max_deviation < d_min / 2.0;
  }
  return out;
}

TrialOutcome run_line_trial(const LineInstance& instance) {
  return evaluate_trial(instance.truth, solve_l0(instance.problem), instance.metric, instance.d_min);
}

PlaneOutcome run_plane_trial(const PlaneInstance& instance) {
  PlaneOutcome out;
  out.trial = evaluate_trial(instance.truth, solve_l0(instance.problem), EuclideanMetric{}, instance.d_min);
  const auto& truth = instance.truth.locations();
  out.fan = select_directions(truth);
  const auto& rec = out.trial.result.measure;
  if (rec.size() != truth.size()) return out;

  const int n = static_cast<int>(truth.size());
  const double omega = instance.problem.measurements.grid.omega;
  const double m_min = instance.truth.min_amplitude();
  std::vector<DirectionMatching> per;
  double e1 = 0.0;
  for (const auto& v : out.fan.selected) {
    const auto pt = project_locations(truth, v);
    const auto pr = project_locations(rec.locations(), v);
    DirectionMatching dm;
    dm.assignment = best_permutation(pt, pr);
    for (std::size_t j = 0; j < pt.size(); ++j) dm.deviations.push_back(std::abs(pr[dm.assignment[j]] - pt[j]));
    per.push_back(std::move(dm));
    const auto bound = location_error_bound(TheoremMode::euclidean_1d, n, omega, projected_separation(truth, v),
                                            instance.sigma, m_min, instance.sigma_inf_min, instance.c0);
    e1 = std::max(e1, bound.vacuous ? std::numeric_limits<double>::infinity() : bound.value);
  }
  out.line_error_bound = e1;
  out.pigeonhole = pigeonhole_match(per, out.fan, e1, truth, rec.locations());
  return out;
}

std::optional<double> empirical_threshold(const std::vector<double>& separations, const std::vector<double>& rates,
                                          double level) {
  if (separations.size() != rates.size()) throw DomainError("separations and rates differ in length");
  std::vector<std::size_t> order(separations.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return separations[a] < separations[b]; });
  std::optional<double> best;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (rates[*it] < level) break;
    best = separations[*it];
  }
  return best;
}

// --- configuration ---------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kScenarios{"phase-transition-1d", "phase-transition-2d", "theorem-certify",
                                       "adversarial-demo",    "lemma-suite",         "incoherence-sweep"};

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw DomainError("config line " + std::to_string(lineno) + ": empty key");
    if (key == "scenario")
      cfg.scenario = value;
    else if (key == "output")
      cfg.output = value;
    else
      cfg.values[key] = value;
  }
  if (!kScenarios.count(cfg.scenario)) throw DomainError("unknown scenario: " + cfg.scenario);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config key " + key + ": not a number: " + it->second);
  }
}

int ExperimentConfig::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::floor(v)) throw DomainError("config key " + key + ": not an integer");
  return static_cast<int>(v);
}

std::vector<double> ExperimentConfig::numbers(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("config key " + key + ": not a number: " + item);
    }
  }
  if (out.empty()) throw DomainError("config key " + key + ": empty list");
  return out;
}

RunManifest run(const ExperimentConfig& config) {
  RunManifest m;
  m.scenario = config.scenario;
  Json cells = Json::array();
  const fs::path out = config.output;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out.string() + ": " + ec.message());
  Context ctx{config, m, cells, out};
  try {
    if (config.scenario == "phase-transition-1d")
      phase_transition_1d(ctx);
    else if (config.scenario == "phase-transition-2d")
      phase_transition_2d(ctx);
    else if (config.scenario == "theorem-certify")
      theorem_certify(ctx);
    else if (config.scenario == "adversarial-demo")
      adversarial_demo(ctx);
    else if (config.scenario == "lemma-suite")
      lemma_suite(ctx);
    else if (config.scenario == "incoherence-sweep")
      incoherence_sweep(ctx);
    else
      throw DomainError("unknown scenario: " + config.scenario);
  } catch (const std::exception& e) {
    m.complete = false;
    m.all_passed = false;
    m.notes.push_back(std::string("aborted: ") + e.what());
    write_manifest(out, config, m, cells);
    throw;
  }
  m.complete = true;
  m.files.push_back("manifest.json");
  write_manifest(out, config, m, cells);
  return m;
}

}  // namespace msr
