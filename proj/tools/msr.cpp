#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>

#include "msr/adversarial.hpp"
#include "msr/bounds.hpp"
#include "msr/errors.hpp"
#include "msr/experiments.hpp"
#include "msr/incoherence.hpp"
#include "msr/plot.hpp"
#include "msr/serialization.hpp"

namespace {

msr::Json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw msr::DomainError("cannot open " + path);
  return msr::Json::parse(is);
}

void emit(const msr::Json& j, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(output);
  if (!os) throw msr::DomainError("cannot write " + output);
  os << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-illumination super-resolution experiments"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "Run an experiment configuration");
  run->add_option("config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_dir, "Output directory (overrides the config)");

  std::string csv_path, kind = "heatmap", svg_path;
  auto* plot = app.add_subcommand("plot", "Render a CSV as an SVG plot");
  plot->add_option("csv", csv_path, "Input CSV")->required();
  plot->add_option("-k,--kind", kind, "heatmap | threshold-overlay | deviation-scatter");
  plot->add_option("-o,--output", svg_path, "Output SVG (default: CSV path with .svg)");

  std::string mode = "1d-wrapped", json_out;
  int n = 2;
  double omega = 1.0, sigma = 1e-3, m_min = 1.0, sigma_inf = 1.0, c0 = 1.0, d_min = 0.0;
  auto* bounds = app.add_subcommand("bounds", "Resolution threshold and error bound");
  bounds->add_option("--mode", mode, "1d-wrapped | 1d-euclidean | 2d");
  bounds->add_option("-n", n, "Number of atoms");
  bounds->add_option("--omega", omega, "Cut-off frequency");
  bounds->add_option("--sigma", sigma, "Noise level");
  bounds->add_option("--m-min", m_min, "Smallest amplitude modulus");
  bounds->add_option("--sigma-inf", sigma_inf, "Incoherence of the illumination matrix");
  bounds->add_option("--c0", c0, "Interval constant (c0 >= 1)");
  bounds->add_option("--d-min", d_min, "Minimum separation, for the location error bound");
  bounds->add_option("-o,--output", json_out, "Output JSON");

  std::string matrix_path;
  double tol = 1e-6;
  auto* incoh = app.add_subcommand("incoherence", "sigma_inf_min of a matrix");
  incoh->add_option("matrix", matrix_path, "Matrix JSON with re (and optional im) arrays")->required();
  incoh->add_option("--tol", tol, "Absolute accuracy");
  incoh->add_option("-o,--output", json_out, "Output JSON");

  int frames = 3;
  double ratio = 1e-2;
  std::uint64_t seed = 1;
  auto* adv = app.add_subcommand("adversarial", "Build a certified indistinguishable pair");
  adv->add_option("-n", n, "Number of atoms");
  adv->add_option("--omega", omega, "Cut-off frequency");
  adv->add_option("--noise", ratio, "sigma / m_min");
  adv->add_option("--frames", frames, "Number of random bounded patterns");
  adv->add_option("--seed", seed, "Random seed");
  adv->add_option("-o,--output", json_out, "Output JSON");

  std::string instance_path;
  auto* cert = app.add_subcommand("certify", "Check a recovery against the theorem bound");
  cert->add_option("instance", instance_path,
                   "JSON with truth, recovered, illumination, sigma, omega, mode and optional c0")
      ->required();
  cert->add_option("-o,--output", json_out, "Output JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = msr::ExperimentConfig::load(config_path);
      if (!output_dir.empty()) cfg.output = output_dir;
      const auto m = msr::run(cfg);
      std::cout << m.scenario << ": " << m.cells << " cells, " << m.rows << " rows in " << cfg.output.string()
                << (m.all_passed ? ", all checks passed" : ", some checks failed") << '\n';
      for (const auto& note : m.notes) std::cout << "  " << note << '\n';
      return m.all_passed ? 0 : 1;
    }
    if (*plot) {
      const auto k = msr::plot_kind_from_string(kind);
      std::filesystem::path out = svg_path.empty() ? std::filesystem::path(csv_path).replace_extension(".svg")
                                                   : std::filesystem::path(svg_path);
      msr::plot_file(csv_path, k, out);
      std::cout << out.string() << '\n';
      return 0;
    }
    if (*bounds) {
      std::optional<double> d;
      if (d_min > 0.0) d = d_min;
      const auto r = msr::make_bound_report(msr::theorem_mode_from_string(mode), n, omega, sigma, m_min, sigma_inf,
                                            c0, d);
      emit(msr::to_json(r), json_out);
      return 0;
    }
    if (*incoh) {
      const auto r = msr::sigma_inf_min(msr::matrix_from_json(read_json(matrix_path)), tol);
      emit(msr::to_json(r), json_out);
      return 0;
    }
    if (*adv) {
      const double tau = msr::adversarial_spacing(n, omega, ratio, 1.0);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
      std::vector<double> phases;
      for (int j = 0; j < n; ++j) phases.push_back(u(rng));
      const auto illum = msr::random_bounded_illumination(frames, -n * tau, (n - 1) * tau, 20.0 * omega, rng());
      emit(msr::to_json(msr::build_instance(n, omega, ratio, 1.0, illum, phases)), json_out);
      return 0;
    }
    if (*cert) {
      const auto j = read_json(instance_path);
      for (const char* key : {"truth", "recovered", "illumination", "sigma", "omega", "mode"})
        if (!j.contains(key)) throw msr::DomainError(std::string("instance JSON is missing ") + key);
      const auto c = msr::certify_against_theorem(
          msr::measure_from_json(j["truth"]), msr::measure_from_json(j["recovered"]),
          msr::matrix_from_json(j["illumination"]), j["sigma"].get<double>(), j["omega"].get<double>(),
          msr::theorem_mode_from_string(j["mode"].get<std::string>()), j.value("c0", 1.0));
      emit(msr::to_json(c), json_out);
      return c.holds ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
