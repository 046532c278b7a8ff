#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <set>
#include <tuple>
#include <sstream>

#include "msr/errors.hpp"
#include "msr/experiments.hpp"
#include "msr/plot.hpp"

using namespace msr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("msr-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<double> data_values(const std::string& svg) {
  std::vector<double> out;
  const std::regex re("class=\"cell\"[^>]*data-value=\"([^\"]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back(std::stod((*it)[1]));
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse(
      "# campaign\nscenario = phase-transition-1d\noutput = /tmp/x\n n = 3 \nseparations = 0.1, 0.2 ,0.3\n");
  CHECK(c.scenario == "phase-transition-1d");
  CHECK(c.output == fs::path("/tmp/x"));
  CHECK(c.integer("n", 2) == 3);
  CHECK(c.integer("trials", 7) == 7);
  CHECK(c.numbers("separations", {}) == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(c.get("missing", "fallback") == "fallback");
  CHECK_THROWS_AS(ExperimentConfig::parse("scenario = nope\n"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::parse("n = 2.5\n").integer("n", 1), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::parse("n = two\n").number("n", 1), DomainError);
}

TEST_CASE("cell seeds") {
  CHECK(cell_seed(1, 2, 3) == cell_seed(1, 2, 3));
  CHECK(cell_seed(1, 2, 3) != cell_seed(1, 3, 2));
  CHECK(cell_seed(1, 2) != cell_seed(2, 2));
}

TEST_CASE("empirical threshold") {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4};
  CHECK(*empirical_threshold(s, {0.0, 1.0, 0.96, 1.0}) == doctest::Approx(0.2));
  CHECK(*empirical_threshold(s, {1.0, 0.5, 1.0, 1.0}) == doctest::Approx(0.3));
  CHECK_FALSE(empirical_threshold(s, {1.0, 1.0, 1.0, 0.9}).has_value());
}

TEST_CASE("bounded random illumination") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto illum = random_bounded_illumination(3, -0.5, 0.5, 20.0, seed);
    CHECK(illum.size() == 3);
    CHECK(illum.max_modulus(1, -0.5, 0.5, 2001) <= 1.0 + 1e-9);
  }
}

TEST_CASE("line instances at threshold") {
  LineSpec spec;
  spec.n = 2;
  spec.frames = 2;
  spec.noise_ratio = 1e-3;
  spec.seed = 11;
  const auto inst = make_line_instance(spec);
  CHECK(inst.truth.size() == 2);
  CHECK(inst.d_min >= inst.threshold);
  CHECK(inst.d_min <= inst.threshold * (1 + 1e-9));
  CHECK(inst.sigma == doctest::Approx(1e-3 * inst.truth.min_amplitude()));
  for (const auto& f : inst.problem.measurements.frames) CHECK(f.size() == spec.grid_nodes);
  const auto a = make_line_instance(spec);
  CHECK(a.truth.locations() == inst.truth.locations());
  CHECK(a.problem.measurements.frames[1] == inst.problem.measurements.frames[1]);

  const auto out = run_line_trial(inst);
  CHECK(out.success);
  CHECK(out.result.sparsity == 2);
}

TEST_CASE("plots") {
  std::istringstream empty("separation,noise,success\n");
  const auto t0 = read_csv(empty);
  const auto svg0 = plot_svg(t0, PlotKind::heatmap);
  CHECK(svg0.find("<svg") != std::string::npos);
  CHECK(data_values(svg0).empty());

  std::istringstream mono(
      "separation,noise,success\n0.1,0.01,0\n0.1,0.01,0\n0.2,0.01,1\n0.2,0.01,0\n0.3,0.01,1\n0.3,0.01,1\n");
  const auto t1 = read_csv(mono);
  const auto svg1 = plot_svg(t1, PlotKind::heatmap);
  CHECK(data_values(svg1) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(plot_svg(t1, PlotKind::heatmap) == svg1);

  std::istringstream over("separation,success,threshold\n0.2,0,0.34\n0.4,1,0.34\n");
  const auto svg2 = plot_svg(read_csv(over), PlotKind::threshold_overlay);
  const std::regex line("class=\"threshold\"[^>]*data-x=\"([^\"]+)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg2, m, line));
  CHECK(std::stod(m[1]) == doctest::Approx(0.34));

  std::istringstream bad("separation,success\n0.1,1\n");
  const auto tb = read_csv(bad);
  try {
    plot_svg(tb, PlotKind::heatmap);
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("noise") != std::string::npos);
  }
  CHECK(plot_kind_from_string("deviation-scatter") == PlotKind::deviation_scatter);
  CHECK_THROWS_AS(plot_kind_from_string("pie"), DomainError);
}

TEST_CASE("small phase transition run is deterministic and complete") {
  const auto dir1 = scratch("phase-a"), dir2 = scratch("phase-b");
  const std::string body =
      "scenario = phase-transition-1d\nframes = 1, 2\nseparations = 0.05, 0.3\nnoise = 1e-2\ntrials = 3\n";
  auto c1 = ExperimentConfig::parse(body + "output = " + dir1.string() + "\n");
  auto c2 = ExperimentConfig::parse(body + "output = " + dir2.string() + "\n");
  const auto m1 = run(c1);
  run(c2);
  CHECK(m1.complete);
  CHECK(m1.cells == 4);
  for (const auto& f : {"phase1d_T1.csv", "phase1d_T2.csv", "phase1d_thresholds.csv"})
    CHECK(slurp(dir1 / f) == slurp(dir2 / f));
  CHECK(fs::exists(dir1 / "phase1d_T2_heatmap.svg"));
  const auto j = nlohmann::json::parse(slurp(dir1 / "manifest.json"));
  CHECK(j["complete"] == true);
  CHECK(j["cells"].size() == 4);
  std::set<std::tuple<int, double>> seen;
  for (const auto& c : j["cells"]) seen.insert({c["frames"].get<int>(), c["separation"].get<double>()});
  CHECK(seen.size() == 4);
}

TEST_CASE("lemma suite passes below the failing root estimate") {
  const auto dir = scratch("lemmas");
  auto c = ExperimentConfig::parse(
      "scenario = lemma-suite\neta_configs = 2\neta_starts = 20\nprojection_instances = 200\npair_grid = 20\n"
      "stability_instances = 40\napprox_instances = 30\ncombinatorial_n = 5\noutput = " +
      dir.string() + "\n");
  const auto m = run(c);
  CHECK(m.complete);
  CHECK(m.all_passed);
  c.values["combinatorial_n"] = "8";
  CHECK_FALSE(run(c).all_passed);
}

TEST_CASE("adversarial and incoherence scenarios") {
  const auto dir = scratch("adv");
  const auto m = run(ExperimentConfig::parse("scenario = adversarial-demo\nn = 3\ntrials = 2\noutput = " +
                                             dir.string() + "\n"));
  CHECK(m.complete);
  CHECK(m.all_passed);
  const auto ex = nlohmann::json::parse(slurp(dir / "adversarial_examples.json"));
  CHECK_FALSE(ex.empty());

  const auto dir2 = scratch("inc");
  const auto m2 =
      run(ExperimentConfig::parse("scenario = incoherence-sweep\nrandom = 3\noutput = " + dir2.string() + "\n"));
  CHECK(m2.all_passed);
  const auto rows = read_csv(dir2 / "incoherence.csv");
  CHECK(rows.rows.size() >= 11);
}

TEST_CASE("aborted runs leave an incomplete manifest") {
  const auto dir = scratch("abort");
  auto c = ExperimentConfig::parse("scenario = theorem-certify\nn = 0\noutput = " + dir.string() + "\n");
  CHECK_THROWS(run(c));
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["complete"] == false);
}

TEST_CASE("plane trial at threshold") {
  PlaneSpec spec;
  spec.seed = 3;
  const auto inst = make_plane_instance(spec);
  CHECK(inst.d_min >= inst.threshold);
  const auto out = run_plane_trial(inst);
  CHECK(out.trial.success);
  REQUIRE(out.pigeonhole.has_value());
  for (double d : out.pigeonhole->deviations) CHECK(d < inst.d_min / 2);
  CHECK(out.fan.selected.size() == 3);
}
