#include "msr/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "msr/errors.hpp"

namespace msr {

SpeckleGrid::SpeckleGrid(int dim, Location origin, double pitch, int nx, int ny, std::vector<Complex> values)
    : dim_(dim), origin_(origin), pitch_(pitch), nx_(nx), ny_(dim == 1 ? 1 : ny), values_(std::move(values)) {
  if (dim_ != 1 && dim_ != 2) throw DomainError("speckle grid dimension must be 1 or 2");
  if (!(pitch_ > 0.0)) throw DomainError("speckle grid pitch must be positive");
  if (nx_ < 2 || (dim_ == 2 && ny_ < 2)) throw DomainError("speckle grid needs at least two nodes per axis");
  if (values_.size() != static_cast<std::size_t>(nx_) * ny_) throw DomainError("speckle grid value count mismatch");
}

SpeckleGrid SpeckleGrid::random(int dim, Location origin, double extent, double pitch, double kmax, int modes,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  const int nx = static_cast<int>(std::ceil(extent / pitch)) + 1;
  const int ny = dim == 1 ? 1 : nx;
  struct Wave {
    Location k;
    Complex c;
  };
  std::vector<Wave> waves;
  for (int m = 0; m < modes; ++m) {
    const double r = kmax * unit(rng);
    const double a = 2.0 * std::numbers::pi * unit(rng);
    Location k = dim == 1 ? Location{r * (unit(rng) < 0.5 ? -1.0 : 1.0), 0.0} : Location{r * std::cos(a), r * std::sin(a)};
    waves.push_back({k, Complex(gauss(rng), gauss(rng))});
  }
  std::vector<Complex> vals(static_cast<std::size_t>(nx) * ny);
  double peak = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      Location y{ix * pitch, iy * pitch};
      Complex s = 0.0;
      for (const auto& w : waves) s += w.c * std::exp(Complex(0.0, dot(w.k, y)));
      vals[static_cast<std::size_t>(iy) * nx + ix] = s;
      peak = std::max(peak, std::abs(s));
    }
  if (peak > 0.0)
    for (auto& v : vals) v /= peak;
  return SpeckleGrid(dim, origin, pitch, nx, ny, std::move(vals));
}

namespace {

// Cell index and fractional offset along one axis; throws outside [0, n-1].
std::pair<int, double> locate(double u, int n) {
  if (!(u >= 0.0) || u > n - 1) throw OutOfDomainError("location outside tabulated speckle grid");
  int i = std::min(static_cast<int>(std::floor(u)), n - 2);
  return {i, u - i};
}

}  // namespace

Complex SpeckleGrid::operator()(const Location& y) const {
  auto [ix, fx] = locate((y.x - origin_.x) / pitch_, nx_);
  if (dim_ == 1) return (1.0 - fx) * values_[ix] + fx * values_[ix + 1];
  auto [iy, fy] = locate((y.y - origin_.y) / pitch_, ny_);
  auto at = [&](int i, int j) { return values_[static_cast<std::size_t>(j) * nx_ + i]; };
  return (1.0 - fy) * ((1.0 - fx) * at(ix, iy) + fx * at(ix + 1, iy)) +
         fy * ((1.0 - fx) * at(ix, iy + 1) + fx * at(ix + 1, iy + 1));
}

double SpeckleGrid::max_modulus() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

Complex evaluate(const Pattern& pattern, const Location& y) {
  struct Visitor {
    const Location& y;
    Complex operator()(const Constant& c) const { return c.value; }
    Complex operator()(const Sinusoid& s) const { return s.offset + s.amplitude * std::cos(dot(s.wavevector, y) + s.phase); }
    Complex operator()(const SpeckleGrid& g) const { return g(y); }
    Complex operator()(const Perturbed& p) const { return evaluate(*p.base, y) + (*this)(p.delta); }
  };
  return std::visit(Visitor{y}, pattern);
}

IlluminationSet::IlluminationSet(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
  if (patterns_.empty()) throw DomainError("illumination set needs at least one pattern");
}

IlluminationSet IlluminationSet::constant(int frames, Complex value) {
  return IlluminationSet(std::vector<Pattern>(static_cast<std::size_t>(frames), Constant{value}));
}

IlluminationSet IlluminationSet::perturbed(double bound, double kmax, std::uint64_t seed) const {
  if (bound < 0.0) throw DomainError("perturbation bound must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Pattern> out;
  for (const auto& p : patterns_) {
    Sinusoid d;
    // |offset| + |amplitude| <= bound
    const double split = unit(rng);
    d.offset = std::polar(bound * split * unit(rng), 2.0 * std::numbers::pi * unit(rng));
    d.amplitude = std::polar(bound * (1.0 - split) * unit(rng), 2.0 * std::numbers::pi * unit(rng));
    const double a = 2.0 * std::numbers::pi * unit(rng);
    d.wavevector = {kmax * unit(rng) * std::cos(a), kmax * unit(rng) * std::sin(a)};
    d.phase = 2.0 * std::numbers::pi * unit(rng);
    out.push_back(Perturbed{std::make_shared<const Pattern>(p), d});
  }
  return IlluminationSet(std::move(out));
}

double IlluminationSet::max_modulus(int dim, double lo, double hi, int samples) const {
  double m = 0.0;
  const int ny = dim == 1 ? 1 : samples;
  for (const auto& p : patterns_)
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < samples; ++ix) {
        const double step = samples > 1 ? (hi - lo) / (samples - 1) : 0.0;
        Location y{lo + ix * step, dim == 1 ? 0.0 : lo + iy * step};
        m = std::max(m, std::abs(evaluate(p, y)));
      }
  return m;
}

IlluminationMatrix build_illumination_matrix(const IlluminationSet& set, const DiscreteMeasure& measure) {
  IlluminationMatrix m(set.size(), measure.size());
  for (std::size_t t = 0; t < set.size(); ++t)
    for (std::size_t j = 0; j < measure.size(); ++j) m(t, j) = set(t, measure.location(j));
  return m;
}

}  // namespace msr
