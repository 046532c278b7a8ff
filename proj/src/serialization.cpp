#include "msr/serialization.hpp"

#include <string>

#include "msr/errors.hpp"

namespace msr {

namespace {

Json location_json(const Location& y, int dim) {
  if (dim == 1) return y.x;
  return Json::array({y.x, y.y});
}

Location location_from(const Json& j, int dim) {
  if (dim == 1) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json interleave(const Eigen::VectorXcd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i].real());
    a.push_back(v[i].imag());
  }
  return a;
}

Eigen::VectorXcd deinterleave(const Json& a) {
  if (a.size() % 2 != 0) throw DomainError("interleaved complex array has odd length");
  Eigen::VectorXcd v(a.size() / 2);
  for (std::size_t i = 0; i < a.size() / 2; ++i) v[i] = {a[2 * i].get<double>(), a[2 * i + 1].get<double>()};
  return v;
}

void require(const Json& j, std::initializer_list<const char*> keys) {
  std::string missing;
  for (const char* k : keys)
    if (!j.contains(k)) missing += std::string(missing.empty() ? "" : ", ") + k;
  if (!missing.empty()) throw DomainError("missing JSON fields: " + missing);
}

}  // namespace

Json to_json(const DiscreteMeasure& m) {
  Json j;
  j["dim"] = m.dim();
  j["locations"] = Json::array();
  j["amplitudes_re"] = Json::array();
  j["amplitudes_im"] = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    j["locations"].push_back(location_json(m.location(i), m.dim()));
    j["amplitudes_re"].push_back(m.amplitude(i).real());
    j["amplitudes_im"].push_back(m.amplitude(i).imag());
  }
  return j;
}

DiscreteMeasure measure_from_json(const Json& j) {
  require(j, {"dim", "locations", "amplitudes_re", "amplitudes_im"});
  const int dim = j["dim"].get<int>();
  const auto& l = j["locations"];
  const auto& re = j["amplitudes_re"];
  const auto& im = j["amplitudes_im"];
  if (re.size() != l.size() || im.size() != l.size()) throw DomainError("measure JSON: array lengths differ");
  std::vector<Location> locs;
  std::vector<Complex> amps;
  for (std::size_t i = 0; i < l.size(); ++i) {
    locs.push_back(location_from(l[i], dim));
    amps.emplace_back(re[i].get<double>(), im[i].get<double>());
  }
  return DiscreteMeasure(dim, std::move(locs), std::move(amps));
}

Json to_json(const SpeckleGrid& g) {
  Json j;
  j["dim"] = g.dim();
  j["grid"] = g.dim() == 1 ? Json::array({g.nx()}) : Json::array({g.nx(), g.ny()});
  j["pitch"] = g.pitch();
  j["origin"] = location_json(g.origin(), g.dim());
  j["values_re"] = Json::array();
  j["values_im"] = Json::array();
  for (const auto& v : g.values()) {
    j["values_re"].push_back(v.real());
    j["values_im"].push_back(v.imag());
  }
  return j;
}

SpeckleGrid speckle_from_json(const Json& j) {
  require(j, {"grid", "pitch", "origin", "values_re", "values_im"});
  const auto& shape = j["grid"];
  const int dim = static_cast<int>(shape.size());
  const auto& re = j["values_re"];
  const auto& im = j["values_im"];
  if (re.size() != im.size()) throw DomainError("speckle JSON: value arrays differ in length");
  std::vector<Complex> vals;
  for (std::size_t i = 0; i < re.size(); ++i) vals.emplace_back(re[i].get<double>(), im[i].get<double>());
  return SpeckleGrid(dim, location_from(j["origin"], dim), j["pitch"].get<double>(), shape[0].get<int>(),
                     dim == 2 ? shape[1].get<int>() : 1, std::move(vals));
}

Json to_json(const FrequencyGrid& g) {
  Json j;
  j["dim"] = g.dim;
  j["omega"] = g.omega;
  j["scheme"] = g.scheme;
  j["nodes"] = Json::array();
  for (const auto& w : g.nodes) j["nodes"].push_back(location_json(w, g.dim));
  return j;
}

FrequencyGrid grid_from_json(const Json& j) {
  require(j, {"dim", "omega", "nodes"});
  FrequencyGrid g;
  g.dim = j["dim"].get<int>();
  g.omega = j["omega"].get<double>();
  g.scheme = j.value("scheme", "");
  for (const auto& w : j["nodes"]) g.nodes.push_back(location_from(w, g.dim));
  return g;
}

Json to_json(const MeasurementSet& ms) {
  Json j;
  j["grid"] = to_json(ms.grid);
  j["sigma"] = ms.sigma;
  j["norm_mode"] = ms.mode == NormMode::rms ? "rms" : "sup";
  j["frames"] = Json::array();
  for (const auto& f : ms.frames) j["frames"].push_back(interleave(f));
  return j;
}

MeasurementSet measurements_from_json(const Json& j) {
  require(j, {"grid", "sigma", "norm_mode", "frames"});
  MeasurementSet ms;
  ms.grid = grid_from_json(j["grid"]);
  ms.sigma = j["sigma"].get<double>();
  const auto mode = j["norm_mode"].get<std::string>();
  if (mode != "rms" && mode != "sup") throw DomainError("unknown norm mode: " + mode);
  ms.mode = mode == "rms" ? NormMode::rms : NormMode::sup;
  for (const auto& f : j["frames"]) {
    ms.frames.push_back(deinterleave(f));
    if (static_cast<std::size_t>(ms.frames.back().size()) != ms.grid.size())
      throw DomainError("frame length differs from grid size");
  }
  return ms;
}

void write_csv(std::ostream& os, const MeasurementSet& ms) {
  os << "t,omega_x,omega_y,re,im\n";
  os.precision(17);
  for (std::size_t t = 0; t < ms.frame_count(); ++t)
    for (std::size_t l = 0; l < ms.grid.size(); ++l)
      os << t << ',' << ms.grid.nodes[l].x << ',' << ms.grid.nodes[l].y << ',' << ms.frames[t][l].real() << ','
         << ms.frames[t][l].imag() << '\n';
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["re"] = Json::array();
  j["im"] = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
    j["re"].push_back(re);
    j["im"].push_back(im);
  }
  return j;
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
  require(j, {"re"});
  const auto& re = j["re"];
  const Json im = j.value("im", Json());
  const auto rows = re.size();
  const auto cols = rows ? re[0].size() : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (re[r].size() != cols) throw DomainError("matrix JSON: ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = {re[r][c].get<double>(), im.is_null() ? 0.0 : im[r][c].get<double>()};
  }
  return m;
}

Json to_json(const IncoherenceReport& r) {
  Json j;
  j["value"] = r.value;
  j["lower_bound_svd"] = r.lower_bound_svd;
  j["method"] = to_string(r.method);
  j["converged"] = r.converged;
  j["argmin"] = interleave(r.argmin);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["n"] = r.n;
  j["omega"] = r.omega;
  j["sigma"] = r.sigma;
  j["m_min"] = r.m_min;
  j["sigma_inf_min"] = r.sigma_inf_min;
  j["c0"] = r.c0;
  j["ratio"] = r.ratio;
  j["threshold"] = r.threshold;
  j["constant_c"] = r.constant_c;
  j["vacuous"] = r.vacuous;
  if (r.d_min) j["d_min"] = *r.d_min;
  if (r.srf) j["srf"] = *r.srf;
  if (r.location_error_bound) j["location_error_bound"] = *r.location_error_bound;
  return j;
}

Json to_json(const CombinatorialReport& r) {
  Json j;
  j["all_hold"] = r.all_hold;
  j["checks"] = Json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"family", c.family}, {"n", c.n}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  return j;
}

Json to_json(const AdversarialInstance& a) {
  Json j;
  j["n"] = a.n;
  j["omega"] = a.omega;
  j["sigma"] = a.sigma;
  j["m_min"] = a.m_min;
  j["tau"] = a.tau;
  j["mu"] = to_json(a.mu);
  j["rho"] = to_json(a.rho);
  j["matched_amplitudes"] = matrix_to_json(a.matched_amplitudes);
  j["residuals"] = a.residuals;
  j["sup_residuals"] = a.sup_residuals;
  j["amplitude_sums"] = a.amplitude_sums;
  j["amplitude_bound"] = a.amplitude_bound;
  j["doubling_change"] = a.doubling_change;
  j["grid_nodes"] = a.grid_nodes;
  return j;
}

Json to_json(const DirectionFan& f) {
  Json j;
  j["n"] = f.n;
  j["delta"] = f.delta;
  j["theta"] = f.theta;
  j["candidate_count"] = f.candidates.size();
  j["selected_tau"] = f.selected_tau;
  j["selected"] = Json::array();
  for (const auto& v : f.selected) j["selected"].push_back(location_json(v, 2));
  return j;
}

Json to_json(const Certificate& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["vacuous"] = c.vacuous;
  j["holds"] = c.holds;
  j["d_min"] = c.d_min;
  j["threshold"] = c.threshold;
  j["error_bound"] = c.error_bound;
  j["sigma_inf_min"] = c.sigma_inf_min;
  j["max_deviation"] = c.max_deviation;
  j["slack"] = c.slack;
  j["permutation"] = c.matching.permutation;
  j["deviations"] = c.matching.deviations;
  j["reason"] = c.reason;
  return j;
}

Json to_json(const RecoveryResult& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["sparsity"] = r.sparsity;
  j["measure"] = to_json(r.measure);
  j["per_frame_residuals"] = r.per_frame_residuals;
  j["effective_amplitudes"] = matrix_to_json(r.effective_amplitudes);
  j["log"] = r.log;
  j["refinement_trace"] = Json::array();
  for (const auto& t : r.refinement_trace)
    j["refinement_trace"].push_back({{"k", t.k},
                                     {"residual_before", t.residual_before},
                                     {"residual_after", t.residual_after},
                                     {"evaluations", t.evaluations}});
  return j;
}

}  // namespace msr
