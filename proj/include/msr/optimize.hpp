#pragma once

#include <functional>
#include <vector>

namespace msr {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
};

/// Derivative-free simplex search from x0 with initial edge `step`.
OptimResult nelder_mead(const Objective& f, std::vector<double> x0, double step, double ftol = 1e-13,
                        int max_evals = 4000);

/// Pattern search with per-coordinate probes; the step halves when no probe
/// improves and the search stops once it drops below min_step. The returned
/// point never has a larger objective than x0.
OptimResult hooke_jeeves(const Objective& f, std::vector<double> x0, double step, double min_step,
                         int max_iter = 500);

}  // namespace msr
