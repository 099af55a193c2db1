#pragma once

#include "qot/types.hpp"

#include <functional>

namespace qot {

// Minimizer of a unimodal f on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

struct NelderMeadResult {
  RVector x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free minimization from x0 with initial simplex edge `step`.
NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0, double step,
                             int max_evals, double ftol = 1e-12);

}  // namespace qot
