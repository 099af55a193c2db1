#include "qot/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qot {

double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0, double step,
                             int max_evals, double ftol) {
  const int n = static_cast<int>(x0.size());
  std::vector<RVector> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += step;
  NelderMeadResult res;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);
  res.evaluations = n + 1;
  std::vector<int> order(n + 1);
  while (res.evaluations < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(val[worst] - val[best]) <= ftol * (1.0 + std::abs(val[best]))) {
      res.converged = true;
      break;
    }
    RVector centroid = RVector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[order[i]];
    centroid /= n;
    const RVector xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    ++res.evaluations;
    if (fr < val[best]) {
      const RVector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      ++res.evaluations;
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const RVector xc = outside ? RVector(centroid + 0.5 * (xr - centroid))
                                 : RVector(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = f(xc);
      ++res.evaluations;
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          const int k = order[i];
          pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
          val[k] = f(pts[k]);
          ++res.evaluations;
        }
      }
    }
  }
  const int best = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
  res.x = pts[best];
  res.value = val[best];
  return res;
}

}  // namespace qot
