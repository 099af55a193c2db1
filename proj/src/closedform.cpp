#include "qot/closedform.hpp"

#include "qot/optimize.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace qot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double phi) {
  phi = std::fmod(phi, kTwoPi);
  return phi < 0.0 ? phi + kTwoPi : phi;
}

double sq(double x) { return x * x; }

double half_sqdiff(double a, double b) { return 0.5 * sq(std::sqrt(std::max(a, 0.0)) - std::sqrt(std::max(b, 0.0))); }

// Bloch vector a with rho = (I + a.sigma)/2.
Eigen::Vector3d bloch_vector(const CMatrix& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

using Poly = std::vector<cplx>;  // ascending powers

Poly pmul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly padd(Poly a, const Poly& b, cplx scale) {
  if (a.size() < b.size()) a.resize(b.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

cplx peval(const Poly& p, cplx z) {
  cplx acc(0.0, 0.0);
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
  return acc;
}

Poly pderiv(const Poly& p) {
  if (p.size() <= 1) return {cplx(0.0, 0.0)};
  Poly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

std::vector<cplx> poly_roots(Poly p) {
  double scale = 0.0;
  for (const auto& c : p) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * scale) p.pop_back();
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg < 1) return {};
  CMatrix comp = CMatrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return roots;
}

}  // namespace

CMatrix rotation_o(double theta) {
  CMatrix o(2, 2);
  o << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  return o;
}

DensityMatrix bloch_state(double r, double theta) {
  const CMatrix o = rotation_o(theta);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = r;
  d(1, 1) = 1.0 - r;
  return DensityMatrix{o * d * o.transpose()};
}

std::pair<DensityMatrix, DensityMatrix> bloch_pair_states(const BlochQubitPair& p) {
  return {bloch_state(p.s, 0.0), bloch_state(p.r, p.theta)};
}

BlochQubitPair to_bloch_pair(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != 2 || sigma.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "to_bloch_pair: qubits only");
  const Eigen::Vector3d a = bloch_vector(rho.op), b = bloch_vector(sigma.op);
  BlochQubitPair p;
  p.s = std::clamp(0.5 * (1.0 + a.norm()), 0.0, 1.0);
  p.r = std::clamp(0.5 * (1.0 + b.norm()), 0.0, 1.0);
  const double na = a.norm(), nb = b.norm();
  p.theta = (na < 1e-15 || nb < 1e-15) ? 0.0 : std::acos(std::clamp(a.dot(b) / (na * nb), -1.0, 1.0));
  return p;
}

double qubit_diag(const RVector& s, const RVector& t) {
  if (s.size() != 2 || t.size() != 2) throw Error(ErrorCode::DimensionMismatch, "qubit_diag: 2-vectors required");
  check_probability(s, "s");
  check_probability(t, "t");
  return std::max(half_sqdiff(s(0), t(0)), half_sqdiff(s(1), t(1)));
}

double qubit_diag_case_form(const RVector& s, const RVector& t) {
  if (s.size() != 2 || t.size() != 2) throw Error(ErrorCode::DimensionMismatch, "qubit_diag: 2-vectors required");
  check_probability(s, "s");
  check_probability(t, "t");
  return s(1) >= t(0) ? half_sqdiff(s(0), t(0)) : half_sqdiff(s(1), t(1));
}

double qubit_commuting(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != 2 || sigma.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "qubit_commuting: qubits only");
  const CMatrix comm = rho.op * sigma.op - sigma.op * rho.op;
  if (comm.norm() > 1e-10) throw Error(ErrorCode::NotCommuting, "qubit_commuting: [rho, sigma] != 0");
  // A nondegenerate member of the pair fixes the common eigenbasis.
  const Spectrum sr = spectral(rho.op), ss = spectral(sigma.op);
  const CMatrix& v = (sr.eigenvalues(0) - sr.eigenvalues(1) >= ss.eigenvalues(0) - ss.eigenvalues(1))
                         ? sr.eigenvectors
                         : ss.eigenvectors;
  const CMatrix a = v.adjoint() * rho.op * v, b = v.adjoint() * sigma.op * v;
  RVector s(2), t(2);
  s << a(0, 0).real(), a(1, 1).real();
  t << b(0, 0).real(), b(1, 1).real();
  // Same floor as sqrt_psd: rounding-level weights would enter through sqrt at ~1e-9.
  const auto floor = [](double x) { return x < 64 * std::numeric_limits<double>::epsilon() ? 0.0 : x; };
  s = s.unaryExpr(floor);
  t = t.unaryExpr(floor);
  return qubit_diag(s / s.sum(), t / t.sum());
}

double g_aux(const BlochQubitPair& p, double phi) {
  const double a = 1.0 + (2 * p.s - 1) * std::cos(phi);
  const double b = 1.0 + (2 * p.r - 1) * std::cos(p.theta + phi);
  return 0.25 * sq(std::sqrt(std::max(a, 0.0)) - std::sqrt(std::max(b, 0.0)));
}

double phi_equation_residual(const BlochQubitPair& p, double phi) {
  const double ks = 2 * p.s - 1, kr = 2 * p.r - 1;
  const double lhs = ks * ks * sq(std::sin(phi)) / (1.0 + ks * std::cos(phi));
  const double rhs = kr * kr * sq(std::sin(p.theta + phi)) / (1.0 + kr * std::cos(p.theta + phi));
  return lhs - rhs;
}

std::vector<cplx> phi_polynomial(const BlochQubitPair& p) {
  const cplx zeta = std::polar(1.0, p.theta);
  const double ks = 2 * p.s - 1, kr = 2 * p.r - 1;
  // (1-2r)^2 [ks (z^2+1) + 2z] (zeta^2 z^2 - 1)^2
  const Poly a1{ks, 2.0, ks};
  const Poly a2{-1.0, 0.0, zeta * zeta};
  const Poly left = pmul(a1, pmul(a2, a2));
  // zeta (1-2s)^2 (z^2-1)^2 [kr (zeta^2 z^2 + 1) + 2 zeta z]
  const Poly b1{-1.0, 0.0, 1.0};
  const Poly b2{kr, 2.0 * zeta, kr * zeta * zeta};
  const Poly right = pmul(pmul(b1, b1), b2);
  Poly out = padd(Poly(7, cplx(0.0, 0.0)), left, kr * kr);
  return padd(out, right, -zeta * ks * ks);
}

QubitGeneralResult qubit_general(const BlochQubitPair& p) {
  QubitGeneralResult res;
  const double pure_tol = 1e-12;
  if (p.s <= pure_tol || p.s >= 1 - pure_tol || p.r <= pure_tol || p.r >= 1 - pure_tol) {
    const auto [a, b] = bloch_pair_states(p);
    res.value = pure_state_value(a, b);
    res.phi.source = RootSource::Polynomial;
    return res;
  }
  const Poly poly = phi_polynomial(p);
  const Poly dpoly = pderiv(poly);
  std::vector<double> phis;
  for (cplx z : poly_roots(poly)) {
    if (std::abs(std::abs(z) - 1.0) > 1e-8) continue;
    // Newton polish; linear convergence near the double roots is enough here.
    for (int it = 0; it < 50; ++it) {
      const cplx d = peval(dpoly, z);
      if (std::abs(d) < 1e-300) break;
      const cplx step = peval(poly, z) / d;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double phi = wrap_angle(std::arg(z));
    const bool dup = std::any_of(phis.begin(), phis.end(), [&](double q) {
      const double dd = std::abs(phi - q);
      return std::min(dd, kTwoPi - dd) < 1e-9;
    });
    if (!dup) phis.push_back(phi);
  }
  double best = 0.0;
  for (double phi : phis) best = std::max(best, g_aux(p, phi));

  // Safeguard: grid plus golden-section refinement around each local grid maximum.
  const int grid = 360;
  std::vector<double> gv(grid);
  for (int k = 0; k < grid; ++k) gv[k] = g_aux(p, kTwoPi * k / grid);
  double grid_best = 0.0, grid_phi = 0.0;
  for (int k = 0; k < grid; ++k) {
    if (gv[k] < gv[(k + grid - 1) % grid] || gv[k] < gv[(k + 1) % grid]) continue;
    const double lo = kTwoPi * (k - 1) / grid, hi = kTwoPi * (k + 1) / grid;
    const double phi = golden_section_min([&](double x) { return -g_aux(p, x); }, lo, hi, 1e-12);
    const double v = g_aux(p, phi);
    if (v > grid_best) {
      grid_best = v;
      grid_phi = wrap_angle(phi);
    }
  }
  res.phi.source = RootSource::Polynomial;
  if (grid_best > best + 1e-12) {
    res.phi.source = RootSource::GridRefined;
    if (phis.size() >= 6) {
      auto worst = std::min_element(phis.begin(), phis.end(),
                                    [&](double x, double y) { return g_aux(p, x) < g_aux(p, y); });
      *worst = grid_phi;
    } else {
      phis.push_back(grid_phi);
    }
    best = grid_best;
  }
  std::sort(phis.begin(), phis.end());
  res.phi.roots = std::move(phis);
  res.value = best;
  return res;
}

double qubit_value(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return qubit_general(to_bloch_pair(rho, sigma)).value;
}

double qubit_isospectral(double s, double theta) {
  return (0.5 - std::sqrt(std::max(s * (1.0 - s), 0.0))) * sq(std::sin(theta / 2));
}

double pure_state_value(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "pure_state_value: dims differ");
  return 0.5 * (1.0 - (rho.op * sigma.op).trace().real());
}

namespace {

// n = 2: the optimum lies on the great circle through both Bloch vectors.
double unit_vector_max_qubit(const DensityMatrix& rho, const DensityMatrix& sigma, double (*f)(double)) {
  const Eigen::Vector3d a = bloch_vector(rho.op), b = bloch_vector(sigma.op);
  Eigen::Vector3d e1 = a.norm() > 1e-12 ? Eigen::Vector3d(a.normalized()) : Eigen::Vector3d(b.norm() > 1e-12 ? b.normalized() : Eigen::Vector3d::UnitZ());
  Eigen::Vector3d e2 = b - b.dot(e1) * e1;
  if (e2.norm() < 1e-12) {
    e2 = e1.unitOrthogonal();
  } else {
    e2.normalize();
  }
  auto h = [&](double phi) {
    const Eigen::Vector3d n = std::cos(phi) * e1 + std::sin(phi) * e2;
    return std::abs(f(0.5 * (1.0 + a.dot(n))) - f(0.5 * (1.0 + b.dot(n))));
  };
  const int grid = 720;
  std::vector<double> hv(grid);
  for (int k = 0; k < grid; ++k) hv[k] = h(kTwoPi * k / grid);
  double best = 0.0;
  for (int k = 0; k < grid; ++k) {
    best = std::max(best, hv[k]);
    if (hv[k] < hv[(k + grid - 1) % grid] || hv[k] < hv[(k + 1) % grid]) continue;
    const double phi = golden_section_min([&](double x) { return -h(x); }, kTwoPi * (k - 1) / grid,
                                          kTwoPi * (k + 1) / grid, 1e-12);
    best = std::max(best, h(phi));
  }
  return best;
}

}  // namespace

double unit_vector_max(const DensityMatrix& rho, const DensityMatrix& sigma, double (*f)(double),
                       const UnitaryOptOptions& opts) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "unit_vector_max: dims differ");
  const int n = rho.dim();
  if (n == 1) return 0.0;
  if (n == 2) return unit_vector_max_qubit(rho, sigma, f);

  auto value_at = [&](const CVector& u) {
    const double nu = u.squaredNorm();
    if (nu < 1e-300) return 0.0;
    const double pa = std::max((u.adjoint() * rho.op * u)(0, 0).real() / nu, 0.0);
    const double pb = std::max((u.adjoint() * sigma.op * u)(0, 0).real() / nu, 0.0);
    return std::abs(f(pa) - f(pb));
  };
  auto unpack = [n](const RVector& x) {
    CVector u(n);
    for (int i = 0; i < n; ++i) u(i) = cplx(x(2 * i), x(2 * i + 1));
    return u;
  };
  std::vector<CVector> starts;
  const Spectrum sr = spectral(rho.op), ss = spectral(sigma.op);
  for (int i = 0; i < n; ++i) {
    starts.push_back(sr.eigenvectors.col(i));
    starts.push_back(ss.eigenvectors.col(i));
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  for (int k = 0; k < opts.starts; ++k) {
    CVector u(n);
    for (int i = 0; i < n; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      u(i) = cplx(re, im);
    }
    starts.push_back(u.normalized());
  }
  double best = 0.0;
  std::vector<std::pair<double, CVector>> scored;
  for (const auto& u : starts) scored.emplace_back(value_at(u), u);
  for (const auto& [v, u] : scored) best = std::max(best, v);
  // Local refinement from every random start and from the best spectral candidates.
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  const std::size_t refine = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(opts.starts));
  for (std::size_t k = 0; k < refine; ++k) {
    RVector x(2 * n);
    for (int i = 0; i < n; ++i) {
      x(2 * i) = scored[k].second(i).real();
      x(2 * i + 1) = scored[k].second(i).imag();
    }
    const auto nm = nelder_mead([&](const RVector& y) { return -value_at(unpack(y)); }, x, 0.2,
                                opts.max_evals, 1e-14);
    best = std::max(best, -nm.value);
  }
  return best;
}

double t0_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma, const UnitaryOptOptions& opts) {
  const double d = unit_vector_max(rho, sigma, [](double x) { return std::sqrt(std::max(x, 0.0)); }, opts);
  return 0.5 * d * d;
}

const char* to_string(SweepBranch b) {
  switch (b) {
    case SweepBranch::Constant: return "constant";
    case SweepBranch::Low: return "low";
    case SweepBranch::High: return "high";
  }
  return "?";
}

std::vector<SweepPoint> decoherence_sweep(const RVector& s, const RVector& t, const std::vector<double>& alphas) {
  if (s.size() != 2 || t.size() != 2) throw Error(ErrorCode::DimensionMismatch, "decoherence_sweep: 2-vectors");
  check_probability(s, "s");
  check_probability(t, "t");
  // i follows the case split of the two-point formula.
  const int i = s(1) >= t(0) ? 0 : 1;
  const double si = s(i), ti = t(i);
  const double t1 = sq(std::sqrt(si) - std::sqrt(ti));
  const bool constant = (s - t).cwiseAbs().maxCoeff() == 0.0 || std::min(si, ti) <= 0.0;
  const double tau = constant ? 0.0 : 2.0 * std::sqrt(si * ti) / (si + ti);
  std::vector<SweepPoint> out;
  out.reserve(alphas.size());
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "decoherence_sweep: alpha outside [0,1]");
    SweepPoint pt{a, 0.0, SweepBranch::Constant};
    if (constant) {
      pt.value = 0.5 * t1;
    } else if (a < tau) {
      pt.branch = SweepBranch::Low;
      pt.value = 0.5 * std::sqrt(1.0 - a * a) * std::abs(si - ti);
    } else {
      pt.branch = SweepBranch::High;
      pt.value = 0.5 * (t1 + 2.0 * (1.0 - a) * std::sqrt(si * ti));
    }
    out.push_back(pt);
  }
  return out;
}

BoundSuite bound_suite(const DensityMatrix& rho, const DensityMatrix& sigma, std::optional<double> t, double tol) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "bound_suite: dims differ");
  BoundSuite b;
  b.fidelity = std::clamp(fidelity(rho, sigma), 0.0, 1.0);
  const double rf = std::sqrt(b.fidelity);
  b.lower_yzyy = 0.5 * (1.0 - rf);
  b.upper_yzyy = 0.5 * (1.0 - b.fidelity);
  b.upper_sqrt = 1.0 - rf;
  b.upper_product = pure_state_value(rho, sigma);
  const Spectrum sa = spectral(rho.op), sb = spectral(sigma.op);
  if ((sa.eigenvalues - sb.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9) {
    double acc = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
      acc += sa.eigenvalues(i) * std::norm(sa.eigenvectors.col(i).dot(sb.eigenvectors.col(i)));
    b.upper_schmidt = 0.5 * (1.0 - acc);
  }
  b.t0 = t0_lower_bound(rho, sigma);
  if (t) {
    const double v = *t;
    auto check = [&](bool ok, const char* what) {
      if (!ok) b.violations.emplace_back(what);
    };
    check(b.lower_yzyy <= v + tol, "lower_yzyy > T");
    check(b.t0 <= v + tol, "t0 > T");
    check(v <= b.upper_yzyy + tol, "T > upper_yzyy");
    check(b.upper_yzyy <= b.upper_sqrt + tol, "upper_yzyy > upper_sqrt");
    check(v <= b.upper_product + tol, "T > upper_product");
    if (b.upper_schmidt) check(v <= *b.upper_schmidt + tol, "T > upper_schmidt");
  }
  return b;
}

}  // namespace qot
