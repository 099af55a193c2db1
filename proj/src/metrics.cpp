#include "qot/metrics.hpp"

#include "qot/optimize.hpp"
#include "qot/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qot {

const char* to_string(Engine e) {
  switch (e) {
    case Engine::ClosedForm: return "closedform";
    case Engine::Sdp: return "sdp";
    case Engine::Auto: return "auto";
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  if (s == "closedform" || s == "closed-form") return Engine::ClosedForm;
  if (s == "sdp") return Engine::Sdp;
  if (s == "auto") return Engine::Auto;
  throw Error(ErrorCode::InvalidInput, "unknown engine '" + s + "'");
}

namespace {

bool is_diagonal(const CMatrix& m, double tol = 1e-12) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

double sdp_value(const DensityMatrix& rho, const DensityMatrix& sigma, const SolverOptions& opts) {
  return solve(make_problem(rho, sigma, cq_projector(rho.dim())), opts).value;
}

// Engine dispatch without the equal-state shortcut.
double raw_value(const DensityMatrix& rho, const DensityMatrix& sigma, Engine engine, const SolverOptions& opts) {
  if (engine == Engine::Sdp) return sdp_value(rho, sigma, opts);
  if (auto v = closed_form_value(rho, sigma)) return *v;
  if (engine == Engine::ClosedForm)
    throw Error(ErrorCode::NoClosedForm, "no closed form for this pair (n = " + std::to_string(rho.dim()) +
                                             ", not pure, not diagonal qutrits)");
  return sdp_value(rho, sigma, opts);
}

}  // namespace

std::optional<double> closed_form_value(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "closed_form_value: dims differ");
  if (rho.dim() == 2) return qubit_value(rho, sigma);
  if (is_pure(rho) || is_pure(sigma)) return pure_state_value(rho, sigma);
  if (rho.dim() == 3 && is_diagonal(rho.op) && is_diagonal(sigma.op)) {
    RVector s = rho.op.diagonal().real().cwiseMax(0.0), t = sigma.op.diagonal().real().cwiseMax(0.0);
    s /= s.sum();
    t /= t.sum();
    return qutrit_diag(s, t).value;
  }
  return std::nullopt;
}

double transport_value(const DensityMatrix& rho, const DensityMatrix& sigma, Engine engine, const SolverOptions& opts) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "transport_value: dims differ");
  // T(rho, rho) = 0 exactly; skipping the solve keeps sqrt T free of solver noise.
  if ((rho.op - sigma.op).cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return std::max(raw_value(rho, sigma, engine, opts), 0.0);
}

SemimetricDiagnosis certify_cost_semimetric(const CostOperator& c) {
  SemimetricDiagnosis d;
  if (c.sites.size() != 2 || c.sites[0] != c.sites[1]) {
    d.reason = "cost must act on n x n";
    return d;
  }
  const int n = c.sites[0];
  const CMatrix h = hermitian_part(c.op);
  d.min_eig = min_eigenvalue(h);
  const CMatrix sw = swap_operator(n).op;
  const CMatrix psym = 0.5 * (CMatrix::Identity(n * n, n * n) + sw);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(psym);
  std::vector<int> sym, anti;
  for (int k = 0; k < n * n; ++k) (es.eigenvalues()(k) > 0.5 ? sym : anti).push_back(k);
  CMatrix bs(n * n, sym.size()), ba(n * n, anti.size());
  for (std::size_t k = 0; k < sym.size(); ++k) bs.col(k) = es.eigenvectors().col(sym[k]);
  for (std::size_t k = 0; k < anti.size(); ++k) ba.col(k) = es.eigenvectors().col(anti[k]);
  d.symmetric_leak = (bs.adjoint() * h * bs).norm();
  d.antisymmetric_gap = anti.empty() ? 0.0 : min_eigenvalue(CMatrix(ba.adjoint() * h * ba));
  if (d.min_eig < -1e-10) {
    d.reason = "not positive semidefinite";
  } else if (d.symmetric_leak > 1e-10) {
    d.reason = "symmetric subspace not in kernel";
  } else if (d.antisymmetric_gap <= 1e-10) {
    d.reason = "kernel larger than the symmetric subspace";
  } else {
    d.ok = true;
    d.reason = "ok";
  }
  return d;
}

const char* to_string(MetricProperty p) {
  switch (p) {
    case MetricProperty::Symmetry: return "symmetry";
    case MetricProperty::Identity: return "identity";
    case MetricProperty::Triangle: return "triangle";
  }
  return "?";
}

namespace {

template <typename Excess>
MetricReport run_scan(MetricProperty prop, int n, int samples, std::uint64_t seed, int arity, int jobs, double slack,
                      Excess excess) {
  std::vector<std::vector<DensityMatrix>> states(samples);
  std::vector<double> ex(samples, 0.0);
  parallel_for(samples, jobs, [&](int i) {
    for (int k = 0; k < arity; ++k)
      states[i].push_back(random_density(n, n, split_seed(seed, static_cast<std::uint64_t>(i) * 3 + k)));
    ex[i] = excess(states[i]);
  });
  MetricReport rep;
  rep.property = prop;
  rep.samples = samples;
  for (int i = 0; i < samples; ++i) {
    rep.worst_violation = std::max(rep.worst_violation, ex[i]);
    if (ex[i] > slack) rep.witnesses.push_back(Witness{states[i], ex[i], static_cast<std::uint64_t>(i)});
  }
  return rep;
}

}  // namespace

MetricReport triangle_scan(int n, int samples, std::uint64_t seed, Engine engine, int jobs, double slack) {
  return run_scan(MetricProperty::Triangle, n, samples, seed, 3, jobs, slack, [&](const std::vector<DensityMatrix>& s) {
    const double dxy = std::sqrt(transport_value(s[0], s[1], engine));
    const double dyz = std::sqrt(transport_value(s[1], s[2], engine));
    const double dxz = std::sqrt(transport_value(s[0], s[2], engine));
    return std::max({0.0, dxz - dxy - dyz, dxy - dxz - dyz, dyz - dxy - dxz});
  });
}

MetricReport symmetry_scan(int n, int samples, std::uint64_t seed, Engine engine, int jobs, double slack) {
  return run_scan(MetricProperty::Symmetry, n, samples, seed, 2, jobs, slack, [&](const std::vector<DensityMatrix>& s) {
    return std::abs(transport_value(s[0], s[1], engine) - transport_value(s[1], s[0], engine));
  });
}

MetricReport identity_scan(int n, int samples, std::uint64_t seed, Engine engine, int jobs, double slack) {
  return run_scan(MetricProperty::Identity, n, samples, seed, 1, jobs, slack, [&](const std::vector<DensityMatrix>& s) {
    return std::abs(raw_value(s[0], s[0], engine, SolverOptions{}));
  });
}

ChainResult chain_distance(const DensityMatrix& rho, const DensityMatrix& sigma, int n_intermediate, Engine engine,
                           const ChainOptions& opts) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "chain_distance: dims differ");
  if (n_intermediate < 0 || n_intermediate > 3) throw Error(ErrorCode::InvalidInput, "chain_distance: N in {0,..,3}");
  const int n = rho.dim();
  const int per = n * n;
  auto chain_length = [&](const std::vector<DensityMatrix>& mid) {
    double acc = 0.0;
    const DensityMatrix* prev = &rho;
    for (const auto& m : mid) {
      acc += std::sqrt(transport_value(*prev, m, engine));
      prev = &m;
    }
    return acc + std::sqrt(transport_value(*prev, sigma, engine));
  };
  ChainResult res;
  res.d0 = std::sqrt(transport_value(rho, sigma, engine));
  res.value = res.d0;
  for (int level = 1; level <= n_intermediate; ++level) {
    // Repeating a state keeps the previous length, so the level optimum is never worse.
    std::vector<DensityMatrix> start = res.intermediates;
    start.insert(start.begin(), start.empty() ? rho : start.front());
    RVector x(per * level);
    for (int k = 0; k < level; ++k) cholesky_params(start[k], x, k * per);
    auto objective = [&](const RVector& y) {
      std::vector<DensityMatrix> mid;
      for (int k = 0; k < level; ++k) mid.push_back(density_from_cholesky_params(y, k * per, n));
      return chain_length(mid);
    };
    const NelderMeadResult nm = nelder_mead(objective, x, opts.step, opts.max_evals, 1e-10);
    res.stalled = !nm.converged;
    std::vector<DensityMatrix> mid;
    for (int k = 0; k < level; ++k) mid.push_back(density_from_cholesky_params(nm.x, k * per, n));
    const double v = chain_length(mid);
    const double prev = chain_length(start);
    if (v <= prev) {
      res.intermediates = mid;
      res.value = v;
    } else {
      res.intermediates = start;
      res.value = prev;
    }
  }
  return res;
}

double d0_metric(const DensityMatrix& rho, const DensityMatrix& sigma, double (*f)(double),
                 const UnitaryOptOptions& opts) {
  return unit_vector_max(rho, sigma, f, opts);
}

namespace {

TriangleTriple base_triple(double z2, double eps) {
  if (!(z2 > 0.0 && z2 < 1.0) || !(eps > 0.0 && eps < 1.0))
    throw Error(ErrorCode::InvalidInput, "triangle triple needs z2, eps in (0, 1)");
  const double z1 = std::sqrt(1.0 - z2 * z2);
  const double y2 = (1.0 - eps) * z2;
  const double y1 = std::sqrt(z1 * z1 + eps * (2.0 - eps) * z2 * z2);
  CVector a(2), b(2), c(2);
  a << 1.0, 0.0;
  b << y1, y2;
  c << z1, z2;
  TriangleTriple t{pure_state(a), pure_state(b), pure_state(c)};
  t.epsilon = eps;
  return t;
}

}  // namespace

TriangleTriple dp_triple(double z2, double eps, double p) {
  TriangleTriple t = base_triple(z2, eps);
  t.d_ab = dp_distance(t.a, t.b, p);
  t.d_bc = dp_distance(t.b, t.c, p);
  t.d_ac = dp_distance(t.a, t.c, p);
  return t;
}

TriangleTriple transport_power_triple(double z2, double eps, double p, Engine engine) {
  TriangleTriple t = base_triple(z2, eps);
  t.d_ab = std::pow(transport_value(t.a, t.b, engine), 1.0 / p);
  t.d_bc = std::pow(transport_value(t.b, t.c, engine), 1.0 / p);
  t.d_ac = std::pow(transport_value(t.a, t.c, engine), 1.0 / p);
  return t;
}

std::optional<TriangleTriple> find_dp_violation(double p, double z2, bool use_transport, Engine engine) {
  // Below ~1e-5 the overlaps sit within rounding of 1 and the excess is noise.
  for (double eps = 0.5; eps > 1e-5; eps *= 0.5) {
    const TriangleTriple t = use_transport ? transport_power_triple(z2, eps, p, engine) : dp_triple(z2, eps, p);
    if (t.excess() > 1e-10) return t;
  }
  return std::nullopt;
}

}  // namespace qot
