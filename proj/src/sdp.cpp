#include "qot/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qot {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Reduced: return "Reduced";
    case SolveStatus::NotAttained: return "NotAttained";
    case SolveStatus::MaxIter: return "MaxIter";
  }
  return "Unknown";
}

CouplingProblem make_problem(const DensityMatrix& a, const DensityMatrix& b, const CostOperator& c) {
  if (c.sites.size() != 2 || c.sites[0] != a.dim() || c.sites[1] != b.dim())
    throw Error(ErrorCode::DimensionMismatch, "cost sites do not match the marginal dimensions");
  return CouplingProblem{a, b, c};
}

namespace {

CMatrix embed_site(const CMatrix& local, const std::vector<int>& dims, int j) {
  long left = 1, right = 1;
  for (int k = 0; k < j; ++k) left *= dims[k];
  for (std::size_t k = j + 1; k < dims.size(); ++k) right *= dims[k];
  return kron(kron(CMatrix::Identity(left, left), local), CMatrix::Identity(right, right));
}

CMatrix tensor_all(const std::vector<CMatrix>& ops) {
  CMatrix out = ops.at(0);
  for (std::size_t k = 1; k < ops.size(); ++k) out = kron(out, ops[k]);
  return out;
}

std::vector<int> dims_of(const std::vector<DensityMatrix>& ms) {
  std::vector<int> d;
  for (const auto& m : ms) d.push_back(m.dim());
  return d;
}

struct Face {
  std::vector<DensityMatrix> marginals;
  std::vector<CMatrix> iso;
  CMatrix cost;
  bool reduced = false;
};

Face make_face(const std::vector<DensityMatrix>& marginals, const CMatrix& cost, double tol) {
  Face f;
  for (const auto& m : marginals) {
    RangeRestriction r = restrict_to_range(m, tol);
    if (r.isometry.cols() != m.dim()) f.reduced = true;
    f.marginals.push_back(r.state);
    f.iso.push_back(r.isometry);
  }
  if (f.reduced) {
    const CMatrix w = tensor_all(f.iso);
    f.cost = hermitian_part(CMatrix(w.adjoint() * cost * w));
  } else {
    f.cost = hermitian_part(cost);
  }
  return f;
}

struct FaceSolution {
  CMatrix coupling;  // on the face
  std::vector<CMatrix> sigma;
  IpmResult ipm;
  double value = 0.0;
  double dual_value = 0.0;
};

FaceSolution solve_face(const Face& face, const SolverOptions& opts) {
  std::vector<CMatrix> ms;
  for (const auto& m : face.marginals) ms.push_back(m.op);
  const ConstraintSystem cs = assemble_site_constraints(ms);
  const int k = static_cast<int>(cs.matrices.size());
  const int n = static_cast<int>(face.cost.rows());

  BlockSdpProblem p;
  p.blocks = {2 * n};
  p.c = {0.5 * real_embedding(face.cost)};
  p.b.resize(k);
  for (int j = 0; j < k; ++j) {
    p.a.push_back({0.5 * real_embedding(cs.matrices[j])});
    p.b(j) = cs.targets[j];
  }

  // Strictly feasible start: product of marginals, potentials sigma_0 = -a I.
  const double a = 1.0 + std::max(0.0, -min_eigenvalue(face.cost));
  IpmPoint start;
  start.x = {real_embedding(tensor_all(ms))};
  start.y = RVector::Zero(k);
  for (int j = 0; j < k; ++j)
    if (cs.site[j] == 0 && cs.basis[j].imag().isZero(0.0) && cs.basis[j].real().isDiagonal(0.0)) start.y(j) = -a;
  CMatrix z0 = face.cost;
  z0.diagonal().array() += a;
  start.z = {0.5 * real_embedding(z0)};

  IpmOptions io;
  io.tol = opts.tol;
  io.feas_tol = opts.feas_tol;
  io.max_iter = opts.max_iter;
  io.verbosity = opts.verbosity;

  FaceSolution out;
  out.ipm = solve_block_sdp(p, io, start);
  const RMatrix& w = out.ipm.point.x[0];
  const RMatrix re = 0.5 * (w.topLeftCorner(n, n) + w.bottomRightCorner(n, n));
  const RMatrix im = 0.5 * (w.topRightCorner(n, n) - w.bottomLeftCorner(n, n));
  out.coupling = hermitian_part(CMatrix(re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>()));

  const int d = static_cast<int>(ms.size());
  for (int s = 0; s < d; ++s) out.sigma.push_back(CMatrix::Zero(ms[s].rows(), ms[s].rows()));
  for (int j = 0; j < k; ++j) out.sigma[cs.site[j]] += out.ipm.point.y(j) * cs.basis[j];
  for (int s = 1; s < d; ++s) {
    const double c = out.sigma[s].trace().real() / static_cast<double>(ms[s].rows());
    out.sigma[s].diagonal().array() -= c;
    out.sigma[0].diagonal().array() += c;
  }
  for (auto& s : out.sigma) s = hermitian_part(s);
  out.value = (face.cost * out.coupling).trace().real();
  out.dual_value = 0.0;
  for (int s = 0; s < d; ++s) out.dual_value += (out.sigma[s] * ms[s]).trace().real();
  return out;
}

}  // namespace

ConstraintSystem assemble_site_constraints(const std::vector<CMatrix>& marginals) {
  std::vector<int> dims;
  for (const auto& m : marginals) dims.push_back(static_cast<int>(m.rows()));
  ConstraintSystem cs;
  const cplx iu(0, 1);
  for (int s = 0; s < static_cast<int>(marginals.size()); ++s) {
    const int n = dims[s];
    const CMatrix& a = marginals[s];
    for (int i = 0; i < n; ++i)
      for (int l = i; l < n; ++l) {
        if (s > 0 && i == n - 1 && l == n - 1) continue;  // redundant trace constraint
        CMatrix g = CMatrix::Zero(n, n);
        g(i, l) += 0.5;
        g(l, i) += 0.5;
        cs.basis.push_back(g);
        cs.matrices.push_back(embed_site(g, dims, s));
        cs.targets.push_back(a(i, l).real());
        cs.site.push_back(s);
        if (i != l) {
          CMatrix h = CMatrix::Zero(n, n);
          h(i, l) = 0.5 * iu;
          h(l, i) = -0.5 * iu;
          cs.basis.push_back(h);
          cs.matrices.push_back(embed_site(h, dims, s));
          cs.targets.push_back(a(i, l).imag());
          cs.site.push_back(s);
        }
      }
  }
  return cs;
}

ConstraintSystem assemble_constraints(const CouplingProblem& prob) {
  return assemble_site_constraints({prob.rhoA.op, prob.rhoB.op});
}

CMatrix dual_slack(const CMatrix& cost, const std::vector<CMatrix>& sigma, const std::vector<int>& dims) {
  CMatrix f = cost;
  for (std::size_t j = 0; j < sigma.size(); ++j) f -= embed_site(sigma[j], dims, static_cast<int>(j));
  return hermitian_part(f);
}

SdpSolution solve_marginal_sdp(const std::vector<DensityMatrix>& marginals, const CMatrix& cost,
                               const SolverOptions& opts) {
  const std::vector<int> dims = dims_of(marginals);
  long total = 1;
  for (int d : dims) total *= d;
  if (cost.rows() != total || cost.cols() != total)
    throw Error(ErrorCode::DimensionMismatch, "cost size does not match the marginals");
  const Face face = make_face(marginals, cost, opts.face_tol);

  SdpSolution sol;
  sol.face = face.iso;
  int mixed_sites = 0;
  for (const auto& m : face.marginals) mixed_sites += m.dim() > 1 ? 1 : 0;

  if (mixed_sites <= 1) {
    // The only coupling is the product of the marginals.
    std::vector<CMatrix> ops;
    for (const auto& m : marginals) ops.push_back(m.op);
    sol.coupling = hermitian_part(tensor_all(ops));
    sol.value = (cost * sol.coupling).trace().real();
    for (int d : dims) sol.sigma.push_back(CMatrix::Zero(d, d));
    sol.certificate = hermitian_part(cost);
    sol.gap = 0.0;
    sol.status = SolveStatus::NotAttained;
    return sol;
  }

  const FaceSolution fs = solve_face(face, opts);
  const CMatrix w = tensor_all(face.iso);
  sol.coupling = face.reduced ? hermitian_part(CMatrix(w * fs.coupling * w.adjoint())) : fs.coupling;
  for (std::size_t j = 0; j < fs.sigma.size(); ++j)
    sol.sigma.push_back(face.reduced ? hermitian_part(CMatrix(face.iso[j] * fs.sigma[j] * face.iso[j].adjoint()))
                                     : fs.sigma[j]);
  sol.certificate = dual_slack(cost, sol.sigma, dims);
  sol.value = fs.value;
  sol.gap = std::abs(fs.value - fs.dual_value);
  sol.iterations = fs.ipm.iterations;
  sol.primal_infeasibility = fs.ipm.primal_infeasibility;
  sol.dual_infeasibility = fs.ipm.dual_infeasibility;
  if (fs.ipm.status != IpmStatus::Optimal)
    sol.status = SolveStatus::MaxIter;
  else
    sol.status = face.reduced ? SolveStatus::Reduced : SolveStatus::Optimal;
  return sol;
}

SdpSolution solve(const CouplingProblem& prob, const SolverOptions& opts) {
  return solve_marginal_sdp({prob.rhoA, prob.rhoB}, prob.cost.op, opts);
}

DualResult solve_dual_only(const CouplingProblem& prob, const SolverOptions& opts) {
  const std::vector<int> dims = {prob.rhoA.dim(), prob.rhoB.dim()};
  const Face face = make_face({prob.rhoA, prob.rhoB}, prob.cost.op, opts.face_tol);
  const FaceSolution fs = solve_face(face, opts);
  DualResult out;
  if (!face.reduced) {
    out.sigmaA = fs.sigma[0];
    out.sigmaB = fs.sigma[1];
    out.lower_value = fs.dual_value;
    out.min_eig_certificate = min_eigenvalue(dual_slack(prob.cost.op, fs.sigma, dims));
    out.attained = true;
    return out;
  }
  // Lift face potentials with a large penalty on the kernels; shift sigma_A to restore F >= 0.
  out.attained = false;
  out.lower_value = -std::numeric_limits<double>::infinity();
  const double scale = 1.0 + prob.cost.op.cwiseAbs().maxCoeff();
  for (double big : {1e3, 1e4, 1e5, 1e6, 1e7}) {
    std::vector<CMatrix> s(2);
    for (int j = 0; j < 2; ++j) {
      const CMatrix& v = face.iso[j];
      const int n = dims[j];
      const CMatrix kernel = CMatrix::Identity(n, n) - v * v.adjoint();
      s[j] = hermitian_part(CMatrix(v * fs.sigma[j] * v.adjoint() - big * scale * kernel));
    }
    const double lmin = min_eigenvalue(dual_slack(prob.cost.op, s, dims));
    if (lmin < 0) s[0].diagonal().array() -= -lmin;
    const double lower = (s[0] * prob.rhoA.op).trace().real() + (s[1] * prob.rhoB.op).trace().real();
    if (lower > out.lower_value) {
      out.lower_value = lower;
      out.sigmaA = s[0];
      out.sigmaB = s[1];
      out.min_eig_certificate = min_eigenvalue(dual_slack(prob.cost.op, s, dims));
    }
  }
  return out;
}

CertificateReport check_certificate(const CouplingProblem& prob, const SdpSolution& sol, double tol,
                                    double psd_tol) {
  CertificateReport r;
  const BipartiteIndex idx = prob.idx();
  r.dim = idx.dim();
  r.gap = sol.gap;
  r.marginal_error_a = (partial_trace_b(sol.coupling, idx) - prob.rhoA.op).norm();
  r.marginal_error_b = (partial_trace_a(sol.coupling, idx) - prob.rhoB.op).norm();
  const CMatrix f = dual_slack(prob.cost.op, sol.sigma, {idx.m, idx.n});
  CMatrix fc = f, rc = sol.coupling;
  if (sol.status == SolveStatus::Reduced) {
    const CMatrix w = kron(sol.face.at(0), sol.face.at(1));
    fc = hermitian_part(CMatrix(w.adjoint() * f * w));
    rc = hermitian_part(CMatrix(w.adjoint() * sol.coupling * w));
    r.face_only = true;
  }
  r.complementarity = (fc * rc).trace().real();
  r.min_eig_certificate = min_eigenvalue(fc);
  const RVector ef = eigenvalues_desc(fc);
  const RVector er = eigenvalues_desc(rc);
  r.rank_certificate = static_cast<int>((ef.array() > 1e-6).count());
  r.rank_coupling = static_cast<int>((er.array() > 1e-6).count());
  const bool marginals_ok = r.marginal_error_a <= 1e-9 && r.marginal_error_b <= 1e-9;
  if (sol.status == SolveStatus::NotAttained) {
    r.dual_checked = false;
    r.pass = marginals_ok && r.gap == 0.0;
    return r;
  }
  r.pass = marginals_ok && r.gap <= 1e-7 && std::abs(r.complementarity) <= tol && r.min_eig_certificate >= -psd_tol &&
           sol.status != SolveStatus::MaxIter;
  return r;
}

std::string CertificateReport::summary() const {
  std::ostringstream os;
  os << "tr(FR)=" << complementarity << " min_eig(F)=" << min_eig_certificate << " gap=" << gap
     << " marginal_err=(" << marginal_error_a << "," << marginal_error_b << ") rank(F)+rank(R)="
     << rank_certificate + rank_coupling << "/" << dim << (face_only ? " [face]" : "")
     << (dual_checked ? "" : " [dual not attained]") << (pass ? " PASS" : " FAIL");
  return os.str();
}

}  // namespace qot
