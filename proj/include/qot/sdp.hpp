#pragma once

#include "qot/block_sdp.hpp"
#include "qot/cost.hpp"
#include "qot/qstate.hpp"

#include <string>
#include <vector>

namespace qot {

struct CouplingProblem {
  DensityMatrix rhoA;
  DensityMatrix rhoB;
  CostOperator cost;

  BipartiteIndex idx() const { return {rhoA.dim(), rhoB.dim()}; }
};

CouplingProblem make_problem(const DensityMatrix& a, const DensityMatrix& b, const CostOperator& c);

// Real-valued marginal constraints tr(M_k R) = target_k.
struct ConstraintSystem {
  std::vector<CMatrix> matrices;
  std::vector<double> targets;
  std::vector<int> site;       // marginal the constraint belongs to
  std::vector<CMatrix> basis;  // site-local G_ij or H_ij
};

// G_ij and H_ij bases per site; one trace constraint per site after the first is dropped.
ConstraintSystem assemble_site_constraints(const std::vector<CMatrix>& marginals);
ConstraintSystem assemble_constraints(const CouplingProblem& prob);

// L(X + iY) = [[X, Y], [-Y, X]]
template <typename Derived>
auto real_embedding(const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  const Eigen::Index n = h.rows();
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.bottomRightCorner(n, n) = h.real();
  out.topRightCorner(n, n) = h.imag();
  out.bottomLeftCorner(n, n) = -h.imag();
  return out;
}

enum class SolveStatus { Optimal, Reduced, NotAttained, MaxIter };
const char* to_string(SolveStatus s);

struct SolverOptions {
  double tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iter = 200;
  int verbosity = 0;
  double face_tol = 1e-10;  // eigenvalues at or below are treated as zero in facial reduction
};

struct SdpSolution {
  CMatrix coupling;
  double value = 0.0;
  std::vector<CMatrix> sigma;  // one potential per marginal, tr sigma_j = 0 for j >= 1
  CMatrix certificate;         // C - sum_j sigma_j embedded
  double gap = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Optimal;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  std::vector<CMatrix> face;  // isometry per marginal; identity when no reduction took place

  const CMatrix& sigmaA() const { return sigma.at(0); }
  const CMatrix& sigmaB() const { return sigma.at(1); }
};

// Minimizes tr(C R) over R >= 0 with prescribed single-site marginals.
SdpSolution solve_marginal_sdp(const std::vector<DensityMatrix>& marginals, const CMatrix& cost,
                               const SolverOptions& opts = {});

SdpSolution solve(const CouplingProblem& prob, const SolverOptions& opts = {});

// C - sum_j I x sigma_j x I on the site product.
CMatrix dual_slack(const CMatrix& cost, const std::vector<CMatrix>& sigma, const std::vector<int>& dims);

struct DualResult {
  CMatrix sigmaA;
  CMatrix sigmaB;
  double lower_value = 0.0;
  bool attained = true;
  double min_eig_certificate = 0.0;
};

// Feasible potentials. For singular marginals the face potentials are lifted with a large
// penalty on the kernels, so lower_value may sit strictly below T (the sup is then not attained).
DualResult solve_dual_only(const CouplingProblem& prob, const SolverOptions& opts = {});

struct CertificateReport {
  double complementarity = 0.0;  // tr(F R)
  double min_eig_certificate = 0.0;
  double marginal_error_a = 0.0;
  double marginal_error_b = 0.0;
  double gap = 0.0;
  int rank_certificate = 0;
  int rank_coupling = 0;
  int dim = 0;
  bool face_only = false;   // F checked on the range of the marginals
  bool dual_checked = true;
  bool pass = false;
  std::string summary() const;
};

CertificateReport check_certificate(const CouplingProblem& prob, const SdpSolution& sol, double tol = 1e-6,
                                    double psd_tol = 1e-8);

}  // namespace qot
