#include "qot/qstate.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

namespace qot {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::ScalarOperator: return "ScalarOperator";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorCode::NotAMetricCost: return "NotAMetricCost";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
  }
  return "Unknown";
}

CMatrix partial_trace_keep(const CMatrix& r, const std::vector<int>& dims, int k) {
  long total = 1;
  for (int d : dims) total *= d;
  if (r.rows() != total || r.cols() != total)
    throw Error(ErrorCode::DimensionMismatch, "partial_trace_keep: operator size does not match site dims");
  long left = 1;
  for (int j = 0; j < k; ++j) left *= dims[j];
  const long nk = dims[k];
  const long right = total / (left * nk);
  CMatrix out = CMatrix::Zero(nk, nk);
  for (long a = 0; a < left; ++a)
    for (long c = 0; c < right; ++c)
      for (long i = 0; i < nk; ++i)
        for (long j = 0; j < nk; ++j)
          out(i, j) += r((a * nk + i) * right + c, (a * nk + j) * right + c);
  return out;
}

DensityMatrix validate_density(const CMatrix& m, double trace_tol, double psd_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::NotSquare, "density matrix must be square");
  CMatrix h = hermitian_part(m);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > trace_tol) throw Error(ErrorCode::TraceNotOne, "trace = " + std::to_string(tr));
  const double floor = min_eigenvalue(h);
  if (floor < -psd_tol * static_cast<double>(h.rows()))
    throw Error(ErrorCode::NotPSD, "smallest eigenvalue = " + std::to_string(floor));
  return DensityMatrix{std::move(h), floor};
}

Spectrum spectral(const CMatrix& m) {
  const CMatrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver");
  const Eigen::Index n = h.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues(k) = es.eigenvalues()(n - 1 - k);
    CVector v = es.eigenvectors().col(n - 1 - k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v *= std::conj(v(arg)) / std::abs(v(arg));
    s.eigenvectors.col(k) = v;
  }
  return s;
}

RVector eigenvalues_desc(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver");
  return es.eigenvalues().reverse();
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver");
  return es.eigenvalues()(0);
}

CMatrix sqrt_psd(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  // Eigenvalues at rounding level are zeroed: their square roots (~1e-8) would dominate.
  const double floor = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const RVector d = es.eigenvalues().unaryExpr([floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); });
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

static void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "states have different dimensions");
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const double r = trace_norm(sqrt_psd(rho.op) * sqrt_psd(sigma.op));
  return std::clamp(r * r, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  return 0.5 * eigenvalues_desc(rho.op - sigma.op).cwiseAbs().sum();
}

double root_infidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(std::max(0.0, 1.0 - fidelity(rho, sigma)));
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(fidelity(rho, sigma))));
}

double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 2.0 / std::numbers::pi * std::acos(std::min(1.0, std::sqrt(fidelity(rho, sigma))));
}

double sqrt_overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  return (sqrt_psd(rho.op) * sqrt_psd(sigma.op)).trace().real();
}

double d2_sqrt_metric(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(std::max(0.0, 1.0 - sqrt_overlap(rho, sigma)));
}

double dp_distance(const DensityMatrix& rho, const DensityMatrix& sigma, double p) {
  return std::pow(std::max(0.0, 1.0 - sqrt_overlap(rho, sigma)), 1.0 / p);
}

CMatrix purification_symmetric(const DensityMatrix& rho) {
  const Spectrum sp = spectral(rho.op);
  const int n = rho.dim();
  CVector psi = CVector::Zero(n * n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(0.0, sp.eigenvalues(k));
    if (lam == 0.0) continue;
    const CVector x = sp.eigenvectors.col(k);
    psi += std::sqrt(lam) * kron(x, x);
  }
  return psi * psi.adjoint();
}

RangeRestriction restrict_to_range(const DensityMatrix& rho, double tol) {
  const Spectrum sp = spectral(rho.op);
  const int n = rho.dim();
  int rank = 0;
  while (rank < n && sp.eigenvalues(rank) > tol) ++rank;
  if (rank == n) return {rho, CMatrix::Identity(n, n)};
  if (rank == 0) throw Error(ErrorCode::NotPSD, "restrict_to_range: state has no eigenvalue above tolerance");
  CMatrix v = sp.eigenvectors.leftCols(rank);
  CMatrix reduced = hermitian_part(CMatrix(v.adjoint() * rho.op * v));
  reduced /= reduced.trace().real();
  return {DensityMatrix{reduced, min_eigenvalue(reduced)}, v};
}

DensityMatrix pure_state(const CVector& v) {
  const CVector u = v / v.norm();
  return DensityMatrix{hermitian_part(CMatrix(u * u.adjoint())), 0.0};
}

DensityMatrix diagonal_state(const RVector& p) {
  CMatrix d = CMatrix::Zero(p.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) d(i, i) = p(i);
  return validate_density(d);
}

bool is_pure(const DensityMatrix& rho, double tol) {
  const RVector ev = eigenvalues_desc(rho.op);
  return ev.size() == 1 || ev(1) <= tol;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

static CMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix out(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      out(i, j) = cplx(re, im);
    }
  return out;
}

DensityMatrix random_density(int n, int rank, std::uint64_t seed) {
  if (n < 1 || rank < 1 || rank > n) throw Error(ErrorCode::BadRank, "random_density requires 1 <= rank <= n");
  std::mt19937_64 rng(seed);
  const CMatrix g = ginibre(n, rank, rng);
  CMatrix r = g * g.adjoint();
  r /= r.trace().real();
  r = hermitian_part(r);
  return DensityMatrix{r, min_eigenvalue(r)};
}

DensityMatrix random_pure(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CMatrix g = ginibre(n, 1, rng);
  return pure_state(g.col(0));
}

CMatrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

RVector random_probability(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  RVector p(n);
  for (int i = 0; i < n; ++i) p(i) = e(rng);
  return p / p.sum();
}

// rho = L L^dagger / tr, L lower triangular: n real diagonal + n(n-1)/2 complex entries.
DensityMatrix density_from_cholesky_params(const RVector& x, int off, int n) {
  CMatrix l = CMatrix::Zero(n, n);
  int k = off;
  for (int i = 0; i < n; ++i) l(i, i) = x(k++);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      l(i, j) = cplx(x(k), x(k + 1));
      k += 2;
    }
  CMatrix r = l * l.adjoint();
  const double tr = r.trace().real();
  if (tr <= 1e-300) return DensityMatrix{CMatrix::Identity(n, n) / static_cast<double>(n)};
  return DensityMatrix{hermitian_part(CMatrix(r / tr))};
}

void cholesky_params(const DensityMatrix& rho, RVector& x, int off) {
  const int n = rho.dim();
  Eigen::LLT<CMatrix> llt(rho.op + 1e-10 * CMatrix::Identity(n, n));
  const CMatrix l = llt.matrixL();
  int k = off;
  for (int i = 0; i < n; ++i) x(k++) = l(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      x(k) = l(i, j).real();
      x(k + 1) = l(i, j).imag();
      k += 2;
    }
}


}  // namespace qot
