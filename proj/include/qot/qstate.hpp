#pragma once

#include "qot/types.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qot {

// Composite index of (i,p) is i*n + p, 0-based.
struct BipartiteIndex {
  int m = 0;
  int n = 0;
  int operator()(int i, int p) const { return i * n + p; }
  int dim() const { return m * n; }
};

struct DensityMatrix {
  CMatrix op;
  double eigen_floor = 0.0;
  int dim() const { return static_cast<int>(op.rows()); }
};

struct Spectrum {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // columns
};

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat out = (m + m.adjoint()) / typename Derived::Scalar(2);
  return out;
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// tr_B R [i][j] = sum_p R[(i,p)(j,p)]
template <typename Derived>
auto partial_trace_b(const Eigen::MatrixBase<Derived>& r, BipartiteIndex idx) {
  using Scalar = typename Derived::Scalar;
  if (r.rows() != idx.dim() || r.cols() != idx.dim())
    throw Error(ErrorCode::DimensionMismatch, "partial_trace_b: operator is not m*n square");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(idx.m, idx.m);
  for (int i = 0; i < idx.m; ++i)
    for (int j = 0; j < idx.m; ++j)
      for (int p = 0; p < idx.n; ++p) out(i, j) += r(idx(i, p), idx(j, p));
  return out;
}

// tr_A R [p][q] = sum_i R[(i,p)(i,q)]
template <typename Derived>
auto partial_trace_a(const Eigen::MatrixBase<Derived>& r, BipartiteIndex idx) {
  using Scalar = typename Derived::Scalar;
  if (r.rows() != idx.dim() || r.cols() != idx.dim())
    throw Error(ErrorCode::DimensionMismatch, "partial_trace_a: operator is not m*n square");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(idx.n, idx.n);
  for (int p = 0; p < idx.n; ++p)
    for (int q = 0; q < idx.n; ++q)
      for (int i = 0; i < idx.m; ++i) out(p, q) += r(idx(i, p), idx(i, q));
  return out;
}

// Marginal on site k of an operator on the tensor product of `dims`.
CMatrix partial_trace_keep(const CMatrix& r, const std::vector<int>& dims, int k);

DensityMatrix validate_density(const CMatrix& m, double trace_tol = kTraceTol, double psd_tol = kPsdTol);

Spectrum spectral(const CMatrix& m);
RVector eigenvalues_desc(const CMatrix& m);
double min_eigenvalue(const CMatrix& m);

// f applied to the spectrum with negative eigenvalues clipped to zero.
CMatrix sqrt_psd(const CMatrix& m);
double trace_norm(const CMatrix& m);

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma);
double root_infidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double sqrt_overlap(const DensityMatrix& rho, const DensityMatrix& sigma);  // tr sqrt(rho) sqrt(sigma)
double d2_sqrt_metric(const DensityMatrix& rho, const DensityMatrix& sigma);
double dp_distance(const DensityMatrix& rho, const DensityMatrix& sigma, double p);

CMatrix purification_symmetric(const DensityMatrix& rho);

struct RangeRestriction {
  DensityMatrix state;
  CMatrix isometry;  // dim x rank, V^dagger V = I
};
RangeRestriction restrict_to_range(const DensityMatrix& rho, double tol = 1e-10);

DensityMatrix pure_state(const CVector& v);
DensityMatrix diagonal_state(const RVector& p);
bool is_pure(const DensityMatrix& rho, double tol = 1e-10);

// Seeded ensembles; identical seeds give bit-identical output.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);
DensityMatrix random_density(int n, int rank, std::uint64_t seed);
DensityMatrix random_pure(int n, std::uint64_t seed);
CMatrix random_unitary(int n, std::uint64_t seed);
RVector random_probability(int n, std::uint64_t seed);

// Unconstrained parametrization of the state space: n^2 reals per state, L lower triangular,
// rho = L L^dagger / tr(L L^dagger).
DensityMatrix density_from_cholesky_params(const RVector& x, int offset, int n);
void cholesky_params(const DensityMatrix& rho, RVector& x, int offset);

}  // namespace qot
