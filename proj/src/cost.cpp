#include "qot/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qot {

const char* to_string(CostTag tag) {
  switch (tag) {
    case CostTag::Swap: return "swap";
    case CostTag::Cq: return "cq";
    case CostTag::CqE: return "cq_e";
    case CostTag::CqAlpha: return "cq_alpha";
    case CostTag::Cb: return "cb";
    case CostTag::Custom: return "custom";
  }
  return "custom";
}

CostTag cost_tag_from_string(const std::string& s) {
  if (s == "swap") return CostTag::Swap;
  if (s == "cq") return CostTag::Cq;
  if (s == "cq_e") return CostTag::CqE;
  if (s == "cq_alpha") return CostTag::CqAlpha;
  if (s == "cb") return CostTag::Cb;
  if (s == "custom") return CostTag::Custom;
  throw Error(ErrorCode::InvalidInput, "unknown cost tag '" + s + "'");
}

CostOperator custom_cost(const CMatrix& m, std::vector<int> sites) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "cost operator must be square");
  const long total = std::accumulate(sites.begin(), sites.end(), 1L, std::multiplies<long>());
  if (total != m.rows()) throw Error(ErrorCode::DimensionMismatch, "cost size does not match site dims");
  return CostOperator{hermitian_part(m), std::move(sites), CostTag::Custom};
}

CMatrix permutation_operator(int n, const std::vector<int>& perm) {
  const int d = static_cast<int>(perm.size());
  long total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  CMatrix p = CMatrix::Zero(total, total);
  std::vector<int> digits(d), moved(d);
  for (long col = 0; col < total; ++col) {
    long rest = col;
    for (int k = d - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rest % n);
      rest /= n;
    }
    for (int k = 0; k < d; ++k) moved[perm[k]] = digits[k];
    long row = 0;
    for (int k = 0; k < d; ++k) row = row * n + moved[k];
    p(row, col) = 1.0;
  }
  return p;
}

CostOperator swap_operator(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "swap_operator: n >= 1");
  return CostOperator{permutation_operator(n, {1, 0}), {n, n}, CostTag::Swap};
}

CostOperator cq_projector(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "cq_projector: n >= 1");
  const CMatrix s = permutation_operator(n, {1, 0});
  return CostOperator{(CMatrix::Identity(n * n, n * n) - s) / 2.0, {n, n}, CostTag::Cq};
}

CostOperator cq_e_operator(const RMatrix& weights, int n) {
  if (weights.rows() < n || weights.cols() < n)
    throw Error(ErrorCode::DimensionMismatch, "cq_e_operator: weight matrix smaller than n");
  CMatrix c = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double e = weights(i, j);
      if (!(e > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "cq_e_operator: weights must be positive");
      CVector psi = CVector::Zero(n * n);
      psi(i * n + j) = 1.0 / std::sqrt(2.0);
      psi(j * n + i) = -1.0 / std::sqrt(2.0);
      c += e * psi * psi.adjoint();
    }
  return CostOperator{c, {n, n}, CostTag::CqE};
}

CostOperator cq_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "cq_alpha: alpha in [0,1]");
  const CMatrix cq = cq_projector(2).op;
  CMatrix out = alpha * cq;
  out.diagonal() += (1.0 - alpha) * cq.diagonal();
  return CostOperator{out, {2, 2}, CostTag::CqAlpha};
}

RMatrix classical_cost_matrix(const CostOperator& c) {
  const BipartiteIndex idx = c.idx();
  RMatrix out(idx.m, idx.n);
  for (int i = 0; i < idx.m; ++i)
    for (int p = 0; p < idx.n; ++p) out(i, p) = c.op(idx(i, p), idx(i, p)).real();
  return out;
}

CostOperator cb_projector(int n, int d) {
  if (d < 2) throw Error(ErrorCode::InvalidInput, "cb_projector: d >= 2");
  long total = 1;
  for (int k = 0; k < d; ++k) {
    total *= n;
    if (total > 4096) throw Error(ErrorCode::SizeOverflow, "cb_projector: n^d exceeds 4096");
  }
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  CMatrix sym = CMatrix::Zero(total, total);
  long count = 0;
  do {
    sym += permutation_operator(n, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  sym /= static_cast<double>(count);
  return CostOperator{CMatrix::Identity(total, total) - sym, std::vector<int>(d, n), CostTag::Cb};
}

NormalizedCost normalize_cost(const CostOperator& c) {
  const RVector ev = eigenvalues_desc(c.op);
  const double hi = ev(0);
  const double lo = ev(ev.size() - 1);
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)))
    throw Error(ErrorCode::ScalarOperator, "normalize_cost: cost is a scalar operator");
  const double scale = hi - lo;
  CMatrix shifted = c.op;
  shifted.diagonal().array() -= lo;
  CostOperator out{hermitian_part(CMatrix(shifted / scale)), c.sites, c.tag};
  return NormalizedCost{out, scale, lo};
}

}  // namespace qot
