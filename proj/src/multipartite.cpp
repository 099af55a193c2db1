#include "qot/multipartite.hpp"

#include "qot/optimize.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>

namespace qot {

MultiCouplingProblem make_multi_problem(std::vector<DensityMatrix> marginals, CostOperator cost) {
  if (marginals.size() < 2) throw Error(ErrorCode::InvalidInput, "at least two marginals required");
  long total = 1;
  for (const auto& m : marginals) {
    total *= m.dim();
    if (total > kMaxMultiDim) throw Error(ErrorCode::SizeOverflow, "product dimension exceeds 4096");
  }
  if (cost.sites.size() != marginals.size())
    throw Error(ErrorCode::DimensionMismatch, "cost sites do not match the number of marginals");
  for (std::size_t j = 0; j < marginals.size(); ++j)
    if (cost.sites[j] != marginals[j].dim()) throw Error(ErrorCode::DimensionMismatch, "cost site dimension mismatch");
  if (cost.dim() != total) throw Error(ErrorCode::DimensionMismatch, "cost size does not match the marginals");
  return MultiCouplingProblem{std::move(marginals), std::move(cost)};
}

SdpSolution solve_multipartite(const MultiCouplingProblem& prob, const SolverOptions& opts) {
  long total = 1;
  for (const auto& m : prob.marginals) total *= m.dim();
  if (total > kMaxMultiDim) throw Error(ErrorCode::SizeOverflow, "product dimension exceeds 4096");
  return solve_marginal_sdp(prob.marginals, prob.cost.op, opts);
}

cplx permanent(const CMatrix& g) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n) throw Error(ErrorCode::NotSquare, "permanent: matrix not square");
  if (n > kMaxPermanent) throw Error(ErrorCode::SizeOverflow, "permanent: size above 12");
  if (n == 0) return 1.0;
  // Ryser: per A = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij, subsets in Gray-code order.
  CVector rowsum = CVector::Zero(n);
  cplx total = 0.0;
  unsigned gray = 0;
  for (unsigned k = 1; k < (1u << n); ++k) {
    const int j = std::countr_zero(k);
    const unsigned bit = 1u << j;
    gray ^= bit;
    if (gray & bit) {
      rowsum += g.col(j);
    } else {
      rowsum -= g.col(j);
    }
    const cplx prod = rowsum.prod();
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

double cb_cost_product(const std::vector<DensityMatrix>& states) {
  const int d = static_cast<int>(states.size());
  if (d < 2) throw Error(ErrorCode::InvalidInput, "cb_cost_product: at least two states");
  if (d > kMaxPermanent) throw Error(ErrorCode::SizeOverflow, "cb_cost_product: more than 12 sites");
  const int n = states[0].dim();
  for (const auto& s : states)
    if (s.dim() != n) throw Error(ErrorCode::DimensionMismatch, "cb_cost_product: equal site dims required");
  std::vector<Spectrum> spec;
  for (const auto& s : states) spec.push_back(spectral(s.op));

  // Odometer over eigen-index tuples; tuples of weight below 1e-14 are skipped.
  std::vector<int> idx(d, 0);
  double acc = 0.0;
  CMatrix x(n, d);
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) w *= std::max(spec[j].eigenvalues(idx[j]), 0.0);
    if (w >= 1e-14) {
      for (int j = 0; j < d; ++j) x.col(j) = spec[j].eigenvectors.col(idx[j]);
      acc += w * permanent(CMatrix(x.adjoint() * x)).real();
    }
    int j = 0;
    while (j < d && ++idx[j] == n) idx[j++] = 0;
    if (j == d) break;
  }
  double fact = 1.0;
  for (int k = 2; k <= d; ++k) fact *= k;
  return 1.0 - acc / fact;
}

namespace {

// (I - S)/2 with S exchanging sites [0, l) and [l, 2l).
CostOperator half_swap_cost(int n, int l) {
  std::vector<int> perm(2 * l);
  for (int k = 0; k < 2 * l; ++k) perm[k] = (k + l) % (2 * l);
  const CMatrix s = permutation_operator(n, perm);
  CostOperator c;
  c.op = 0.5 * (CMatrix::Identity(s.rows(), s.cols()) - s);
  c.sites.assign(2 * l, n);
  c.tag = CostTag::Custom;
  return c;
}

bool same_tuple(const std::vector<DensityMatrix>& a, const std::vector<DensityMatrix>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if ((a[k].op - b[k].op).cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

}  // namespace

double ordered_tuple_transport(const std::vector<DensityMatrix>& a, const std::vector<DensityMatrix>& b,
                               const SolverOptions& opts) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::DimensionMismatch, "tuples of equal length required");
  const int n = a[0].dim();
  for (const auto& s : a)
    if (s.dim() != n) throw Error(ErrorCode::DimensionMismatch, "equal site dims required");
  for (const auto& s : b)
    if (s.dim() != n) throw Error(ErrorCode::DimensionMismatch, "equal site dims required");
  if (same_tuple(a, b)) return 0.0;
  const int l = static_cast<int>(a.size());
  double total = 1.0;
  for (int k = 0; k < 2 * l; ++k) total *= n;
  if (total > kMaxMultiDim) throw Error(ErrorCode::SizeOverflow, "n^(2l) exceeds 4096");
  std::vector<DensityMatrix> marg = a;
  marg.insert(marg.end(), b.begin(), b.end());
  const SdpSolution sol = solve_multipartite(make_multi_problem(marg, half_swap_cost(n, l)), opts);
  return std::sqrt(std::max(sol.value, 0.0));
}

TupleDistance tuple_distance(const std::vector<DensityMatrix>& a, const std::vector<DensityMatrix>& b,
                             const TupleOptions& opts) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::DimensionMismatch, "tuples of equal length required");
  if (opts.depth < 0 || opts.depth > 2) throw Error(ErrorCode::InvalidInput, "tuple_distance: depth in {0,1,2}");
  const int l = static_cast<int>(a.size());
  const int n = a[0].dim();
  const int per = n * n;
  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  TupleDistance best;
  best.value = std::numeric_limits<double>::infinity();
  best.depth = opts.depth;
  do {
    std::vector<DensityMatrix> pa;
    for (int k : perm) pa.push_back(a[k]);
    double v = ordered_tuple_transport(pa, b, opts.solver);
    if (opts.depth > 0 && v > 0.0) {
      // Chain through `depth` intermediate tuples, started at copies of the first tuple.
      auto chain = [&](const RVector& x) {
        std::vector<std::vector<DensityMatrix>> stops{pa};
        for (int c = 0; c < opts.depth; ++c) {
          std::vector<DensityMatrix> t;
          for (int k = 0; k < l; ++k) t.push_back(density_from_cholesky_params(x, (c * l + k) * per, n));
          stops.push_back(t);
        }
        stops.push_back(b);
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < stops.size(); ++c) acc += ordered_tuple_transport(stops[c], stops[c + 1], opts.solver);
        return acc;
      };
      RVector x(opts.depth * l * per);
      for (int c = 0; c < opts.depth; ++c)
        for (int k = 0; k < l; ++k) cholesky_params(pa[k], x, (c * l + k) * per);
      const NelderMeadResult nm = nelder_mead(chain, x, 0.15, opts.max_evals, 1e-10);
      v = std::min(v, nm.value);
    }
    if (v < best.value) {
      best.value = v;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace qot
