#pragma once

#include "qot/cost.hpp"
#include "qot/sdp.hpp"

#include <vector>

namespace qot {

constexpr int kMaxMultiDim = 4096;
constexpr int kMaxPermanent = 12;

struct MultiCouplingProblem {
  std::vector<DensityMatrix> marginals;
  CostOperator cost;  // on the product of the marginal dimensions, row-major
};

// Checks sites against the marginals and the size cap.
MultiCouplingProblem make_multi_problem(std::vector<DensityMatrix> marginals, CostOperator cost);
SdpSolution solve_multipartite(const MultiCouplingProblem& prob, const SolverOptions& opts = {});

cplx permanent(const CMatrix& g);

// tr C^B (rho_1 x ... x rho_d) through permanents of eigenvector Gram matrices.
double cb_cost_product(const std::vector<DensityMatrix>& states);

struct TupleOptions {
  int depth = 0;  // intermediate tuples in the chained surrogate of the induced metric
  int max_evals = 300;
  SolverOptions solver;
};

struct TupleDistance {
  double value = 0.0;
  std::vector<int> permutation;  // applied to the first tuple
  int depth = 0;
};

// sqrt T with C^Q = (I - S)/2, S exchanging the two halves of the 2l sites.
double ordered_tuple_transport(const std::vector<DensityMatrix>& a, const std::vector<DensityMatrix>& b,
                               const SolverOptions& opts = {});
// min over permutations of the first tuple of the chained ordered distance.
TupleDistance tuple_distance(const std::vector<DensityMatrix>& a, const std::vector<DensityMatrix>& b,
                             const TupleOptions& opts = {});

}  // namespace qot
