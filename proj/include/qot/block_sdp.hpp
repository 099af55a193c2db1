#pragma once

#include "qot/types.hpp"

#include <optional>
#include <vector>

namespace qot {

// Real block-diagonal SDP in standard form:
//   min sum_b <C_b, X_b>  s.t.  sum_b <A_kb, X_b> = b_k,  X_b >= 0
//   max b.y               s.t.  Z_b = C_b - sum_k y_k A_kb >= 0
// A block of size one is a nonnegative scalar.
struct BlockSdpProblem {
  std::vector<int> blocks;
  std::vector<RMatrix> c;               // [block]
  std::vector<std::vector<RMatrix>> a;  // [constraint][block]
  RVector b;

  int num_constraints() const { return static_cast<int>(a.size()); }
};

struct IpmOptions {
  double tol = 1e-8;        // duality gap
  double feas_tol = 1e-9;   // primal and dual residuals
  int max_iter = 200;
  double step_fraction = 0.98;
  int verbosity = 0;
};

struct IpmPoint {
  std::vector<RMatrix> x;
  RVector y;
  std::vector<RMatrix> z;
};

enum class IpmStatus { Optimal, MaxIter, Stalled };

struct IpmResult {
  IpmPoint point;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  IpmStatus status = IpmStatus::MaxIter;
};

// Primal-dual path following (HKM direction, Mehrotra predictor-corrector).
// Without a start point the iteration begins at scaled identities.
IpmResult solve_block_sdp(const BlockSdpProblem& prob, const IpmOptions& opts = {},
                          const std::optional<IpmPoint>& start = std::nullopt);

}  // namespace qot
