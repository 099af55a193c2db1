#pragma once

#include "qot/qstate.hpp"

#include <utility>

namespace qot {

struct TransportPlan {
  RMatrix entries;
  RVector row_marginal;
  RVector col_marginal;
};

struct PlanResult {
  TransportPlan plan;
  double value = 0.0;
};

// Exact vertex optimum of min <C, X> over the transportation polytope (simplex on the
// spanning-tree basis, Bland's rule).
PlanResult solve_classical_ot(const RVector& s, const RVector& t, const RMatrix& cost);

double wasserstein_p(const RVector& s, const RVector& t, const RMatrix& d, double p);

// f(X) = 1/2 [ sum_{i<p<=m} (x_ip + x_pi - 2 sqrt(x_ip x_pi)) + sum_{p>m} x_ip ]
double f_objective(const RMatrix& x);

// min f over the transportation polytope; equals T for C^Q on diag(s), diag(t).
PlanResult minimize_f_diag(const RVector& s, const RVector& t);

struct LiftedCoupling {
  CMatrix r_diag;
  CMatrix r_tilde;
};
LiftedCoupling lift_plan_to_coupling(const TransportPlan& x);
TransportPlan project_coupling_to_plan(const CMatrix& r, const RVector& s, const RVector& t, double tol = 1e-8);

double yzyy_upper_diag(const RVector& s, const RVector& t);
double diag_lower_bound(const RVector& s, const RVector& t);  // 1/2 max_i (sqrt s_i - sqrt t_i)^2

void check_probability(const RVector& p, const char* what, double tol = 1e-10);

}  // namespace qot
