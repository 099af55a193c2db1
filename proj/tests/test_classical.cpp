#include "oracles.hpp"
#include "qot/classical.hpp"
#include "qot/cost.hpp"
#include "qot/sdp.hpp"

#include <doctest.h>

using namespace qot;

namespace {

RVector vec(std::initializer_list<double> p) {
  RVector v(p.size());
  int k = 0;
  for (double x : p) v(k++) = x;
  return v;
}

RMatrix cq_classical(int n) { return classical_cost_matrix(cq_projector(n)); }

}  // namespace

TEST_CASE("transportation simplex: hand instances") {
  const RVector s = vec({0.2, 0.3, 0.5});
  const PlanResult same = solve_classical_ot(s, s, cq_classical(3));
  CHECK(std::abs(same.value) < 1e-15);
  CHECK((same.plan.entries - RMatrix(s.asDiagonal())).norm() < 1e-15);

  const PlanResult one = solve_classical_ot(vec({1, 0}), vec({0.5, 0.5}), cq_classical(2));
  CHECK(std::abs(one.value - 0.25) < 1e-15);
  CHECK(std::abs(one.plan.entries(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(one.plan.entries(0, 1) - 0.5) < 1e-15);

  CHECK(std::abs(solve_classical_ot(vec({0.75, 0.25}), vec({0.25, 0.75}), cq_classical(2)).value - 0.25) < 1e-15);
  CHECK_THROWS_AS(solve_classical_ot(vec({0.7, 0.7}), vec({0.5, 0.5}), cq_classical(2)), Error);
  CHECK_THROWS_AS(solve_classical_ot(vec({1.2, -0.2}), vec({0.5, 0.5}), cq_classical(2)), Error);
}

TEST_CASE("transportation simplex against basis enumeration") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int m = 2 + seed % 3, n = 2 + (seed / 3) % 3;
    const RVector s = random_probability(m, 2 * seed), t = random_probability(n, 2 * seed + 1);
    std::mt19937_64 g(seed);
    RMatrix c(m, n);
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < n; ++p) c(i, p) = std::uniform_real_distribution<double>(0, 1)(g);
    const PlanResult r = solve_classical_ot(s, t, c);
    CHECK(std::abs(r.value - oracle::transport_lp(s, t, c)) < 1e-12);
    CHECK((r.plan.entries.rowwise().sum() - s).norm() < 1e-10);
    CHECK((r.plan.entries.colwise().sum().transpose() - t).norm() < 1e-10);
    CHECK(r.plan.entries.minCoeff() >= -1e-12);
    CHECK((r.plan.entries.array() > 1e-14).count() <= m + n - 1);  // vertex
  }
}

TEST_CASE("Wasserstein-p") {
  RMatrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1.5, 2, 1.5, 0;
  const RVector s = random_probability(3, 3);
  CHECK(std::abs(wasserstein_p(s, s, d, 2.0)) < 1e-15);
  for (double p : {1.0, 2.0, 3.0})
    CHECK(std::abs(wasserstein_p(vec({1, 0, 0}), vec({0, 0, 1}), d, p) - 2.0) < 1e-12);
  const RVector t = random_probability(3, 4);
  CHECK(std::abs(wasserstein_p(s, t, d, 1.0) - solve_classical_ot(s, t, d).value) < 1e-14);
  RMatrix bad = d;
  bad(0, 2) = bad(2, 0) = 5.0;
  try {
    wasserstein_p(s, t, bad, 1.0);
    FAIL("expected NotAMetricCost");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAMetricCost);
  }
}

// minimize_f_diag is an interior-point solve with gap tolerance 1e-8.
TEST_CASE("minimize_f_diag at n = 2") {
  CHECK(std::abs(minimize_f_diag(vec({1, 0}), vec({0.5, 0.5})).value - 0.25) < 1e-8);
  CHECK(std::abs(minimize_f_diag(vec({0.75, 0.25}), vec({0.25, 0.75})).value - (2 - std::sqrt(3.0)) / 4) < 1e-8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RVector s = random_probability(2, 2 * seed), t = random_probability(2, 2 * seed + 1);
    CHECK(std::abs(minimize_f_diag(s, t).value - oracle::qubit_diag_scan(s, t)) < 1e-8);
  }
}

TEST_CASE("quantum is cheaper than classical on diagonal marginals") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + seed % 4;
    const RVector s = random_probability(n, 2 * seed), t = random_probability(n, 2 * seed + 1);
    CHECK(minimize_f_diag(s, t).value <= solve_classical_ot(s, t, cq_classical(n)).value + 1e-9);
  }
}

TEST_CASE("minimize_f_diag matches the SDP for n <= 4") {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const int n = 2 + seed % 3;
    const RVector s = random_probability(n, 2 * seed + 700), t = random_probability(n, 2 * seed + 701);
    const double sdp = solve(make_problem(diagonal_state(s), diagonal_state(t), cq_projector(n))).value;
    const PlanResult r = minimize_f_diag(s, t);
    CHECK(std::abs(r.value - sdp) < 1e-6);
    CHECK(std::abs(f_objective(r.plan.entries) - r.value) < 1e-9);
  }
}

TEST_CASE("f objective properties") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RVector s = random_probability(3, 2 * seed), t = random_probability(3, 2 * seed + 1);
    const RMatrix x = solve_classical_ot(s, t, RMatrix::Random(3, 3).cwiseAbs()).plan.entries;
    CHECK(std::abs(f_objective(x) - f_objective(x.transpose())) < 1e-15);
    // Convexity along the segment to the product plan.
    const RMatrix y = s * t.transpose();
    const double mid = f_objective(0.5 * (x + y));
    CHECK(mid <= 0.5 * (f_objective(x) + f_objective(y)) + 1e-15);
  }
  // Diagonal lower bound.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 2 + seed % 3;
    const RVector s = random_probability(n, 2 * seed + 90), t = random_probability(n, 2 * seed + 91);
    CHECK(minimize_f_diag(s, t).value >= diag_lower_bound(s, t) - 1e-9);
  }
}

TEST_CASE("plan lift and projection") {
  const RVector s = vec({0.2, 0.3, 0.5}), t = vec({0.4, 0.4, 0.2});
  const TransportPlan product{s * t.transpose(), s, t};
  const LiftedCoupling prod = lift_plan_to_coupling(product);
  CHECK((prod.r_diag - CMatrix(kron(s, t).cast<cplx>().asDiagonal())).norm() < 1e-15);

  const RMatrix x = solve_classical_ot(s, t, RMatrix::Ones(3, 3) - RMatrix::Identity(3, 3)).plan.entries;
  const TransportPlan plan{x, s, t};
  const LiftedCoupling lc = lift_plan_to_coupling(plan);
  for (const CMatrix& r : {lc.r_diag, lc.r_tilde}) {
    CHECK(min_eigenvalue(r) >= -1e-15);
    CHECK((oracle::ptrace_b(r, 3, 3) - CMatrix(s.cast<cplx>().asDiagonal())).norm() < 1e-14);
    CHECK((oracle::ptrace_a(r, 3, 3) - CMatrix(t.cast<cplx>().asDiagonal())).norm() < 1e-14);
  }
  const RMatrix cl = cq_classical(3);
  CHECK(std::abs((cl.cwiseProduct(x)).sum() - (cq_projector(3).op * lc.r_diag).trace().real()) < 1e-15);
  CHECK(std::abs(f_objective(x) - (cq_projector(3).op * lc.r_tilde).trace().real()) < 1e-15);
  CHECK((project_coupling_to_plan(lc.r_tilde, s, t).entries - x).norm() < 1e-15);
  CHECK((project_coupling_to_plan(kron(CMatrix(s.cast<cplx>().asDiagonal()), CMatrix(t.cast<cplx>().asDiagonal())), s, t)
             .entries -
         product.entries)
            .norm() < 1e-15);

  // A symmetric plan lifts to a zero-cost coupling.
  const RMatrix sym = (RMatrix(3, 3) << 0.1, 0.05, 0.05, 0.05, 0.2, 0.1, 0.05, 0.1, 0.3).finished();
  const RVector m = sym.rowwise().sum();
  CHECK(std::abs((cq_projector(3).op * lift_plan_to_coupling({sym, m, m}).r_tilde).trace()) < 1e-15);
  CHECK_THROWS_AS(project_coupling_to_plan(lc.r_tilde, t, s), Error);
}

TEST_CASE("YZYY diagonal upper bound") {
  const RVector s = random_probability(3, 5);
  CHECK(std::abs(yzyy_upper_diag(s, s)) < 1e-15);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RVector a = random_probability(2, 2 * seed), b = random_probability(2, 2 * seed + 1);
    CHECK(std::abs(yzyy_upper_diag(a, b) - minimize_f_diag(a, b).value) < 1e-8);
    const RVector c = random_probability(3, 2 * seed + 60), d = random_probability(3, 2 * seed + 61);
    CHECK(yzyy_upper_diag(c, d) >= minimize_f_diag(c, d).value - 1e-8);
  }
}
