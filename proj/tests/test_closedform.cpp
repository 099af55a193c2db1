#include "oracles.hpp"
#include "qot/closedform.hpp"
#include "qot/cost.hpp"
#include "qot/sdp.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace qot;

namespace {

RVector vec(std::initializer_list<double> p) {
  RVector v(p.size());
  int k = 0;
  for (double x : p) v(k++) = x;
  return v;
}

double sdp(const DensityMatrix& a, const DensityMatrix& b) {
  return solve(make_problem(a, b, cq_projector(a.dim()))).value;
}

}  // namespace

TEST_CASE("qubit_diag and its case form") {
  const RVector s = random_probability(2, 1);
  CHECK(qubit_diag(s, s) == 0.0);
  CHECK(std::abs(qubit_diag(vec({1, 0}), vec({0, 1})) - 0.5) < 1e-15);
  CHECK(std::abs(qubit_diag(vec({0.75, 0.25}), vec({0.25, 0.75})) - (2 - std::sqrt(3.0)) / 4) < 1e-15);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const RVector a = random_probability(2, 2 * seed), b = random_probability(2, 2 * seed + 1);
    CHECK(std::abs(qubit_diag(a, b) - qubit_diag_case_form(a, b)) < 1e-15);
    CHECK(std::abs(qubit_diag(a, b) - oracle::qubit_diag_scan(a, b)) < 1e-10);
  }
}

TEST_CASE("commuting qubits") {
  const CMatrix u = random_unitary(2, 9);
  const RVector a = vec({0.8, 0.2}), b = vec({0.35, 0.65});
  const DensityMatrix r = validate_density(u * diagonal_state(a).op * u.adjoint());
  const DensityMatrix s = validate_density(u * diagonal_state(b).op * u.adjoint());
  CHECK(std::abs(qubit_commuting(r, s) - qubit_diag(a, b)) < 1e-12);
  CHECK(std::abs(qubit_commuting(r, r)) < 1e-15);
  const DensityMatrix pure = validate_density(u * diagonal_state(vec({1, 0})).op * u.adjoint());
  const DensityMatrix mixed = validate_density(CMatrix::Identity(2, 2) / 2.0);
  CHECK(std::abs(qubit_commuting(pure, mixed) - 0.25) < 1e-12);
  CHECK(std::abs(pure_state_value(pure, mixed) - 0.25) < 1e-12);
  try {
    qubit_commuting(random_density(2, 2, 1), random_density(2, 2, 2));
    FAIL("expected NotCommuting");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCommuting);
  }
}

TEST_CASE("Bloch parametrization") {
  const auto [a, b] = bloch_pair_states({0.3, 0.6, 1.1});
  CHECK(std::abs(eigenvalues_desc(b.op)(0) - 0.6) < 1e-14);
  const BlochQubitPair back = to_bloch_pair(a, b);
  const auto [a2, b2] = bloch_pair_states(back);
  CHECK(std::abs(fidelity(a, b) - fidelity(a2, b2)) < 1e-12);
  CHECK(std::abs(sdp(a, b) - sdp(a2, b2)) < 1e-7);
}

TEST_CASE("qubit_general reductions") {
  for (double s : {0.2, 0.5, 0.9})
    for (double th : {0.3, 1.7, 3.0, 5.0})
      CHECK(std::abs(qubit_general({s, s, th}).value - qubit_isospectral(s, th)) < 1e-9);
  for (auto [s, r] : {std::pair{0.2, 0.7}, {0.9, 0.4}, {0.35, 0.6}})
    CHECK(std::abs(qubit_general({s, r, 0.0}).value - qubit_diag(vec({s, 1 - s}), vec({r, 1 - r}))) < 1e-9);
  // Pure endpoint routes to the pure formula.
  const auto [a, b] = bloch_pair_states({1.0, 0.3, 0.8});
  CHECK(std::abs(qubit_general({1.0, 0.3, 0.8}).value - 0.5 * (1 - (a.op * b.op).trace().real())) < 1e-14);
}

TEST_CASE("qubit_general matches the SDP on random triples") {
  std::mt19937_64 g(12345);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 40; ++k) {
    const BlochQubitPair p{u(g), u(g), 2 * std::numbers::pi * u(g)};
    const auto [a, b] = bloch_pair_states(p);
    const QubitGeneralResult q = qubit_general(p);
    CHECK(std::abs(q.value - sdp(a, b)) < 1e-6);
    CHECK(q.phi.roots.size() <= 6);
    for (double phi : q.phi.roots) {
      CHECK(phi >= 0.0);
      CHECK(phi < 2 * std::numbers::pi);
      if (q.phi.source == RootSource::Polynomial) CHECK(std::abs(phi_equation_residual(p, phi)) <= 1e-8);
    }
  }
}

TEST_CASE("six critical points near theta = 0 with s + r near 1") {
  const BlochQubitPair p{0.3, 0.69, 1e-3};
  const QubitGeneralResult q = qubit_general(p);
  CHECK(q.phi.roots.size() == 6);
  for (std::size_t i = 0; i < q.phi.roots.size(); ++i)
    for (std::size_t j = i + 1; j < q.phi.roots.size(); ++j) CHECK(std::abs(q.phi.roots[i] - q.phi.roots[j]) > 1e-9);
  CHECK(phi_polynomial(p).size() == 7);
}

TEST_CASE("isospectral formula") {
  for (double th : {0.0, 1.0, 2.5, 4.0}) {
    CHECK(std::abs(qubit_isospectral(0.5, th)) < 1e-15);
    CHECK(std::abs(qubit_isospectral(0.0, th) - 0.5 * std::pow(std::sin(th / 2), 2)) < 1e-15);
    CHECK(std::abs(qubit_isospectral(1.0, th) - 0.5 * std::pow(std::sin(th / 2), 2)) < 1e-15);
  }
  const double v = qubit_isospectral(0.25, std::numbers::pi);
  CHECK(std::abs(v - (2 - std::sqrt(3.0)) / 4) < 1e-15);
  CHECK(std::abs(v - qubit_diag(vec({0.25, 0.75}), vec({0.75, 0.25}))) < 1e-15);
}

TEST_CASE("t0 lower bound") {
  const DensityMatrix r = random_density(3, 3, 3);
  CHECK(std::abs(t0_lower_bound(r, r)) < 1e-15);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix a = random_density(2, 2, 2 * seed), b = random_density(2, 2, 2 * seed + 1);
    CHECK(std::abs(t0_lower_bound(a, b) - qubit_value(a, b)) < 1e-8);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DensityMatrix a = random_density(3, 3, 2 * seed + 40), b = random_density(3, 3, 2 * seed + 41);
    CHECK(t0_lower_bound(a, b) <= sdp(a, b) + 1e-6);
  }
}

TEST_CASE("decoherence sweep anchors and monotonicity") {
  const RVector s = vec({0.75, 0.25}), t = vec({0.25, 0.75});
  const auto pts = decoherence_sweep(s, t, {0.0, std::sqrt(3.0) / 2, 1.0});
  CHECK(std::abs(pts[0].value - 0.25) < 1e-15);
  CHECK(std::abs(pts[0].value - solve_classical_ot(s, t, classical_cost_matrix(cq_projector(2))).value) < 1e-15);
  CHECK(std::abs(pts[1].value - 0.125) < 1e-15);
  CHECK(std::abs(pts[2].value - qubit_diag(s, t)) < 1e-15);

  std::vector<double> grid(101);
  for (int k = 0; k <= 100; ++k) grid[k] = k / 100.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RVector a = random_probability(2, 2 * seed), b = random_probability(2, 2 * seed + 1);
    const auto c = decoherence_sweep(a, b, grid);
    for (int k = 1; k <= 100; ++k) CHECK(c[k].value <= c[k - 1].value);
    CHECK(c[100].value < c[0].value);
  }
  const auto flat = decoherence_sweep(vec({1, 0}), vec({0.3, 0.7}), grid);
  for (int k = 1; k <= 100; ++k) CHECK(flat[k].value == flat[0].value);
  CHECK_THROWS_AS(decoherence_sweep(s, t, {1.2}), Error);
}

TEST_CASE("decoherence sweep against the C^Q_alpha SDP") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const RVector a = random_probability(2, 2 * seed + 300), b = random_probability(2, 2 * seed + 301);
    const double alpha = (seed % 6) / 5.0;
    const double v = solve(make_problem(diagonal_state(a), diagonal_state(b), cq_alpha(alpha))).value;
    CHECK(std::abs(v - decoherence_sweep(a, b, {alpha})[0].value) < 1e-6);
  }
}

TEST_CASE("qutrit cases") {
  const RVector s = random_probability(3, 7);
  const QutritResult same = qutrit_diag(s, s);
  CHECK(same.tag == QutritCase::A);
  CHECK(std::abs(same.value) < 1e-15);

  const RVector sb = vec({0.1, 0.1, 0.8}), tb = vec({0.4, 0.3, 0.3});
  const QutritResult b = qutrit_diag(sb, tb);
  CHECK(b.tag == QutritCase::B);
  CHECK(std::abs(b.value - minimize_f_diag(sb, tb).value) < 1e-9);
  CHECK(std::abs(b.value - sdp(diagonal_state(sb), diagonal_state(tb))) < 1e-7);
  CHECK(std::abs(f_objective(b.plan) - b.value) < 1e-14);
}

TEST_CASE("qutrit case (d): a zero coordinate") {
  // Rows with s3 = 0: f = 1/2 [(sqrt x12 - sqrt x21)^2 + t3]; compare with minimize_f_diag and the SDP.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const RVector p = random_probability(2, seed);
    const RVector s = vec({p(0), p(1), 0.0});
    const RVector t = random_probability(3, 1000 + seed);
    const QutritResult q = qutrit_diag(s, t);
    CHECK(std::abs(q.value - minimize_f_diag(s, t).value) < 1e-7);
    // Case (a) reports the interior-point plan (gap tolerance 1e-8); the others are exact.
    CHECK(std::abs(q.value - f_objective(q.plan)) < (q.tag == QutritCase::A ? 1e-8 : 1e-12));
    // Mirrored: t has the zero.
    const QutritResult m = qutrit_diag(t, s);
    CHECK(std::abs(m.value - q.value) < 1e-12);
  }
  CHECK(std::abs(qutrit_diag(vec({0.5, 0.5, 0}), vec({0.2, 0.4, 0.4})).value - 0.2) < 1e-12);
  const double v = qutrit_diag(vec({0.5, 0.5, 0}), vec({0.1, 0.6, 0.3})).value;
  CHECK(std::abs(v - sdp(diagonal_state(vec({0.5, 0.5, 0})), diagonal_state(vec({0.1, 0.6, 0.3})))) < 1e-7);
}

TEST_CASE("qutrit closed form against the SDP, tags partition the samples") {
  int counts[5] = {0, 0, 0, 0, 0};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const RVector s = random_probability(3, 2 * seed + 5000), t = random_probability(3, 2 * seed + 5001);
    const QutritResult q = qutrit_diag(s, t);
    ++counts[static_cast<int>(q.tag)];
    CHECK(std::abs(q.value - sdp(diagonal_state(s), diagonal_state(t))) < 1e-6);
    CHECK(q.plan.minCoeff() >= -1e-12);
    CHECK((q.plan.rowwise().sum() - s).norm() < 1e-9);
    CHECK((q.plan.colwise().sum().transpose() - t).norm() < 1e-9);
  }
  CHECK(counts[0] + counts[1] + counts[2] + counts[3] + counts[4] == 60);
}

TEST_CASE("zero-diagonal search is an upper bound") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RVector s = random_probability(3, 2 * seed + 9000), t = random_probability(3, 2 * seed + 9001);
    if (auto z = qutrit_zero_diagonal(s, t)) {
      CHECK(z->value >= minimize_f_diag(s, t).value - 1e-9);
      CHECK(z->plan.diagonal().cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("lower-bound equality condition") {
  CHECK(lower_bound_equality_holds(vec({0.3, 0.3, 0.4}), vec({0.3, 0.3, 0.4})));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RVector s = random_probability(3, 2 * seed + 70), t = random_probability(3, 2 * seed + 71);
    if (lower_bound_equality_holds(s, t)) CHECK(std::abs(minimize_f_diag(s, t).value - diag_lower_bound(s, t)) < 1e-8);
  }
}

TEST_CASE("bound suite") {
  const DensityMatrix a = diagonal_state(vec({0.75, 0.25})), b = diagonal_state(vec({0.25, 0.75}));
  const BoundSuite bs = bound_suite(a, b, qubit_diag(vec({0.75, 0.25}), vec({0.25, 0.75})));
  CHECK(std::abs(bs.lower_yzyy - (2 - std::sqrt(3.0)) / 4) < 1e-15);
  CHECK(std::abs(bs.lower_yzyy - qubit_diag(vec({0.75, 0.25}), vec({0.25, 0.75}))) < 1e-15);
  CHECK(bs.violations.empty());

  const DensityMatrix p = random_pure(2, 3), q = random_pure(2, 4);
  const BoundSuite pp = bound_suite(p, q, sdp(p, q));
  CHECK(std::abs(pp.upper_product - sdp(p, q)) < 1e-12);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix x = random_density(3, 3, 2 * seed + 800), y = random_density(3, 3, 2 * seed + 801);
    const double t = sdp(x, y);
    const BoundSuite r = bound_suite(x, y, t);
    CHECK(r.violations.empty());
    CHECK(r.lower_yzyy <= t + 1e-7);
    CHECK(t <= r.upper_yzyy + 1e-7);
    CHECK(r.upper_yzyy <= r.upper_sqrt + 1e-15);
    CHECK(t <= r.upper_product + 1e-7);
  }
  // Schmidt bound only for isospectral pairs.
  const CMatrix u = random_unitary(3, 5);
  const DensityMatrix x = random_density(3, 3, 6);
  const BoundSuite iso = bound_suite(x, validate_density(u * x.op * u.adjoint()));
  REQUIRE(iso.upper_schmidt.has_value());
  CHECK(sdp(x, validate_density(u * x.op * u.adjoint())) <= *iso.upper_schmidt + 1e-7);
  CHECK_FALSE(bound_suite(x, random_density(3, 3, 7)).upper_schmidt.has_value());
}
