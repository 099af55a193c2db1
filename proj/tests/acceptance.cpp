// Acceptance harness: one PASS/FAIL line per criterion, tolerances fixed below.
#include "qot/classical.hpp"
#include "qot/closedform.hpp"
#include "qot/cost.hpp"
#include "qot/io.hpp"
#include "qot/metrics.hpp"
#include "qot/multipartite.hpp"
#include "qot/sdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qot;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every SDP solved by the harness passes through here; criterion 4 reads the totals.
struct DualityTracker {
  int optimal = 0, reduced = 0, not_attained = 0, max_iter = 0;
  double worst_gap = 0.0, worst_comp = 0.0, worst_neg_eig = 0.0, worst_dual_shortfall = 0.0;

  void record(const CouplingProblem& prob, const SdpSolution& sol) {
    switch (sol.status) {
      case SolveStatus::MaxIter: ++max_iter; return;
      case SolveStatus::NotAttained: {
        // No optimal potentials exist; the dual sup is approached by feasible ones.
        ++not_attained;
        const DualResult d = solve_dual_only(prob);
        worst_dual_shortfall = std::max(worst_dual_shortfall, sol.value - d.lower_value);
        worst_neg_eig = std::max(worst_neg_eig, -d.min_eig_certificate);
        return;
      }
      case SolveStatus::Reduced: ++reduced; break;
      case SolveStatus::Optimal: ++optimal; break;
    }
    const CertificateReport c = check_certificate(prob, sol);
    worst_gap = std::max(worst_gap, std::abs(sol.gap));
    worst_comp = std::max(worst_comp, std::abs(c.complementarity));
    worst_neg_eig = std::max(worst_neg_eig, -c.min_eig_certificate);
  }

  void record_multi(const SdpSolution& sol) {
    if (sol.status == SolveStatus::MaxIter) {
      ++max_iter;
      return;
    }
    ++(sol.status == SolveStatus::Optimal ? optimal : reduced);
    worst_gap = std::max(worst_gap, std::abs(sol.gap));
    worst_comp = std::max(worst_comp, std::abs((sol.certificate * sol.coupling).trace().real()));
    worst_neg_eig = std::max(worst_neg_eig, -min_eigenvalue(sol.certificate));
  }
};

DualityTracker tracker;

double sdp(const DensityMatrix& a, const DensityMatrix& b, const CostOperator& c) {
  const CouplingProblem p = make_problem(a, b, c);
  const SdpSolution s = solve(p);
  tracker.record(p, s);
  return s.value;
}

double sdp(const DensityMatrix& a, const DensityMatrix& b) { return sdp(a, b, cq_projector(a.dim())); }

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

Line qubit_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::mt19937_64 g(split_seed(kSeed, 100 + k));
    const BlochQubitPair p{uniform(g, 0, 1), uniform(g, 0, 1), uniform(g, 0, 2 * std::numbers::pi)};
    const auto [a, b] = bloch_pair_states(p);
    worst = std::max(worst, std::abs(sdp(a, b) - qubit_general(p).value));
  }
  const double secs = seconds_since(t0);
  return {1, "qubit exactness", worst <= 1e-6 && secs <= 30.0,
          "100 triples, max |sdp - qubit_general| = " + num(worst) + " (tol 1e-6), " + num(secs) + " s (limit 30 s)"};
}

Line isospectral() {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double s = i / 49.0, th = 2 * std::numbers::pi * j / 49.0;
      const auto [a, b] = bloch_pair_states({s, s, th});
      const double formula = (0.5 - std::sqrt(s * (1 - s))) * std::pow(std::sin(th / 2), 2);
      worst = std::max(worst, std::abs(sdp(a, b) - formula));
    }
  }
  return {2, "isospectral formula", worst <= 1e-6, "50x50 grid, max |sdp - formula| = " + num(worst) + " (tol 1e-6)"};
}

Line qutrits() {
  double worst = 0.0;
  int counts[5] = {0, 0, 0, 0, 0};
  bool tagged = true;
  for (int k = 0; k < 500; ++k) {
    const RVector s = random_probability(3, split_seed(kSeed, 5000 + 2 * k));
    const RVector t = random_probability(3, split_seed(kSeed, 5001 + 2 * k));
    const QutritResult q = qutrit_diag(s, t);
    const int tag = static_cast<int>(q.tag);
    tagged = tagged && tag >= 0 && tag < 5;
    ++counts[tag];
    if (q.tag == QutritCase::Fallback)
      std::cerr << "qutrit fallback: sample " << k << " s=(" << s.transpose() << ") t=(" << t.transpose() << ")\n";
    worst = std::max(worst, std::abs(q.value - sdp(diagonal_state(s), diagonal_state(t))));
  }
  std::ostringstream d;
  d << "500 pairs, max |closed form - sdp| = " << num(worst) << " (tol 1e-6); cases a=" << counts[0]
    << " b=" << counts[1] << " c=" << counts[2] << " d=" << counts[3] << " fallback=" << counts[4] << " (logged)";
  return {3, "diagonal qutrits", worst <= 1e-6 && tagged, d.str()};
}

// Independent evaluation of the piecewise alpha formula.
double alpha_formula(const RVector& s, const RVector& t, double alpha) {
  const int i = s(1) >= t(0) ? 0 : 1;
  const double si = s(i), ti = t(i);
  if (std::min(si, ti) == 0.0 || si == ti) return 0.5 * std::abs(si - ti);
  const double thr = 2 * std::sqrt(si * ti) / (si + ti);
  if (alpha <= thr) return 0.5 * std::sqrt(1 - alpha * alpha) * std::abs(si - ti);
  return 0.5 * (std::pow(std::sqrt(si) - std::sqrt(ti), 2) + 2 * (1 - alpha) * std::sqrt(si * ti));
}

Line decoherence() {
  RVector s(2), t(2);
  s << 0.75, 0.25;
  t << 0.25, 0.75;
  std::vector<double> grid(101);
  for (int k = 0; k <= 100; ++k) grid[k] = k / 100.0;
  const auto c = decoherence_sweep(s, t, grid);
  double worst = 0.0;
  bool monotone = true;
  for (int k = 0; k <= 100; ++k) {
    worst = std::max(worst, std::abs(c[k].value - alpha_formula(s, t, grid[k])));
    if (k > 0 && c[k].value > c[k - 1].value) monotone = false;
  }
  const auto anchors = decoherence_sweep(s, t, {0.0, std::sqrt(3.0) / 2, 1.0});
  const double e0 = std::abs(anchors[0].value - 0.25);
  const double e1 = std::abs(anchors[1].value - 0.125);
  const double e2 = std::abs(anchors[2].value - (2 - std::sqrt(3.0)) / 4);
  const double anchor = std::max({e0, e1, e2});
  return {5, "decoherence curve", worst <= 1e-10 && anchor <= 1e-10 && monotone,
          "101-point grid, max |sweep - formula| = " + num(worst) + ", anchor error " + num(anchor) +
              " (tol 1e-10), non-increasing: " + (monotone ? "yes" : "no")};
}

Line inequalities() {
  constexpr double tol = 1e-7;
  double qc = 0, dec = 0, sandwich = 0, product = 0, pure_eq = 0, t0v = 0, t0eq = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 3;
    const RVector s = random_probability(n, split_seed(kSeed, 20000 + 2 * k));
    const RVector t = random_probability(n, split_seed(kSeed, 20001 + 2 * k));
    qc = std::max(qc, sdp(diagonal_state(s), diagonal_state(t)) -
                          solve_classical_ot(s, t, classical_cost_matrix(cq_projector(n))).value);

    std::mt19937_64 g(split_seed(kSeed, 30000 + k));
    RMatrix w = RMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) w(a, b) = uniform(g, 0.1, 1.0);
    const CostOperator ce = cq_e_operator(w, n);
    const DensityMatrix r = random_density(n, n, split_seed(kSeed, 40000 + 2 * k));
    const DensityMatrix q = random_density(n, n, split_seed(kSeed, 40001 + 2 * k));
    const double full = sdp(r, q, ce);
    const double deco = sdp(diagonal_state(r.op.diagonal().real()), diagonal_state(q.op.diagonal().real()), ce);
    dec = std::max(dec, deco - full);

    const double tv = sdp(r, q);
    const double f = fidelity(r, q);
    sandwich = std::max({sandwich, (1 - std::sqrt(f)) / 2 - tv, tv - (1 - f) / 2, (1 - f) / 2 - (1 - std::sqrt(f))});
    product = std::max(product, tv - 0.5 * (1 - (r.op * q.op).trace().real()));
    const DensityMatrix p = random_pure(n, split_seed(kSeed, 50000 + k));
    pure_eq = std::max(pure_eq, std::abs(sdp(p, q) - 0.5 * (1 - (p.op * q.op).trace().real())));
    const double lb = t0_lower_bound(r, q);
    t0v = std::max(t0v, lb - tv);
    if (n == 2) t0eq = std::max(t0eq, std::abs(lb - tv));
  }
  const double worst = std::max({qc, dec, sandwich, product, pure_eq, t0v, t0eq});
  return {6, "inequality suite", worst <= tol,
          "200 instances each, n in {2,3,4}; excess: quantum-classical " + num(qc) + ", decoherence " + num(dec) +
              ", fidelity sandwich " + num(sandwich) + ", product bound " + num(product) + ", pure equality " +
              num(pure_eq) + ", t0-T " + num(t0v) + ", |t0-T| at n=2 " + num(t0eq) + " (tol 1e-7)"};
}

Line triangle(std::vector<std::string>& findings) {
  const MetricReport q = triangle_scan(2, 1000, split_seed(kSeed, 60000), Engine::ClosedForm, 1, 1e-9);
  // SDP solves inside the scan bypass the tracker, so the n = 3 triples are solved here.
  double worst3 = 0.0;
  int witnesses3 = 0;
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix a = random_density(3, 3, split_seed(kSeed, 70000 + 3 * k));
    const DensityMatrix b = random_density(3, 3, split_seed(kSeed, 70001 + 3 * k));
    const DensityMatrix c = random_density(3, 3, split_seed(kSeed, 70002 + 3 * k));
    const double ab = std::sqrt(std::max(sdp(a, b), 0.0)), bc = std::sqrt(std::max(sdp(b, c), 0.0)),
                 ac = std::sqrt(std::max(sdp(a, c), 0.0));
    const double ex = std::max({0.0, ac - ab - bc, ab - ac - bc, bc - ab - ac});
    worst3 = std::max(worst3, ex);
    if (ex > 1e-6) {
      ++witnesses3;
      findings.push_back("n=3 random triple " + std::to_string(k) + " violates the triangle inequality by " + num(ex));
    }
  }
  // Targeted search: one intermediate state between two fixed qutrit states.
  const DensityMatrix a = random_density(3, 3, 5), b = random_density(3, 3, 6);
  ChainOptions co;
  co.max_evals = 200;
  const ChainResult ch = chain_distance(a, b, 1, Engine::Sdp, co);
  if (!ch.intermediates.empty()) {
    const DensityMatrix& m = ch.intermediates[0];
    const double ex = std::sqrt(sdp(a, b)) - std::sqrt(sdp(a, m)) - std::sqrt(sdp(m, b));
    if (ex > 1e-6)
      findings.push_back("n=3 chain search (random_density(3,3,5) -> random_density(3,3,6), one intermediate) "
                         "violates the triangle inequality by " + num(ex) + "; certificates recorded under criterion 4");
  }
  return {7, "triangle inequality", q.worst_violation <= 1e-9 && witnesses3 == 0,
          "n=2: 1000 closed-form triples, worst excess " + num(q.worst_violation) + " (tol 1e-9); n=3: 200 SDP triples, " +
              std::to_string(witnesses3) + " beyond 1e-6, worst excess " + num(worst3)};
}

Line metric_failure() {
  const auto d1 = find_dp_violation(1.0);
  const auto t1 = find_dp_violation(1.0, 0.6, true, Engine::ClosedForm);
  double cross = 0.0;
  if (t1) {
    cross = std::max({std::abs(sdp(t1->a, t1->b) - t1->d_ab), std::abs(sdp(t1->b, t1->c) - t1->d_bc),
                      std::abs(sdp(t1->a, t1->c) - t1->d_ac)});
  }
  const bool pass = d1 && t1 && d1->excess() > 0 && t1->excess() > 0 && cross <= 1e-6;
  std::string detail = "1 - tr sqrt(rho) sqrt(sigma): ";
  detail += d1 ? "excess " + num(d1->excess()) + " at eps=" + num(d1->epsilon) : std::string("none found");
  detail += "; T^{1/p} at p=1: ";
  detail += t1 ? "excess " + num(t1->excess()) + " at eps=" + num(t1->epsilon) + ", sdp cross-check " + num(cross)
               : std::string("none found");
  return {8, "metric failure reproduction", pass, detail};
}

Line multipartite() {
  double perm_err = 0.0, equal_worst = 0.0, unequal_min = 1e300;
  for (int n : {2, 3}) {
    const CMatrix cb = cb_projector(n, 3).op;
    for (int k = 0; k < 50; ++k) {
      std::vector<DensityMatrix> st;
      for (int j = 0; j < 3; ++j) st.push_back(random_density(n, n, split_seed(kSeed, 80000 + 100 * n + 3 * k + j)));
      const CMatrix prod = kron(kron(st[0].op, st[1].op), st[2].op);
      perm_err = std::max(perm_err, std::abs(cb_cost_product(st) - (cb * prod).trace().real()));
    }
    for (int k = 0; k < 25; ++k) {
      const DensityMatrix r = random_density(n, n, split_seed(kSeed, 90000 + 100 * n + k));
      const SdpSolution e = solve_multipartite(make_multi_problem({r, r, r}, cb_projector(n, 3)));
      tracker.record_multi(e);
      equal_worst = std::max(equal_worst, std::abs(e.value));
      std::vector<DensityMatrix> st{r, r, random_density(n, n, split_seed(kSeed, 95000 + 100 * n + k))};
      const SdpSolution u = solve_multipartite(make_multi_problem(st, cb_projector(n, 3)));
      tracker.record_multi(u);
      unequal_min = std::min(unequal_min, u.value);
    }
  }
  return {9, "multipartite", perm_err <= 1e-10 && equal_worst <= 1e-7 && unequal_min > 1e-7,
          "d=3, n in {2,3}: 50 tuples each, max |permanent formula - dense| = " + num(perm_err) +
              " (tol 1e-10); 25 equal + 25 unequal solves each: max |T| equal " + num(equal_worst) + ", min T unequal " +
              num(unequal_min) + " (threshold 1e-7)"};
}

Line classical_bridge() {
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    for (int k = 0; k < 50; ++k) {
      const RVector s = random_probability(n, split_seed(kSeed, 110000 + 1000 * n + 2 * k));
      const RVector t = random_probability(n, split_seed(kSeed, 110001 + 1000 * n + 2 * k));
      worst = std::max(worst, std::abs(minimize_f_diag(s, t).value - sdp(diagonal_state(s), diagonal_state(t))));
    }
  }
  double yz = 0.0, yz_sdp = 0.0;
  for (int k = 0; k < 100; ++k) {
    const RVector s = random_probability(2, split_seed(kSeed, 130000 + 2 * k));
    const RVector t = random_probability(2, split_seed(kSeed, 130001 + 2 * k));
    yz = std::max(yz, std::abs(yzyy_upper_diag(s, t) - qubit_diag(s, t)));
    yz_sdp = std::max(yz_sdp, std::abs(yzyy_upper_diag(s, t) - sdp(diagonal_state(s), diagonal_state(t))));
  }
  return {10, "classical bridge", worst <= 1e-6 && yz <= 1e-12 && yz_sdp <= 1e-6,
          "n in {2,3,4}, 50 each: max |f_diag - sdp| = " + num(worst) + " (tol 1e-6); n=2 YZYY: max |bound - closed form| = " +
              num(yz) + " (tol 1e-12), max |bound - sdp| = " + num(yz_sdp) + " (tol 1e-6)"};
}

Line duality() {
  const int solved = tracker.optimal + tracker.reduced + tracker.not_attained + tracker.max_iter;
  const bool pass = tracker.max_iter == 0 && tracker.worst_gap <= 1e-7 && tracker.worst_comp <= 1e-6 &&
                    tracker.worst_neg_eig <= 1e-8 && tracker.worst_dual_shortfall <= 1e-7;
  std::ostringstream d;
  d << solved << " solves (" << tracker.optimal << " optimal, " << tracker.reduced << " reduced, " << tracker.not_attained
    << " dual not attained, " << tracker.max_iter << " max-iter); max gap " << num(tracker.worst_gap)
    << " (tol 1e-7), max tr(F R) " << num(tracker.worst_comp) << " (tol 1e-6), max -minEig F "
    << num(tracker.worst_neg_eig) << " (tol 1e-8), max T - dual bound when not attained "
    << num(tracker.worst_dual_shortfall) << " (tol 1e-7)";
  return {4, "duality", pass, d.str()};
}

}  // namespace

int main() {
  std::vector<Line> lines;
  std::vector<std::string> findings;
  const auto run = [&](auto&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    lines.push_back(f());
    std::cerr << "criterion " << lines.back().id << " done in " << num(seconds_since(t0)) << " s\n";
  };
  try {
    run(qubit_exactness);
    run(isospectral);
    run(qutrits);
    run(decoherence);
    run(inequalities);
    run([&] { return triangle(findings); });
    run(metric_failure);
    run(multipartite);
    run(classical_bridge);
    lines.push_back(duality());
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  bool all = true;
  for (const Line& l : lines) {
    std::cout << (l.pass ? "PASS" : "FAIL") << " [" << l.id << "] " << l.name << ": " << l.detail << "\n";
    all = all && l.pass;
  }
  for (const std::string& f : findings) std::cout << "FINDING " << f << "\n";
  return all ? 0 : 1;
}
