#include "qot/suites.hpp"

#include "qot/closedform.hpp"
#include "qot/multipartite.hpp"
#include "qot/parallel.hpp"
#include "qot/version.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace qot {

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

json SuiteReport::to_json(const SuiteConfig& cfg) const {
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"property", c.property},
                  {"pass", c.pass},
                  {"worst", c.worst},
                  {"tolerance", c.tolerance},
                  {"samples", c.samples},
                  {"detail", c.detail}});
  return {{"tool", "qot"},
          {"version", kVersion},
          {"suite", suite},
          {"engine", to_string(cfg.engine)},
          {"seed", cfg.seed},
          {"samples", cfg.samples},
          {"n", cfg.n},
          {"d", cfg.d},
          {"tolerances", {{"sdp_gap", cfg.solver.tol}, {"sdp_feasibility", cfg.solver.feas_tol}}},
          {"pass", pass()},
          {"fallback_samples", fallback_samples},
          {"checks", cs},
          {"witnesses", witnesses}};
}

namespace {

double uniform(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

double sdp_cq(const DensityMatrix& a, const DensityMatrix& b, const SolverOptions& opts) {
  return solve(make_problem(a, b, cq_projector(a.dim())), opts).value;
}

// Max of per-sample values computed in parallel; slots are disjoint, so the result is job-count independent.
template <typename F>
std::vector<double> per_sample(int samples, int jobs, F&& f) {
  std::vector<double> out(samples, 0.0);
  parallel_for(samples, jobs, [&](int i) { out[i] = f(i); });
  return out;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

SuiteCheck at_most(std::string property, double worst, double tol, int samples, std::string detail = "") {
  return SuiteCheck{std::move(property), worst <= tol, worst, tol, samples, std::move(detail)};
}

json witness_json(const std::vector<DensityMatrix>& states, double violation, std::uint64_t sample) {
  json st = json::array();
  for (const auto& s : states) st.push_back(density_to_json(s));
  return {{"sample", sample}, {"violation", violation}, {"states", st}};
}

SuiteReport qubit_closedform(const SuiteConfig& cfg) {
  SuiteReport rep{"qubit-closedform"};
  const auto diff = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    std::mt19937_64 g(split_seed(cfg.seed, i));
    BlochQubitPair p{uniform(g, 0.0, 1.0), uniform(g, 0.0, 1.0), uniform(g, 0.0, 2.0 * std::numbers::pi)};
    const auto [a, b] = bloch_pair_states(p);
    return std::abs(qubit_general(p).value - sdp_cq(a, b, cfg.solver));
  });
  rep.checks.push_back(at_most("|qubit_general - sdp|", max_of(diff), 1e-6, cfg.samples));
  const auto t0 = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const DensityMatrix a = random_density(2, 2, split_seed(cfg.seed, 2 * i + 1000003));
    const DensityMatrix b = random_density(2, 2, split_seed(cfg.seed, 2 * i + 1000004));
    return std::abs(t0_lower_bound(a, b) - qubit_value(a, b));
  });
  rep.checks.push_back(at_most("|t0 - T| at n=2", max_of(t0), 1e-8, cfg.samples));
  return rep;
}

SuiteReport isospectral(const SuiteConfig& cfg) {
  SuiteReport rep{"isospectral"};
  const int side = std::clamp(cfg.samples, 2, 50);
  const auto diff = per_sample(side * side, cfg.jobs, [&](int k) {
    const double s = static_cast<double>(k / side) / (side - 1);
    const double theta = 2.0 * std::numbers::pi * (k % side) / (side - 1);
    const auto [a, b] = bloch_pair_states({s, s, theta});
    const double formula = (0.5 - std::sqrt(s * (1.0 - s))) * std::pow(std::sin(theta / 2.0), 2);
    return std::abs(sdp_cq(a, b, cfg.solver) - formula);
  });
  rep.checks.push_back(at_most("|sdp - isospectral formula|", max_of(diff), 1e-6, side * side,
                               std::to_string(side) + "x" + std::to_string(side) + " grid"));
  return rep;
}

SuiteReport qutrit(const SuiteConfig& cfg) {
  SuiteReport rep{"qutrit"};
  std::vector<QutritCase> tags(cfg.samples);
  const auto diff = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const RVector s = random_probability(3, split_seed(cfg.seed, 2 * i));
    const RVector t = random_probability(3, split_seed(cfg.seed, 2 * i + 1));
    const QutritResult q = qutrit_diag(s, t);
    tags[i] = q.tag;
    return std::abs(q.value - sdp_cq(diagonal_state(s), diagonal_state(t), cfg.solver));
  });
  std::map<std::string, int> counts;
  for (auto t : tags) ++counts[to_string(t)];
  std::string detail;
  for (const auto& [k, v] : counts) detail += (detail.empty() ? "" : " ") + k + "=" + std::to_string(v);
  rep.fallback_samples = counts.count("fallback") ? counts["fallback"] : 0;
  rep.checks.push_back(at_most("|qutrit_diag - sdp|", max_of(diff), 1e-6, cfg.samples, detail));
  return rep;
}

SuiteReport duality(const SuiteConfig& cfg) {
  SuiteReport rep{"duality"};
  std::vector<double> gap(cfg.samples), comp(cfg.samples), neg(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](int i) {
    const CouplingProblem prob = make_problem(random_density(cfg.n, cfg.n, split_seed(cfg.seed, 2 * i)),
                                              random_density(cfg.n, cfg.n, split_seed(cfg.seed, 2 * i + 1)),
                                              cq_projector(cfg.n));
    const SdpSolution sol = solve(prob, cfg.solver);
    const CertificateReport cr = check_certificate(prob, sol);
    gap[i] = std::abs(sol.gap);
    comp[i] = std::abs(cr.complementarity);
    neg[i] = std::max(0.0, -cr.min_eig_certificate);
  });
  rep.checks.push_back(at_most("duality gap", max_of(gap), 1e-7, cfg.samples));
  rep.checks.push_back(at_most("tr(F R)", max_of(comp), 1e-6, cfg.samples));
  rep.checks.push_back(at_most("-min eig F", max_of(neg), 1e-8, cfg.samples));
  return rep;
}

SuiteReport decoherence(const SuiteConfig& cfg) {
  SuiteReport rep{"decoherence"};
  std::vector<double> grid(101);
  for (int k = 0; k <= 100; ++k) grid[k] = k / 100.0;
  const RVector s = (RVector(2) << 0.75, 0.25).finished(), t = (RVector(2) << 0.25, 0.75).finished();
  const auto pts = decoherence_sweep(s, t, {0.0, std::sqrt(3.0) / 2.0, 1.0});
  const double anchors = std::max({std::abs(pts[0].value - 0.25), std::abs(pts[1].value - 0.125),
                                   std::abs(pts[2].value - (2.0 - std::sqrt(3.0)) / 4.0)});
  rep.checks.push_back(at_most("anchor values", anchors, 1e-10, 3));
  const auto rise = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const RVector a = random_probability(2, split_seed(cfg.seed, 2 * i));
    const RVector b = random_probability(2, split_seed(cfg.seed, 2 * i + 1));
    const auto curve = decoherence_sweep(a, b, grid);
    double worst = 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k) worst = std::max(worst, curve[k].value - curve[k - 1].value);
    return worst;
  });
  rep.checks.push_back(at_most("max increase along the alpha grid", max_of(rise), 0.0, cfg.samples));
  const auto vs_sdp = per_sample(std::min(cfg.samples, 20), cfg.jobs, [&](int i) {
    const double alpha = grid[(i * 37) % 101];
    const RVector a = random_probability(2, split_seed(cfg.seed, 7919 + 2 * i));
    const RVector b = random_probability(2, split_seed(cfg.seed, 7920 + 2 * i));
    const double v = solve(make_problem(diagonal_state(a), diagonal_state(b), cq_alpha(alpha)), cfg.solver).value;
    return std::abs(v - decoherence_sweep(a, b, {alpha})[0].value);
  });
  rep.checks.push_back(at_most("|sweep - sdp(C^Q_alpha)|", max_of(vs_sdp), 1e-6, std::min(cfg.samples, 20)));
  return rep;
}

SuiteReport inequalities(const SuiteConfig& cfg) {
  SuiteReport rep{"inequalities"};
  const int n = cfg.n;
  const auto qc = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const RVector s = random_probability(n, split_seed(cfg.seed, 2 * i));
    const RVector t = random_probability(n, split_seed(cfg.seed, 2 * i + 1));
    const double q = minimize_f_diag(s, t).value;
    const double c = solve_classical_ot(s, t, classical_cost_matrix(cq_projector(n))).value;
    return q - c;
  });
  rep.checks.push_back(at_most("quantum - classical", max_of(qc), 1e-7, cfg.samples));
  const auto dec = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    RMatrix w = RMatrix::Zero(n, n);
    std::mt19937_64 g(split_seed(cfg.seed, 3 * i + 500009));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) w(a, b) = uniform(g, 0.1, 1.0);
    const CostOperator c = cq_e_operator(w, n);
    const CMatrix u = random_unitary(n, split_seed(cfg.seed, 3 * i + 500010));
    const DensityMatrix r = validate_density(u.adjoint() * random_density(n, n, split_seed(cfg.seed, 2 * i)).op * u);
    const DensityMatrix s = validate_density(u.adjoint() * random_density(n, n, split_seed(cfg.seed, 2 * i + 1)).op * u);
    const double full = solve(make_problem(r, s, c), cfg.solver).value;
    const double diag = solve(make_problem(diagonal_state(r.op.diagonal().real()), diagonal_state(s.op.diagonal().real()), c),
                              cfg.solver).value;
    return diag - full;
  });
  rep.checks.push_back(at_most("T(decohered) - T for C^Q_E", max_of(dec), 1e-7, cfg.samples));
  std::vector<double> bounds(cfg.samples), pure(cfg.samples), t0(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](int i) {
    const DensityMatrix a = random_density(n, n, split_seed(cfg.seed, 2 * i));
    const DensityMatrix b = random_density(n, n, split_seed(cfg.seed, 2 * i + 1));
    const double tv = sdp_cq(a, b, cfg.solver);
    const BoundSuite bs = bound_suite(a, b, tv, 1e-7);
    bounds[i] = std::max({0.0, bs.lower_yzyy - tv, tv - bs.upper_yzyy, bs.upper_yzyy - bs.upper_sqrt,
                          tv - bs.upper_product});
    t0[i] = std::max(0.0, bs.t0 - tv);
    const DensityMatrix p = random_pure(n, split_seed(cfg.seed, 2 * i + 900001));
    pure[i] = std::abs(transport_value(p, b, Engine::Sdp, cfg.solver) - pure_state_value(p, b));
  });
  rep.checks.push_back(at_most("fidelity sandwich and product bound", max_of(bounds), 1e-7, cfg.samples));
  rep.checks.push_back(at_most("t0 - T", max_of(t0), 1e-7, cfg.samples, n == 2 ? "" : "t0 by multi-start search"));
  rep.checks.push_back(at_most("|T - (1 - tr rho sigma)/2| with a pure marginal", max_of(pure), 1e-7, cfg.samples));
  return rep;
}

SuiteReport triangle(const SuiteConfig& cfg) {
  SuiteReport rep{"triangle"};
  const MetricReport m = triangle_scan(cfg.n, cfg.samples, cfg.seed, cfg.engine, cfg.jobs, 1e-6);
  rep.checks.push_back(at_most("sqrt T triangle excess", m.worst_violation, 1e-6, cfg.samples,
                               std::to_string(m.witnesses.size()) + " witnesses"));
  for (const auto& w : m.witnesses) rep.witnesses.push_back(witness_json(w.states, w.violation, w.sample));
  return rep;
}

SuiteReport metric_axioms(const SuiteConfig& cfg) {
  SuiteReport rep{"metric"};
  const MetricReport sym = symmetry_scan(cfg.n, cfg.samples, cfg.seed, cfg.engine, cfg.jobs);
  const MetricReport id = identity_scan(cfg.n, cfg.samples, cfg.seed, cfg.engine, cfg.jobs);
  rep.checks.push_back(at_most("|T(a,b) - T(b,a)|", sym.worst_violation, 1e-8, cfg.samples));
  rep.checks.push_back(at_most("|T(a,a)|", id.worst_violation, 1e-8, cfg.samples));
  const auto floor = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const DensityMatrix a = random_density(cfg.n, cfg.n, split_seed(cfg.seed, 2 * i + 77));
    const DensityMatrix b = random_density(cfg.n, cfg.n, split_seed(cfg.seed, 2 * i + 78));
    return std::sqrt((1.0 - std::sqrt(fidelity(a, b))) / 2.0) - std::sqrt(transport_value(a, b, cfg.engine, cfg.solver));
  });
  rep.checks.push_back(at_most("Bures floor - sqrt T", max_of(floor), 1e-7, cfg.samples));
  return rep;
}

SuiteReport dp_violation(const SuiteConfig& cfg) {
  SuiteReport rep{"dp-violation"};
  const auto d1 = find_dp_violation(1.0);
  SuiteCheck c1{"(1 - tr sqrt rho sqrt sigma) triangle violation found", d1.has_value(), d1 ? d1->excess() : 0.0, 0.0, 1};
  if (d1) {
    c1.detail = "eps=" + format_double(d1->epsilon);
    rep.witnesses.push_back(witness_json({d1->a, d1->b, d1->c}, d1->excess(), 0));
  }
  rep.checks.push_back(c1);
  const auto t1 = find_dp_violation(1.0, 0.6, true, cfg.engine);
  SuiteCheck c2{"T^{1/p} triangle violation found at p=1", t1.has_value(), t1 ? t1->excess() : 0.0, 0.0, 1};
  if (t1) {
    c2.detail = "eps=" + format_double(t1->epsilon);
    rep.witnesses.push_back(witness_json({t1->a, t1->b, t1->c}, t1->excess(), 1));
  }
  rep.checks.push_back(c2);
  const auto d2 = find_dp_violation(2.0);
  rep.checks.push_back(SuiteCheck{"no violation at p=2", !d2.has_value(), d2 ? d2->excess() : 0.0, 0.0, 1});
  return rep;
}

SuiteReport multipartite(const SuiteConfig& cfg) {
  SuiteReport rep{"multipartite"};
  const CMatrix cb = cb_projector(cfg.n, cfg.d).op;
  const auto diff = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    std::vector<DensityMatrix> st;
    CMatrix prod = CMatrix::Ones(1, 1);
    for (int k = 0; k < cfg.d; ++k) {
      st.push_back(random_density(cfg.n, cfg.n, split_seed(cfg.seed, static_cast<std::uint64_t>(i) * cfg.d + k)));
      prod = kron(prod, st.back().op);
    }
    return std::abs(cb_cost_product(st) - (cb * prod).trace().real());
  });
  rep.checks.push_back(at_most("|permanent formula - dense projector|", max_of(diff), 1e-10, cfg.samples));
  const int solves = std::min(cfg.samples, 5);
  std::vector<double> equal(solves), unequal(solves);
  parallel_for(solves, cfg.jobs, [&](int i) {
    const DensityMatrix a = random_density(cfg.n, cfg.n, split_seed(cfg.seed, 4000 + 2 * i));
    const DensityMatrix b = random_density(cfg.n, cfg.n, split_seed(cfg.seed, 4001 + 2 * i));
    const CostOperator c = cb_projector(cfg.n, cfg.d);
    std::vector<DensityMatrix> same(cfg.d, a), mixed(cfg.d, a);
    mixed.back() = b;
    equal[i] = solve_multipartite(make_multi_problem(same, c), cfg.solver).value;
    unequal[i] = solve_multipartite(make_multi_problem(mixed, c), cfg.solver).value;
  });
  rep.checks.push_back(at_most("T for equal marginals", max_of(equal), 1e-7, solves));
  const double least = unequal.empty() ? 0.0 : *std::min_element(unequal.begin(), unequal.end());
  rep.checks.push_back(SuiteCheck{"T for unequal marginals above 1e-7", least > 1e-7, least, 1e-7, solves});
  return rep;
}

SuiteReport classical_bridge(const SuiteConfig& cfg) {
  SuiteReport rep{"classical-bridge"};
  const auto diff = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const RVector s = random_probability(cfg.n, split_seed(cfg.seed, 2 * i));
    const RVector t = random_probability(cfg.n, split_seed(cfg.seed, 2 * i + 1));
    return std::abs(minimize_f_diag(s, t).value - sdp_cq(diagonal_state(s), diagonal_state(t), cfg.solver));
  });
  rep.checks.push_back(at_most("|minimize_f_diag - sdp|", max_of(diff), 1e-6, cfg.samples));
  const auto yz = per_sample(cfg.samples, cfg.jobs, [&](int i) {
    const RVector s = random_probability(2, split_seed(cfg.seed, 3000 + 2 * i));
    const RVector t = random_probability(2, split_seed(cfg.seed, 3001 + 2 * i));
    return std::abs(yzyy_upper_diag(s, t) - qubit_diag(s, t));
  });
  rep.checks.push_back(at_most("|YZYY upper - T| at n=2", max_of(yz), 1e-12, cfg.samples));
  return rep;
}

SuiteReport semimetric(const SuiteConfig& cfg) {
  SuiteReport rep{"semimetric"};
  const int n = std::max(cfg.n, 2);
  RMatrix w = RMatrix::Constant(n, n, 0.5);
  const auto expect = [&](const char* what, const CostOperator& c, bool ok) {
    const SemimetricDiagnosis d = certify_cost_semimetric(c);
    rep.checks.push_back(SuiteCheck{what, d.ok == ok, d.min_eig, 1e-10, 1, d.reason});
  };
  expect("C^Q certified", cq_projector(n), true);
  expect("C^Q_E certified", cq_e_operator(w, n), true);
  expect("SWAP rejected", swap_operator(n), false);
  expect("identity rejected", custom_cost(CMatrix::Identity(n * n, n * n), {n, n}), false);
  return rep;
}

using SuiteFn = SuiteReport (*)(const SuiteConfig&);
const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"qubit-closedform", qubit_closedform}, {"isospectral", isospectral},
      {"qutrit", qutrit},                     {"duality", duality},
      {"decoherence", decoherence},           {"inequalities", inequalities},
      {"triangle", triangle},                 {"metric", metric_axioms},
      {"dp-violation", dp_violation},         {"multipartite", multipartite},
      {"classical-bridge", classical_bridge}, {"semimetric", semimetric}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be positive");
  for (const auto& [k, f] : registry())
    if (k == name) return f(cfg);
  throw Error(ErrorCode::InvalidInput, "unknown suite '" + name + "'");
}

}  // namespace qot
