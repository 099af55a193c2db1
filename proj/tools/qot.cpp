#include "qot/closedform.hpp"
#include "qot/io.hpp"
#include "qot/metrics.hpp"
#include "qot/multipartite.hpp"
#include "qot/parallel.hpp"
#include "qot/suites.hpp"
#include "qot/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace qot;

namespace {

// Exit-code contract: 0 ok, 1 property failure, 2 input error, 3 numerical failure.
constexpr int kOk = 0, kPropertyFailure = 1, kInputError = 2, kNumericalFailure = 3;

struct Global {
  std::string engine = "auto";
  std::uint64_t seed = 20240601;
  int jobs = 1;
  double tol = 1e-8;
  int max_iter = 200;
  int verbosity = 0;
  std::string output;  // empty: stdout

  SolverOptions solver() const {
    SolverOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    o.verbosity = verbosity;
    return o;
  }
  Engine eng() const { return engine_from_string(engine); }
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json provenance(const Global& g, const std::string& command) {
  const SolverOptions o = g.solver();
  return {{"tool", "qot"},
          {"version", kVersion},
          {"command", command},
          {"seed", g.seed},
          {"tolerances", {{"sdp_gap", o.tol}, {"sdp_feasibility", o.feas_tol}, {"max_iter", o.max_iter}}}};
}

// Writes to the --output path when given, stdout otherwise.
void emit(const Global& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + g.output);
  out << text;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "not a number list: '" + s + "'");
    }
    if (!std::isfinite(v.back())) throw Error(ErrorCode::InvalidInput, "NaN or Inf in '" + s + "'");
  }
  return v;
}

RVector to_vector(const std::vector<double>& v) { return Eigen::Map<const RVector>(v.data(), v.size()); }

std::string join(const RVector& v, char sep = ' ') {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + format_double(v(i));
  return out;
}

struct CostSpec {
  CostOperator op;
  std::optional<double> alpha;  // set for cq_alpha
  std::string label;
};

// cq | swap | cq_e | cq_alpha:<a> | path to a cost JSON file
CostSpec parse_cost(const std::string& spec, int n) {
  if (spec == "cq") return {cq_projector(n), std::nullopt, "cq"};
  if (spec == "swap") return {swap_operator(n), std::nullopt, "swap"};
  if (spec == "cq_e") return {cq_e_operator(RMatrix::Ones(n, n), n), std::nullopt, "cq_e"};
  if (spec.rfind("cq_alpha:", 0) == 0) {
    const auto a = parse_list(spec.substr(9));
    if (a.size() != 1) throw Error(ErrorCode::InvalidInput, "cq_alpha needs one value");
    if (n != 2) throw Error(ErrorCode::DimensionMismatch, "cq_alpha is defined on qubits");
    return {cq_alpha(a[0]), a[0], spec};
  }
  return {cost_from_json(read_json_file(spec)), std::nullopt, spec};
}

bool diagonal(const DensityMatrix& r) {
  return (r.op - CMatrix(r.op.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-12;
}

int cmd_cost(const Global& g, const std::string& fa, const std::string& fb, const std::string& cost_spec) {
  const DensityMatrix a = density_from_json(read_json_file(fa));
  const DensityMatrix b = density_from_json(read_json_file(fb));
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "marginal dimensions differ");
  const CostSpec cost = parse_cost(cost_spec, a.dim());
  const Engine engine = g.eng();
  json rep = provenance(g, "cost");
  rep["cost"] = cost.label;

  std::optional<double> closed;
  if (cost.op.tag == CostTag::Cq && cost_spec == "cq") {
    closed = closed_form_value(a, b);
  } else if (cost.alpha && diagonal(a) && diagonal(b)) {
    closed = decoherence_sweep(a.op.diagonal().real(), b.op.diagonal().real(), {*cost.alpha})[0].value;
  }
  if (engine == Engine::ClosedForm && !closed)
    throw Error(ErrorCode::NoClosedForm, "no closed form for cost '" + cost.label + "' at n = " +
                                             std::to_string(a.dim()) + " with these marginals; use --engine sdp");
  if (engine != Engine::Sdp && closed) {
    rep["value"] = *closed;
    rep["engine"] = "closedform";
    rep["gap"] = 0.0;
    rep["certificate"] = "closed form";
  } else {
    const CouplingProblem prob = make_problem(a, b, cost.op);
    const SdpSolution sol = solve(prob, g.solver());
    const CertificateReport cr = check_certificate(prob, sol);
    rep["value"] = sol.value;
    rep["engine"] = "sdp";
    rep["gap"] = sol.gap;
    rep["status"] = to_string(sol.status);
    rep["certificate"] = cr.summary();
    rep["certificate_pass"] = cr.pass;
    if (sol.status == SolveStatus::MaxIter) {
      emit(g, rep.dump(2) + "\n");
      throw NumericalFailure("solver hit the iteration cap");
    }
  }
  emit(g, rep.dump(2) + "\n");
  return kOk;
}

int cmd_dual(const Global& g, const std::string& fa, const std::string& fb, const std::string& cost_spec) {
  const DensityMatrix a = density_from_json(read_json_file(fa));
  const DensityMatrix b = density_from_json(read_json_file(fb));
  const CostSpec cost = parse_cost(cost_spec, a.dim());
  const CouplingProblem prob = make_problem(a, b, cost.op);
  const SdpSolution sol = solve(prob, g.solver());
  const CertificateReport cr = check_certificate(prob, sol);
  const DualResult dual = solve_dual_only(prob, g.solver());
  json rep = provenance(g, "dual");
  rep["cost"] = cost.label;
  rep["engine"] = "sdp";
  rep["solution"] = solution_to_json(sol, &cr);
  rep["dual"] = {{"lower_value", dual.lower_value},
                 {"attained", dual.attained},
                 {"min_eig_certificate", dual.min_eig_certificate},
                 {"sigmaA", matrix_to_json(dual.sigmaA, "potential")},
                 {"sigmaB", matrix_to_json(dual.sigmaB, "potential")}};
  emit(g, rep.dump(2) + "\n");
  if (sol.status == SolveStatus::MaxIter) throw NumericalFailure("solver hit the iteration cap");
  return cr.pass ? kOk : kPropertyFailure;
}

int cmd_compare(const Global& g, const std::vector<std::string>& files, const std::string& batch) {
  std::vector<std::pair<RVector, RVector>> pairs;
  if (!batch.empty()) {
    const json j = read_json_file(batch);
    if (!j.contains("pairs") || !j["pairs"].is_array())
      throw Error(ErrorCode::InvalidInput, batch + ": expected {\"pairs\": [{\"s\": [...], \"t\": [...]}, ...]}");
    for (const auto& p : j["pairs"]) pairs.emplace_back(probability_from_json(p.at("s")), probability_from_json(p.at("t")));
  } else {
    if (files.size() != 2) throw Error(ErrorCode::InvalidInput, "compare needs two marginal files or --batch");
    pairs.emplace_back(probability_from_json(read_json_file(files[0])), probability_from_json(read_json_file(files[1])));
  }
  for (const auto& [s, t] : pairs)
    if (s.size() != t.size()) throw Error(ErrorCode::DimensionMismatch, "s and t lengths differ");
  const Engine engine = g.eng();
  const int count = static_cast<int>(pairs.size());
  std::vector<double> classical(count), quantum(count);
  std::vector<std::string> used(count);
  parallel_for(count, g.jobs, [&](int i) {
    const auto& [s, t] = pairs[i];
    classical[i] = solve_classical_ot(s, t, classical_cost_matrix(cq_projector(s.size()))).value;
    const DensityMatrix a = diagonal_state(s), b = diagonal_state(t);
    const bool has_closed = engine != Engine::Sdp && closed_form_value(a, b).has_value();
    quantum[i] = transport_value(a, b, engine, g.solver());
    used[i] = has_closed ? "closedform" : "sdp";
  });
  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"s", "t", "classical", "quantum", "gap", "engine"});
  bool ok = true;
  for (int i = 0; i < count; ++i) {
    const double gap = classical[i] - quantum[i];
    ok = ok && gap >= -1e-7;
    csv.row({join(pairs[i].first), join(pairs[i].second), format_double(classical[i]), format_double(quantum[i]),
             format_double(gap), used[i]});
  }
  emit(g, os.str());
  if (!ok) std::cerr << "qot: quantum exceeds classical beyond 1e-7 on some rows\n";
  return ok ? kOk : kPropertyFailure;
}

std::vector<double> grid(double from, double to, double step, int points) {
  std::vector<double> v;
  if (points > 0) {
    if (points == 1) return {from};
    for (int k = 0; k < points; ++k) v.push_back(from + (to - from) * k / (points - 1));
    return v;
  }
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidInput, "step must be positive");
  const int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  for (int k = 0; k < count; ++k) v.push_back(std::min(from + k * step, to));
  return v;
}

int cmd_sweep_alpha(const Global& g, const std::string& s_arg, const std::string& t_arg, double from, double to,
                    double step, int points) {
  const RVector s = to_vector(parse_list(s_arg)), t = to_vector(parse_list(t_arg));
  if (s.size() != 2 || t.size() != 2) throw Error(ErrorCode::InvalidInput, "sweep-alpha takes two 2-vectors");
  if (g.eng() == Engine::Sdp) throw Error(ErrorCode::InvalidInput, "sweep-alpha evaluates the closed form only");
  const auto pts = decoherence_sweep(s, t, grid(from, to, step, points));
  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"alpha", "value", "branch"});
  bool monotone = true;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k && pts[k].alpha >= pts[k - 1].alpha && pts[k].value > pts[k - 1].value) monotone = false;
    csv.row({format_double(pts[k].alpha), format_double(pts[k].value), to_string(pts[k].branch)});
  }
  emit(g, os.str());
  if (!monotone) std::cerr << "qot: alpha curve is not non-increasing\n";
  return monotone ? kOk : kPropertyFailure;
}

int cmd_sweep_theta(const Global& g, double s, double from, double to, double step, int points) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidInput, "s must lie in [0, 1]");
  const Engine engine = g.eng();
  const auto thetas = grid(from, to, step, points);
  const int count = static_cast<int>(thetas.size());
  std::vector<double> value(count), formula(count);
  parallel_for(count, g.jobs, [&](int k) {
    const auto [a, b] = bloch_pair_states({s, s, thetas[k]});
    value[k] = engine == Engine::Sdp ? solve(make_problem(a, b, cq_projector(2)), g.solver()).value
                                     : transport_value(a, b, engine, g.solver());
    formula[k] = qubit_isospectral(s, thetas[k]);
  });
  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"theta", "value", "formula", "engine"});
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    worst = std::max(worst, std::abs(value[k] - formula[k]));
    csv.row({format_double(thetas[k]), format_double(value[k]), format_double(formula[k]),
             engine == Engine::Sdp ? "sdp" : "closedform"});
  }
  emit(g, os.str());
  if (worst > 1e-6) std::cerr << "qot: theta curve deviates from the isospectral formula by " << worst << "\n";
  return worst <= 1e-6 ? kOk : kPropertyFailure;
}

int cmd_qutrit(const Global& g, const std::string& s_arg, const std::string& t_arg, int samples) {
  std::vector<std::pair<RVector, RVector>> pairs;
  if (!s_arg.empty() || !t_arg.empty()) {
    pairs.emplace_back(to_vector(parse_list(s_arg)), to_vector(parse_list(t_arg)));
  } else {
    for (int i = 0; i < samples; ++i)
      pairs.emplace_back(random_probability(3, split_seed(g.seed, 2 * i)), random_probability(3, split_seed(g.seed, 2 * i + 1)));
  }
  for (const auto& [s, t] : pairs) {
    if (s.size() != 3 || t.size() != 3) throw Error(ErrorCode::InvalidInput, "qutrit takes two 3-vectors");
    check_probability(s, "s");
    check_probability(t, "t");
  }
  const int count = static_cast<int>(pairs.size());
  std::vector<QutritResult> res(count);
  std::vector<double> sdp(count, 0.0);
  parallel_for(count, g.jobs, [&](int i) {
    res[i] = qutrit_diag(pairs[i].first, pairs[i].second);
    if (g.eng() == Engine::Sdp)
      sdp[i] = solve(make_problem(diagonal_state(pairs[i].first), diagonal_state(pairs[i].second), cq_projector(3)),
                     g.solver()).value;
  });
  std::ostringstream os;
  CsvWriter csv(os);
  std::vector<std::string> cols = {"s1", "s2", "s3", "t1", "t2", "t3", "case", "value"};
  if (g.eng() == Engine::Sdp) cols.push_back("sdp");
  csv.header(cols);
  for (int i = 0; i < count; ++i) {
    const auto& [s, t] = pairs[i];
    if (res[i].tag == QutritCase::Fallback)
      std::cerr << "qot: fallback path for s=(" << join(s, ',') << ") t=(" << join(t, ',') << ")\n";
    std::vector<std::string> row = {format_double(s(0)), format_double(s(1)), format_double(s(2)),
                                    format_double(t(0)), format_double(t(1)), format_double(t(2)),
                                    to_string(res[i].tag), format_double(res[i].value)};
    if (g.eng() == Engine::Sdp) row.push_back(format_double(sdp[i]));
    csv.row(row);
  }
  emit(g, os.str());
  return kOk;
}

int cmd_multipartite(const Global& g, const std::vector<std::string>& files, int split, int depth) {
  std::vector<DensityMatrix> marg;
  for (const auto& f : files) marg.push_back(density_from_json(read_json_file(f)));
  json rep = provenance(g, "multipartite");
  rep["engine"] = "sdp";
  if (split > 0) {
    if (2 * split != static_cast<int>(marg.size()))
      throw Error(ErrorCode::InvalidInput, "--tuple L needs exactly 2L marginal files");
    TupleOptions opts;
    opts.depth = depth;
    opts.solver = g.solver();
    const std::vector<DensityMatrix> a(marg.begin(), marg.begin() + split), b(marg.begin() + split, marg.end());
    const TupleDistance td = tuple_distance(a, b, opts);
    rep["tuple_distance"] = {{"value", td.value}, {"permutation", td.permutation}, {"depth", td.depth},
                             {"surrogate", "chained sqrt T on the half-swap cost"}};
    emit(g, rep.dump(2) + "\n");
    return kOk;
  }
  if (marg.size() < 2) throw Error(ErrorCode::InvalidInput, "multipartite needs at least two marginal files");
  const int n = marg[0].dim();
  for (const auto& m : marg)
    if (m.dim() != n) throw Error(ErrorCode::DimensionMismatch, "C^B needs equal site dimensions");
  const int d = static_cast<int>(marg.size());
  const SdpSolution sol = solve_multipartite(make_multi_problem(marg, cb_projector(n, d)), g.solver());
  rep["cost"] = "cb";
  rep["d"] = d;
  rep["n"] = n;
  rep["value"] = sol.value;
  rep["gap"] = sol.gap;
  rep["status"] = to_string(sol.status);
  rep["product_cost"] = cb_cost_product(marg);
  emit(g, rep.dump(2) + "\n");
  if (sol.status == SolveStatus::MaxIter) throw NumericalFailure("solver hit the iteration cap");
  return kOk;
}

int cmd_verify(const Global& g, const std::string& suite, SuiteConfig cfg, const std::string& witness_dir) {
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  cfg.engine = g.eng();
  cfg.solver = g.solver();
  const SuiteReport rep = run_suite(suite, cfg);
  for (const auto& c : rep.checks)
    std::cerr << (c.pass ? "PASS " : "FAIL ") << rep.suite << ": " << c.property << " = " << c.worst
              << " (tol " << c.tolerance << ", " << c.samples << " samples)" << (c.detail.empty() ? "" : " " + c.detail)
              << "\n";
  if (rep.fallback_samples) std::cerr << "qot: " << rep.fallback_samples << " samples reached the qutrit fallback\n";
  if (!witness_dir.empty() && !rep.witnesses.empty()) {
    std::filesystem::create_directories(witness_dir);
    for (std::size_t k = 0; k < rep.witnesses.size(); ++k) {
      const auto& states = rep.witnesses[k]["states"];
      for (std::size_t j = 0; j < states.size(); ++j)
        write_json_file(witness_dir + "/" + suite + "_" + std::to_string(k) + "_" + std::string(1, char('a' + j)) + ".json",
                        states[j]);
    }
  }
  emit(g, rep.to_json(cfg).dump(2) + "\n");
  return rep.pass() ? kOk : kPropertyFailure;
}

int cmd_randgen(const Global& g, const std::string& kind, int n, int rank, int count) {
  if (n < 1 || n > 64) throw Error(ErrorCode::InvalidInput, "n must lie in [1, 64]");
  if (count < 1) throw Error(ErrorCode::InvalidInput, "count must be positive");
  if (kind == "pairs") {
    json pairs = json::array();
    for (int i = 0; i < count; ++i) {
      auto vec = [](const RVector& p) { return std::vector<double>(p.data(), p.data() + p.size()); };
      pairs.push_back({{"s", {{"kind", "probability"}, {"entries", vec(random_probability(n, split_seed(g.seed, 2 * i)))}}},
                       {"t", {{"kind", "probability"}, {"entries", vec(random_probability(n, split_seed(g.seed, 2 * i + 1)))}}}});
    }
    json rep = provenance(g, "randgen");
    rep["pairs"] = pairs;
    emit(g, rep.dump(2) + "\n");
    return kOk;
  }
  auto make = [&](int i) -> json {
    const std::uint64_t seed = split_seed(g.seed, i);
    if (kind == "density") return density_to_json(random_density(n, rank > 0 ? rank : n, seed));
    if (kind == "pure") return density_to_json(random_pure(n, seed));
    if (kind == "diagonal") return density_to_json(diagonal_state(random_probability(n, seed)));
    if (kind == "probability") {
      const RVector p = random_probability(n, seed);
      return {{"kind", "probability"}, {"entries", std::vector<double>(p.data(), p.data() + p.size())}};
    }
    throw Error(ErrorCode::InvalidInput, "unknown kind '" + kind + "' (density, pure, diagonal, probability, pairs)");
  };
  if (count == 1) {
    emit(g, make(0).dump(2) + "\n");
    return kOk;
  }
  if (g.output.empty()) {
    json all = json::array();
    for (int i = 0; i < count; ++i) all.push_back(make(i));
    std::cout << all.dump(2) << "\n";
    return kOk;
  }
  // Several files: <output>_<i>.json
  std::string stem = g.output;
  if (stem.size() > 5 && stem.ends_with(".json")) stem.resize(stem.size() - 5);
  for (int i = 0; i < count; ++i) write_json_file(stem + "_" + std::to_string(i) + ".json", make(i));
  return kOk;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::MaxIterations:
    case ErrorCode::NumericalBreakdown:
      return kNumericalFailure;
    default:
      return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qot: quantum optimal transport costs, bounds and property suites"};
  app.set_version_flag("--version", std::string("qot ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Global g;
  app.add_option("--engine", g.engine, "sdp, closedform or auto")
      ->check(CLI::IsMember({"sdp", "closedform", "auto"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "base seed; QOT_SEED overrides it")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for batch commands")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol", g.tol, "SDP duality-gap tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-iter", g.max_iter, "SDP iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--verbosity", g.verbosity, "solver log level")->capture_default_str();
  app.add_option("-o,--output", g.output, "output path (stdout when omitted)");

  std::string fa, fb, cost_spec = "cq";
  auto* cost = app.add_subcommand("cost", "transport cost between two density files");
  cost->add_option("rho", fa)->required();
  cost->add_option("sigma", fb)->required();
  cost->add_option("--cost", cost_spec, "cq, swap, cq_e, cq_alpha:<a> or a cost JSON file")->capture_default_str();

  auto* dual = app.add_subcommand("dual", "primal-dual solution with certificate and dual potentials");
  dual->add_option("rho", fa)->required();
  dual->add_option("sigma", fb)->required();
  dual->add_option("--cost", cost_spec, "cq, swap, cq_e, cq_alpha:<a> or a cost JSON file")->capture_default_str();

  std::vector<std::string> files;
  std::string batch;
  auto* compare = app.add_subcommand("compare", "classical versus quantum cost on diagonal marginals (CSV)");
  compare->add_option("files", files, "two probability or diagonal density files");
  compare->add_option("--batch", batch, "JSON file {\"pairs\": [{\"s\": ..., \"t\": ...}]}");

  std::string s_arg, t_arg;
  double from = 0.0, to = 1.0, step = 0.01, s_val = 0.5;
  int points = 0;
  auto* sa = app.add_subcommand("sweep-alpha", "decoherence curve of C^Q_alpha on diagonal qubits (CSV)");
  sa->add_option("--s", s_arg, "comma-separated 2-vector")->required();
  sa->add_option("--t", t_arg, "comma-separated 2-vector")->required();
  sa->add_option("--from", from)->capture_default_str();
  sa->add_option("--to", to)->capture_default_str();
  sa->add_option("--step", step)->capture_default_str();
  sa->add_option("--points", points, "grid size; overrides --step");

  double theta_to = 2.0 * std::numbers::pi;
  auto* st = app.add_subcommand("sweep-theta", "isospectral qubit curve over theta (CSV)");
  st->add_option("--s", s_val, "eigenvalue s of both states")->capture_default_str();
  st->add_option("--from", from)->capture_default_str();
  st->add_option("--to", theta_to)->capture_default_str();
  st->add_option("--step", step)->capture_default_str();
  st->add_option("--points", points, "grid size; overrides --step");

  int samples = 100;
  auto* qt = app.add_subcommand("qutrit", "diagonal qutrit closed form with case tags (CSV)");
  qt->add_option("--s", s_arg, "comma-separated 3-vector");
  qt->add_option("--t", t_arg, "comma-separated 3-vector");
  qt->add_option("--samples", samples, "random pairs when --s/--t are absent")->capture_default_str();

  int split = 0, depth = 0;
  auto* mp = app.add_subcommand("multipartite", "d-partite cost with C^B, or an unordered tuple distance");
  mp->add_option("files", files, "marginal density files")->required();
  mp->add_option("--tuple", split, "treat the files as two tuples of this length");
  mp->add_option("--depth", depth, "chain depth of the tuple surrogate (0-2)")->capture_default_str();

  std::string suite, witness_dir;
  SuiteConfig cfg;
  auto* vf = app.add_subcommand("verify", "run a property suite; exit 1 on any failure");
  vf->add_option("suite", suite, "suite name")->required();
  vf->add_option("--samples", cfg.samples)->capture_default_str();
  vf->add_option("--n", cfg.n)->capture_default_str();
  vf->add_option("--d", cfg.d)->capture_default_str();
  vf->add_option("--witness-dir", witness_dir, "persist witness states here");
  vf->footer("suites: " + [] {
    std::string s;
    for (const auto& n : suite_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());

  std::string kind = "density";
  int n = 2, rank = 0, count = 1;
  auto* rg = app.add_subcommand("randgen", "seeded random states in the JSON matrix format");
  rg->add_option("--kind", kind, "density, pure, diagonal, probability or pairs")->capture_default_str();
  rg->add_option("--n", n)->capture_default_str();
  rg->add_option("--rank", rank, "rank of mixed states (default n)");
  rg->add_option("--count", count)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  if (const char* env = std::getenv("QOT_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "qot: QOT_SEED is not an unsigned integer\n";
      return kInputError;
    }
  }

  try {
    if (*cost) return cmd_cost(g, fa, fb, cost_spec);
    if (*dual) return cmd_dual(g, fa, fb, cost_spec);
    if (*compare) return cmd_compare(g, files, batch);
    if (*sa) return cmd_sweep_alpha(g, s_arg, t_arg, from, to, step, points);
    if (*st) return cmd_sweep_theta(g, s_val, from, theta_to, step, points);
    if (*qt) return cmd_qutrit(g, s_arg, t_arg, samples);
    if (*mp) return cmd_multipartite(g, files, split, depth);
    if (*vf) return cmd_verify(g, suite, cfg, witness_dir);
    if (*rg) return cmd_randgen(g, kind, n, rank, count);
  } catch (const NumericalFailure& e) {
    std::cerr << "qot: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    std::cerr << "qot: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "qot: malformed JSON: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "qot: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
