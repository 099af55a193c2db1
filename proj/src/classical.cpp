#include "qot/classical.hpp"

#include "qot/block_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace qot {

void check_probability(const RVector& p, const char* what, double tol) {
  if (p.size() == 0) throw Error(ErrorCode::InfeasibleMarginals, std::string(what) + " is empty");
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (!(p(i) >= -tol)) throw Error(ErrorCode::InfeasibleMarginals, std::string(what) + " has a negative entry");
  if (std::abs(p.sum() - 1.0) > tol) throw Error(ErrorCode::InfeasibleMarginals, std::string(what) + " does not sum to 1");
}

namespace {

struct Cell {
  int i, j;
};

// Path of basic cells from row node `from_row` to column node `to_col` in the basis tree.
std::vector<int> tree_path(const std::vector<Cell>& basis, int m, int n, int from_row, int to_col) {
  std::vector<std::vector<std::pair<int, int>>> adj(m + n);  // (neighbor, basis index)
  for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
    adj[basis[k].i].push_back({m + basis[k].j, k});
    adj[m + basis[k].j].push_back({basis[k].i, k});
  }
  std::vector<int> parent_edge(m + n, -1), parent(m + n, -1);
  std::vector<bool> seen(m + n, false);
  std::queue<int> q;
  q.push(from_row);
  seen[from_row] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (auto [v, e] : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        parent_edge[v] = e;
        q.push(v);
      }
  }
  std::vector<int> path;  // edges ordered from to_col back to from_row
  for (int v = m + to_col; v != from_row; v = parent[v]) {
    if (parent[v] < 0) throw Error(ErrorCode::NumericalBreakdown, "transportation basis is not a spanning tree");
    path.push_back(parent_edge[v]);
  }
  return path;
}

}  // namespace

PlanResult solve_classical_ot(const RVector& s, const RVector& t, const RMatrix& cost) {
  check_probability(s, "s");
  check_probability(t, "t");
  const int m = static_cast<int>(s.size());
  const int n = static_cast<int>(t.size());
  if (cost.rows() != m || cost.cols() != n) throw Error(ErrorCode::DimensionMismatch, "cost matrix is not m x n");
  const RVector sc = s.cwiseMax(0.0) / s.cwiseMax(0.0).sum();
  const RVector tc = t.cwiseMax(0.0) / t.cwiseMax(0.0).sum();

  // Northwest corner start with exactly m+n-1 basic cells.
  RMatrix x = RMatrix::Zero(m, n);
  std::vector<Cell> basis;
  RVector rs = sc, cs = tc;
  for (int i = 0, j = 0;;) {
    const double q = std::min(rs(i), cs(j));
    x(i, j) = q;
    basis.push_back({i, j});
    rs(i) -= q;
    cs(j) -= q;
    if (i == m - 1 && j == n - 1) break;
    if (i < m - 1 && (rs(i) <= cs(j) || j == n - 1))
      ++i;
    else
      ++j;
  }

  const double eps = 1e-13 * (1.0 + cost.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < 100000; ++iter) {
    // Potentials u_i + v_j = c_ij on the basis tree.
    RVector u = RVector::Constant(m, std::numeric_limits<double>::quiet_NaN());
    RVector v = RVector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    u(0) = 0.0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const Cell& c : basis) {
        if (!std::isnan(u(c.i)) && std::isnan(v(c.j))) {
          v(c.j) = cost(c.i, c.j) - u(c.i);
          changed = true;
        } else if (std::isnan(u(c.i)) && !std::isnan(v(c.j))) {
          u(c.i) = cost(c.i, c.j) - v(c.j);
          changed = true;
        }
      }
    }
    std::vector<bool> is_basic(static_cast<std::size_t>(m) * n, false);
    for (const Cell& c : basis) is_basic[c.i * n + c.j] = true;
    int enter = -1;
    for (int k = 0; k < m * n && enter < 0; ++k)
      if (!is_basic[k] && cost(k / n, k % n) - u(k / n) - v(k % n) < -eps) enter = k;
    if (enter < 0) break;

    const int ei = enter / n, ej = enter % n;
    const std::vector<int> path = tree_path(basis, m, n, ei, ej);
    // path[0] touches column ej and carries a minus sign; signs alternate.
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis[path[k]];
      theta = std::min(theta, x(c.i, c.j));
    }
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis[path[k]];
      if (x(c.i, c.j) <= theta) {
        if (leave < 0 || c.i * n + c.j < basis[leave].i * n + basis[leave].j) leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Cell& c = basis[path[k]];
      x(c.i, c.j) += (k % 2 == 0) ? -theta : theta;
    }
    x(ei, ej) = theta;
    x(basis[leave].i, basis[leave].j) = 0.0;
    basis[leave] = {ei, ej};
  }
  x = x.cwiseMax(0.0);
  PlanResult out;
  out.plan = TransportPlan{x, s, t};
  out.value = cost.cwiseProduct(x).sum();
  return out;
}

double wasserstein_p(const RVector& s, const RVector& t, const RMatrix& d, double p) {
  if (p < 1.0) throw Error(ErrorCode::InvalidInput, "wasserstein_p requires p >= 1");
  const int n = static_cast<int>(d.rows());
  if (d.cols() != n || s.size() != n || t.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "wasserstein_p: metric must be n x n");
  const double tol = 1e-12 * (1.0 + d.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    if (std::abs(d(i, i)) > tol) throw Error(ErrorCode::NotAMetricCost, "nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (d(i, j) < -tol || std::abs(d(i, j) - d(j, i)) > tol)
        throw Error(ErrorCode::NotAMetricCost, "negative or asymmetric entry");
      for (int k = 0; k < n; ++k)
        if (d(i, k) > d(i, j) + d(j, k) + tol) throw Error(ErrorCode::NotAMetricCost, "triangle inequality fails");
    }
  }
  const RMatrix cp = d.cwiseMax(0.0).array().pow(p).matrix();
  return std::pow(std::max(0.0, solve_classical_ot(s, t, cp).value), 1.0 / p);
}

double f_objective(const RMatrix& x) {
  const int m = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  double f = 0.0;
  for (int i = 0; i < m; ++i)
    for (int p = i + 1; p < m; ++p)
      f += x(i, p) + x(p, i) - 2.0 * std::sqrt(std::max(0.0, x(i, p)) * std::max(0.0, x(p, i)));
  for (int i = 0; i < m; ++i)
    for (int p = m; p < n; ++p) f += x(i, p);
  return 0.5 * f;
}

PlanResult minimize_f_diag(const RVector& s, const RVector& t) {
  check_probability(s, "s");
  check_probability(t, "t");
  if (s.size() > t.size()) {
    PlanResult r = minimize_f_diag(t, s);
    r.plan = TransportPlan{r.plan.entries.transpose(), s, t};
    return r;
  }
  const int m = static_cast<int>(s.size());
  const int n = static_cast<int>(t.size());
  auto active = [&](int i, int p) { return s(i) > 0.0 && t(p) > 0.0; };

  // Location of x_ip inside the block SDP: (block, row).
  struct Loc {
    int block = -1, row = 0;
  };
  std::vector<Loc> loc(static_cast<std::size_t>(m) * n);
  BlockSdpProblem prob;
  auto add_block = [&](int size, RMatrix c) {
    prob.blocks.push_back(size);
    prob.c.push_back(std::move(c));
    return static_cast<int>(prob.blocks.size()) - 1;
  };
  for (int i = 0; i < m; ++i)
    if (active(i, i)) loc[i * n + i] = {add_block(1, RMatrix::Zero(1, 1)), 0};
  for (int i = 0; i < m; ++i)
    for (int p = i + 1; p < m; ++p) {
      const bool a = active(i, p), b = active(p, i);
      if (a && b) {
        RMatrix c(2, 2);
        c << 0.5, -0.5, -0.5, 0.5;
        const int blk = add_block(2, c);
        loc[i * n + p] = {blk, 0};
        loc[p * n + i] = {blk, 1};
      } else if (a) {
        loc[i * n + p] = {add_block(1, RMatrix::Constant(1, 1, 0.5)), 0};
      } else if (b) {
        loc[p * n + i] = {add_block(1, RMatrix::Constant(1, 1, 0.5)), 0};
      }
    }
  for (int i = 0; i < m; ++i)
    for (int p = m; p < n; ++p)
      if (active(i, p)) loc[i * n + p] = {add_block(1, RMatrix::Constant(1, 1, 0.5)), 0};

  auto zero_blocks = [&]() {
    std::vector<RMatrix> z;
    for (int sz : prob.blocks) z.push_back(RMatrix::Zero(sz, sz));
    return z;
  };
  std::vector<double> rhs;
  std::vector<bool> row_constraint;
  for (int i = 0; i < m; ++i) {
    if (!(s(i) > 0.0)) continue;
    auto a = zero_blocks();
    for (int p = 0; p < n; ++p)
      if (loc[i * n + p].block >= 0) a[loc[i * n + p].block](loc[i * n + p].row, loc[i * n + p].row) = 1.0;
    prob.a.push_back(a);
    rhs.push_back(s(i));
    row_constraint.push_back(true);
  }
  int last_col = -1;
  for (int p = 0; p < n; ++p)
    if (t(p) > 0.0) last_col = p;
  for (int p = 0; p < n; ++p) {
    if (!(t(p) > 0.0) || p == last_col) continue;
    auto a = zero_blocks();
    for (int i = 0; i < m; ++i)
      if (loc[i * n + p].block >= 0) a[loc[i * n + p].block](loc[i * n + p].row, loc[i * n + p].row) = 1.0;
    prob.a.push_back(a);
    rhs.push_back(t(p));
    row_constraint.push_back(false);
  }
  prob.b = Eigen::Map<RVector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

  IpmPoint start;
  start.x = zero_blocks();
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < n; ++p)
      if (loc[i * n + p].block >= 0) start.x[loc[i * n + p].block](loc[i * n + p].row, loc[i * n + p].row) = s(i) * t(p);
  start.y = RVector::Zero(prob.num_constraints());
  for (int k = 0; k < prob.num_constraints(); ++k)
    if (row_constraint[k]) start.y(k) = -1.0;
  start.z = prob.c;
  for (int k = 0; k < prob.num_constraints(); ++k)
    if (row_constraint[k])
      for (std::size_t b = 0; b < start.z.size(); ++b) start.z[b] += prob.a[k][b];

  const IpmResult res = solve_block_sdp(prob, IpmOptions{}, start);
  if (res.status != IpmStatus::Optimal && res.gap > 1e-6)
    throw Error(ErrorCode::MaxIterations, "minimize_f_diag: interior point did not converge");

  RMatrix x = RMatrix::Zero(m, n);
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < n; ++p)
      if (loc[i * n + p].block >= 0)
        x(i, p) = std::max(0.0, res.point.x[loc[i * n + p].block](loc[i * n + p].row, loc[i * n + p].row));
  PlanResult out;
  out.plan = TransportPlan{x, s, t};
  out.value = f_objective(x);
  return out;
}

LiftedCoupling lift_plan_to_coupling(const TransportPlan& plan) {
  const RMatrix& x = plan.entries;
  const int m = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  const BipartiteIndex idx{m, n};
  LiftedCoupling out;
  out.r_diag = CMatrix::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < n; ++p) out.r_diag(idx(i, p), idx(i, p)) = x(i, p);
  out.r_tilde = out.r_diag;
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < n; ++p)
      if (i != p && p < m && i < n)
        out.r_tilde(idx(i, p), idx(p, i)) = std::sqrt(std::max(0.0, x(i, p)) * std::max(0.0, x(p, i)));
  return out;
}

TransportPlan project_coupling_to_plan(const CMatrix& r, const RVector& s, const RVector& t, double tol) {
  const int m = static_cast<int>(s.size());
  const int n = static_cast<int>(t.size());
  if (r.rows() != m * n) throw Error(ErrorCode::DimensionMismatch, "coupling size is not m*n");
  const BipartiteIndex idx{m, n};
  RMatrix x(m, n);
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < n; ++p) x(i, p) = r(idx(i, p), idx(i, p)).real();
  if ((x.rowwise().sum() - s).cwiseAbs().maxCoeff() > tol || (x.colwise().sum().transpose() - t).cwiseAbs().maxCoeff() > tol)
    throw Error(ErrorCode::MarginalMismatch, "coupling diagonal does not reproduce the marginals");
  return TransportPlan{x.cwiseMax(0.0), s, t};
}

double yzyy_upper_diag(const RVector& s, const RVector& t) {
  if (s.size() != t.size()) throw Error(ErrorCode::DimensionMismatch, "yzyy_upper_diag: equal lengths");
  const RVector d = (s.cwiseMax(0.0).cwiseSqrt() - t.cwiseMax(0.0).cwiseSqrt()).cwiseAbs2();
  return 0.5 * (d.sum() - d.minCoeff());
}

double diag_lower_bound(const RVector& s, const RVector& t) {
  const RVector d = (s.cwiseMax(0.0).cwiseSqrt() - t.cwiseMax(0.0).cwiseSqrt()).cwiseAbs2();
  return 0.5 * d.maxCoeff();
}

}  // namespace qot
