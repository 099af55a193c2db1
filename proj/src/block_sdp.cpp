#include "qot/block_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qot {

namespace {

using Blocks = std::vector<RMatrix>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

RMatrix sym(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

RVector apply_a(const BlockSdpProblem& p, const Blocks& x) {
  RVector out(p.num_constraints());
  for (int k = 0; k < p.num_constraints(); ++k) out(k) = inner(p.a[k], x);
  return out;
}

Blocks apply_at(const BlockSdpProblem& p, const RVector& y) {
  Blocks out;
  for (int s : p.blocks) out.push_back(RMatrix::Zero(s, s));
  for (int k = 0; k < p.num_constraints(); ++k)
    if (y(k) != 0.0)
      for (std::size_t b = 0; b < out.size(); ++b) out[b] += y(k) * p.a[k][b];
  return out;
}

// Largest alpha with x + alpha*dx >= 0 (infinity if unbounded); 0 if x is not PD.
double max_step(const RMatrix& x, const RMatrix& dx) {
  if (x.rows() == 1) {
    if (dx(0, 0) >= 0) return std::numeric_limits<double>::infinity();
    return -x(0, 0) / dx(0, 0);
  }
  Eigen::LLT<RMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const RMatrix linv_dx = llt.matrixL().solve(dx);
  const RMatrix w = llt.matrixL().solve(linv_dx.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(w), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double max_step(const Blocks& x, const Blocks& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < x.size(); ++b) a = std::min(a, max_step(x[b], dx[b]));
  return a;
}

bool inverse_pd(const RMatrix& m, RMatrix& out) {
  Eigen::LLT<RMatrix> llt(m);
  if (llt.info() != Eigen::Success) return false;
  out = llt.solve(RMatrix::Identity(m.rows(), m.cols()));
  out = sym(out);
  return true;
}

}  // namespace

IpmResult solve_block_sdp(const BlockSdpProblem& p, const IpmOptions& opts, const std::optional<IpmPoint>& start) {
  const int nb = static_cast<int>(p.blocks.size());
  const int k = p.num_constraints();
  int total = 0;
  for (int s : p.blocks) total += s;

  IpmPoint pt;
  if (start) {
    pt = *start;
  } else {
    double cnorm = 0.0, anorm = 1.0;
    for (const auto& c : p.c) cnorm = std::max(cnorm, c.norm());
    double xi = 10.0;
    for (int j = 0; j < k; ++j) {
      double an = 0.0;
      for (const auto& a : p.a[j]) an += a.squaredNorm();
      an = std::sqrt(an);
      anorm = std::max(anorm, an);
      xi = std::max(xi, std::sqrt(static_cast<double>(total)) * (1.0 + std::abs(p.b(j))) / (1.0 + an));
    }
    const double eta = std::max({10.0, std::sqrt(static_cast<double>(total)), cnorm, anorm});
    for (int s : p.blocks) {
      pt.x.push_back(xi * RMatrix::Identity(s, s));
      pt.z.push_back(eta * RMatrix::Identity(s, s));
    }
    pt.y = RVector::Zero(k);
  }

  IpmResult res;
  // Best iterate by the stopping merit; rounding can make late iterates drift.
  IpmResult best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  Blocks zinv(nb), g;
  RMatrix m(k, k);
  for (int iter = 0;; ++iter) {
    const RVector rp = p.b - apply_a(p, pt.x);
    Blocks rd = apply_at(p, pt.y);
    for (int b = 0; b < nb; ++b) rd[b] = p.c[b] - rd[b] - pt.z[b];
    res.primal = inner(p.c, pt.x);
    res.dual = p.b.dot(pt.y);
    const double xz = inner(pt.x, pt.z);
    res.gap = std::max(std::abs(res.primal - res.dual), std::abs(xz));
    res.primal_infeasibility = k > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
    res.dual_infeasibility = 0.0;
    for (const auto& r : rd) res.dual_infeasibility = std::max(res.dual_infeasibility, r.cwiseAbs().maxCoeff());
    res.iterations = iter;
    if (opts.verbosity > 0)
      std::fprintf(stderr, "ipm %3d  pobj %.12e  dobj %.12e  gap %.2e  pinf %.2e  dinf %.2e\n", iter, res.primal,
                   res.dual, res.gap, res.primal_infeasibility, res.dual_infeasibility);
    if (res.gap <= opts.tol && res.primal_infeasibility <= opts.feas_tol && res.dual_infeasibility <= opts.feas_tol) {
      res.status = IpmStatus::Optimal;
      break;
    }
    const double merit = std::max({res.gap / opts.tol, res.primal_infeasibility / opts.feas_tol,
                                   res.dual_infeasibility / opts.feas_tol});
    since_best = merit < 0.9 * best_merit ? 0 : since_best + 1;
    if (merit < best_merit) {
      best_merit = merit;
      best = res;
      best.point = pt;
    }
    if (since_best >= 8) {
      res.status = IpmStatus::Stalled;
      break;
    }
    if (iter >= opts.max_iter) {
      res.status = IpmStatus::MaxIter;
      break;
    }
    const double mu = xz / total;

    bool ok = true;
    for (int b = 0; b < nb && ok; ++b) ok = inverse_pd(pt.z[b], zinv[b]);
    if (!ok) {
      res.status = IpmStatus::Stalled;
      break;
    }
    // Schur complement M_kl = <A_k, X A_l Z^-1>
    g.assign(static_cast<std::size_t>(k) * nb, RMatrix());
    for (int l = 0; l < k; ++l)
      for (int b = 0; b < nb; ++b) g[l * nb + b] = pt.x[b] * p.a[l][b] * zinv[b];
    for (int a = 0; a < k; ++a)
      for (int l = a; l < k; ++l) {
        double s = 0.0;
        for (int b = 0; b < nb; ++b) s += p.a[a][b].cwiseProduct(g[l * nb + b]).sum();
        m(a, l) = s;
        m(l, a) = s;
      }
    Eigen::LLT<RMatrix> mllt(m);
    Eigen::FullPivLU<RMatrix> mlu;
    const bool use_llt = mllt.info() == Eigen::Success;
    if (!use_llt) mlu.compute(m);

    Blocks xrdzinv(nb);
    for (int b = 0; b < nb; ++b) xrdzinv[b] = pt.x[b] * rd[b] * zinv[b];

    auto direction = [&](const Blocks& rc, Blocks& dx, RVector& dy, Blocks& dz) {
      Blocks t(nb);
      for (int b = 0; b < nb; ++b) t[b] = rc[b] - xrdzinv[b];
      const RVector rhs = rp - apply_a(p, t);
      dy = use_llt ? RVector(mllt.solve(rhs)) : RVector(mlu.solve(rhs));
      dz = apply_at(p, dy);
      dx.resize(nb);
      for (int b = 0; b < nb; ++b) {
        dz[b] = rd[b] - dz[b];
        dx[b] = rc[b] - sym(pt.x[b] * dz[b] * zinv[b]);
      }
    };

    Blocks rc(nb), dx, dz;
    RVector dy;
    for (int b = 0; b < nb; ++b) rc[b] = -pt.x[b];
    direction(rc, dx, dy, dz);
    double ap = std::min(1.0, opts.step_fraction * max_step(pt.x, dx));
    double ad = std::min(1.0, opts.step_fraction * max_step(pt.z, dz));
    Blocks xa(nb), za(nb);
    for (int b = 0; b < nb; ++b) {
      xa[b] = pt.x[b] + ap * dx[b];
      za[b] = pt.z[b] + ad * dz[b];
    }
    const double mu_aff = inner(xa, za) / total;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    for (int b = 0; b < nb; ++b)
      rc[b] = sigma * mu * zinv[b] - pt.x[b] - sym(dx[b] * dz[b] * zinv[b]);
    direction(rc, dx, dy, dz);
    ap = std::min(1.0, opts.step_fraction * max_step(pt.x, dx));
    ad = std::min(1.0, opts.step_fraction * max_step(pt.z, dz));
    if (ap < 1e-12 && ad < 1e-12) {
      res.status = IpmStatus::Stalled;
      break;
    }
    for (int b = 0; b < nb; ++b) {
      pt.x[b] = sym(pt.x[b] + ap * dx[b]);
      pt.z[b] = sym(pt.z[b] + ad * dz[b]);
    }
    pt.y += ad * dy;
  }
  res.point = std::move(pt);
  if (res.status != IpmStatus::Optimal && best_merit < std::max({res.gap / opts.tol, res.primal_infeasibility / opts.feas_tol,
                                                               res.dual_infeasibility / opts.feas_tol})) {
    const IpmStatus st = res.status;
    const int it = res.iterations;
    res = std::move(best);
    res.status = st;
    res.iterations = it;
  }
  return res;
}

}  // namespace qot
