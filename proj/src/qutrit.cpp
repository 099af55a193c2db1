#include "qot/closedform.hpp"

#include "qot/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qot {

namespace {

constexpr double kStrict = 1e-12;

double sqd(double a, double b) {
  const double d = std::sqrt(std::max(a, 0.0)) - std::sqrt(std::max(b, 0.0));
  return d * d;
}

// The three orderings {p, q, r} up to swapping p and q.
constexpr std::array<std::array<int, 3>, 6> kPerms{{{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 0, 1}, {1, 2, 0}, {2, 1, 0}}};

struct Candidate {
  double value;
  RMatrix plan;
};

// Case (b) with t_r >= s_p + s_q; the mirrored case is obtained by the caller through s <-> t.
std::optional<Candidate> try_case_b(const RVector& s, const RVector& t) {
  for (const auto& [p, q, r] : kPerms) {
    if (p > q) continue;
    if (t(r) < s(p) + s(q) - kStrict) continue;
    const bool down = s(p) >= t(p) - kStrict && t(p) > 0 && s(q) >= t(q) - kStrict && t(q) > 0;
    const bool up = t(p) >= s(p) - kStrict && s(p) > 0 && t(q) >= s(q) - kStrict && s(q) > 0;
    if (!down && !up) continue;
    RMatrix x = RMatrix::Zero(3, 3);
    x(p, r) = s(p);
    x(q, r) = s(q);
    x(r, p) = t(p);
    x(r, q) = t(q);
    x(r, r) = std::max(t(r) - s(p) - s(q), 0.0);
    return Candidate{0.5 * (sqd(s(p), t(p)) + sqd(s(q), t(q))), x};
  }
  return std::nullopt;
}

std::optional<Candidate> try_case_c(const RVector& s, const RVector& t) {
  for (const auto& [p, q, r] : kPerms) {
    if (!(s(p) > t(q) && t(q) > 0 && t(p) > s(q) && s(q) > 0)) continue;
    if (s(q) + s(r) < t(p) - kStrict) continue;
    const double sp = s(p) - t(q), tp = t(p) - s(q);
    const double u = 1.0 + std::sqrt(t(q) / s(q)) - std::sqrt(sp / tp);
    const double v = 1.0 + std::sqrt(s(q) / t(q)) - std::sqrt(tp / sp);
    if (u < -kStrict || v < -kStrict || u * v < 1.0 - kStrict) continue;
    if (std::max(s(q) / t(q), t(q) / s(q)) < std::max(sp / tp, tp / sp) - kStrict) continue;
    RMatrix x = RMatrix::Zero(3, 3);
    x(p, q) = t(q);
    x(q, p) = s(q);
    x(p, r) = sp;
    x(r, p) = tp;
    x(r, r) = std::max(s(q) + s(r) - t(p), 0.0);
    return Candidate{0.5 * (sqd(s(q), t(q)) + sqd(sp, tp)), x};
  }
  return std::nullopt;
}

// s has a zero at index z; exact minimizer of f on the remaining one-parameter freedom.
Candidate zero_row(const RVector& s, const RVector& t, int z) {
  const int i = (z + 1) % 3, j = (z + 2) % 3;
  double a = 0.0, b = 0.0;  // a = x_ij, b = x_ji
  if (s(i) >= t(i) && s(j) >= t(j)) {
    a = b = 0.0;
  } else if (s(i) < t(i)) {
    a = std::min(t(j), s(i));
    b = a + t(i) - s(i);
  } else {
    b = std::min(t(i), s(j));
    a = b + t(j) - s(j);
  }
  RMatrix x = RMatrix::Zero(3, 3);
  x(i, j) = a;
  x(j, i) = b;
  x(i, i) = std::max(t(i) - b, 0.0);
  x(j, j) = std::max(t(j) - a, 0.0);
  x(i, z) = std::max(s(i) - x(i, i) - a, 0.0);
  x(j, z) = std::max(s(j) - x(j, j) - b, 0.0);
  return Candidate{0.5 * (sqd(a, b) + t(z)), x};
}

RMatrix zero_diag_plan(const RVector& s, const RVector& t, double u) {
  RMatrix x = RMatrix::Zero(3, 3);
  x(0, 1) = u;
  x(0, 2) = s(0) - u;
  x(2, 1) = t(1) - u;
  x(2, 0) = s(2) - t(1) + u;
  x(1, 0) = t(0) - s(2) + t(1) - u;
  x(1, 2) = s(1) - x(1, 0);
  return x.cwiseMax(0.0);
}

}  // namespace

std::optional<QutritResult> qutrit_zero_diagonal(const RVector& s, const RVector& t) {
  // Zero-diagonal plans form a segment parametrized by u = x_12.
  const double lo = std::max({0.0, t(1) - s(2), s(0) - t(2)});
  const double hi = std::min({s(0), t(1), t(0) + t(1) - s(2)});
  if (lo > hi) return std::nullopt;
  QutritResult res;
  res.tag = QutritCase::Fallback;
  const double u = golden_section_min([&](double x) { return f_objective(zero_diag_plan(s, t, x)); }, lo, hi, 1e-12);
  res.plan = zero_diag_plan(s, t, u);
  res.value = f_objective(res.plan);
  for (double end : {lo, hi}) {
    const RMatrix x = zero_diag_plan(s, t, end);
    if (f_objective(x) < res.value) {
      res.plan = x;
      res.value = f_objective(x);
    }
  }
  return res;
}

const char* to_string(QutritCase c) {
  switch (c) {
    case QutritCase::A: return "a";
    case QutritCase::B: return "b";
    case QutritCase::C: return "c";
    case QutritCase::D: return "d";
    case QutritCase::Fallback: return "fallback";
  }
  return "?";
}

bool lower_bound_equality_holds(const RVector& s, const RVector& t, double tol) {
  const int n = static_cast<int>(s.size());
  for (int i = 0; i < n; ++i) {
    bool first = true, second = true;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      first = first && s(j) >= t(j) - tol && t(i) * t(j) >= s(i) * s(j) - tol;
      second = second && t(j) >= s(j) - tol && s(i) * s(j) >= t(i) * t(j) - tol;
    }
    if (first || second) return true;
  }
  return false;
}

QutritResult qutrit_diag(const RVector& s, const RVector& t) {
  if (s.size() != 3 || t.size() != 3) throw Error(ErrorCode::DimensionMismatch, "qutrit_diag: 3-vectors required");
  check_probability(s, "s");
  check_probability(t, "t");
  QutritResult res;

  if (lower_bound_equality_holds(s, t, kStrict)) {
    res.tag = QutritCase::A;
    for (int p = 0; p < 3; ++p) res.value = std::max(res.value, 0.5 * sqd(s(p), t(p)));
    res.plan = minimize_f_diag(s, t).plan.entries;
    return res;
  }
  if (auto c = try_case_b(s, t)) {
    res = {c->value, QutritCase::B, c->plan};
    return res;
  }
  if (auto c = try_case_b(t, s)) {
    res = {c->value, QutritCase::B, c->plan.transpose()};
    return res;
  }
  if (auto c = try_case_c(s, t)) {
    res = {c->value, QutritCase::C, c->plan};
    return res;
  }
  if (auto c = try_case_c(t, s)) {
    res = {c->value, QutritCase::C, c->plan.transpose()};
    return res;
  }
  for (int z = 0; z < 3; ++z) {
    if (s(z) == 0.0) {
      const Candidate c = zero_row(s, t, z);
      return {c.value, QutritCase::D, c.plan};
    }
  }
  for (int z = 0; z < 3; ++z) {
    if (t(z) == 0.0) {
      const Candidate c = zero_row(t, s, z);
      return {c.value, QutritCase::D, c.plan.transpose()};
    }
  }

  // No closed form applies: the minimizer has zero diagonal.
  if (auto z = qutrit_zero_diagonal(s, t)) return *z;
  const PlanResult pr = minimize_f_diag(s, t);
  res.tag = QutritCase::Fallback;
  res.plan = pr.plan.entries;
  res.value = pr.value;
  return res;
}

}  // namespace qot
