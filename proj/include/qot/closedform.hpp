#pragma once

#include "qot/classical.hpp"
#include "qot/qstate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qot {

// rho_A = rho(s, 0), rho_B = rho(r, theta), rho(r, theta) = O(theta) diag(r, 1-r) O(theta)^T
struct BlochQubitPair {
  double s = 0.5;
  double r = 0.5;
  double theta = 0.0;
};

CMatrix rotation_o(double theta);  // [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
DensityMatrix bloch_state(double r, double theta);
std::pair<DensityMatrix, DensityMatrix> bloch_pair_states(const BlochQubitPair& p);
// Canonical (s, r, theta) of an arbitrary qubit pair; T for unitarily covariant costs is preserved.
BlochQubitPair to_bloch_pair(const DensityMatrix& rho, const DensityMatrix& sigma);

enum class RootSource { Polynomial, GridRefined };

struct PhiRootSet {
  std::vector<double> roots;
  RootSource source = RootSource::Polynomial;
};

struct QubitGeneralResult {
  double value = 0.0;
  PhiRootSet phi;
};

double qubit_diag(const RVector& s, const RVector& t);
double qubit_diag_case_form(const RVector& s, const RVector& t);
double qubit_commuting(const DensityMatrix& rho, const DensityMatrix& sigma);

// g(phi) = 1/4 (sqrt(1 + (2s-1) cos phi) - sqrt(1 + (2r-1) cos(theta + phi)))^2
double g_aux(const BlochQubitPair& p, double phi);
double phi_equation_residual(const BlochQubitPair& p, double phi);
// Coefficients (ascending powers of z) of the degree-6 critical-point polynomial.
std::vector<cplx> phi_polynomial(const BlochQubitPair& p);
QubitGeneralResult qubit_general(const BlochQubitPair& p);
double qubit_value(const DensityMatrix& rho, const DensityMatrix& sigma);  // any qubit pair, C^Q
double qubit_isospectral(double s, double theta);
double pure_state_value(const DensityMatrix& rho, const DensityMatrix& sigma);  // 1/2 (1 - tr rho sigma)

struct UnitaryOptOptions {
  int starts = 20;
  int max_evals = 4000;
  std::uint64_t seed = 0x5eed;
};

// max over unit vectors u of |f(<u,rho u>) - f(<u,sigma u>)|; exact on the Bloch sphere for n = 2.
double unit_vector_max(const DensityMatrix& rho, const DensityMatrix& sigma, double (*f)(double),
                       const UnitaryOptOptions& opts = {});
double t0_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma, const UnitaryOptOptions& opts = {});

enum class SweepBranch { Constant, Low, High };
const char* to_string(SweepBranch b);
struct SweepPoint {
  double alpha = 0.0;
  double value = 0.0;
  SweepBranch branch = SweepBranch::Constant;
};
std::vector<SweepPoint> decoherence_sweep(const RVector& s, const RVector& t, const std::vector<double>& alphas);

enum class QutritCase { A, B, C, D, Fallback };
const char* to_string(QutritCase c);
struct QutritResult {
  double value = 0.0;
  QutritCase tag = QutritCase::Fallback;
  RMatrix plan;  // minimizing transport plan of f
};
QutritResult qutrit_diag(const RVector& s, const RVector& t);
// min f over zero-diagonal plans (1-D convex search); empty when no such plan exists.
std::optional<QutritResult> qutrit_zero_diagonal(const RVector& s, const RVector& t);
bool lower_bound_equality_holds(const RVector& s, const RVector& t, double tol = 1e-12);

struct BoundSuite {
  double fidelity = 0.0;
  double lower_yzyy = 0.0;      // (1 - sqrt F)/2
  double upper_yzyy = 0.0;      // (1 - F)/2
  double upper_sqrt = 0.0;      // 1 - sqrt F
  double upper_product = 0.0;   // (1 - tr rho sigma)/2
  std::optional<double> upper_schmidt;  // isospectral pairs only
  double t0 = 0.0;
  std::vector<std::string> violations;  // filled when T is supplied
};
BoundSuite bound_suite(const DensityMatrix& rho, const DensityMatrix& sigma, std::optional<double> t = std::nullopt,
                       double tol = 1e-7);

}  // namespace qot
