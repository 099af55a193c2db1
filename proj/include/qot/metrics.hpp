#pragma once

#include "qot/closedform.hpp"
#include "qot/cost.hpp"
#include "qot/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qot {

enum class Engine { ClosedForm, Sdp, Auto };
const char* to_string(Engine e);
Engine engine_from_string(const std::string& s);

// Closed form of T for C^Q where one exists: n = 2, a pure marginal, or commuting diagonal qutrits.
std::optional<double> closed_form_value(const DensityMatrix& rho, const DensityMatrix& sigma);
// T for C^Q. ClosedForm throws NoClosedForm outside the cases above; Auto falls back to the SDP.
double transport_value(const DensityMatrix& rho, const DensityMatrix& sigma, Engine engine,
                       const SolverOptions& opts = {});

struct SemimetricDiagnosis {
  bool ok = false;
  double min_eig = 0.0;
  double symmetric_leak = 0.0;       // ||C restricted to the symmetric subspace||
  double antisymmetric_gap = 0.0;    // smallest eigenvalue of C on the antisymmetric subspace
  std::string reason;
};
// C >= 0 with kernel exactly the symmetric subspace.
SemimetricDiagnosis certify_cost_semimetric(const CostOperator& c);

enum class MetricProperty { Symmetry, Identity, Triangle };
const char* to_string(MetricProperty p);

struct Witness {
  std::vector<DensityMatrix> states;
  double violation = 0.0;
  std::uint64_t sample = 0;
};

struct MetricReport {
  MetricProperty property = MetricProperty::Triangle;
  int samples = 0;
  double worst_violation = 0.0;  // max over samples of max(0, excess beyond the property)
  std::vector<Witness> witnesses;  // samples whose excess is above the slack
};

// sqrt T over random full-rank triples; violation = sqrt T(x,z) - sqrt T(x,y) - sqrt T(y,z).
MetricReport triangle_scan(int n, int samples, std::uint64_t seed, Engine engine, int jobs = 1,
                           double slack = 1e-6);
MetricReport symmetry_scan(int n, int samples, std::uint64_t seed, Engine engine, int jobs = 1,
                           double slack = 1e-8);
MetricReport identity_scan(int n, int samples, std::uint64_t seed, Engine engine, int jobs = 1,
                           double slack = 1e-8);

struct ChainOptions {
  int max_evals = 800;
  std::uint64_t seed = 0xc4a1;
  double step = 0.15;
};

struct ChainResult {
  double value = 0.0;  // best chain length found: an upper bound on D_N
  double d0 = 0.0;
  bool stalled = false;
  std::vector<DensityMatrix> intermediates;
};

// Heuristic D_N: min over N intermediate states of the summed sqrt T along the chain.
// Each level starts from the previous optimum with a repeated state, so D_N <= D_{N-1}.
ChainResult chain_distance(const DensityMatrix& rho, const DensityMatrix& sigma, int n_intermediate, Engine engine,
                           const ChainOptions& opts = {});

// max over unit vectors of |f(<u,rho u>) - f(<u,sigma u>)|.
double d0_metric(const DensityMatrix& rho, const DensityMatrix& sigma, double (*f)(double),
                 const UnitaryOptOptions& opts = {});

struct TriangleTriple {
  DensityMatrix a, b, c;
  double d_ab = 0.0, d_bc = 0.0, d_ac = 0.0;
  double epsilon = 0.0;
  double excess() const { return d_ac - d_ab - d_bc; }
};

// Pure qubits |0>, y, z with y2 = (1-eps) z2 and y1 = sqrt(z1^2 + eps(2-eps) z2^2).
TriangleTriple dp_triple(double z2, double eps, double p);
// Same triple with T^{1/p} as the distance.
TriangleTriple transport_power_triple(double z2, double eps, double p, Engine engine);
// Halves eps from 1/2 (down to 1e-5) until the triple violates the triangle inequality.
std::optional<TriangleTriple> find_dp_violation(double p, double z2 = 0.6, bool use_transport = false,
                                                Engine engine = Engine::Auto);

}  // namespace qot
