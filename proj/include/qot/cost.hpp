#pragma once

#include "qot/qstate.hpp"

#include <string>
#include <vector>

namespace qot {

enum class CostTag { Swap, Cq, CqE, CqAlpha, Cb, Custom };

const char* to_string(CostTag tag);
CostTag cost_tag_from_string(const std::string& s);

// Operator on the tensor product of `sites` (row-major composite index).
struct CostOperator {
  CMatrix op;
  std::vector<int> sites;
  CostTag tag = CostTag::Custom;

  int dim() const { return static_cast<int>(op.rows()); }
  BipartiteIndex idx() const { return {sites.at(0), sites.at(1)}; }
};

CostOperator custom_cost(const CMatrix& m, std::vector<int> sites);

// Permutation operator |i_0..i_{d-1}> -> |i_{perm^-1(0)}..>, i.e. site k moves to perm[k].
CMatrix permutation_operator(int n, const std::vector<int>& perm);

CostOperator swap_operator(int n);
CostOperator cq_projector(int n);
// weights(i,j) for i<j are the singlet weights e_ij; the rest is ignored.
CostOperator cq_e_operator(const RMatrix& weights, int n);
CostOperator cq_alpha(double alpha);
RMatrix classical_cost_matrix(const CostOperator& c);
CostOperator cb_projector(int n, int d);

struct NormalizedCost {
  CostOperator cost;
  double scale = 1.0;
  double shift = 0.0;  // T_C = scale * T_normalized + shift
};
NormalizedCost normalize_cost(const CostOperator& c);

}  // namespace qot
